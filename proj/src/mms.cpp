#include "fpi/mms.hpp"

#include <algorithm>
#include <cmath>

#include "fpi/constitutive.hpp"
#include "fpi/error.hpp"
#include "fpi/quadrature.hpp"

namespace fpi {

MmsParams make_mms_params(double AF, double AP, double APS, const FluidParams& f, const PoroParams& p) {
  MmsParams m;
  m.AF = AF, m.AP = AP, m.APS = APS;
  m.mu = f.mu, m.rho = f.rho;
  m.c = p.c(), m.beta = p.beta();
  return m;
}

ManufacturedSolution::ManufacturedSolution(const MmsParams& m, const FluidParams& fluid,
                                           const PoroParams& poro, const NitscheConfig& nitsche)
    : m_(m), fluid_(fluid), poro_(poro), nitsche_(nitsche) {
  m_.mu = fluid.mu, m_.rho = fluid.rho;
  m_.c = poro.c(), m_.beta = poro.beta();
}

namespace {
double decay_rate(const MmsParams& m) { return 2.0 * m.C * m.C * kPi * kPi * m.mu / m.rho; }
}  // namespace

double ManufacturedSolution::g_u(double t) const { return std::exp(-decay_rate(m_) * t); }
double ManufacturedSolution::g_p(double t) const { return std::exp(-2.0 * decay_rate(m_) * t); }

Point ManufacturedSolution::w(const Point& x) const {
  const double a = m_.B * kPi * x.x, b = m_.B * kPi * x.y;
  return {-std::cos(a) * std::sin(b), std::sin(a) * std::cos(b)};
}

Mat2<double> ManufacturedSolution::grad_w(const Point& x) const {
  const double k = m_.B * kPi;
  const double a = k * x.x, b = k * x.y;
  const double ss = std::sin(a) * std::sin(b), cc = std::cos(a) * std::cos(b);
  return {k * ss, -k * cc, k * cc, -k * ss};
}

Point ManufacturedSolution::vF(const Point& x, double t) const { return w(x) * (m_.AF * g_u(t)); }
Mat2<double> ManufacturedSolution::grad_vF(const Point& x, double t) const {
  return grad_w(x) * (m_.AF * g_u(t));
}
Point ManufacturedSolution::dvF_dt(const Point& x, double t) const { return vF(x, t) * -decay_rate(m_); }

double ManufacturedSolution::pF(const Point& x, double t) const {
  const double k = 2.0 * m_.B * kPi;
  return -0.25 * (std::cos(k * x.x) + std::cos(k * x.y)) * m_.rho * g_p(t);
}

Point ManufacturedSolution::grad_pF(const Point& x, double t) const {
  const double k = 2.0 * m_.B * kPi;
  return Point{std::sin(k * x.x), std::sin(k * x.y)} * (0.25 * k * m_.rho * g_p(t));
}

Point ManufacturedSolution::vP(const Point& x, double t) const { return w(x) * (m_.AP * g_u(t)); }
Mat2<double> ManufacturedSolution::grad_vP(const Point& x, double t) const {
  return grad_w(x) * (m_.AP * g_u(t));
}
Point ManufacturedSolution::dvP_dt(const Point& x, double t) const { return vP(x, t) * -decay_rate(m_); }

Point ManufacturedSolution::u(const Point& X, double t) const {
  return w(X) * (m_.APS * (1.0 - g_u(t)) / decay_rate(m_));
}
Mat2<double> ManufacturedSolution::grad0_u(const Point& X, double t) const {
  return grad_w(X) * (m_.APS * (1.0 - g_u(t)) / decay_rate(m_));
}
Point ManufacturedSolution::udot(const Point& X, double t) const { return w(X) * (m_.APS * g_u(t)); }
Point ManufacturedSolution::uddot(const Point& X, double t) const {
  return w(X) * (-decay_rate(m_) * m_.APS * g_u(t));
}

Mat2<double> ManufacturedSolution::fluid_stress(const Point& x, double t) const {
  const Mat2<double> G = grad_vF(x, t);
  return Mat2<double>::identity() * -pF(x, t) + (G + transpose(G)) * m_.mu;
}

Mat2<double> ManufacturedSolution::poro_stress(const Point& X, double t) const {
  const auto k = kinematics(grad0_u(X, t));
  const double c = poro_.c(), beta = poro_.beta();
  const Mat2<double> S = Mat2<double>::identity() * (2.0 * c) - k.Cinv * (2.0 * c * std::pow(k.J, -2.0 * beta));
  const Point x = X + u(X, t);
  return k.F * S * transpose(k.F) * (1.0 / k.J) - Mat2<double>::identity() * pP(x, t);
}

Mat2<double> ManufacturedSolution::inverse_permeability(const Point& X, double t) const {
  const auto k = kinematics(grad0_u(X, t));
  const double K = material_permeability(k.J, poro_.phi0, poro_);
  return inverse_spatial_permeability(k, K);
}

Point ManufacturedSolution::fluid_force(const Point& x, double t) const { return mms_fluid_force(m_, x.x, x.y, t); }

void ManufacturedSolution::poro_forces(const Point& X, double t, Point& fluid, Point& solid) const {
  const Point x = X + u(X, t);
  const double J = det(Mat2<double>::identity() + grad0_u(X, t));
  const double phi = poro_.phi0, mu = m_.mu;
  const Mat2<double> kinv = inverse_permeability(X, t);
  const Point seep = vP(x, t) - udot(X, t);
  const Point gp = grad_pF(x, t);
  fluid = dvP_dt(x, t) * m_.rho + gp + kinv * seep * (mu * phi);
  solid = uddot(X, t) * poro_.rho_s0_tilde() - mms_div_first_pk(m_, X.x, X.y, t) + gp * ((1.0 - phi) * J) -
          kinv * seep * (mu * J * phi * phi);
}

InterfaceJumps ManufacturedSolution::jumps(const Point& x, const Point& X, const Point& n, double t) const {
  InterfaceJumps g;
  const Mat2<double> sF = fluid_stress(x, t);
  const Point tF = sF * n;
  g.g_sigma = tF - poro_stress(X, t) * n;
  g.g_sigma_n = dot(n, tF) + pP(x, t);
  const Point ud = udot(X, t);
  const double phi = poro_.phi0;
  g.g_n = vF(x, t) - ud - (vP(x, t) - ud) * phi;
  const auto k = kinematics(grad0_u(X, t));
  const double K = material_permeability(k.J, phi, poro_);
  const double kappa = slip_coefficient(spatial_permeability(k, K), m_.mu, nitsche_.alpha_bj);
  g.g_t = vF(x, t) - ud - (vP(x, t) - ud) * (nitsche_.beta_bj * phi) + tF * kappa;
  return g;
}

// ---------------------------------------------------------------------------

namespace {
Point rotate(const Point& p, double a) {
  return {std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y};
}
}  // namespace

Example1 build_example1(double h) {
  const double nf = 1.0 / h;
  const int n = static_cast<int>(std::lround(nf));
  if (!(h > 0.0) || std::abs(nf - n) > 1e-9 * nf || n < 2 || n % 2 != 0)
    fail(ErrorKind::InvalidArgument, "mesh size h must satisfy 1/h = even integer (got h = " + std::to_string(h) + ")");
  Example1 ex;
  ex.h = h;
  ex.background = build_structured_mesh({-0.5, -0.5}, {1.0, 1.0}, n, n, kPi / 4.0);
  ex.poro = build_structured_mesh({-0.25, -0.25}, {0.5, 0.5}, n / 2, n / 2, kPi / 6.0);
  // fluid lies on the +x side (square frame) of the downward-running cut
  ex.neumann = neumann_line(rotate({-0.45, 0.75}, kPi / 4.0), rotate({-0.45, -0.75}, kPi / 4.0));
  for (const char* tag : {"left", "right", "bottom", "top"})
    for (int node : ex.background.nodes_with_tag(tag)) ex.boundary_nodes.push_back(node);
  std::sort(ex.boundary_nodes.begin(), ex.boundary_nodes.end());
  ex.boundary_nodes.erase(std::unique(ex.boundary_nodes.begin(), ex.boundary_nodes.end()), ex.boundary_nodes.end());
  return ex;
}

Problem make_mms_problem(const Example1& ex, const ManufacturedSolution& mms, const PoroParams& poro,
                         const FluidParams& fluid, const NitscheConfig& nitsche, const SolverConfig& solver,
                         const StabConstants& stab) {
  Problem p;
  p.background = &ex.background;
  p.poro = &ex.poro;
  p.fluid = fluid;
  p.poro_params = poro;
  p.stab = stab;
  p.nitsche = nitsche;
  p.solver = solver;
  p.neumann_lines = {ex.neumann};
  p.fluid_force = [&mms](const Point& x, double t) { return mms.fluid_force(x, t); };
  p.poro_force = [&mms](const Point& X, double t, Point& f, Point& s) { mms.poro_forces(X, t, f, s); };
  p.neumann_traction = [&mms](const Point& x, const Point& n, double t) { return mms.fluid_stress(x, t) * n; };
  p.jumps = [&mms](const Point& x, const Point& X, const Point& n, double t) { return mms.jumps(x, X, n, t); };
  p.fluid_bc = [&ex, &mms](double t, const CutGeometry&, const CutTopology& topo, std::vector<FluidBC>& out) {
    for (int node : ex.boundary_nodes) {
      if (!topo.active_node[node]) continue;
      const Point v = mms.vF(ex.background.node(node), t);
      out.push_back({node, 0, v.x});
      out.push_back({node, 1, v.y});
    }
  };
  return p;
}

State mms_initial_state(const Example1& ex, const ManufacturedSolution& mms, double t) {
  State s(ex.background.num_nodes(), ex.poro.num_nodes());
  s.t = t;
  for (int n = 0; n < ex.background.num_nodes(); ++n) {
    const Point& x = ex.background.node(n);
    s.vF[n] = mms.vF(x, t);
    s.aF[n] = mms.dvF_dt(x, t);
    s.pF[n] = mms.pF(x, t);
    s.fluid_valid[n] = 1;
  }
  for (int m = 0; m < ex.poro.num_nodes(); ++m) {
    const Point& X = ex.poro.node(m);
    s.u[m] = mms.u(X, t);
    s.vs[m] = mms.udot(X, t);
    s.as[m] = mms.uddot(X, t);
    const Point x = X + s.u[m];
    s.vP[m] = mms.vP(x, t);
    s.aP[m] = mms.dvP_dt(x, t) + mms.grad_vP(x, t) * s.vs[m];
    s.pP[m] = mms.pP(x, t);
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

struct PoroPoint {
  Point X, u, vP, vs;
  double p = 0.0;
  Mat2<double> grad0_u;
};

PoroPoint poro_point(const Mesh& pm, const State& s, const ShapeEval& sh, int e) {
  PoroPoint q;
  q.X = sh.x;
  q.u = q.vP = q.vs = Point{0.0, 0.0};
  q.grad0_u = Mat2<double>{0.0, 0.0, 0.0, 0.0};
  const auto& conn = pm.element(e);
  for (int a = 0; a < 4; ++a) {
    const int m = conn[a];
    q.u += s.u[m] * sh.N[a];
    q.vP += s.vP[m] * sh.N[a];
    q.vs += s.vs[m] * sh.N[a];
    q.p += s.pP[m] * sh.N[a];
    q.grad0_u += outer(s.u[m], sh.dN[a]);
  }
  return q;
}

double sq(const Point& p) { return dot(p, p); }
double sq(const Mat2<double>& m) { return ddot(m, m); }

Point tangential(const Point& v, const Point& n) { return v - n * dot(v, n); }

}  // namespace

ErrorReport error_norms(const Model& model, const State& s, const ManufacturedSolution& mms) {
  const Mesh& bg = model.background();
  const Mesh& pm = model.poro();
  const PoroParams& pp = model.problem().poro_params;
  const double beta_bj = model.problem().nitsche.beta_bj;
  const double t = s.t;
  const CutTopology topo = model.cut(s.u);
  std::array<double, kNumNorms> acc{};

  // fluid domain
  for (int e = 0; e < bg.num_elements(); ++e) {
    if (topo.volume[e].empty()) continue;
    const auto c = bg.corners(e);
    const auto& conn = bg.element(e);
    for (const auto& q : topo.volume[e]) {
      const ShapeEval sh = reference_map(c, q.xi);
      Point v{0.0, 0.0};
      double p = 0.0;
      Mat2<double> G{0.0, 0.0, 0.0, 0.0};
      for (int a = 0; a < 4; ++a) {
        v += s.vF[conn[a]] * sh.N[a];
        p += s.pF[conn[a]] * sh.N[a];
        G += outer(s.vF[conn[a]], sh.dN[a]);
      }
      acc[0] += q.w * sq(v - mms.vF(q.x, t));
      acc[1] += q.w * std::pow(p - mms.pF(q.x, t), 2);
      acc[2] += q.w * sq(G - mms.grad_vF(q.x, t));
    }
  }

  // poroelastic domain
  const auto rule = gauss_square(3);
  for (int e = 0; e < pm.num_elements(); ++e) {
    const auto c = pm.corners(e);
    for (const auto& g : rule) {
      const ShapeEval sh = reference_map(c, g.x);
      const PoroPoint q = poro_point(pm, s, sh, e);
      const double w0 = g.w * sh.detj;
      const double J = det(Mat2<double>::identity() + q.grad0_u);
      const Point x = q.X + q.u;
      acc[3] += w0 * J * sq(q.vP - mms.vP(x, t));
      acc[4] += w0 * J * std::pow(q.p - mms.pP(x, t), 2);
      acc[5] += w0 * sq(q.u - mms.u(q.X, t));
      acc[6] += w0 * sq(q.grad0_u - mms.grad0_u(q.X, t));
    }
  }

  // coupling interface
  const auto& bedges = pm.boundary_edges();
  for (const auto& piece : topo.pieces) {
    if (piece.tag != PolylineTag::Interface) continue;
    const auto cF = bg.corners(piece.element);
    const auto& conn = bg.element(piece.element);
    for (const auto& q : piece.points) {
      const auto& be = bedges.at(q.parent_edge);
      const ShapeEval shF = reference_map(cF, q.xi);
      Point v{0.0, 0.0};
      double p = 0.0;
      Mat2<double> G{0.0, 0.0, 0.0, 0.0};
      for (int a = 0; a < 4; ++a) {
        v += s.vF[conn[a]] * shF.N[a];
        p += s.pF[conn[a]] * shF.N[a];
        G += outer(s.vF[conn[a]], shF.dN[a]);
      }
      const ShapeEval shP = reference_map(pm.corners(be.element), edge_reference_point(be.local_edge, q.s));
      const PoroPoint pq = poro_point(pm, s, shP, be.element);
      const Point& n = q.n;
      const Point x = q.x;
      const Point X = pq.X;
      acc[7] += q.w * std::pow(p - mms.pF(x, t), 2);
      acc[8] += q.w * sq((G - mms.grad_vF(x, t)) * n);
      acc[9] += q.w * std::pow(pq.p - mms.pP(x, t), 2);
      const Mat2<double> Fh = Mat2<double>::identity() + pq.grad0_u;
      const Mat2<double> FA = Mat2<double>::identity() + mms.grad0_u(X, t);
      const Mat2<double> grad_uh = pq.grad0_u * inverse(Fh);
      const Mat2<double> grad_uA = mms.grad0_u(X, t) * inverse(FA);
      acc[10] += q.w * sq((grad_uh - grad_uA) * n);
      const double phi = porosity(det(Fh), pq.p, pp);
      const Point udA = mms.udot(X, t);
      const Point vFA = mms.vF(x, t), vPA = mms.vP(x, t);
      const Point bn = (v - pq.vs - (pq.vP - pq.vs) * phi) - (vFA - udA - (vPA - udA) * phi);
      const Point bt = (v - pq.vs - (pq.vP - pq.vs) * (phi * beta_bj)) - (vFA - udA - (vPA - udA) * (phi * beta_bj));
      acc[11] += q.w * std::pow(dot(bn, n), 2);
      acc[12] += q.w * sq(tangential(bt, n));
    }
  }

  ErrorReport r;
  for (int i = 0; i < kNumNorms; ++i) r.norms[i] = std::sqrt(acc[i]);
  return r;
}

}  // namespace fpi
