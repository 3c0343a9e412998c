#include <algorithm>
#include <cmath>
#include <exception>

#include "fpi/dual.hpp"
#include "fpi/error.hpp"
#include "fpi/problem.hpp"
#include "fpi/quadrature.hpp"

namespace fpi {

using Triplet = Eigen::Triplet<double>;

State::State(int n_background, int n_poro)
    : vF(n_background, Point{0.0, 0.0}),
      aF(n_background, Point{0.0, 0.0}),
      pF(n_background, 0.0),
      fluid_valid(n_background, 0),
      vP(n_poro, Point{0.0, 0.0}),
      aP(n_poro, Point{0.0, 0.0}),
      u(n_poro, Point{0.0, 0.0}),
      vs(n_poro, Point{0.0, 0.0}),
      as(n_poro, Point{0.0, 0.0}),
      pP(n_poro, 0.0) {}

DofMap::DofMap(const std::vector<char>& active_node, int n_poro)
    : np_(n_poro), fluid_index_(active_node.size(), -1) {
  for (size_t n = 0; n < active_node.size(); ++n)
    if (active_node[n]) {
      fluid_index_[n] = na_++;
      active_nodes_.push_back(static_cast<int>(n));
    }
}

std::array<int, 6> face_nodes(const Mesh& mesh, const InteriorFace& f) {
  std::array<int, 6> nodes{};
  const auto& e0 = mesh.element(f.elements[0]);
  const auto& e1 = mesh.element(f.elements[1]);
  for (int a = 0; a < 4; ++a) nodes[a] = e0[a];
  int k = 4;
  for (int a = 0; a < 4; ++a)
    if (e1[a] != f.a && e1[a] != f.b) nodes[k++] = e1[a];
  if (k != 6) fail(ErrorKind::Geometry, "face patch does not have 6 nodes");
  return nodes;
}

FaceGeometry build_face_geometry(const Mesh& mesh, const InteriorFace& f, int order, bool hessians) {
  FaceGeometry g;
  g.nodes = face_nodes(mesh, f);
  const Point a = mesh.node(f.a), b = mesh.node(f.b);
  const Point d = b - a;
  const double len = norm(d);
  g.n = Point{d.y / len, -d.x / len};
  g.h = f.h;
  const auto& rule = gauss_legendre(order);
  for (size_t k = 0; k < rule.xi.size(); ++k) {
    const Point x = a + d * (0.5 * (rule.xi[k] + 1.0));
    FaceQP q;
    q.w = 0.5 * len * rule.w[k];
    for (int side = 0; side < 2; ++side) {
      const int e = f.elements[side];
      const auto c = mesh.corners(e);
      const Point xi = inverse_map(c, x).local;
      const ShapeEval s = reference_map(c, xi);
      const Mat2<double> jinv = inverse(s.jac);
      auto& dN = side == 0 ? q.dN0 : q.dN1;
      auto& H = side == 0 ? q.H0 : q.H1;
      const auto& conn = mesh.element(e);
      for (int l = 0; l < 6; ++l) {
        dN[l] = Point{0.0, 0.0};
        H[l] = Mat2<double>{0.0, 0.0, 0.0, 0.0};
      }
      for (int a_loc = 0; a_loc < 4; ++a_loc) {
        const int l = static_cast<int>(std::find(g.nodes.begin(), g.nodes.end(), conn[a_loc]) -
                                       g.nodes.begin());
        dN[l] = s.dN[a_loc];
        if (hessians) {
          // Only the mixed reference derivative survives for bilinear shapes;
          // the map is treated as affine at the point.
          const double m = 0.25 * kRefCorner[a_loc][0] * kRefCorner[a_loc][1];
          const Mat2<double> href{0.0, m, m, 0.0};
          H[l] = transpose(jinv) * href * jinv;
        }
      }
    }
    g.qps.push_back(q);
  }
  return g;
}

Model::Model(const Problem& problem) : prob_(problem) {
  if (!prob_.background || !prob_.poro) fail(ErrorKind::InvalidArgument, "problem without meshes");
  validate(prob_.fluid);
  validate(prob_.poro_params);
  validate(prob_.stab);
  validate(prob_.nitsche);
  validate(prob_.solver);
  const Mesh& pm = *prob_.poro;
  const auto square = gauss_square(2);
  poro_qps_.resize(pm.num_elements());
  for (int e = 0; e < pm.num_elements(); ++e) {
    const auto c = pm.corners(e);
    for (const auto& q : square) {
      const ShapeEval s = reference_map(c, q.x);
      poro_qps_[e].push_back(ShapeQP{s.N, s.dN, q.w * s.detj});
    }
  }
  const auto& rule = gauss_legendre(3);
  for (const auto& be : pm.boundary_edges()) {
    PoroEdgeData ed;
    ed.element = be.element;
    const auto c = pm.corners(be.element);
    const Point d = pm.node(be.b) - pm.node(be.a);
    for (size_t k = 0; k < rule.xi.size(); ++k) {
      const double s = 0.5 * (rule.xi[k] + 1.0);
      const ShapeEval sh = reference_map(c, edge_reference_point(be.local_edge, s));
      BoundaryQP q;
      q.shape = ShapeQP{sh.N, sh.dN, 0.0};
      q.nA0 = Point{d.y, -d.x} * (0.5 * rule.w[k]);
      ed.qps.push_back(q);
    }
    poro_edges_.push_back(std::move(ed));
  }
  const double mu = prob_.fluid.mu, rho = prob_.fluid.rho;
  const PoroParams& pp = prob_.poro_params;
  const double K0 = material_permeability(1.0, pp.phi0, pp);
  const double theta_dt = prob_.solver.theta * prob_.solver.dt;
  for (const auto& f : pm.interior_faces()) {
    PoroFaceKernel k;
    k.geom = build_face_geometry(pm, f, 3, false);
    poro_cip_scalings(k.geom.h, mu, rho, pp.phi0, K0, theta_dt, prob_.stab, k.tau_p, k.tau_div);
    poro_faces_.push_back(std::move(k));
  }
  for (const auto& f : prob_.background->interior_faces())
    bg_faces_.push_back(build_face_geometry(*prob_.background, f, 3, true));
}

CutGeometry Model::geometry(const std::vector<Point>& u) const {
  CutGeometry g;
  g.polylines = extract_interface(*prob_.poro, u, prob_.poro_exterior_tags, prob_.interface_extension);
  for (const auto& l : prob_.neumann_lines) g.polylines.push_back(l);
  g.solid_regions = deformed_outline(*prob_.poro, u);
  return g;
}

CutTopology Model::cut(const std::vector<Point>& u) const {
  return classify_and_cut(*prob_.background, geometry(u), prob_.cut_options);
}

Vector Model::gather(const State& s, const DofMap& d) const {
  Vector x(d.num_dofs());
  for (int n : d.active_nodes()) {
    x[d.vF(n, 0)] = s.vF[n].x;
    x[d.vF(n, 1)] = s.vF[n].y;
    x[d.pF(n)] = s.pF[n];
  }
  for (int m = 0; m < d.num_poro(); ++m) {
    for (int i = 0; i < 2; ++i) {
      x[d.vP(m, i)] = s.vP[m][i];
      x[d.u(m, i)] = s.u[m][i];
    }
    x[d.pP(m)] = s.pP[m];
  }
  return x;
}

void Model::scatter(const Vector& x, const DofMap& d, State& s) const {
  for (int n : d.active_nodes()) {
    s.vF[n] = Point{x[d.vF(n, 0)], x[d.vF(n, 1)]};
    s.pF[n] = x[d.pF(n)];
  }
  for (int m = 0; m < d.num_poro(); ++m) {
    s.vP[m] = Point{x[d.vP(m, 0)], x[d.vP(m, 1)]};
    s.u[m] = Point{x[d.u(m, 0)], x[d.u(m, 1)]};
    s.pP[m] = x[d.pP(m)];
  }
}

namespace {

template <class K>
struct Batch {
  std::vector<K> kernels;
  std::vector<std::array<int, K::kSize>> dofs;
};

struct Batches {
  Batch<FluidElementKernel> fluid;
  Batch<FluidFaceKernel> faces;
  Batch<PoroElementKernel> poro;
  Batch<PoroBoundaryKernel> edges;
  Batch<PoroFaceKernel> poro_faces;
  Batch<InterfaceKernel> interface;
  Vector constant;  // state-independent contributions (Neumann tractions)
};

template <class K>
void run_batch(const Batch<K>& b, const Vector& x, bool jac, bool parallel, Vector& R,
               std::vector<Triplet>* trip) {
  constexpr int N = K::kSize;
  const long n = static_cast<long>(b.kernels.size());
  std::vector<double> res(static_cast<size_t>(n) * N, 0.0);
  std::vector<double> mat(jac ? static_cast<size_t>(n) * N * N : 0, 0.0);
  std::vector<std::exception_ptr> errors(n);
  (void)parallel;
#if defined(FPI_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
#endif
  for (long i = 0; i < n; ++i) {
    try {
      const auto& dofs = b.dofs[i];
      if (jac) {
        std::array<Dual<N>, N> xl, rl;
        for (int k = 0; k < N; ++k) xl[k] = Dual<N>::variable(x[dofs[k]], k);
        b.kernels[i].eval(xl.data(), rl.data());
        for (int k = 0; k < N; ++k) {
          res[i * N + k] = rl[k].v;
          for (int l = 0; l < N; ++l) mat[(static_cast<size_t>(i) * N + k) * N + l] = rl[k].d[l];
        }
      } else {
        std::array<double, N> xl, rl{};
        for (int k = 0; k < N; ++k) xl[k] = x[dofs[k]];
        b.kernels[i].eval(xl.data(), rl.data());
        for (int k = 0; k < N; ++k) res[i * N + k] = rl[k];
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (long i = 0; i < n; ++i) {
    const auto& dofs = b.dofs[i];
    for (int k = 0; k < N; ++k) {
      R[dofs[k]] += res[i * N + k];
      if (!jac) continue;
      for (int l = 0; l < N; ++l) {
        const double v = mat[(static_cast<size_t>(i) * N + k) * N + l];
        if (v != 0.0) trip->emplace_back(dofs[k], dofs[l], v);
      }
    }
  }
}

void run_all(const Batches& b, const Vector& x, bool jac, bool parallel, Vector& R,
             std::vector<Triplet>* trip) {
  R = b.constant;
  run_batch(b.fluid, x, jac, parallel, R, trip);
  run_batch(b.faces, x, jac, parallel, R, trip);
  run_batch(b.poro, x, jac, parallel, R, trip);
  run_batch(b.edges, x, jac, parallel, R, trip);
  run_batch(b.poro_faces, x, jac, parallel, R, trip);
  run_batch(b.interface, x, jac, parallel, R, trip);
}

template <class K>
void add_pattern(const Batch<K>& b, std::vector<std::vector<int>>& kernels_of_dof,
                 std::vector<std::vector<int>>& kernel_dofs) {
  for (const auto& d : b.dofs) {
    const int id = static_cast<int>(kernel_dofs.size());
    kernel_dofs.emplace_back(d.begin(), d.end());
    for (int k : d) kernels_of_dof[k].push_back(id);
  }
}

/// Column-colored forward differences of the global residual.
void fd_jacobian(const Batches& b, const Vector& x, const Vector& R0, bool parallel,
                 std::vector<Triplet>& trip) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<int>> kernels_of_dof(n), kernel_dofs;
  add_pattern(b.fluid, kernels_of_dof, kernel_dofs);
  add_pattern(b.faces, kernels_of_dof, kernel_dofs);
  add_pattern(b.poro, kernels_of_dof, kernel_dofs);
  add_pattern(b.edges, kernels_of_dof, kernel_dofs);
  add_pattern(b.poro_faces, kernels_of_dof, kernel_dofs);
  add_pattern(b.interface, kernels_of_dof, kernel_dofs);
  // rows touched by column j: union of the dofs of kernels containing j
  std::vector<std::vector<int>> rows(n);
  for (int j = 0; j < n; ++j) {
    auto& r = rows[j];
    for (int k : kernels_of_dof[j]) r.insert(r.end(), kernel_dofs[k].begin(), kernel_dofs[k].end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  // the pattern is symmetric, so rows[r] also lists the columns touching row r
  std::vector<int> color(n, -1);
  std::vector<int> mark;
  int ncolors = 0;
  for (int j = 0; j < n; ++j) {
    mark.assign(ncolors + 1, 0);
    for (int r : rows[j])
      for (int k : rows[r])
        if (color[k] >= 0) mark[color[k]] = 1;
    int c = 0;
    while (mark[c]) ++c;
    color[j] = c;
    ncolors = std::max(ncolors, c + 1);
  }
  Vector R1;
  for (int c = 0; c < ncolors; ++c) {
    Vector xp = x;
    std::vector<double> step(n, 0.0);
    for (int j = 0; j < n; ++j)
      if (color[j] == c) {
        step[j] = 1e-7 * std::max(1.0, std::abs(x[j]));
        xp[j] += step[j];
      }
    run_all(b, xp, false, parallel, R1, nullptr);
    for (int j = 0; j < n; ++j) {
      if (color[j] != c) continue;
      for (int r : rows[j]) {
        const double v = (R1[r] - R0[r]) / step[j];
        if (v != 0.0) trip.emplace_back(r, j, v);
      }
    }
  }
}

PoroHistory poro_history(const State& h, const std::array<int, 4>& conn) {
  PoroHistory ph;
  for (int a = 0; a < 4; ++a) {
    const int m = conn[a];
    ph.u_n[a] = h.u[m];
    ph.vs_n[a] = h.vs[m];
    ph.as_n[a] = h.as[m];
    ph.vP_n[a] = h.vP[m];
    ph.aP_n[a] = h.aP[m];
    ph.p_n[a] = h.pP[m];
  }
  return ph;
}

}  // namespace

void Model::assemble(const State& iterate, const State& history, const CutTopology& topo,
                     const DofMap& d, const AssemblyOptions& opt, Vector& R, SparseMatrix* J) const {
  const Mesh& bg = *prob_.background;
  const Mesh& pm = *prob_.poro;
  const double t = iterate.t;
  const TimeScheme ts{prob_.solver.theta, prob_.solver.dt};
  const FluidStabParams fprm{prob_.fluid, prob_.stab, ts};
  const PoroKernelParams pprm{prob_.fluid, prob_.poro_params, prob_.stab, ts};
  const InterfaceKernelParams iprm{prob_.fluid, prob_.poro_params, prob_.stab, prob_.nitsche, ts,
                                   prob_.terms};

  Batches b;
  b.constant = Vector::Zero(d.num_dofs());

  // --- fluid elements
  std::vector<Point> fforce(bg.num_nodes(), Point{0.0, 0.0});
  if (prob_.fluid_force)
    for (int n : d.active_nodes()) fforce[n] = prob_.fluid_force(bg.node(n), t);
  for (int e = 0; e < bg.num_elements(); ++e) {
    if (topo.kind[e] == ElementKind::Void || topo.volume[e].empty()) continue;
    const auto c = bg.corners(e);
    const auto& conn = bg.element(e);
    FluidElementKernel k;
    k.prm = &fprm;
    for (const auto& q : topo.volume[e]) {
      const ShapeEval s = reference_map(c, q.xi);
      k.qps.push_back(ShapeQP{s.N, s.dN, q.w});
    }
    std::array<int, 12> dofs{};
    for (int a = 0; a < 4; ++a) {
      const int n = conn[a];
      k.v_n[a] = history.vF[n];
      k.a_n[a] = history.aF[n];
      k.force[a] = fforce[n];
      dofs[2 * a] = d.vF(n, 0);
      dofs[2 * a + 1] = d.vF(n, 1);
      dofs[8 + a] = d.pF(n);
    }
    b.fluid.kernels.push_back(std::move(k));
    b.fluid.dofs.push_back(dofs);
  }

  // --- fluid CIP and ghost-penalty faces
  auto add_face = [&](int f, bool ghost) {
    FluidFaceKernel k;
    k.geom = bg_faces_[f];
    k.ghost = ghost;
    k.prm = &fprm;
    std::array<int, 18> dofs{};
    for (int l = 0; l < 6; ++l) {
      const int n = k.geom.nodes[l];
      dofs[2 * l] = d.vF(n, 0);
      dofs[2 * l + 1] = d.vF(n, 1);
      dofs[12 + l] = d.pF(n);
    }
    b.faces.kernels.push_back(std::move(k));
    b.faces.dofs.push_back(dofs);
  };
  for (int f : topo.cip_faces) add_face(f, false);
  for (int f : topo.ghost_faces) add_face(f, true);

  // --- Neumann cut boundary
  for (const auto& piece : topo.pieces) {
    if (piece.tag != PolylineTag::Neumann || !prob_.neumann_traction) continue;
    const auto& conn = bg.element(piece.element);
    for (const auto& q : piece.points) {
      std::array<double, 4> N;
      shape_values(q.xi, N);
      const Point h = prob_.neumann_traction(q.x, q.n, t);
      for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 2; ++i) b.constant[d.vF(conn[a], i)] -= q.w * N[a] * h[i];
    }
  }

  // --- poro elements
  std::vector<Point> pf(pm.num_nodes(), Point{0.0, 0.0}), ps(pm.num_nodes(), Point{0.0, 0.0});
  if (prob_.poro_force)
    for (int m = 0; m < pm.num_nodes(); ++m) prob_.poro_force(pm.node(m), t, pf[m], ps[m]);
  auto poro_dofs = [&](int e) {
    std::array<int, 20> dofs{};
    const auto& conn = pm.element(e);
    for (int a = 0; a < 4; ++a) {
      const int m = conn[a];
      dofs[2 * a] = d.vP(m, 0);
      dofs[2 * a + 1] = d.vP(m, 1);
      dofs[8 + 2 * a] = d.u(m, 0);
      dofs[8 + 2 * a + 1] = d.u(m, 1);
      dofs[16 + a] = d.pP(m);
    }
    return dofs;
  };
  for (int e = 0; e < pm.num_elements(); ++e) {
    PoroElementKernel k;
    k.qps = &poro_qps_[e];
    k.hist = poro_history(history, pm.element(e));
    for (int a = 0; a < 4; ++a) {
      k.force_fluid[a] = pf[pm.element(e)[a]];
      k.force_solid[a] = ps[pm.element(e)[a]];
    }
    k.prm = &pprm;
    b.poro.kernels.push_back(std::move(k));
    b.poro.dofs.push_back(poro_dofs(e));
  }
  const auto& bedges = pm.boundary_edges();
  for (size_t i = 0; i < bedges.size(); ++i) {
    const bool exterior = prob_.poro_exterior_tags.count(bedges[i].tag) > 0;
    if (!exterior && !prob_.poro_params.interface_mass_flux) continue;
    PoroBoundaryKernel k;
    k.qps = poro_edges_[i].qps;
    k.hist = poro_history(history, pm.element(bedges[i].element));
    k.prm = &pprm;
    b.edges.kernels.push_back(std::move(k));
    b.edges.dofs.push_back(poro_dofs(bedges[i].element));
  }
  const auto& pfaces = pm.interior_faces();
  for (size_t f = 0; f < pfaces.size(); ++f) {
    b.poro_faces.kernels.push_back(poro_faces_[f]);
    std::array<int, 18> dofs{};
    for (int l = 0; l < 6; ++l) {
      const int m = poro_faces_[f].geom.nodes[l];
      dofs[2 * l] = d.vP(m, 0);
      dofs[2 * l + 1] = d.vP(m, 1);
      dofs[12 + l] = d.pP(m);
    }
    b.poro_faces.dofs.push_back(dofs);
  }

  // --- interface coupling
  for (const auto& piece : topo.pieces) {
    if (piece.tag != PolylineTag::Interface || piece.points.empty()) continue;
    const int e = piece.element;
    const double hg = topo.h_gamma[e];
    if (!(hg > 0.0)) continue;
    const auto& be = bedges.at(piece.points.front().parent_edge);
    const auto cF = bg.corners(e);
    const auto cP = pm.corners(be.element);
    InterfaceKernel k;
    k.h_gamma = hg;
    k.prm = &iprm;
    k.hist = poro_history(history, pm.element(be.element));
    for (const auto& q : piece.points) {
      InterfaceQP iq;
      const ShapeEval sf = reference_map(cF, q.xi);
      iq.NF = sf.N;
      iq.dNF = sf.dN;
      const ShapeEval sp = reference_map(cP, edge_reference_point(be.local_edge, q.s));
      iq.poro = ShapeQP{sp.N, sp.dN, 0.0};
      iq.n = q.n;
      iq.w = q.w;
      if (prob_.jumps) iq.jumps = prob_.jumps(q.x, sp.x, q.n, t);
      k.qps.push_back(iq);
    }
    std::array<int, 32> dofs{};
    const auto& conn = bg.element(e);
    for (int a = 0; a < 4; ++a) {
      dofs[2 * a] = d.vF(conn[a], 0);
      dofs[2 * a + 1] = d.vF(conn[a], 1);
      dofs[8 + a] = d.pF(conn[a]);
    }
    const auto pd = poro_dofs(be.element);
    std::copy(pd.begin(), pd.end(), dofs.begin() + 12);
    b.interface.kernels.push_back(std::move(k));
    b.interface.dofs.push_back(dofs);
  }

  const Vector x = gather(iterate, d);
  const bool ad = opt.jacobian && J && opt.mode == JacobianMode::Analytic;
  std::vector<Triplet> trip;
  run_all(b, x, ad, opt.parallel, R, &trip);
  if (!J || !opt.jacobian) return;
  if (!ad) fd_jacobian(b, x, R, opt.parallel, trip);
  J->resize(d.num_dofs(), d.num_dofs());
  J->setFromTriplets(trip.begin(), trip.end());
}

void Model::apply_dirichlet(const State& iterate, const CutGeometry& geometry, const CutTopology& topo,
                            const DofMap& d, double t, Vector& R, SparseMatrix* J) const {
  std::vector<std::pair<int, double>> cons;
  if (prob_.fluid_bc) {
    std::vector<FluidBC> bcs;
    prob_.fluid_bc(t, geometry, topo, bcs);
    for (const auto& bc : bcs) {
      if (d.fluid_index(bc.node) < 0) continue;
      const int dof = bc.comp < 2 ? d.vF(bc.node, bc.comp) : d.pF(bc.node);
      cons.emplace_back(dof, bc.value);
    }
  }
  if (prob_.poro_bc) {
    std::vector<PoroBC> bcs;
    prob_.poro_bc(t, bcs);
    for (const auto& bc : bcs) {
      const int dof = bc.field == PoroField::VP  ? d.vP(bc.node, bc.comp)
                      : bc.field == PoroField::U ? d.u(bc.node, bc.comp)
                                                 : d.pP(bc.node);
      cons.emplace_back(dof, bc.value);
    }
  }
  if (cons.empty()) return;
  const Vector x = gather(iterate, d);
  std::vector<char> constrained(d.num_dofs(), 0);
  for (const auto& [dof, g] : cons) {
    constrained[dof] = 1;
    R[dof] = x[dof] - g;
  }
  if (!J) return;
  J->prune([&](Eigen::Index row, Eigen::Index, double) { return !constrained[row]; });
  std::vector<Triplet> diag;
  for (int i = 0; i < d.num_dofs(); ++i)
    if (constrained[i]) diag.emplace_back(i, i, 1.0);
  SparseMatrix I(d.num_dofs(), d.num_dofs());
  I.setFromTriplets(diag.begin(), diag.end());
  *J += I;
}

}  // namespace fpi
