#include <doctest.h>

#include <cmath>
#include <random>

#include "fpi/problem.hpp"
#include "fpi/quadrature.hpp"

using namespace fpi;

namespace {

const std::array<Point, 4> kUnit{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};

std::vector<ShapeQP> element_qps(const std::array<Point, 4>& c) {
  std::vector<ShapeQP> out;
  for (const auto& q : gauss_square(2)) {
    const ShapeEval s = reference_map(c, q.x);
    out.push_back(ShapeQP{s.N, s.dN, q.w * s.detj});
  }
  return out;
}

// Linear field values at the 6 face-patch nodes: v = v0 + G x, p = p0 + g.x
std::array<double, 18> linear_patch(const Mesh& m, const InteriorFace& f) {
  const auto nodes = face_nodes(m, f);
  std::array<double, 18> x{};
  for (int l = 0; l < 6; ++l) {
    const Point& p = m.node(nodes[l]);
    x[2 * l] = 0.3 + 1.2 * p.x - 0.7 * p.y;
    x[2 * l + 1] = -0.1 + 0.4 * p.x + 2.1 * p.y;
    x[12 + l] = 1.5 - 0.8 * p.x + 0.25 * p.y;
  }
  return x;
}

struct InterfaceSetup {
  InterfaceKernelParams prm;
  InterfaceKernel kernel;
};

InterfaceSetup make_interface(const Point& n, double h_gamma, const Point& xi = {0.2, -0.3}) {
  InterfaceSetup s;
  s.prm.fluid = {1.0, 1.0};
  s.prm.poro.phi0 = 0.5;
  s.prm.poro.K0 = 0.1;
  s.prm.time = {1.0, 0.05};
  s.kernel.h_gamma = h_gamma;
  InterfaceQP q;
  const ShapeEval f = reference_map(kUnit, xi);
  q.NF = f.N;
  q.dNF = f.dN;
  q.poro = ShapeQP{f.N, f.dN, 0.0};
  q.n = n;
  q.w = 0.7;
  s.kernel.qps.push_back(q);
  return s;
}

std::array<double, 32> eval(const InterfaceSetup& s, const std::array<double, 32>& x) {
  std::array<double, 32> r{};
  InterfaceKernel k = s.kernel;
  k.prm = &s.prm;
  k.eval(x.data(), r.data());
  return r;
}

CouplingTerms only(bool nc, bool na, bool np, bool tc, bool ta, bool tp) { return {nc, na, np, tc, ta, tp}; }

}  // namespace

TEST_CASE("fluid element residual vanishes for rest and for uniform steady flow") {
  FluidStabParams prm{{1.0, 1.0}, {}, {1.0, 0.05}};
  FluidElementKernel k;
  k.qps = element_qps(kUnit);
  k.prm = &prm;
  std::array<double, 12> x{}, r{};
  k.eval(x.data(), r.data());
  for (double v : r) CHECK(v == 0.0);

  for (int a = 0; a < 4; ++a) {
    x[2 * a] = 0.7;
    x[2 * a + 1] = -0.3;
    k.v_n[a] = Point{0.7, -0.3};
  }
  r.fill(0.0);
  k.eval(x.data(), r.data());
  for (double v : r) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("poro element residual vanishes at the reference state") {
  PoroKernelParams prm{{1.0, 1.0}, {}, {}, {1.0, 0.05}};
  const auto qps = element_qps(kUnit);
  PoroElementKernel k;
  k.qps = &qps;
  k.prm = &prm;
  std::array<double, 20> x{}, r{};
  k.eval(x.data(), r.data());
  for (double v : r) CHECK(std::abs(v) < 1e-15);
  prm.poro.porosity_mode = PorosityMode::Constitutive;
  prm.poro.permeability_mode = PermeabilityMode::KozenyCarman;
  r.fill(0.0);
  k.eval(x.data(), r.data());
  for (double v : r) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("CIP and ghost penalty vanish on globally linear fields") {
  const Mesh m = build_structured_mesh({0.1, -0.2}, {1.0, 0.8}, 3, 2, 0.35);  // affine elements
  const StabConstants stab;
  const FluidStabParams prm{{1.0, 1.0}, stab, {1.0, 0.05}};
  for (const auto& f : m.interior_faces()) {
    for (bool ghost : {false, true}) {
      FluidFaceKernel k;
      k.geom = build_face_geometry(m, f, 3, true);
      k.ghost = ghost;
      k.prm = &prm;
      const auto x = linear_patch(m, f);
      std::array<double, 18> r{};
      k.eval(x.data(), r.data());
      for (double v : r) CHECK(std::abs(v) < 1e-13);
    }
    PoroFaceKernel pk;
    pk.geom = build_face_geometry(m, f, 3, false);
    pk.tau_p = 0.3;
    pk.tau_div = 0.2;
    const auto x = linear_patch(m, f);
    std::array<double, 18> r{};
    pk.eval(x.data(), r.data());
    for (double v : r) CHECK(std::abs(v) < 1e-13);
  }
}

TEST_CASE("face penalties are positive semi-definite") {
  const Mesh m = build_structured_mesh({0, 0}, {1, 1}, 2, 1, 0.2);
  const FluidStabParams prm{{1.0, 1.0}, {}, {1.0, 0.05}};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 18> x;
    for (double& v : x) v = u(rng);
    for (bool ghost : {false, true}) {
      FluidFaceKernel k;
      k.geom = build_face_geometry(m, m.interior_faces()[0], 3, true);
      k.ghost = ghost;
      k.prm = &prm;
      std::array<double, 18> r{};
      k.eval(x.data(), r.data());
      double q = 0.0;
      for (int i = 0; i < 18; ++i) q += x[i] * r[i];
      CHECK(q >= -1e-14);
    }
  }
}

TEST_CASE("stabilization scalings") {
  const StabConstants stab;
  FluidFaceTaus t{1.0, 1.0, 0.1, 0.05, &stab};
  double tu, tp, td;
  t.cip(0.0, tu, tp, td);
  CHECK(tp == doctest::Approx(0.05e-3 / (1.0 + 0.01 / 12.0 / 0.05)).epsilon(1e-12));
  CHECK(tp == doctest::Approx(4.9180e-5).epsilon(1e-4));
  CHECK(tu == 0.0);

  FluidFaceTaus g{1.0, 0.0, 0.1, 0.05, &stab};
  g.cip(0.0, tu, tp, td);
  CHECK(tu + g.ghost_extra() == doctest::Approx(0.01).epsilon(1e-14));

  double ptp, ptd;
  poro_cip_scalings(0.1, 1.0, 1.0, 0.5, 0.1, 0.05, stab, ptp, ptd);
  CHECK(ptp == doctest::Approx(7.5e-4).epsilon(1e-12));
  CHECK(ptd == doctest::Approx(0.05e-3 * 0.1 * 0.01 * (5.0 + 1.0 / 12.0 / 0.05)).epsilon(1e-12));
}

TEST_CASE("coupling adjoint and penalty vanish on constraint-satisfying states") {
  const Point n = Point{0.6, 0.8};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double zeta : {-1.0, 1.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      InterfaceSetup s = make_interface(n, 0.1);
      s.prm.nitsche.zeta = zeta;
      s.prm.nitsche.gamma_n = s.prm.nitsche.gamma_t = 1.0 / 45.0;
      s.prm.terms = only(false, true, true, false, true, true);
      std::array<double, 32> x{};
      for (int i = 0; i < 12; ++i) x[i] = u(rng);
      for (int a = 0; a < 4; ++a) x[12 + 16 + a] = u(rng);  // poro pressure
      const InterfaceQP& q = s.kernel.qps[0];
      Point v{0, 0};
      Mat2<double> G{0, 0, 0, 0};
      double p = 0.0;
      for (int a = 0; a < 4; ++a) {
        const Point va{x[2 * a], x[2 * a + 1]};
        v += va * q.NF[a];
        G += outer(va, q.dNF[a]);
        p += x[8 + a] * q.NF[a];
      }
      const Point sn = (G + transpose(G)) * n - n * p;
      const Point tau = sn - n * dot(sn, n);
      const double kappa = std::sqrt(0.1);
      const Point vP = (v + tau * kappa) * (1.0 / 0.5);  // (vF - phi vP).n = 0, (vF - phi vP)_t + kappa tau = 0
      for (int a = 0; a < 4; ++a) {
        x[12 + 2 * a] = vP.x;
        x[12 + 2 * a + 1] = vP.y;
      }
      const auto r = eval(s, x);
      for (double v : r) CHECK(std::abs(v) < 1e-12);

      // substitution: the normal adjoint and penalty still vanish
      s.prm.nitsche.tangential = TangentialMethod::Substitution;
      s.prm.terms = only(false, true, true, false, false, false);
      const auto rs = eval(s, x);
      for (double v : rs) CHECK(std::abs(v) < 1e-12);
    }
  }
}

TEST_CASE("normal coupling forces on the poroelastic side are parallel to n") {
  const Point n = Point{-0.28, 0.96};
  InterfaceSetup s = make_interface(n, 0.1);
  s.prm.terms = only(true, true, true, false, false, false);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::array<double, 32> x;
  for (double& v : x) v = 0.2 * u(rng);
  const auto r = eval(s, x);
  for (int a = 0; a < 4; ++a)
    for (int off : {12, 20}) {
      const Point f{r[off + 2 * a], r[off + 2 * a + 1]};
      CHECK(std::abs(cross(f, n)) < 1e-13 * (1.0 + norm(f)));
    }
}

TEST_CASE("coupling penalty prefactors") {
  SUBCASE("normal") {
    InterfaceSetup s = make_interface(Point{1, 0}, 0.1);
    s.prm.nitsche.gamma_n = 1.0 / 45.0;
    s.prm.terms = only(false, false, true, false, false, false);
    std::array<double, 32> x{};
    for (int a = 0; a < 4; ++a) x[12 + 2 * a] = 1.0;  // vP = e_x, vF = 0
    const auto r = eval(s, x);
    const auto& q = s.kernel.qps[0];
    const double pen = -r[0] / (0.5 * q.NF[0] * q.w);
    CHECK(pen == doctest::Approx(45.0 * (1.0 + 0.01 / 12.0 / 0.05) / 0.1).epsilon(1e-12));
    CHECK(pen == doctest::Approx(457.5).epsilon(1e-4));
  }
  SUBCASE("tangential Nitsche") {
    for (double zeta : {-1.0, 1.0}) {
      InterfaceSetup s = make_interface(Point{1, 0}, 0.1);
      s.prm.poro.K0 = 1.0;  // kappa mu = 1
      s.prm.nitsche.gamma_t = 1.0;
      s.prm.nitsche.zeta = zeta;
      std::array<double, 32> x{};
      for (int a = 0; a < 4; ++a) x[2 * a + 1] = 1.0;  // vF = e_y tangential
      const auto& q = s.kernel.qps[0];
      s.prm.terms = only(false, false, false, false, false, true);
      auto r = eval(s, x);
      CHECK(r[1] / (q.NF[0] * q.w) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
      s.prm.terms = only(false, false, false, false, true, false);
      r = eval(s, x);
      CHECK(-r[1] / (q.dNF[0].x * q.w) == doctest::Approx(zeta * 0.1 / 1.1).epsilon(1e-12));
      // no-slip limit
      s.prm.nitsche.alpha_bj = 1e14;
      s.prm.terms = only(false, false, false, false, false, true);
      r = eval(s, x);
      CHECK(r[1] / (q.NF[0] * q.w) == doctest::Approx(1.0 / 0.1).epsilon(1e-10));
    }
  }
  SUBCASE("tangential substitution") {
    InterfaceSetup s = make_interface(Point{1, 0}, 0.1);
    s.prm.nitsche.tangential = TangentialMethod::Substitution;
    s.prm.terms = only(false, false, false, false, false, true);
    std::array<double, 32> x{};
    for (int a = 0; a < 4; ++a) x[2 * a + 1] = 1.0;
    const auto r = eval(s, x);
    const auto& q = s.kernel.qps[0];
    CHECK(r[1] / (q.NF[0] * q.w) == doctest::Approx(1.0 / std::sqrt(0.1)).epsilon(1e-12));
  }
}

TEST_CASE("symmetric tangential Nitsche form is positive semi-definite") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  bool indefinite_seen = false;
  for (double zeta : {-1.0, 1.0}) {
    for (int trial = 0; trial < 300; ++trial) {
      const double a = 3.0 * u(rng);
      InterfaceSetup s = make_interface(Point{std::cos(a), std::sin(a)}, 0.05 + 0.1 * (u(rng) + 1.0),
                                        Point{u(rng), u(rng)});
      s.prm.nitsche.zeta = zeta;
      s.prm.nitsche.gamma_t = 1.0 / 45.0;
      s.prm.nitsche.alpha_bj = std::pow(10.0, 2.0 * u(rng));
      s.prm.terms = only(false, false, false, true, true, true);
      std::array<double, 32> x{};
      for (int i = 0; i < 12; ++i) x[i] = u(rng);
      const auto r = eval(s, x);
      double q = 0.0, xx = 0.0;
      for (int i = 0; i < 12; ++i) {
        q += x[i] * r[i];
        xx += x[i] * x[i];
      }
      if (zeta < 0)
        CHECK(q >= -1e-12 * xx);
      else if (q < -1e-8 * xx)
        indefinite_seen = true;
    }
  }
  CHECK(indefinite_seen);  // the non-symmetric variant has no such bound
}
