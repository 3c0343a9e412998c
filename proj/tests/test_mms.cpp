#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fpi/constitutive.hpp"
#include "fpi/mms.hpp"

using namespace fpi;

namespace {

struct Setup {
  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  MmsParams m = make_mms_params(0.1, 0.21, -0.01, fluid, poro);
  ManufacturedSolution mms{m, fluid, poro, nitsche};
};

Point div_fd(const std::function<Mat2<double>(const Point&)>& T, const Point& x, double h) {
  const Mat2<double> dx = (T(x + Point{h, 0}) - T(x - Point{h, 0})) * (0.5 / h);
  const Mat2<double> dy = (T(x + Point{0, h}) - T(x - Point{0, h})) * (0.5 / h);
  return {dx.xx + dy.xy, dx.yx + dy.yy};
}

}  // namespace

TEST_CASE("manufactured fields") {
  Setup s;
  CHECK(norm(s.mms.vF({0, 0}, 0)) == 0.0);
  const Point v = s.mms.vF({0.5, 0}, 0);
  CHECK(std::abs(v.x) < 1e-16);
  CHECK(v.y == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(s.mms.pF({0, 0}, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s.mms.g_u(0.1) == doctest::Approx(std::exp(-2e-4 * kPi * kPi * 0.1)).epsilon(1e-14));
  CHECK(s.mms.g_u(0.1) == doctest::Approx(0.999803).epsilon(1e-6));

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    const Point x{u(rng), u(rng)};
    CHECK(std::abs(trace(s.mms.grad_vF(x, 0.03))) < 1e-15);
    CHECK(std::abs(trace(s.mms.grad_vP(x, 0.03))) < 1e-15);
  }
}

TEST_CASE("manufactured derivatives against finite differences") {
  Setup s;
  const double t = 0.07, h = 1e-5;
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 10; ++k) {
    const Point x{u(rng), u(rng)};
    // velocity gradient and pressure gradient
    const Mat2<double> G = s.mms.grad_vF(x, t);
    const Point gx = (s.mms.vF(x + Point{h, 0}, t) - s.mms.vF(x - Point{h, 0}, t)) * (0.5 / h);
    CHECK(G.xx == doctest::Approx(gx.x).epsilon(1e-8));
    CHECK(G.yx == doctest::Approx(gx.y).epsilon(1e-8));
    const Point gp = s.mms.grad_pF(x, t);
    CHECK(gp.x == doctest::Approx((s.mms.pF(x + Point{h, 0}, t) - s.mms.pF(x - Point{h, 0}, t)) / (2 * h))
                      .epsilon(1e-8));
    // displacement rates
    const Point ud = (s.mms.u(x, t + h) - s.mms.u(x, t - h)) * (0.5 / h);
    CHECK(norm(ud - s.mms.udot(x, t)) < 1e-9);
    const Point udd = (s.mms.udot(x, t + h) - s.mms.udot(x, t - h)) * (0.5 / h);
    CHECK(norm(udd - s.mms.uddot(x, t)) < 1e-9);
  }
}

TEST_CASE("generated fluid force matches the balance of linear momentum") {
  Setup s;
  const double t = 0.04, h = 1e-5;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 10; ++k) {
    const Point x{u(rng), u(rng)};
    const Point dvdt = (s.mms.vF(x, t + h) - s.mms.vF(x, t - h)) * (0.5 / h);
    const Point conv = s.mms.grad_vF(x, t) * s.mms.vF(x, t);
    const Point divs = div_fd([&](const Point& y) { return s.mms.fluid_stress(y, t); }, x, h);
    const Point f = (dvdt + conv) * s.fluid.rho - divs;
    const Point g = s.mms.fluid_force(x, t);
    CHECK(g.x == doctest::Approx(f.x).epsilon(1e-6).scale(1.0));
    CHECK(g.y == doctest::Approx(f.y).epsilon(1e-6).scale(1.0));
    const Point gen = mms_fluid_force(s.m, x.x, x.y, t);
    CHECK(norm(gen - g) < 1e-12);
  }
}

TEST_CASE("generated skeleton stress divergence matches finite differences") {
  Setup s;
  const double t = 0.06, h = 1e-5;
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  auto P = [&](const Point& X) {
    const auto k = kinematics(s.mms.grad0_u(X, t));
    return k.F * second_pk_stress(k, 0.0, s.poro);
  };
  for (int k = 0; k < 10; ++k) {
    const Point X{u(rng), u(rng)};
    const Point fd = div_fd(P, X, h);
    const Point gen = mms_div_first_pk(s.m, X.x, X.y, t);
    CHECK(gen.x == doctest::Approx(fd.x).epsilon(1e-6).scale(1.0));
    CHECK(gen.y == doctest::Approx(fd.y).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("interface jumps") {
  Setup s;
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-0.4, 0.4), a(0, 2 * kPi);
  for (int k = 0; k < 20; ++k) {
    const Point X{u(rng), u(rng)};
    const double ang = a(rng);
    const Point n{std::cos(ang), std::sin(ang)};
    // the amplitudes satisfy the normal condition at t = 0
    const InterfaceJumps g0 = s.mms.jumps(X, X, n, 0.0);
    CHECK(norm(g0.g_n) < 1e-15);
    const Point x = X + s.mms.u(X, 0.05);
    const InterfaceJumps g = s.mms.jumps(x, X, n, 0.05);
    const InterfaceJumps gr = s.mms.jumps(x, X, -n, 0.05);
    CHECK(g.g_sigma_n == doctest::Approx(gr.g_sigma_n).epsilon(1e-13));
  }
  const Point x{0.1, 0.2};
  const InterfaceJumps g = s.mms.jumps(x, x, Point{1, 0}, 0.0);
  CHECK(g.g_sigma_n == doctest::Approx(s.mms.fluid_stress(x, 0.0).xx + s.mms.pP(x, 0.0)).epsilon(1e-14));
}

TEST_CASE("Ex1 geometry") {
  const Example1 ex = build_example1(0.0625);
  CHECK(ex.background.num_elements() == 256);
  CHECK(ex.poro.num_elements() == 64);
  Point cb{0, 0}, cp{0, 0};
  for (const auto& p : ex.background.nodes()) cb += p * (1.0 / ex.background.num_nodes());
  for (const auto& p : ex.poro.nodes()) cp += p * (1.0 / ex.poro.num_nodes());
  CHECK(norm(cb) < 1e-14);
  CHECK(norm(cp) < 1e-14);
  CutGeometry g;
  g.polylines = {ex.neumann};
  auto rot = [](double x, double y) {
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    return Point{c * x - s * y, s * x + c * y};
  };
  CHECK_FALSE(g.is_fluid(rot(-0.47, 0.3)));
  CHECK(g.is_fluid(rot(-0.43, 0.3)));
  CHECK_THROWS_AS(build_example1(0.3), Error);
  CHECK_THROWS_AS(build_example1(1.0 / 3.0), Error);
}

TEST_CASE("error norms vanish for an exactly representable solution") {
  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  MmsParams m = make_mms_params(0.1, 0.21, -0.01, fluid, poro);
  m.B = 0.0;  // constant fields
  const ManufacturedSolution mms(m, fluid, poro, nitsche);
  const Example1 ex = build_example1(0.25);
  const Model model(make_mms_problem(ex, mms, poro, fluid, nitsche, SolverConfig{}));
  const ErrorReport r = error_norms(model, mms_initial_state(ex, mms, 0.05), mms);
  for (int k = 0; k < kNumNorms; ++k) {
    INFO(kNormNames[k]);
    CHECK(r.norms[k] < 1e-13);
  }
}

TEST_CASE("interpolation errors decrease at second order") {
  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  const ManufacturedSolution mms(make_mms_params(0.1, 0.21, -0.01, fluid, poro), fluid, poro, nitsche);
  std::array<double, kNumNorms> prev{};
  for (double h : {0.125, 0.0625}) {
    const Example1 ex = build_example1(h);
    const Model model(make_mms_problem(ex, mms, poro, fluid, nitsche, SolverConfig{}));
    const ErrorReport r = error_norms(model, mms_initial_state(ex, mms, 0.0), mms);
    if (h < 0.1)
      for (int k : {0, 1, 3, 4}) {  // L2 field norms (u vanishes at t = 0)
        INFO(kNormNames[k]);
        CHECK(std::log2(prev[k] / r.norms[k]) > 1.8);
      }
    prev = r.norms;
  }
}
