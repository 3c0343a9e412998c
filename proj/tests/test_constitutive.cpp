#include <doctest.h>

#include <cmath>

#include "fpi/constitutive.hpp"

using namespace fpi;

namespace {

Mat2<double> M(double xx, double xy, double yx, double yy) { return {xx, xy, yx, yy}; }

PoroParams constitutive_params() {
  PoroParams p;
  p.porosity_mode = PorosityMode::Constitutive;
  p.phi0 = 0.5;
  p.kappa_p = 100.0;
  return p;
}

}  // namespace

TEST_CASE("kinematics") {
  auto k = kinematics(M(0, 0, 0, 0));
  CHECK(k.J == 1.0);
  CHECK(k.E.xx == 0.0);
  CHECK(k.E.xy == 0.0);
  CHECK(k.E.yy == 0.0);

  k = kinematics(M(0.1, 0, 0, 0));
  CHECK(k.F.xx == doctest::Approx(1.1));
  CHECK(k.J == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(k.E.xx == doctest::Approx(0.105).epsilon(1e-14));

  const double a = 0.4;
  k = kinematics(M(std::cos(a) - 1, -std::sin(a), std::sin(a), std::cos(a) - 1));
  CHECK(k.J == doctest::Approx(1.0).epsilon(1e-14));
  for (double e : {k.E.xx, k.E.xy, k.E.yx, k.E.yy}) CHECK(std::abs(e) < 1e-15);

  CHECK_THROWS_AS(kinematics(M(-1.5, 0, 0, 0)), Error);
}

TEST_CASE("second Piola-Kirchhoff stress") {
  PoroParams p;
  const auto I = kinematics(M(0, 0, 0, 0));
  auto S = second_pk_stress(I, 0.0, p);
  for (double s : {S.xx, S.xy, S.yx, S.yy}) CHECK(std::abs(s) < 1e-12);
  S = second_pk_stress(I, 7.0, p);
  CHECK(S.xx == doctest::Approx(-7.0).epsilon(1e-12));
  CHECK(S.yy == doctest::Approx(-7.0).epsilon(1e-12));
  CHECK(std::abs(S.xy) < 1e-12);
}

TEST_CASE("stress is the derivative of the skeleton energy") {
  PoroParams p;  // E = 1000, nu = 0.3
  for (const auto& G : {M(0.1, 0, 0, 0), M(0.05, 0.12, -0.07, -0.03), M(-0.2, 0.1, 0.15, 0.3)}) {
    const auto k = kinematics(G);
    const Mat2<double> P = k.F * second_pk_stress(k, 0.0, p);
    const double eps = 1e-6;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Mat2<double> Fp = k.F, Fm = k.F;
        Fp(i, j) += eps;
        Fm(i, j) -= eps;
        const double fd = (skeleton_energy(Fp, p) - skeleton_energy(Fm, p)) / (2 * eps);
        CHECK(P(i, j) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
  }
}

TEST_CASE("porosity") {
  const PoroParams p = constitutive_params();
  CHECK(porosity(1.0, 0.0, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(porosity(1.0, 100.0, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(porosity(2.0, 0.0, p) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(porosity(0.4, 0.0, p), Error);  // phi < 0
  PoroParams c;
  c.phi0 = 0.3;
  CHECK(porosity(1.7, 55.0, c) == 0.3);
}

TEST_CASE("Kozeny-Carman permeability") {
  CHECK(kozeny_carman(0.5, 0.1, 0.5) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(kozeny_carman(0.25, 0.1, 0.5) == doctest::Approx(0.01).epsilon(1e-12));
  double prev = kozeny_carman(0.5, 0.1, 0.5);
  for (double jphi : {0.1, 1e-2, 1e-3, 1e-6}) {
    const double K = kozeny_carman(jphi, 0.1, 0.5);
    CHECK(K < prev);
    prev = K;
  }
  CHECK(prev < 1e-17);
  CHECK_THROWS_AS(kozeny_carman(1.0, 0.1, 0.5), Error);
}

TEST_CASE("spatial permeability") {
  const double K = 0.1;
  auto k = spatial_permeability(kinematics(M(0, 0, 0, 0)), K);
  CHECK(k.xx == doctest::Approx(K));
  CHECK(k.yy == doctest::Approx(K));
  const double a = 0.9;
  k = spatial_permeability(kinematics(M(std::cos(a) - 1, -std::sin(a), std::sin(a), std::cos(a) - 1)), K);
  CHECK(k.xx == doctest::Approx(K).epsilon(1e-14));
  CHECK(std::abs(k.xy) < 1e-15);
  const auto kin = kinematics(M(1, 0, 0, 0));  // F = diag(2, 1)
  k = spatial_permeability(kin, K);
  CHECK(k.xx == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(k.yy == doctest::Approx(0.05).epsilon(1e-14));
  const auto kinv = inverse_spatial_permeability(kin, K);
  CHECK((k * kinv).xx == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("slip coefficient") {
  const Mat2<double> k = M(0.1, 0, 0, 0.1);
  CHECK(slip_coefficient(k, 1.0, 1.0) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));
  CHECK(slip_coefficient(k, 1.0, 10.0) == doctest::Approx(0.0316228).epsilon(1e-6));
  CHECK(1.0 / slip_coefficient(k, 1.0, 1.0) == doctest::Approx(3.16228).epsilon(1e-6));
  CHECK(slip_coefficient(k, 1.0, 1e12) < 1e-12);
}
