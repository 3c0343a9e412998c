#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "fpi/error.hpp"
#include "fpi/mesh.hpp"
#include "fpi/quadrature.hpp"

using namespace fpi;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("structured mesh counts") {
  const Mesh m = build_structured_mesh({0, 0}, {1, 1}, 2, 2);
  CHECK(m.num_elements() == 4);
  CHECK(m.num_nodes() == 9);
  CHECK(m.interior_faces().size() == 4);

  const Mesh m16 = build_structured_mesh({0, 0}, {1, 1}, 16, 16);
  CHECK(m16.interior_faces().size() == 480);
  CHECK(m16.interior_faces().size() == static_cast<size_t>(16 * 15 + 16 * 15));
  const auto c = m16.corners(0);
  CHECK(norm(c[1] - c[0]) == doctest::Approx(0.0625).epsilon(1e-14));

  const Mesh m35 = build_structured_mesh({0, 0}, {3, 5}, 3, 5);
  CHECK(m35.interior_faces().size() == static_cast<size_t>(3 * 4 + 5 * 2));
}

TEST_CASE("structured mesh rejects bad arguments") {
  CHECK_THROWS_AS(build_structured_mesh({0, 0}, {1, 1}, 0, 2), Error);
  CHECK_THROWS_AS(build_structured_mesh({0, 0}, {-1, 1}, 2, 2), Error);
}

TEST_CASE("rotated mesh keeps side tags and area") {
  const Mesh m = build_structured_mesh({-0.5, -0.5}, {1, 1}, 4, 4, 0.7);
  CHECK(m.nodes_with_tag("left").size() == 5);
  CHECK(m.nodes_with_tag("top").size() == 5);
  double area = 0.0;
  for (int e = 0; e < m.num_elements(); ++e)
    for (const auto& q : gauss_square(2)) area += q.w * reference_map(m, e, q.x).detj;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("face size is the element diagonal on a uniform grid") {
  const Mesh m = build_structured_mesh({0, 0}, {1, 1}, 8, 8);
  for (const auto& f : m.interior_faces()) CHECK(f.h == doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-14));
}

TEST_CASE("reference map") {
  std::array<double, 4> N;
  shape_values({0, 0}, N);
  for (double v : N) CHECK(v == doctest::Approx(0.25));
  shape_values({-1, -1}, N);
  CHECK(N[0] == 1.0);
  CHECK(N[1] == 0.0);
  CHECK(N[2] == 0.0);
  CHECK(N[3] == 0.0);

  const std::array<Point, 4> unit{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};
  const ShapeEval s = reference_map(unit, {0.5, 0.0});
  CHECK(s.x.x == doctest::Approx(0.75));
  CHECK(s.x.y == doctest::Approx(0.5));
  double sum = 0.0;
  for (double v : s.N) sum += v;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("inverse map") {
  const std::array<Point, 4> q{Point{0.1, 0.0}, Point{1.2, 0.2}, Point{1.0, 1.1}, Point{-0.1, 0.9}};
  const Point centroid = reference_map(q, {0, 0}).x;
  const auto r = inverse_map(q, centroid);
  CHECK(r.inside);
  CHECK(std::abs(r.local.x) < 1e-12);
  CHECK(std::abs(r.local.y) < 1e-12);
  for (int a = 0; a < 4; ++a) {
    const auto v = inverse_map(q, q[a]);
    CHECK(v.local.x == doctest::Approx(kRefCorner[a][0]).epsilon(1e-12));
    CHECK(v.local.y == doctest::Approx(kRefCorner[a][1]).epsilon(1e-12));
  }

  // parallelogram: x = x0 + A (xi + 1) / 2 with A = [e1 e2]
  const Point x0{0.3, -0.2}, e1{1.0, 0.25}, e2{0.4, 0.8};
  const std::array<Point, 4> par{x0, x0 + e1, x0 + e1 + e2, x0 + e2};
  const Point p{0.9, 0.3};
  const Point d = p - x0;
  const double detA = e1.x * e2.y - e2.x * e1.y;
  const Point st{(d.x * e2.y - e2.x * d.y) / detA, (e1.x * d.y - d.x * e1.y) / detA};
  const auto ip = inverse_map(par, p);
  CHECK(ip.local.x == doctest::Approx(2 * st.x - 1).epsilon(1e-12));
  CHECK(ip.local.y == doctest::Approx(2 * st.y - 1).epsilon(1e-12));
  CHECK(ip.inside);
  CHECK_FALSE(inverse_map(par, Point{5.0, 5.0}).inside);
}

TEST_CASE("inverse map round trip on random quads") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2), loc(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::array<Point, 4> q{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};
    for (auto& p : q) p += Point{jitter(rng), jitter(rng)};
    const Point xi{loc(rng), loc(rng)};
    const auto r = inverse_map(q, reference_map(q, xi).x);
    CHECK(norm(r.local - xi) < 1e-10);
  }
}

TEST_CASE("inverse map on a thin skewed element") {
  const std::array<Point, 4> c{Point{0.54, 0.46199999999999991}, Point{0.55, 0.44624999999999998},
                               Point{0.55, 0.45333333333333331}, Point{0.54, 0.46933333333333327}};
  const auto r = inverse_map(c, Point{0.54887298334620749, 0.4480250512297233});
  CHECK(r.inside);
  CHECK(r.local.y == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("mesh file") {
  const Mesh one = load_mesh(write_temp("fpi_one.mesh",
                                        "# single element\nnodes 4 elements 1\n"
                                        "n 10 0 0\nn 11 1 0\nn 12 1 1\nn 13 0 1\n"
                                        "e 1 10 11 12 13\nb wall 10 11\n"));
  CHECK(one.num_elements() == 1);
  CHECK(one.num_nodes() == 4);
  CHECK(one.interior_faces().empty());
  CHECK(one.nodes_with_tag("wall").size() == 2);

  try {
    load_mesh(write_temp("fpi_cw.mesh", "nodes 4 elements 1\nn 0 0 0\nn 1 1 0\nn 2 1 1\nn 3 0 1\ne 0 0 3 2 1\n"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("inverted element") != std::string::npos);
  }
  CHECK_THROWS_AS(load_mesh(write_temp("fpi_dup.mesh", "nodes 2 elements 0\nn 0 0 0\nn 0 1 0\n")), Error);
  CHECK_THROWS_AS(load_mesh(write_temp("fpi_missing.mesh", "nodes 1 elements 0\nn 0 zero 0\n")), Error);
}

TEST_CASE("mesh save/load round trip") {
  const Mesh m = build_structured_mesh({0, 0}, {2, 1}, 3, 2);
  const std::string path = write_temp("fpi_rt.mesh", "");
  save_mesh(m, path);
  const Mesh r = load_mesh(path);
  CHECK(r.num_elements() == m.num_elements());
  CHECK(r.nodes_with_tag("left") == m.nodes_with_tag("left"));
}

TEST_CASE("quadrature exactness") {
  // 3-point Gauss integrates x^5 exactly; the collapsed triangle rule with n = 3 degree 4
  double s = 0.0;
  const auto& g = gauss_legendre(3);
  for (size_t k = 0; k < g.xi.size(); ++k) s += g.w[k] * std::pow(g.xi[k], 4);
  CHECK(s == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
  std::vector<QuadPoint> tri;
  append_triangle_rule({0, 0}, {1, 0}, {0, 1}, 3, tri);
  double m = 0.0;
  for (const auto& q : tri) m += q.w * q.x.x * q.x.x * q.x.y * q.x.y;  // x^2 y^2 -> 2!2!/6! = 1/180
  CHECK(m == doctest::Approx(1.0 / 180.0).epsilon(1e-13));
}
