#include <doctest.h>

// exact overlay arithmetic (no integer rescaling)
#define BOOST_GEOMETRY_NO_ROBUSTNESS
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <cmath>

#include "fpi/cutgeom.hpp"
#include "fpi/mms.hpp"
#include "fpi/quadrature.hpp"

using namespace fpi;
namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false>;  // counter-clockwise
using BMulti = bg::model::multi_polygon<BPolygon>;

namespace {

BPolygon make_polygon(const std::vector<Point>& pts) {
  BPolygon p;
  for (const auto& q : pts) bg::append(p.outer(), BPoint(q.x, q.y));
  bg::append(p.outer(), BPoint(pts[0].x, pts[0].y));
  bg::correct(p);
  return p;
}

Point rot(const Point& p, double a) {
  return {std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y};
}

std::vector<Point> rotated_rect(double x0, double y0, double x1, double y1, double a) {
  return {rot({x0, y0}, a), rot({x1, y0}, a), rot({x1, y1}, a), rot({x0, y1}, a)};
}

CutGeometry square_hole(const std::vector<Point>& loop) {
  // Closed interface around a solid square (fluid outside): traverse clockwise
  // so the fluid is on the left.
  CutGeometry g;
  InterfacePolyline pl;
  pl.closed = true;
  for (size_t k = 0; k < loop.size(); ++k) {
    PolySegment s;
    s.a = loop[(k + 1) % loop.size()];
    s.b = loop[k];
    pl.segments.insert(pl.segments.begin(), s);
  }
  g.polylines.push_back(pl);
  g.solid_regions.push_back(loop);
  return g;
}

}  // namespace

TEST_CASE("interface of the undeformed Ex1 square") {
  const Example1 ex = build_example1(0.125);
  const std::vector<Point> u(ex.poro.num_nodes(), Point{0, 0});
  const auto lines = extract_interface(ex.poro, u);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  CHECK(lines[0].length() == doctest::Approx(2.0).epsilon(1e-12));

  // translation shifts vertices, keeps normals
  const Point c{0.013, -0.021};
  const auto moved = extract_interface(ex.poro, std::vector<Point>(ex.poro.num_nodes(), c));
  REQUIRE(moved[0].segments.size() == lines[0].segments.size());
  for (size_t k = 0; k < lines[0].segments.size(); ++k) {
    CHECK(norm(moved[0].segments[k].a - (lines[0].segments[k].a + c)) < 1e-14);
    CHECK(norm(moved[0].segments[k].poro_normal() - lines[0].segments[k].poro_normal()) < 1e-14);
  }
}

TEST_CASE("interface normals of an axis-aligned square point outward") {
  const Mesh sq = build_structured_mesh({-0.5, -0.5}, {1, 1}, 3, 3);
  const auto lines = extract_interface(sq, std::vector<Point>(sq.num_nodes(), Point{0, 0}));
  for (const auto& s : lines[0].segments) {
    const Point mid = (s.a + s.b) * 0.5;
    const Point n = s.poro_normal();
    CHECK(std::abs(std::abs(n.x) + std::abs(n.y) - 1.0) < 1e-14);
    CHECK(dot(n, mid) > 0.0);
  }
}

TEST_CASE("polyline outside the mesh leaves every element fluid") {
  const Mesh m = build_structured_mesh({0, 0}, {1, 1}, 4, 4);
  CutGeometry g;
  g.polylines.push_back(neumann_line({-1.0, 5.0}, {-1.0, -5.0}));  // downward: fluid on the +x side
  const CutTopology t = classify_and_cut(m, g);
  for (auto k : t.kind) CHECK(k == ElementKind::Fluid);
  CHECK(t.ghost_faces.empty());
  CHECK(t.cip_faces.size() == m.interior_faces().size());
}

TEST_CASE("straight cut through an element center") {
  const double h = 0.5;
  const Mesh m = build_structured_mesh({0, 0}, {h, h}, 1, 1);
  CutGeometry g;
  g.polylines.push_back(neumann_line({0.5 * h, 1.0}, {0.5 * h, -1.0}));  // fluid on x > h/2
  const CutTopology t = classify_and_cut(m, g);
  CHECK(t.kind[0] == ElementKind::Cut);
  CHECK(t.physical_area[0] == doctest::Approx(h * h / 2).epsilon(1e-14));
  double len = 0.0;
  for (const auto& p : t.pieces) len += norm(p.b - p.a);
  CHECK(len == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("interface element size h_gamma") {
  for (double s : {1.0, 3.0}) {
    const double h = 0.2 * s;
    const Mesh m = build_structured_mesh({0, 0}, {h, h}, 1, 1);
    // solid strip covering the left half: interface length h inside the element
    const CutTopology half = classify_and_cut(
        m, square_hole({Point{-h, -h}, Point{0.5 * h, -h}, Point{0.5 * h, 2 * h}, Point{-h, 2 * h}}));
    CHECK(interface_h_gamma(m, half, 0) == doctest::Approx(h).epsilon(1e-12));
    // solid half-plane x + y < a clipping the corner with chord h/10
    const double a = h / 10 / std::sqrt(2.0);
    const CutTopology corner =
        classify_and_cut(m, square_hole({Point{-2 * h, -2 * h}, Point{a + 2 * h, -2 * h}, Point{-2 * h, a + 2 * h}}));
    CHECK(interface_h_gamma(m, corner, 0) == doctest::Approx(10 * h).epsilon(1e-10));
  }
}

TEST_CASE("Ex1 cut areas against an exact polygon boolean") {
  const double h = 0.25;
  const Example1 ex = build_example1(h);
  FluidParams f;
  PoroParams p;
  NitscheConfig n;
  const ManufacturedSolution mms(make_mms_params(0.1, 0.21, -0.01, f, p), f, p, n);
  Problem prob = make_mms_problem(ex, mms, p, f, n, SolverConfig{});
  prob.cut_options.keep_polygons = true;
  const Model model(prob);
  const CutTopology topo = model.cut(std::vector<Point>(ex.poro.num_nodes(), Point{0, 0}));

  const BPolygon allowed = make_polygon(rotated_rect(-0.45, -2.0, 2.0, 2.0, kPi / 4));
  const BPolygon solid = make_polygon(rotated_rect(-0.25, -0.25, 0.25, 0.25, kPi / 6));
  double total = 0.0, oracle_total = 0.0;
  for (int e = 0; e < ex.background.num_elements(); ++e) {
    const auto c = ex.background.corners(e);
    const BPolygon cell = make_polygon({c[0], c[1], c[2], c[3]});
    BMulti clipped, fluid;
    bg::intersection(cell, allowed, clipped);
    bg::difference(clipped, solid, fluid);
    const double exact = bg::area(fluid);
    double quad = 0.0;
    for (const auto& q : topo.volume[e]) quad += q.w;
    CHECK(quad == doctest::Approx(exact).epsilon(1e-10).scale(h * h));
    CHECK(topo.physical_area[e] == doctest::Approx(exact).epsilon(1e-10).scale(h * h));
    total += quad;
    oracle_total += exact;
  }
  CHECK(total == doctest::Approx(oracle_total).epsilon(1e-10));
  CHECK(total == doctest::Approx(1.0 - 0.05 - 0.25).epsilon(1e-10));

  SUBCASE("moments up to degree 3 against Green's theorem") {
    const auto& g = gauss_legendre(4);
    for (int e = 0; e < ex.background.num_elements(); ++e) {
      if (topo.kind[e] != ElementKind::Cut) continue;
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b) {
          double quad = 0.0;
          for (const auto& q : topo.volume[e]) quad += q.w * std::pow(q.x.x, a) * std::pow(q.x.y, b);
          // int x^a y^b dA = loop int x^(a+1) y^b / (a+1) dy
          double green = 0.0;
          for (const auto& loop : topo.polygons[e])
            for (size_t k = 0; k < loop.size(); ++k) {
              const Point p0 = loop[k], p1 = loop[(k + 1) % loop.size()];
              for (size_t i = 0; i < g.xi.size(); ++i) {
                const Point x = p0 + (p1 - p0) * (0.5 * (g.xi[i] + 1.0));
                green += 0.5 * g.w[i] * std::pow(x.x, a + 1) * std::pow(x.y, b) / (a + 1) * (p1.y - p0.y);
              }
            }
          CHECK(quad == doctest::Approx(green).epsilon(1e-12).scale(h * h));
        }
    }
  }
}

TEST_CASE("cut topology is invariant to the quadrature of unrelated elements") {
  const Example1 ex = build_example1(0.125);
  FluidParams f;
  PoroParams p;
  NitscheConfig n;
  const ManufacturedSolution mms(make_mms_params(0.1, 0.21, -0.01, f, p), f, p, n);
  const Model model(make_mms_problem(ex, mms, p, f, n, SolverConfig{}));
  const CutTopology t = model.cut(std::vector<Point>(ex.poro.num_nodes(), Point{0, 0}));
  // every active element touches only active nodes; ghost faces have a cut neighbour
  for (int e = 0; e < ex.background.num_elements(); ++e)
    if (t.element_active(e))
      for (int node : ex.background.element(e)) CHECK(t.active_node[node]);
  for (int fi : t.ghost_faces) {
    const auto& face = ex.background.interior_faces()[fi];
    CHECK((t.kind[face.elements[0]] == ElementKind::Cut || t.kind[face.elements[1]] == ElementKind::Cut));
  }
}
