#include "fpi/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>

#include "fpi/error.hpp"

namespace fpi {

namespace {

constexpr double kDegenerateTol = 1e-12;   // relative to h
constexpr double kPerturbation = 1e-10;    // relative to h

Point unit(const Point& d) { return d * (1.0 / norm(d)); }

double segment_distance(const Point& p, const Point& a, const Point& b, double* t_out = nullptr) {
  const Point d = b - a;
  const double l2 = dot(d, d);
  double t = l2 > 0.0 ? dot(p - a, d) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return norm(p - (a + d * t));
}

int orientation(const Point& a, const Point& b, const Point& c, double tol) {
  const double v = cross(b - a, c - a);
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2,
                        double tol) {
  const int o1 = orientation(p1, p2, q1, tol), o2 = orientation(p1, p2, q2, tol);
  const int o3 = orientation(q1, q2, p1, tol), o4 = orientation(q1, q2, p2, tol);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_seg = [&](const Point& a, const Point& b, const Point& c) {
    return segment_distance(c, a, b) <= 1e-12 * std::max(norm(b - a), 1e-300);
  };
  if (o1 == 0 && on_seg(p1, p2, q1)) return true;
  if (o2 == 0 && on_seg(p1, p2, q2)) return true;
  if (o3 == 0 && on_seg(q1, q2, p1)) return true;
  if (o4 == 0 && on_seg(q1, q2, p2)) return true;
  return false;
}

/// Chains of CCW boundary edges (a -> b) into polylines of node ids.
/// Returns node sequences; `closed` flags loops.
std::vector<std::pair<std::vector<int>, bool>> chain_edges(
    const std::vector<std::pair<int, int>>& edges) {
  std::map<int, int> by_start;
  std::set<int> ends;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!by_start.emplace(edges[i].first, static_cast<int>(i)).second)
      fail(ErrorKind::Geometry, "invalid interface geometry: boundary is not a manifold");
    ends.insert(edges[i].second);
  }
  std::vector<char> used(edges.size(), 0);
  std::vector<std::pair<std::vector<int>, bool>> out;
  auto walk = [&](int first) {
    std::vector<int> nodes{edges[first].first};
    int cur = first;
    bool closed = false;
    while (true) {
      used[cur] = 1;
      nodes.push_back(edges[cur].second);
      auto it = by_start.find(edges[cur].second);
      if (it == by_start.end()) break;
      if (used[it->second]) {
        closed = it->second == first;
        if (!closed) fail(ErrorKind::Geometry, "invalid interface geometry: branching boundary");
        nodes.pop_back();
        break;
      }
      cur = it->second;
    }
    out.emplace_back(std::move(nodes), closed);
  };
  for (size_t i = 0; i < edges.size(); ++i)
    if (!used[i] && !ends.count(edges[i].first)) walk(static_cast<int>(i));
  for (size_t i = 0; i < edges.size(); ++i)
    if (!used[i]) walk(static_cast<int>(i));
  return out;
}

void check_self_intersection(const std::vector<InterfacePolyline>& lines) {
  struct Seg {
    Point a, b;
    int line, idx;
  };
  std::vector<Seg> segs;
  for (size_t l = 0; l < lines.size(); ++l)
    for (size_t i = 0; i < lines[l].segments.size(); ++i)
      segs.push_back({lines[l].segments[i].a, lines[l].segments[i].b, static_cast<int>(l),
                      static_cast<int>(i)});
  std::sort(segs.begin(), segs.end(),
            [](const Seg& s, const Seg& t) { return std::min(s.a.x, s.b.x) < std::min(t.a.x, t.b.x); });
  for (size_t i = 0; i < segs.size(); ++i) {
    const double xmax = std::max(segs[i].a.x, segs[i].b.x);
    for (size_t j = i + 1; j < segs.size() && std::min(segs[j].a.x, segs[j].b.x) <= xmax; ++j) {
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (s.line == t.line) {
        const int m = static_cast<int>(lines[s.line].segments.size());
        const int d = std::abs(s.idx - t.idx);
        if (d == 1 || (lines[s.line].closed && d == m - 1)) continue;
      }
      const double tol = 1e-14 * std::max(norm(s.b - s.a), norm(t.b - t.a));
      if (segments_intersect(s.a, s.b, t.a, t.b, tol))
        fail(ErrorKind::Geometry, "invalid interface geometry: deformed boundary self-intersects");
    }
  }
}

struct Piece {
  int polyline, segment;
  double t0, t1;
  Point a, b;
  bool enters, exits;
};

/// Cyrus-Beck clip of segment a + t d, t in [0,1], against a convex CCW quad.
bool clip_to_quad(const std::array<Point, 4>& c, const Point& a, const Point& b, double& t0,
                  double& t1) {
  const Point d = b - a;
  t0 = 0.0;
  t1 = 1.0;
  for (int k = 0; k < 4; ++k) {
    const Point e = c[(k + 1) % 4] - c[k];
    const Point n{-e.y, e.x};  // inward
    const double num = dot(n, a - c[k]);
    const double den = dot(n, d);
    if (den == 0.0) {
      if (num < 0.0) return false;
      continue;
    }
    const double t = -num / den;
    if (den > 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 >= t1) return false;
  }
  return true;
}

double perimeter_param(const std::array<Point, 4>& c, const Point& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::max(), best_t = 0.0;
  for (int k = 0; k < 4; ++k) {
    double t;
    const double d = segment_distance(p, c[k], c[(k + 1) % 4], &t);
    if (d < best_d) {
      best_d = d;
      best = k;
      best_t = t;
    }
  }
  return best + best_t;
}

std::vector<Point> cleanup_loop(const std::vector<Point>& in, double scale) {
  std::vector<Point> pts;
  for (const Point& p : in)
    if (pts.empty() || norm(p - pts.back()) > 1e-14 * scale) pts.push_back(p);
  while (pts.size() > 1 && norm(pts.front() - pts.back()) <= 1e-14 * scale) pts.pop_back();
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (size_t i = 0; i < pts.size(); ++i) {
      const Point& p0 = pts[(i + pts.size() - 1) % pts.size()];
      const Point& p2 = pts[(i + 1) % pts.size()];
      if (std::abs(cross(pts[i] - p0, p2 - pts[i])) <= 1e-14 * scale * scale &&
          dot(pts[i] - p0, p2 - pts[i]) >= 0.0) {
        pts.erase(pts.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

bool point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

/// Ear clipping of a simple CCW polygon.
std::vector<std::array<Point, 3>> triangulate(std::vector<Point> poly) {
  std::vector<std::array<Point, 3>> tris;
  while (poly.size() > 3) {
    const size_t n = poly.size();
    bool clipped = false;
    for (size_t i = 0; i < n && !clipped; ++i) {
      const Point& a = poly[(i + n - 1) % n];
      const Point& b = poly[i];
      const Point& c = poly[(i + 1) % n];
      if (cross(b - a, c - b) <= 0.0) continue;
      bool ear = true;
      for (size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        if (point_in_triangle(poly[j], a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      poly.erase(poly.begin() + static_cast<long>(i));
      clipped = true;
    }
    if (!clipped) {
      // Numerically degenerate remainder: fall back to a fan (still exact for
      // polynomial integrands since the signed areas add up).
      for (size_t i = 1; i + 1 < poly.size(); ++i) tris.push_back({poly[0], poly[i], poly[i + 1]});
      return tris;
    }
  }
  if (poly.size() == 3) tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

struct ElementCut {
  ElementKind kind = ElementKind::Void;
  std::vector<VolumeQuadPoint> volume;
  std::vector<InterfacePiece> pieces;
  std::vector<std::vector<Point>> loops;
  double area = 0.0;
};

void perturb_degenerate_vertices(const Mesh& bg, const ElementLocator& loc,
                                 std::vector<InterfacePolyline>& lines) {
  double hmax = 0.0;
  for (int e = 0; e < bg.num_elements(); ++e) hmax = std::max(hmax, bg.diameter(e));
  for (auto& line : lines) {
    auto& segs = line.segments;
    const size_t m = segs.size();
    if (m == 0) continue;
    const size_t nv = line.closed ? m : m + 1;
    for (size_t v = 0; v < nv; ++v) {
      Point p = v < m ? segs[v].a : segs[m - 1].b;
      const Point dir =
          v < m ? unit(segs[v].b - segs[v].a) : unit(segs[m - 1].a - segs[m - 1].b);
      for (int attempt = 0; attempt < 8; ++attempt) {
        bool degenerate = false;
        double h = hmax;
        for (int e : loc.candidates(p, kDegenerateTol * hmax)) {
          const auto c = bg.corners(e);
          const auto r = inverse_map(c, p);
          if (std::abs(r.local.x) > 1.0 + 1e-6 || std::abs(r.local.y) > 1.0 + 1e-6) continue;
          h = bg.diameter(e);
          for (int k = 0; k < 4; ++k)
            if (segment_distance(p, c[k], c[(k + 1) % 4]) < kDegenerateTol * h) degenerate = true;
        }
        if (!degenerate) break;
        p += dir * (kPerturbation * h);
      }
      if (v < m) segs[v].a = p;
      if (v > 0) segs[v - 1].b = p;
      if (line.closed && v == 0) segs[m - 1].b = p;
    }
  }
}

}  // namespace

Point PolySegment::fluid_normal() const {
  const Point d = unit(b - a);
  return {d.y, -d.x};
}

double InterfacePolyline::length() const {
  double l = 0.0;
  for (const auto& s : segments) {
    const double len = norm(s.b - s.a);
    if (s.parent_edge < 0) {
      l += len;
      continue;
    }
    const double lo = std::min(s.s_a, s.s_b), hi = std::max(s.s_a, s.s_b);
    const double overlap = std::max(0.0, std::min(hi, 1.0) - std::max(lo, 0.0));
    l += hi > lo ? len * overlap / (hi - lo) : 0.0;
  }
  return l;
}

bool CutGeometry::is_fluid(const Point& p) const {
  for (const auto& region : solid_regions) {
    int winding = 0;
    const size_t n = region.size();
    for (size_t i = 0; i < n; ++i) {
      const Point& a = region[i];
      const Point& b = region[(i + 1) % n];
      if (a.y <= p.y) {
        if (b.y > p.y && cross(b - a, p - a) > 0.0) ++winding;
      } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
        --winding;
      }
    }
    if (winding != 0) return false;
  }
  for (const auto& line : polylines) {
    if (line.tag != PolylineTag::Neumann || line.segments.empty()) continue;
    double best = std::numeric_limits<double>::max();
    double side = 0.0;
    for (const auto& s : line.segments) {
      const double d = segment_distance(p, s.a, s.b);
      if (d < best) {
        best = d;
        side = cross(s.b - s.a, p - s.a);
      }
    }
    if (side <= 0.0) return false;
  }
  return true;
}

int CutTopology::num_active_nodes() const {
  return static_cast<int>(std::count(active_node.begin(), active_node.end(), 1));
}

double polygon_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

std::vector<InterfacePolyline> extract_interface(const Mesh& poro_mesh, const std::vector<Point>& u,
                                                 const std::set<std::string>& exterior_tags,
                                                 double extension) {
  if (static_cast<int>(u.size()) != poro_mesh.num_nodes())
    fail(ErrorKind::InvalidArgument, "extract_interface: displacement size mismatch");
  const auto& bedges = poro_mesh.boundary_edges();
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> edge_id;
  for (size_t i = 0; i < bedges.size(); ++i) {
    if (exterior_tags.count(bedges[i].tag)) continue;
    edges.emplace_back(bedges[i].a, bedges[i].b);
    edge_id[{bedges[i].a, bedges[i].b}] = static_cast<int>(i);
  }
  auto pos = [&](int n) { return poro_mesh.node(n) + u[n]; };
  std::vector<InterfacePolyline> out;
  for (const auto& [nodes, closed] : chain_edges(edges)) {
    InterfacePolyline line;
    line.tag = PolylineTag::Interface;
    line.closed = closed;
    const size_t ne = closed ? nodes.size() : nodes.size() - 1;
    // Poro boundary runs CCW around the body; reverse it so the fluid is on the left.
    for (size_t k = ne; k-- > 0;) {
      const int na = nodes[k], nb = nodes[(k + 1) % nodes.size()];
      PolySegment s;
      s.a = pos(nb);
      s.b = pos(na);
      s.parent_edge = edge_id.at({na, nb});
      s.s_a = 1.0;
      s.s_b = 0.0;
      line.segments.push_back(s);
    }
    if (!closed && extension > 0.0) {
      auto& first = line.segments.front();
      const double l0 = norm(first.b - first.a);
      first.a = first.a - unit(first.b - first.a) * extension;
      first.s_a = first.s_a - (first.s_b - first.s_a) * (extension / l0);
      auto& last = line.segments.back();
      const double l1 = norm(last.b - last.a);
      last.b = last.b + unit(last.b - last.a) * extension;
      last.s_b = last.s_b + (last.s_b - last.s_a) * (extension / l1);
    }
    out.push_back(std::move(line));
  }
  check_self_intersection(out);
  return out;
}

std::vector<std::vector<Point>> deformed_outline(const Mesh& poro_mesh, const std::vector<Point>& u) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& be : poro_mesh.boundary_edges()) edges.emplace_back(be.a, be.b);
  std::vector<std::vector<Point>> loops;
  for (const auto& [nodes, closed] : chain_edges(edges)) {
    if (!closed) fail(ErrorKind::Geometry, "poro boundary is not closed");
    std::vector<Point> loop;
    for (int n : nodes) loop.push_back(poro_mesh.node(n) + u[n]);
    loops.push_back(std::move(loop));
  }
  return loops;
}

InterfacePolyline neumann_line(const Point& p0, const Point& p1) {
  InterfacePolyline line;
  line.tag = PolylineTag::Neumann;
  line.closed = false;
  PolySegment s;
  s.a = p0;
  s.b = p1;
  line.segments.push_back(s);
  return line;
}

CutTopology classify_and_cut(const Mesh& bg, const CutGeometry& geometry_in,
                             const CutOptions& opt) {
  const ElementLocator loc(bg);
  CutGeometry geometry = geometry_in;
  for (const auto& line : geometry.polylines)
    if (line.tag == PolylineTag::Interface && line.closed && line.segments.size() < 3)
      fail(ErrorKind::Geometry, "closed interface polyline with fewer than 3 segments");
  perturb_degenerate_vertices(bg, loc, geometry.polylines);

  const int ne = bg.num_elements();
  std::vector<std::vector<Piece>> element_pieces(ne);
  for (size_t l = 0; l < geometry.polylines.size(); ++l) {
    const auto& segs = geometry.polylines[l].segments;
    for (size_t i = 0; i < segs.size(); ++i) {
      const PolySegment& s = segs[i];
      const Point lo{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)};
      const Point hi{std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)};
      for (int e : loc.candidates(lo, hi)) {
        double t0, t1;
        const auto c = bg.corners(e);
        if (!clip_to_quad(c, s.a, s.b, t0, t1)) continue;
        const double len = norm(s.b - s.a);
        if ((t1 - t0) * len <= 1e-14 * bg.diameter(e)) continue;
        const Point d = s.b - s.a;
        element_pieces[e].push_back({static_cast<int>(l), static_cast<int>(i), t0, t1, s.a + d * t0,
                                     s.a + d * t1, t0 > 0.0, t1 < 1.0});
      }
    }
  }

  const auto square = gauss_square(opt.square_order);
  const auto& g1 = gauss_legendre(opt.segment_order);
  std::vector<ElementCut> cuts(ne);
  std::vector<std::string> errors(ne);

  auto process = [&](int e) {
    ElementCut& out = cuts[e];
    const auto c = bg.corners(e);
    const double diam = bg.diameter(e);
    auto& pieces = element_pieces[e];
    if (pieces.empty()) {
      const Point centroid = (c[0] + c[1] + c[2] + c[3]) * 0.25;
      if (!geometry.is_fluid(centroid)) return;
      out.kind = ElementKind::Fluid;
      for (const auto& q : square) {
        const ShapeEval s = reference_map(c, q.x);
        out.volume.push_back({q.x, s.x, q.w * s.detj});
        out.area += q.w * s.detj;
      }
      return;
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
      return std::pair(a.polyline, a.segment) < std::pair(b.polyline, b.segment);
    });

    struct Chain {
      std::vector<Point> pts;
      double s_in = 0.0, s_out = 0.0;
      bool used = false;
    };
    std::vector<Chain> chains;
    std::vector<char> consumed(pieces.size(), 0);
    auto find_piece = [&](int polyline, int segment) -> int {
      for (size_t k = 0; k < pieces.size(); ++k)
        if (pieces[k].polyline == polyline && pieces[k].segment == segment) return static_cast<int>(k);
      return -1;
    };
    for (size_t k = 0; k < pieces.size(); ++k) {
      if (!pieces[k].enters || consumed[k]) continue;
      Chain ch;
      ch.s_in = perimeter_param(c, pieces[k].a);
      ch.pts.push_back(pieces[k].a);
      int cur = static_cast<int>(k);
      while (true) {
        consumed[cur] = 1;
        ch.pts.push_back(pieces[cur].b);
        if (pieces[cur].exits) break;
        const auto& line = geometry.polylines[pieces[cur].polyline];
        int next_seg = pieces[cur].segment + 1;
        if (next_seg == static_cast<int>(line.segments.size())) {
          if (!line.closed) break;
          next_seg = 0;
        }
        const int nxt = find_piece(pieces[cur].polyline, next_seg);
        if (nxt < 0 || consumed[nxt]) {
          errors[e] = "inconsistent cut in element " + std::to_string(e);
          return;
        }
        cur = nxt;
      }
      ch.s_out = perimeter_param(c, ch.pts.back());
      chains.push_back(std::move(ch));
    }
    for (size_t k = 0; k < pieces.size(); ++k)
      if (!consumed[k]) {
        errors[e] = "interface loop entirely inside background element " + std::to_string(e) +
                    " (refine the background mesh)";
        return;
      }

    for (size_t i = 0; i < chains.size(); ++i) {
      if (chains[i].used) continue;
      std::vector<Point> loop;
      size_t cur = i;
      for (size_t guard = 0; guard <= chains.size(); ++guard) {
        chains[cur].used = true;
        loop.insert(loop.end(), chains[cur].pts.begin(), chains[cur].pts.end());
        const double sigma = chains[cur].s_out;
        size_t next = chains.size();
        double best = 5.0;
        for (size_t j = 0; j < chains.size(); ++j) {
          if (chains[j].used && j != i) continue;
          const double d = std::fmod(chains[j].s_in - sigma + 8.0, 4.0);
          if (d < best) {
            best = d;
            next = j;
          }
        }
        if (next == chains.size()) {
          errors[e] = "unable to close physical polygon in element " + std::to_string(e);
          return;
        }
        std::vector<std::pair<double, int>> corners;
        for (int k = 0; k < 4; ++k) {
          const double dc = std::fmod(k - sigma + 8.0, 4.0);
          if (dc > 0.0 && dc < best) corners.emplace_back(dc, k);
        }
        std::sort(corners.begin(), corners.end());
        for (const auto& [dc, k] : corners) loop.push_back(c[k]);
        if (next == i) break;
        cur = next;
      }
      loop = cleanup_loop(loop, diam);
      if (loop.size() < 3) continue;
      const double a = polygon_area(loop);
      if (a < -1e-12 * diam * diam) {
        errors[e] = "negatively oriented physical polygon in element " + std::to_string(e);
        return;
      }
      if (a <= 0.0) continue;
      out.loops.push_back(std::move(loop));
    }

    out.kind = ElementKind::Cut;
    std::vector<QuadPoint> qp;
    for (const auto& loop : out.loops)
      for (const auto& t : triangulate(loop)) append_triangle_rule(t[0], t[1], t[2], opt.triangle_order, qp);
    for (const auto& q : qp) {
      const auto r = inverse_map(c, q.x);
      out.volume.push_back({r.local, q.x, q.w});
      out.area += q.w;
    }
    for (const Piece& p : pieces) {
      const auto& line = geometry.polylines[p.polyline];
      const PolySegment& s = line.segments[p.segment];
      InterfacePiece ip;
      ip.element = e;
      ip.polyline = p.polyline;
      ip.segment = p.segment;
      ip.tag = line.tag;
      ip.a = p.a;
      ip.b = p.b;
      const double len = norm(p.b - p.a);
      const Point n = s.fluid_normal();
      for (size_t g = 0; g < g1.xi.size(); ++g) {
        const double tau = 0.5 * (g1.xi[g] + 1.0);
        const double t = p.t0 + (p.t1 - p.t0) * tau;
        InterfaceQuadPoint q;
        q.x = p.a + (p.b - p.a) * tau;
        q.w = 0.5 * len * g1.w[g];
        q.n = n;
        q.xi = inverse_map(c, q.x).local;
        q.element = e;
        q.polyline = p.polyline;
        q.segment = p.segment;
        q.parent_edge = s.parent_edge;
        q.s = s.s_a + (s.s_b - s.s_a) * t;
        ip.points.push_back(q);
      }
      out.pieces.push_back(std::move(ip));
    }
  };

#if defined(FPI_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (int e = 0; e < ne; ++e) {
    try {
      process(e);
    } catch (const std::exception& ex) {
      errors[e] = ex.what();
    }
  }
  for (int e = 0; e < ne; ++e)
    if (!errors[e].empty()) fail(ErrorKind::Geometry, errors[e]);

  CutTopology topo;
  topo.kind.resize(ne);
  topo.volume.resize(ne);
  topo.element_pieces.resize(ne);
  topo.h_gamma.assign(ne, 0.0);
  topo.physical_area.assign(ne, 0.0);
  if (opt.keep_polygons) topo.polygons.resize(ne);
  for (int e = 0; e < ne; ++e) {
    ElementCut& ec = cuts[e];
    topo.kind[e] = ec.kind;
    topo.volume[e] = std::move(ec.volume);
    topo.physical_area[e] = ec.area;
    double gamma_len = 0.0;
    for (auto& p : ec.pieces) {
      if (p.tag == PolylineTag::Interface) gamma_len += norm(p.b - p.a);
      topo.element_pieces[e].push_back(static_cast<int>(topo.pieces.size()));
      topo.pieces.push_back(std::move(p));
    }
    if (gamma_len > 0.0) topo.h_gamma[e] = bg.area(e) / gamma_len;
    if (opt.keep_polygons) topo.polygons[e] = std::move(ec.loops);
  }
  topo.active_node.assign(bg.num_nodes(), 0);
  for (int e = 0; e < ne; ++e)
    if (topo.kind[e] != ElementKind::Void)
      for (int n : bg.element(e)) topo.active_node[n] = 1;
  const auto& faces = bg.interior_faces();
  for (size_t f = 0; f < faces.size(); ++f) {
    const ElementKind k0 = topo.kind[faces[f].elements[0]], k1 = topo.kind[faces[f].elements[1]];
    if (k0 == ElementKind::Fluid && k1 == ElementKind::Fluid)
      topo.cip_faces.push_back(static_cast<int>(f));
    else if (k0 != ElementKind::Void && k1 != ElementKind::Void)
      topo.ghost_faces.push_back(static_cast<int>(f));
  }
  return topo;
}

double interface_h_gamma(const Mesh& bg, const CutTopology& topo, int element) {
  (void)bg;
  return topo.h_gamma.at(element);
}

void write_cut_csv(const CutTopology& topo, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << "element_id,x,y,w,nx,ny\n" << std::setprecision(9) << std::scientific;
  for (size_t e = 0; e < topo.volume.size(); ++e)
    for (const auto& q : topo.volume[e])
      out << e << "," << q.x.x << "," << q.x.y << "," << q.w << ",0,0\n";
  for (const auto& p : topo.pieces)
    for (const auto& q : p.points)
      out << p.element << "," << q.x.x << "," << q.x.y << "," << q.w << "," << q.n.x << "," << q.n.y
          << "\n";
}

}  // namespace fpi
