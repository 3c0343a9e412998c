#include "fpi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fpi/error.hpp"

namespace fpi {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Point> nodes, std::vector<std::array<int, 4>> elements,
           std::map<std::pair<int, int>, std::string> boundary_tags)
    : nodes_(std::move(nodes)), elements_(std::move(elements)) {
  const int nn = num_nodes();
  diameter_.resize(elements_.size());
  node_elements_.assign(nn, {});
  for (int e = 0; e < num_elements(); ++e) {
    const auto& conn = elements_[e];
    for (int k = 0; k < 4; ++k) {
      if (conn[k] < 0 || conn[k] >= nn)
        fail(ErrorKind::Parse, "element " + std::to_string(e) + " references unknown node");
      node_elements_[conn[k]].push_back(e);
    }
    const auto c = corners(e);
    for (int k = 0; k < 4; ++k) {
      const Point& prev = c[(k + 3) % 4];
      const Point& next = c[(k + 1) % 4];
      if (cross(next - c[k], prev - c[k]) <= 0.0)
        fail(ErrorKind::Geometry, "inverted element " + std::to_string(e));
    }
    diameter_[e] = std::max(norm(c[2] - c[0]), norm(c[3] - c[1]));
  }

  std::map<std::pair<int, int>, std::pair<int, int>> open;  // edge -> (element, local edge)
  for (int e = 0; e < num_elements(); ++e) {
    for (int k = 0; k < 4; ++k) {
      const int a = elements_[e][k], b = elements_[e][(k + 1) % 4];
      const auto key = edge_key(a, b);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::pair{e, k});
        continue;
      }
      if (it->second.first < 0)
        fail(ErrorKind::Geometry, "edge shared by more than two elements");
      InteriorFace f;
      f.elements[0] = it->second.first;
      f.local_edge[0] = it->second.second;
      f.elements[1] = e;
      f.local_edge[1] = k;
      f.a = elements_[f.elements[0]][f.local_edge[0]];
      f.b = elements_[f.elements[0]][(f.local_edge[0] + 1) % 4];
      f.h = std::max(diameter_[f.elements[0]], diameter_[e]);
      faces_.push_back(f);
      it->second = {-1, -1};
    }
  }
  for (const auto& [key, owner] : open) {
    if (owner.first < 0) continue;
    BoundaryEdge be;
    be.element = owner.first;
    be.local_edge = owner.second;
    be.a = elements_[be.element][be.local_edge];
    be.b = elements_[be.element][(be.local_edge + 1) % 4];
    if (auto t = boundary_tags.find(key); t != boundary_tags.end()) be.tag = t->second;
    boundary_.push_back(be);
  }
  std::sort(boundary_.begin(), boundary_.end(), [](const BoundaryEdge& l, const BoundaryEdge& r) {
    return std::pair(l.element, l.local_edge) < std::pair(r.element, r.local_edge);
  });
  for (const auto& [key, tag] : boundary_tags) {
    if (open.find(key) == open.end() || open.at(key).first < 0)
      fail(ErrorKind::Parse, "boundary tag '" + tag + "' on non-boundary edge " +
                                 std::to_string(key.first) + "-" + std::to_string(key.second));
  }
}

std::array<Point, 4> Mesh::corners(int e) const {
  const auto& c = elements_[e];
  return {nodes_[c[0]], nodes_[c[1]], nodes_[c[2]], nodes_[c[3]]};
}

double Mesh::area(int e) const {
  const auto c = corners(e);
  return 0.5 * (cross(c[2] - c[0], c[3] - c[1]));
}

std::vector<int> Mesh::nodes_with_tag(const std::string& tag) const {
  std::set<int> out;
  for (const auto& be : boundary_)
    if (be.tag == tag) {
      out.insert(be.a);
      out.insert(be.b);
    }
  return {out.begin(), out.end()};
}

void shape_values(const Point& xi, std::array<double, 4>& N) {
  for (int k = 0; k < 4; ++k)
    N[k] = 0.25 * (1.0 + kRefCorner[k][0] * xi.x) * (1.0 + kRefCorner[k][1] * xi.y);
}

void shape_ref_gradients(const Point& xi, std::array<Point, 4>& dN) {
  for (int k = 0; k < 4; ++k) {
    dN[k].x = 0.25 * kRefCorner[k][0] * (1.0 + kRefCorner[k][1] * xi.y);
    dN[k].y = 0.25 * kRefCorner[k][1] * (1.0 + kRefCorner[k][0] * xi.x);
  }
}

Point edge_reference_point(int k, double s) {
  const Point a{kRefCorner[k][0], kRefCorner[k][1]};
  const Point b{kRefCorner[(k + 1) % 4][0], kRefCorner[(k + 1) % 4][1]};
  return a + (b - a) * s;
}

ShapeEval reference_map(const std::array<Point, 4>& c, const Point& xi) {
  ShapeEval s;
  std::array<Point, 4> dref;
  shape_values(xi, s.N);
  shape_ref_gradients(xi, dref);
  for (int k = 0; k < 4; ++k) {
    s.x += c[k] * s.N[k];
    s.jac.xx += c[k].x * dref[k].x;
    s.jac.xy += c[k].x * dref[k].y;
    s.jac.yx += c[k].y * dref[k].x;
    s.jac.yy += c[k].y * dref[k].y;
  }
  s.detj = det(s.jac);
  const Mat2<double> jinv_t = transpose(inverse(s.jac));
  for (int k = 0; k < 4; ++k) s.dN[k] = jinv_t * dref[k];
  return s;
}

ShapeEval reference_map(const Mesh& mesh, int e, const Point& xi) {
  return reference_map(mesh.corners(e), xi);
}

InverseMapResult inverse_map(const std::array<Point, 4>& c, const Point& x) {
  constexpr double eps = 1e-10;
  const double scale = std::max(norm(c[2] - c[0]), norm(c[3] - c[1]));
  Point xi{0.0, 0.0};
  for (int it = 0; it < 50; ++it) {
    const ShapeEval s = reference_map(c, xi);
    const Point r = x - s.x;
    const Point dxi = inverse(s.jac) * r;
    // Stop on a round-off-level residual; skewed elements stall above a fixed step size.
    if (norm(r) <= 1e-14 * scale + 8 * std::numeric_limits<double>::epsilon() * norm(x) || norm(dxi) < 1e-13) {
      xi += dxi;
      if (norm(x - reference_map(c, xi).x) <= 1e-12 * scale)
        return {xi, std::abs(xi.x) <= 1.0 + eps && std::abs(xi.y) <= 1.0 + eps};
    } else {
      xi += dxi;
    }
  }
  fail(ErrorKind::Geometry, "inverse map failed");
}

InverseMapResult inverse_map(const Mesh& mesh, int e, const Point& x) {
  return inverse_map(mesh.corners(e), x);
}

Mesh build_structured_mesh(const Point& origin, const Point& extents, int nx, int ny,
                           double rotation) {
  if (nx < 1 || ny < 1) fail(ErrorKind::InvalidArgument, "structured mesh: nx, ny must be >= 1");
  if (!(extents.x > 0.0) || !(extents.y > 0.0))
    fail(ErrorKind::InvalidArgument, "structured mesh: extents must be positive");
  const Point center = origin + extents * 0.5;
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  std::vector<Point> nodes;
  nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const Point p{origin.x + extents.x * i / nx, origin.y + extents.y * j / ny};
      const Point d = p - center;
      nodes.push_back(center + Point{cr * d.x - sr * d.y, sr * d.x + cr * d.y});
    }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 4>> elements;
  elements.reserve(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  std::map<std::pair<int, int>, std::string> tags;
  for (int i = 0; i < nx; ++i) {
    tags[edge_key(id(i, 0), id(i + 1, 0))] = "bottom";
    tags[edge_key(id(i, ny), id(i + 1, ny))] = "top";
  }
  for (int j = 0; j < ny; ++j) {
    tags[edge_key(id(0, j), id(0, j + 1))] = "left";
    tags[edge_key(id(nx, j), id(nx, j + 1))] = "right";
  }
  return Mesh(std::move(nodes), std::move(elements), std::move(tags));
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open mesh file '" + path + "'");
  std::string line;
  int lineno = 0;
  long expected_nodes = -1, expected_elements = -1;
  std::unordered_map<long, int> node_index;
  std::unordered_map<long, int> element_ids;
  std::vector<Point> nodes;
  std::vector<std::array<long, 4>> raw_elements;
  std::vector<std::tuple<std::string, long, long, int>> raw_tags;
  auto error = [&](const std::string& msg) {
    fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "nodes") {
      std::string kw;
      if (!(ls >> expected_nodes >> kw >> expected_elements) || kw != "elements")
        error("malformed header, expected 'nodes <N> elements <E>'");
    } else if (kind == "n") {
      long id;
      double x, y;
      if (!(ls >> id >> x >> y)) error("malformed node line");
      if (node_index.count(id)) error("duplicate node id " + std::to_string(id));
      node_index[id] = static_cast<int>(nodes.size());
      nodes.push_back({x, y});
    } else if (kind == "e") {
      long id;
      std::array<long, 4> c;
      if (!(ls >> id >> c[0] >> c[1] >> c[2] >> c[3])) error("malformed element line");
      if (element_ids.count(id)) error("duplicate element id " + std::to_string(id));
      element_ids[id] = lineno;
      raw_elements.push_back(c);
    } else if (kind == "b") {
      std::string tag;
      long a, b;
      if (!(ls >> tag >> a >> b)) error("malformed boundary line");
      raw_tags.emplace_back(tag, a, b, lineno);
    } else {
      error("unknown record '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) error("trailing token '" + extra + "'");
  }
  if (expected_nodes < 0) fail(ErrorKind::Parse, path + ": missing 'nodes ... elements ...' header");
  if (static_cast<long>(nodes.size()) != expected_nodes)
    fail(ErrorKind::Parse, path + ": header announces " + std::to_string(expected_nodes) +
                               " nodes, found " + std::to_string(nodes.size()));
  if (static_cast<long>(raw_elements.size()) != expected_elements)
    fail(ErrorKind::Parse, path + ": header announces " + std::to_string(expected_elements) +
                               " elements, found " + std::to_string(raw_elements.size()));
  auto lookup = [&](long id) {
    auto it = node_index.find(id);
    if (it == node_index.end()) fail(ErrorKind::Parse, path + ": unknown node id " + std::to_string(id));
    return it->second;
  };
  std::vector<std::array<int, 4>> elements;
  elements.reserve(raw_elements.size());
  for (const auto& c : raw_elements)
    elements.push_back({lookup(c[0]), lookup(c[1]), lookup(c[2]), lookup(c[3])});
  std::map<std::pair<int, int>, std::string> tags;
  for (const auto& [tag, a, b, ln] : raw_tags) tags[edge_key(lookup(a), lookup(b))] = tag;
  return Mesh(std::move(nodes), std::move(elements), std::move(tags));
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Parse, "cannot write mesh file '" + path + "'");
  out << std::setprecision(17);
  out << "nodes " << mesh.num_nodes() << " elements " << mesh.num_elements() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out << "n " << i << " " << mesh.node(i).x << " " << mesh.node(i).y << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& c = mesh.element(e);
    out << "e " << e << " " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  }
  for (const auto& be : mesh.boundary_edges())
    if (!be.tag.empty()) out << "b " << be.tag << " " << be.a << " " << be.b << "\n";
}

}  // namespace fpi

namespace fpi {

ElementLocator::ElementLocator(const Mesh& mesh) : mesh_(&mesh) {
  const int ne = mesh.num_elements();
  if (ne == 0) return;
  lo_ = hi_ = mesh.node(0);
  for (const Point& p : mesh.nodes()) {
    lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
    hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
  }
  const int nb = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(ne))));
  nx_ = ny_ = nb;
  dx_ = std::max(hi_.x - lo_.x, 1e-300) / nx_;
  dy_ = std::max(hi_.y - lo_.y, 1e-300) / ny_;
  bins_.assign(static_cast<size_t>(nx_) * ny_, {});
  boxes_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto c = mesh.corners(e);
    Point a = c[0], b = c[0];
    for (const Point& p : c) {
      a = {std::min(a.x, p.x), std::min(a.y, p.y)};
      b = {std::max(b.x, p.x), std::max(b.y, p.y)};
    }
    boxes_[e] = {a, b};
    int i0, i1, j0, j1;
    bin_range(a, b, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins_[static_cast<size_t>(j) * nx_ + i].push_back(e);
  }
}

void ElementLocator::bin_range(const Point& lo, const Point& hi, int& i0, int& i1, int& j0,
                               int& j1) const {
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  i0 = clampi(static_cast<int>(std::floor((lo.x - lo_.x) / dx_)), nx_);
  i1 = clampi(static_cast<int>(std::floor((hi.x - lo_.x) / dx_)), nx_);
  j0 = clampi(static_cast<int>(std::floor((lo.y - lo_.y) / dy_)), ny_);
  j1 = clampi(static_cast<int>(std::floor((hi.y - lo_.y) / dy_)), ny_);
}

std::vector<int> ElementLocator::candidates(const Point& p, double tol) const {
  return candidates(Point{p.x - tol, p.y - tol}, Point{p.x + tol, p.y + tol});
}

std::vector<int> ElementLocator::candidates(const Point& lo, const Point& hi) const {
  std::vector<int> out;
  if (boxes_.empty() || hi.x < lo_.x || hi.y < lo_.y || lo.x > hi_.x || lo.y > hi_.y) return out;
  int i0, i1, j0, j1;
  bin_range(lo, hi, i0, i1, j0, j1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      for (int e : bins_[static_cast<size_t>(j) * nx_ + i]) {
        const auto& [a, b] = boxes_[e];
        if (b.x < lo.x || b.y < lo.y || a.x > hi.x || a.y > hi.y) continue;
        out.push_back(e);
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int ElementLocator::locate(const Point& p, Point* local) const {
  for (int e : candidates(p)) {
    const auto r = inverse_map(*mesh_, e, p);
    if (r.inside) {
      if (local) *local = r.local;
      return e;
    }
  }
  return -1;
}

}  // namespace fpi
