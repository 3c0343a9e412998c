#pragma once

// Bilinear quadrilateral meshes in 2D. A Mesh is immutable after construction;
// it serves both as the fixed fluid background grid and as the Lagrangian
// reference mesh of the poroelastic body.

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fpi/tensor2.hpp"

namespace fpi {

struct BoundaryEdge {
  int a = -1, b = -1;  // nodes, oriented along the element's CCW boundary
  int element = -1;
  int local_edge = -1;
  std::string tag;
};

struct InteriorFace {
  int elements[2] = {-1, -1};
  int local_edge[2] = {-1, -1};
  int a = -1, b = -1;  // shared nodes, oriented CCW w.r.t. elements[0]
  double h = 0.0;      // max diameter of the two adjacent elements
};

/// Bilinear shape functions evaluated at a reference point.
struct ShapeEval {
  std::array<double, 4> N{};
  std::array<Point, 4> dN;  // physical gradients
  Point x;
  Mat2<double> jac;         // dx/dxi
  double detj = 0.0;
};

struct InverseMapResult {
  Point local;
  bool inside = false;
};

class Mesh {
 public:
  Mesh() = default;
  /// Validates orientation and topology; throws fpi::Error on failure.
  Mesh(std::vector<Point> nodes, std::vector<std::array<int, 4>> elements,
       std::map<std::pair<int, int>, std::string> boundary_tags = {});

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(int i) const { return nodes_[i]; }
  const std::array<int, 4>& element(int e) const { return elements_[e]; }
  const std::vector<std::array<int, 4>>& elements() const { return elements_; }
  const std::vector<InteriorFace>& interior_faces() const { return faces_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  /// Element diameter := longest diagonal.
  double diameter(int e) const { return diameter_[e]; }
  double area(int e) const;
  std::array<Point, 4> corners(int e) const;

  const std::vector<int>& elements_of_node(int n) const { return node_elements_[n]; }
  /// Nodes lying on a boundary edge carrying the given tag.
  std::vector<int> nodes_with_tag(const std::string& tag) const;

 private:
  std::vector<Point> nodes_;
  std::vector<std::array<int, 4>> elements_;
  std::vector<InteriorFace> faces_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<double> diameter_;
  std::vector<std::vector<int>> node_elements_;
};

/// Reference corners in CCW order: (-1,-1), (1,-1), (1,1), (-1,1).
inline constexpr double kRefCorner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

void shape_values(const Point& xi, std::array<double, 4>& N);
void shape_ref_gradients(const Point& xi, std::array<Point, 4>& dN);
/// Reference coordinate of the point at parameter s in [0,1] along local edge k.
Point edge_reference_point(int local_edge, double s);

ShapeEval reference_map(const std::array<Point, 4>& corners, const Point& xi);
ShapeEval reference_map(const Mesh& mesh, int e, const Point& xi);

InverseMapResult inverse_map(const std::array<Point, 4>& corners, const Point& x);
InverseMapResult inverse_map(const Mesh& mesh, int e, const Point& x);

/// Structured nx-by-ny grid of the rectangle [origin, origin + extents],
/// rigidly rotated by `rotation` radians about the rectangle center.
/// Boundary edges are tagged left/right/bottom/top in the unrotated frame.
Mesh build_structured_mesh(const Point& origin, const Point& extents, int nx, int ny,
                           double rotation = 0.0);

/// Uniform-bin spatial index over element bounding boxes.
class ElementLocator {
 public:
  explicit ElementLocator(const Mesh& mesh);
  /// Elements whose bounding box (inflated by tol) contains p.
  std::vector<int> candidates(const Point& p, double tol = 0.0) const;
  /// Elements whose bounding box intersects the box [lo, hi].
  std::vector<int> candidates(const Point& lo, const Point& hi) const;
  /// First element containing p (inverse-map test), or -1.
  int locate(const Point& p, Point* local = nullptr) const;
  const Mesh& mesh() const { return *mesh_; }

 private:
  void bin_range(const Point& lo, const Point& hi, int& i0, int& i1, int& j0, int& j1) const;
  const Mesh* mesh_;
  Point lo_, hi_;
  int nx_ = 1, ny_ = 1;
  double dx_ = 1.0, dy_ = 1.0;
  std::vector<std::vector<int>> bins_;
  std::vector<std::pair<Point, Point>> boxes_;
};

Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

}  // namespace fpi
