#pragma once

// CutFEM geometry: classification of background elements against the moving
// poroelastic boundary, physical-part and interface quadrature, ghost faces
// and the active-node map.
//
// Convention: every cutting segment is oriented with the physical fluid on its
// LEFT. The fluid's outward normal n^F is therefore the right-hand normal of the
// segment direction, and on coupling segments n^P = -n^F.

#include <set>
#include <string>
#include <vector>

#include "fpi/mesh.hpp"
#include "fpi/quadrature.hpp"

namespace fpi {

enum class PolylineTag { Interface, Neumann };
enum class ElementKind : unsigned char { Fluid, Cut, Void };

struct PolySegment {
  Point a, b;            // fluid on the left of a -> b
  int parent_edge = -1;  // index into poro_mesh.boundary_edges(); -1 for fixed lines
  double s_a = 0.0;      // parameter along the parent edge (from edge.a to edge.b) at a
  double s_b = 1.0;      // ... and at b; linear in between (also on extensions)

  Point direction() const { return b - a; }
  /// Outward unit normal of the fluid domain (right-hand normal).
  Point fluid_normal() const;
  /// Outward unit normal of the poroelastic domain, n^P = -n^F.
  Point poro_normal() const { return -fluid_normal(); }
};

struct InterfacePolyline {
  PolylineTag tag = PolylineTag::Interface;
  bool closed = false;
  std::vector<PolySegment> segments;
  /// Length of the parts of the polyline that correspond to physical edges
  /// (extensions beyond the mesh excluded).
  double length() const;
};

/// Everything classify_and_cut needs to know about the embedded geometry.
struct CutGeometry {
  std::vector<InterfacePolyline> polylines;
  /// Closed loops (current configuration) whose interior is excluded from the fluid.
  std::vector<std::vector<Point>> solid_regions;
  /// Point classification: outside every solid region and on the fluid side of
  /// every Neumann polyline.
  bool is_fluid(const Point& p) const;
};

struct InterfaceQuadPoint {
  Point x;           // current position
  double w = 0.0;
  Point n;           // fluid outward normal n^F
  Point xi;          // local coordinates in the background element
  int element = -1;  // background element
  int polyline = -1;
  int segment = -1;
  int parent_edge = -1;  // poro boundary edge (Interface tag only)
  double s = 0.0;        // parameter along the parent poro edge
};

/// Sub-segment of one polyline segment inside one background element.
struct InterfacePiece {
  int element = -1;
  int polyline = -1;
  int segment = -1;
  PolylineTag tag = PolylineTag::Interface;
  Point a, b;
  std::vector<InterfaceQuadPoint> points;
};

struct VolumeQuadPoint {
  Point xi;          // local coordinates in the background element
  Point x;           // physical position
  double w = 0.0;    // physical weight (includes the Jacobian)
};

struct CutOptions {
  int square_order = 2;     // Gauss points per direction on uncut elements
  int triangle_order = 3;   // collapsed rule order per sub-triangle (exact to degree 2n-2)
  int segment_order = 3;    // Gauss points per interface sub-segment
  bool keep_polygons = false;
};

struct CutTopology {
  std::vector<ElementKind> kind;
  std::vector<std::vector<VolumeQuadPoint>> volume;   // per element; empty for Void
  std::vector<InterfacePiece> pieces;                 // Interface and Neumann pieces
  std::vector<std::vector<int>> element_pieces;       // piece ids per element
  std::vector<double> h_gamma;                        // 0 where no coupling interface
  std::vector<double> physical_area;
  std::vector<int> cip_faces;                         // interior faces, both elements Fluid
  std::vector<int> ghost_faces;                       // both active, at least one Cut
  std::vector<char> active_node;
  std::vector<std::vector<std::vector<Point>>> polygons;  // physical loops of Cut elements

  int num_active_nodes() const;
  bool element_active(int e) const { return kind[e] != ElementKind::Void; }
};

/// Coupling interface of the poroelastic body in the configuration X + u.
/// Boundary edges carrying a tag in `exterior_tags` are not part of the
/// interface. Open polylines ending on the background boundary are extended
/// straight outward by `extension` so they leave the background mesh.
/// Throws ErrorKind::Geometry ("invalid interface geometry") on self-intersection.
std::vector<InterfacePolyline> extract_interface(const Mesh& poro_mesh, const std::vector<Point>& u,
                                                 const std::set<std::string>& exterior_tags = {},
                                                 double extension = 0.0);

/// Closed boundary loops of the deformed poroelastic body.
std::vector<std::vector<Point>> deformed_outline(const Mesh& poro_mesh, const std::vector<Point>& u);

/// Straight fixed Neumann cut line through p0 -> p1, fluid on the left.
InterfacePolyline neumann_line(const Point& p0, const Point& p1);

CutTopology classify_and_cut(const Mesh& background, const CutGeometry& geometry,
                             const CutOptions& options = {});

/// Element area divided by the coupling-interface length inside the element.
double interface_h_gamma(const Mesh& background, const CutTopology& topo, int element);

/// Physical quadrature points and interface points as CSV
/// (element_id, x, y, w, nx, ny); volume points carry a zero normal.
void write_cut_csv(const CutTopology& topo, const std::string& path);

/// Signed area (CCW positive) and the moments of a simple polygon.
double polygon_area(const std::vector<Point>& poly);

}  // namespace fpi
