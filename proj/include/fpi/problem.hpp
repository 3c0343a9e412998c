#pragma once

// Monolithic coupled problem: state storage, DOF numbering, assembly of the
// global residual/Jacobian and the one-step-theta Newton time step.

#include <Eigen/Sparse>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fpi/cutgeom.hpp"
#include "fpi/kernels.hpp"
#include "fpi/mesh.hpp"
#include "fpi/params.hpp"

namespace fpi {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Nodal unknowns and their rates. Fluid arrays are indexed by background
/// node; values are meaningful where fluid_valid is set. Poro arrays are
/// indexed by poro node.
struct State {
  double t = 0.0;
  std::vector<Point> vF, aF;
  std::vector<double> pF;
  std::vector<char> fluid_valid;
  std::vector<Point> vP, aP, u, vs, as;
  std::vector<double> pP;

  State() = default;
  State(int n_background, int n_poro);
};

/// Blockwise numbering: vF | pF | vP | u | pP.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const std::vector<char>& active_node, int n_poro);

  int num_dofs() const { return 3 * na_ + 5 * np_; }
  int num_active() const { return na_; }
  int num_poro() const { return np_; }
  int fluid_index(int node) const { return fluid_index_[node]; }
  int vF(int node, int i) const { return 2 * fluid_index_[node] + i; }
  int pF(int node) const { return 2 * na_ + fluid_index_[node]; }
  int vP(int m, int i) const { return 3 * na_ + 2 * m + i; }
  int u(int m, int i) const { return 3 * na_ + 2 * np_ + 2 * m + i; }
  int pP(int m) const { return 3 * na_ + 4 * np_ + m; }
  const std::vector<int>& active_nodes() const { return active_nodes_; }

 private:
  int na_ = 0, np_ = 0;
  std::vector<int> fluid_index_;
  std::vector<int> active_nodes_;
};

enum class PoroField { VP, U, P };

struct FluidBC {
  int node;
  int comp;  // 0,1 velocity components; 2 pressure
  double value;
};

struct PoroBC {
  int node;
  PoroField field;
  int comp;
  double value;
};

/// Everything that defines a coupled run besides the state.
struct Problem {
  const Mesh* background = nullptr;
  const Mesh* poro = nullptr;
  FluidParams fluid;
  PoroParams poro_params;
  StabConstants stab;
  NitscheConfig nitsche;
  SolverConfig solver;
  CouplingTerms terms;
  CutOptions cut_options;

  /// Poro boundary edges with these tags are not part of the coupling interface.
  std::set<std::string> poro_exterior_tags;
  /// Outward extension of open interface polylines (must leave the background mesh).
  double interface_extension = 0.0;
  /// Fixed cut lines carrying a fluid traction condition.
  std::vector<InterfacePolyline> neumann_lines;

  // Data; any may be empty (zero).
  std::function<Point(const Point& x, double t)> fluid_force;  // rho b^F at background nodes
  std::function<void(const Point& X, double t, Point& fluid, Point& solid)> poro_force;
  std::function<Point(const Point& x, const Point& n, double t)> neumann_traction;
  std::function<InterfaceJumps(const Point& x, const Point& X, const Point& n, double t)> jumps;
  std::function<void(double t, const CutGeometry& geometry, const CutTopology& topo,
                     std::vector<FluidBC>& out)>
      fluid_bc;
  std::function<void(double t, std::vector<PoroBC>& out)> poro_bc;
};

struct AssemblyOptions {
  bool jacobian = true;
  bool parallel = true;
  JacobianMode mode = JacobianMode::Analytic;
};

struct StepInfo {
  int iterations = 0;
  std::vector<double> residuals;
};

/// Static per-mesh data plus the assembly and time-stepping drivers.
class Model {
 public:
  explicit Model(const Problem& problem);

  const Problem& problem() const { return prob_; }
  const Mesh& background() const { return *prob_.background; }
  const Mesh& poro() const { return *prob_.poro; }

  CutGeometry geometry(const std::vector<Point>& u) const;
  CutTopology cut(const std::vector<Point>& u) const;

  Vector gather(const State& s, const DofMap& dofs) const;
  void scatter(const Vector& x, const DofMap& dofs, State& s) const;

  /// Residual (and optionally Jacobian) at `iterate` for the step starting
  /// from `history`; time derivatives use the one-step-theta rule.
  /// No Dirichlet conditions are applied here.
  void assemble(const State& iterate, const State& history, const CutTopology& topo,
                const DofMap& dofs, const AssemblyOptions& opt, Vector& R, SparseMatrix* J) const;

  /// Dirichlet rows replaced by x_d - g_d and e_d.
  void apply_dirichlet(const State& iterate, const CutGeometry& geometry, const CutTopology& topo,
                       const DofMap& dofs, double t, Vector& R, SparseMatrix* J) const;

  /// One Newton-solved time step of size solver.dt.
  State advance(const State& state_n, StepInfo* info = nullptr) const;

  /// Rates at the end of a step from the converged values.
  void update_rates(const State& history, State& s) const;

  int num_poro_faces() const { return static_cast<int>(poro_faces_.size()); }

 private:
  struct PoroEdgeData {
    int element;
    std::vector<BoundaryQP> qps;
  };

  Problem prob_;
  std::vector<std::vector<ShapeQP>> poro_qps_;
  std::vector<PoroEdgeData> poro_edges_;  // aligned with poro->boundary_edges()
  std::vector<PoroFaceKernel> poro_faces_;
  std::vector<FaceGeometry> bg_faces_;  // aligned with background->interior_faces()
};

/// Newly active background nodes receive values from the ghost extension of
/// the old field (nearest fully valid element within two element rings,
/// evaluated by its bilinear extension), otherwise from the nearest valid node.
/// Returns the state with the fluid mask set to `new_active`.
State reconstruct_state(const Mesh& background, const State& old, const std::vector<char>& new_active);

/// Direct sparse solve; throws ErrorKind::Singular naming the offending DOF.
Vector linear_solve(const SparseMatrix& A, const Vector& b);

/// Local patch of a face: nodes of element 0 followed by the two remaining
/// nodes of element 1.
std::array<int, 6> face_nodes(const Mesh& mesh, const InteriorFace& f);

/// Face geometry on `mesh` with `order` Gauss points (second derivatives when
/// `hessians`).
FaceGeometry build_face_geometry(const Mesh& mesh, const InteriorFace& f, int order, bool hessians);

}  // namespace fpi
