#pragma once

// Configuration-driven parameter studies on the manufactured solution and the
// bending-beam demonstration.

#include <functional>
#include <string>
#include <vector>

#include "fpi/io.hpp"
#include "fpi/mms.hpp"
#include "fpi/params.hpp"

namespace fpi {

enum class StudyKind { Convergence, Penalty, Porosity, Alpha, Beam };

struct BeamConfig {
  int nx = 100, ny = 50;              // background grid of the 2 x 1 channel
  int poro_nx = 10, poro_ny = 120;    // beam mesh: columns across, rows along
  int output_every = 10;              // VTK every n steps (0: none)
  std::string mesh_file;              // beam mesh file; empty: generated column grid
  Point probe_upstream{0.455, 0.45};  // material points
  Point probe_downstream{0.545, 0.45};
  Point probe_tip{0.5, 0.9};
};

struct RunConfig {
  StudyKind study = StudyKind::Convergence;
  std::string output_dir = "output";
  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  SolverConfig solver;
  StabConstants stab;
  MmsParams mms;  // amplitudes, B and C (material entries are filled per run)
  double h = 0.03125;
  double t_end = 0.1;
  std::vector<double> h_list{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> penalty_list{1, 3, 10, 30, 45, 100, 300, 1e3, 1e4};
  std::vector<double> porosity_list{5e-1, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6};
  std::vector<double> porosity_alpha_list{1, 10};
  std::vector<double> alpha_list{1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1,
                                 10,   100,  1e3,  1e4,  1e5,  1e6,  1e7,  1e8};
  BeamConfig beam;
};

const char* study_name(StudyKind k);

/// Defaults of a study (material data, time span, solver settings).
RunConfig default_config(StudyKind kind);

/// Strict `key = value` parser; `#` starts a comment. Throws ErrorKind::Config
/// naming the line and key for unknown keys, malformed values and unknown
/// enumeration values.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Documented configuration keys, one per line.
std::string config_reference();

/// One manufactured-solution run from t = 0 to t_end.
struct MmsCase {
  double h = 0.125;
  double t_end = 0.1;
  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  SolverConfig solver;
  StabConstants stab;
  MmsParams amplitudes;
};

struct MmsOutcome {
  bool ok = false;
  std::string message;
  int newton_iterations = 0;
  ErrorReport report;
};

MmsOutcome run_mms_case(const MmsCase& c);

using Progress = std::function<void(const std::string&)>;

// All sweeps return self-describing tables (one row per run, complete
// parameter set, status column; failed runs carry empty norms).
CsvTable run_convergence(const RunConfig& cfg, const Progress& progress = {});
CsvTable run_penalty_sweep(const RunConfig& cfg, const Progress& progress = {});
CsvTable run_porosity_sweep(const RunConfig& cfg, const Progress& progress = {});
CsvTable run_alpha_sweep(const RunConfig& cfg, const Progress& progress = {});

/// Observed order log2(e(h)/e(h/2)).
double observed_order(double e_coarse, double e_fine);

/// Beam of width 0.1 standing on the channel floor at x = 0.45 with a
/// semicircular tip reaching y = 0.9; floor edges are tagged "bottom".
Mesh build_beam_mesh(int nx, int ny);

struct BeamResult {
  bool completed = false;
  std::string message;
  CsvTable probes{{"t", "tip_ux", "tip_uy", "phi_upstream", "phi_downstream", "p_upstream", "p_downstream",
                   "newton_iterations"}};
};

/// Runs the beam demo; writes VTK files and probes.csv to `out_dir` unless empty.
BeamResult run_beam(const RunConfig& cfg, const std::string& out_dir, const Progress& progress = {});

/// Porosity at a material point of the poroelastic mesh.
double porosity_at(const Mesh& poro, const State& s, const PoroParams& prm, const Point& X);
Point displacement_at(const Mesh& poro, const State& s, const Point& X);

}  // namespace fpi
