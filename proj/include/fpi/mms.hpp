#pragma once

// Manufactured solution of the coupled problem, the rotated-squares test
// geometry built around it, and the error norms measured against it.

#include <array>
#include <string>
#include <vector>

#include "fpi/mesh.hpp"
#include "fpi/params.hpp"
#include "fpi/problem.hpp"

namespace fpi {

inline constexpr double kPi = 3.14159265358979323846;

/// Amplitudes and constants of the manufactured fields. mu, rho, c and beta
/// mirror the material data (see make_mms_params).
struct MmsParams {
  double AF = 0.1, AP = 0.21, APS = -0.01;
  double B = 1.0, C = 0.01;
  double mu = 1.0, rho = 1.0;
  double c = 0.0, beta = 0.0;
};

MmsParams make_mms_params(double AF, double AP, double APS, const FluidParams& f, const PoroParams& p);

// generated symbolically (tools/derive_mms.py)
Point mms_fluid_force(const MmsParams& m, double x, double y, double t);
Point mms_div_first_pk(const MmsParams& m, double X, double Y, double t);

/// Closed-form fields; spatial fields take current positions, the
/// displacement takes material positions.
class ManufacturedSolution {
 public:
  ManufacturedSolution(const MmsParams& m, const FluidParams& fluid, const PoroParams& poro,
                       const NitscheConfig& nitsche);

  double g_u(double t) const;
  double g_p(double t) const;

  Point vF(const Point& x, double t) const;
  Mat2<double> grad_vF(const Point& x, double t) const;
  Point dvF_dt(const Point& x, double t) const;
  double pF(const Point& x, double t) const;
  Point grad_pF(const Point& x, double t) const;

  Point vP(const Point& x, double t) const;
  Mat2<double> grad_vP(const Point& x, double t) const;
  Point dvP_dt(const Point& x, double t) const;  // at fixed x
  double pP(const Point& x, double t) const { return pF(x, t); }

  Point u(const Point& X, double t) const;
  Mat2<double> grad0_u(const Point& X, double t) const;
  Point udot(const Point& X, double t) const;
  Point uddot(const Point& X, double t) const;

  Mat2<double> fluid_stress(const Point& x, double t) const;
  /// Total Cauchy stress of the mixture at the material point X.
  Mat2<double> poro_stress(const Point& X, double t) const;

  Point fluid_force(const Point& x, double t) const;
  void poro_forces(const Point& X, double t, Point& fluid, Point& solid) const;
  InterfaceJumps jumps(const Point& x, const Point& X, const Point& n, double t) const;

  const MmsParams& params() const { return m_; }

 private:
  Point w(const Point& x) const;  // (-cos sin, sin cos) pattern
  Mat2<double> grad_w(const Point& x) const;
  Mat2<double> inverse_permeability(const Point& X, double t) const;

  MmsParams m_;
  FluidParams fluid_;
  PoroParams poro_;
  NitscheConfig nitsche_;
};

/// Rotated fluid square (1x1, 45 deg) with a 0.5x0.5 poroelastic square
/// (30 deg) at its center, both centered at the origin, and a straight traction
/// cut 0.45 left of the center in the fluid square frame.
struct Example1 {
  double h = 0.0;
  Mesh background;
  Mesh poro;
  InterfacePolyline neumann;
  std::vector<int> boundary_nodes;  // background nodes on the outer boundary
};

/// Throws InvalidArgument unless 1/h is an even integer.
Example1 build_example1(double h);

/// Coupled problem on Example1 driven by the manufactured solution. The
/// returned Problem references `ex` and `mms`, which must outlive it.
Problem make_mms_problem(const Example1& ex, const ManufacturedSolution& mms, const PoroParams& poro,
                         const FluidParams& fluid, const NitscheConfig& nitsche, const SolverConfig& solver,
                         const StabConstants& stab = {});

/// Interpolated analytic state at time t (all background nodes valid).
State mms_initial_state(const Example1& ex, const ManufacturedSolution& mms, double t);

inline constexpr int kNumNorms = 13;
inline constexpr std::array<const char*, kNumNorms> kNormNames = {
    "vF_L2",     "pF_L2",       "grad_vF_L2", "vP_L2",     "pP_L2",  "u_L2", "grad_u_L2",
    "pF_Gamma", "grad_vF_n_Gamma", "pP_Gamma", "grad_u_n_Gamma", "E_n", "E_t"};

struct ErrorReport {
  double h = 0.0;
  std::array<double, kNumNorms> norms{};
};

ErrorReport error_norms(const Model& model, const State& s, const ManufacturedSolution& mms);

}  // namespace fpi
