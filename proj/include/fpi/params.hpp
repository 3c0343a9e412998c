#pragma once

// Material, stabilization, coupling and solver settings.

namespace fpi {

enum class PorosityMode { Constant, Constitutive };
enum class PermeabilityMode { Constant, KozenyCarman };
enum class TangentialMethod { Substitution, Nitsche };
enum class JacobianMode { Analytic, FiniteDifference };

struct FluidParams {
  double rho = 1.0;
  double mu = 1.0;
};

struct StabConstants {
  double gamma_p = 0.05;
  double gamma_u = 0.05;
  double gamma_div = 0.05e-3;
  double c_t = 1.0 / 12.0;
  double c_k = 1.0;
  double c_v = 1.0 / 6.0;
  double gamma_nu_gp = 0.1;
  double gamma_t_gp = 0.001;
  double c_v_gamma = 1.0 / 6.0;
  double c_t_gamma = 1.0 / 12.0;
};

struct PoroParams {
  double phi0 = 0.5;                       // initial (or prescribed) porosity
  PorosityMode porosity_mode = PorosityMode::Constant;
  PermeabilityMode permeability_mode = PermeabilityMode::Constant;
  double K0 = 0.1;                         // K (constant mode) or K_ref (Kozeny-Carman)
  double phi_ref = 0.5;                    // Kozeny-Carman reference porosity
  double E = 1000.0;
  double nu = 0.3;
  double kappa_p = 100.0;                  // bulk modulus of the volumetric energy
  double rho_s0 = 1.0;                     // initial solid-phase density
  // Keep the fluid-mass flux term phi n.(v - du/dt) on the coupling interface.
  bool interface_mass_flux = true;

  double c() const { return E / (4.0 * (1.0 + nu)); }
  double beta() const { return nu / (1.0 - 2.0 * nu); }
  double rho_s0_tilde() const { return (1.0 - phi0) * rho_s0; }
};

struct NitscheConfig {
  double gamma_n = 1.0 / 45.0;
  double gamma_t = 1.0 / 45.0;
  double zeta = -1.0;
  TangentialMethod tangential = TangentialMethod::Nitsche;
  double beta_bj = 1.0;
  double alpha_bj = 1.0;
};

struct SolverConfig {
  double theta = 1.0;
  double dt = 0.05;
  double rtol = 1e-8;
  double atol = 1e-10;
  int max_iterations = 25;
  JacobianMode jacobian = JacobianMode::Analytic;
  bool parallel = true;
  bool verbose = false;
};

/// One-step-theta rate update: qdot = (q - q_n)/(theta dt) - (1-theta)/theta qdot_n.
struct TimeScheme {
  double theta = 1.0;
  double dt = 0.05;
  double c1() const { return 1.0 / (theta * dt); }
  double c0() const { return (1.0 - theta) / theta; }
  template <class T, class H>
  T rate(const T& q, const H& q_n, const H& qdot_n) const {
    return (q - q_n) * c1() - qdot_n * c0();
  }
};

void validate(const FluidParams& p);
void validate(const PoroParams& p);
void validate(const NitscheConfig& c);
void validate(const SolverConfig& c);
void validate(const StabConstants& s);

}  // namespace fpi
