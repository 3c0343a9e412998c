#include "fpi/params.hpp"

#include <cmath>
#include <string>

#include "fpi/error.hpp"

namespace fpi {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const FluidParams& p) {
  require(positive(p.rho), "fluid density must be positive");
  require(positive(p.mu), "fluid viscosity must be positive");
}

void validate(const PoroParams& p) {
  require(p.phi0 > 0.0 && p.phi0 < 1.0, "initial porosity must lie in (0,1)");
  require(positive(p.K0), "permeability must be positive");
  require(p.phi_ref > 0.0 && p.phi_ref < 1.0, "reference porosity must lie in (0,1)");
  require(positive(p.E), "Young's modulus must be positive");
  require(p.nu > -1.0 && p.nu < 0.5, "Poisson ratio must lie in (-1, 0.5)");
  require(positive(p.kappa_p), "bulk modulus must be positive");
  require(positive(p.rho_s0), "solid density must be positive");
}

void validate(const NitscheConfig& c) {
  require(positive(c.gamma_n), "gamma_n must be positive");
  require(positive(c.gamma_t), "gamma_t must be positive");
  require(c.zeta == 1.0 || c.zeta == -1.0, "zeta must be +1 or -1");
  require(c.beta_bj == 0.0 || c.beta_bj == 1.0, "beta_bj must be 0 or 1");
  require(positive(c.alpha_bj), "alpha_bj must be positive");
}

void validate(const SolverConfig& c) {
  require(c.theta > 0.0 && c.theta <= 1.0, "theta must lie in (0,1]");
  require(positive(c.dt), "time step must be positive");
  require(positive(c.rtol) && positive(c.atol), "Newton tolerances must be positive");
  require(c.max_iterations >= 1, "max_iterations must be at least 1");
}

void validate(const StabConstants& s) {
  for (double v : {s.gamma_p, s.gamma_u, s.gamma_div, s.c_t, s.c_k, s.c_v, s.gamma_nu_gp, s.gamma_t_gp,
                   s.c_v_gamma, s.c_t_gamma})
    require(positive(v), "stabilization constants must be positive");
}

}  // namespace fpi
