#pragma once

// Finite-strain poroelastic constitutive relations (plane strain), generic
// over the scalar type so the element kernels can be differentiated exactly.

#include <string>

#include "fpi/error.hpp"
#include "fpi/params.hpp"
#include "fpi/tensor2.hpp"

namespace fpi {

template <class T>
struct Kinematics {
  Mat2<T> F;
  T J;
  Mat2<T> Finv;
  Mat2<T> Cinv;
  Mat2<T> E;  // Green-Lagrange strain
};

/// F = I + grad0(u); throws ElementInversion when det F <= 0.
template <class T>
Kinematics<T> kinematics(const Mat2<T>& grad0_u) {
  Kinematics<T> k;
  k.F = Mat2<T>::identity() + grad0_u;
  k.J = det(k.F);
  if (!(value(k.J) > 0.0))
    fail(ErrorKind::ElementInversion, "element inversion (J = " + std::to_string(value(k.J)) + ")");
  k.Finv = inverse(k.F);
  k.Cinv = k.Finv * transpose(k.Finv);
  const Mat2<T> C = transpose(k.F) * k.F;
  k.E = (C - Mat2<T>::identity()) * T(0.5);
  return k;
}

/// Neo-Hookean skeleton with plane-strain embedding, minus the pore pressure
/// contribution: S = 2c(I - J^{-2 beta} C^{-1}) - p J C^{-1}.
template <class T>
Mat2<T> second_pk_stress(const Kinematics<T>& k, const T& p, const PoroParams& prm) {
  const double c = prm.c(), beta = prm.beta();
  const T jb = pow(k.J, -2.0 * beta);
  Mat2<T> S = Mat2<T>::identity() * T(2.0 * c);
  S -= k.Cinv * (T(2.0 * c) * jb + p * k.J);
  return S;
}

/// Skeleton strain energy per reference volume (used for gradient checks).
inline double skeleton_energy(const Mat2<double>& F, const PoroParams& prm) {
  const double c = prm.c(), beta = prm.beta();
  const double J = det(F);
  // tr(F^T F) of the 3D tensor with unit out-of-plane stretch
  const double trC = ddot(F, F) + 1.0;
  return c * (trC - 3.0) + c / beta * (std::pow(J, -2.0 * beta) - 1.0);
}

template <class T>
T porosity(const T& J, const T& p, const PoroParams& prm) {
  if (prm.porosity_mode == PorosityMode::Constant) return T(prm.phi0);
  const double s0 = 1.0 - prm.phi0;
  const T phi = T(1.0) - s0 / (J * (T(1.0) + p * (s0 / prm.kappa_p)));
  if (!(value(phi) > 0.0 && value(phi) < 1.0))
    fail(ErrorKind::Porosity, "porosity out of range (phi = " + std::to_string(value(phi)) + ")");
  return phi;
}

/// Kozeny-Carman law for the scalar material permeability.
template <class T>
T kozeny_carman(const T& jphi, double K_ref, double phi_ref) {
  if (!(value(jphi) < 1.0)) fail(ErrorKind::Porosity, "porosity saturation (J*phi >= 1)");
  if (!(value(jphi) > 0.0)) fail(ErrorKind::Porosity, "porosity out of range (J*phi <= 0)");
  const double a = K_ref * (1.0 - phi_ref * phi_ref) / (phi_ref * phi_ref * phi_ref);
  return a * jphi * jphi * jphi / (T(1.0) - jphi * jphi);
}

/// Scalar material permeability K for the configured law.
template <class T>
T material_permeability(const T& J, const T& phi, const PoroParams& prm) {
  if (prm.permeability_mode == PermeabilityMode::Constant) return T(prm.K0);
  return kozeny_carman(J * phi, prm.K0, prm.phi_ref);
}

/// k = J^{-1} F K F^T for isotropic K.
template <class T>
Mat2<T> spatial_permeability(const Kinematics<T>& k, const T& K) {
  return (k.F * transpose(k.F)) * (K / k.J);
}

/// k^{-1} = J K^{-1} F^{-T} F^{-1}.
template <class T>
Mat2<T> inverse_spatial_permeability(const Kinematics<T>& k, const T& K) {
  return (transpose(k.Finv) * k.Finv) * (k.J / K);
}

/// Slip coefficient of the Beavers-Joseph law. The out-of-plane permeability
/// equals the in-plane mean, so tr3(k) = 1.5 tr2(k).
template <class T>
T slip_coefficient(const Mat2<T>& k, double mu, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha_bj must be positive");
  return sqrt(trace(k) * 1.5) / (alpha * mu * std::sqrt(3.0));
}

}  // namespace fpi
