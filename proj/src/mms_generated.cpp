// Generated by tools/derive_mms.py -- do not edit.
#include <cmath>

#include "fpi/mms.hpp"

namespace fpi {

Point mms_fluid_force(const MmsParams& m, double x, double y, double t) {
  const double AF = m.AF, APS = m.APS, B = m.B, C = m.C, mu = m.mu, rho = m.rho;
  const double c = m.c, beta = m.beta;
  (void)AF, (void)APS, (void)B, (void)C, (void)mu, (void)rho, (void)c, (void)beta;
  const double x0 = kPi*B;
  const double x1 = x*x0;
  const double x2 = B*rho*(std::pow(AF, 2) - 1);
  const double x3 = x0*y;
  const double x4 = std::pow(C, 2);
  const double x5 = std::pow(kPi, 2)*mu*t*x4/rho;
  const double x6 = 4*kPi*AF*mu*(std::pow(B, 2) - x4)*std::exp(2*x5);
  const double x7 = (1.0/2.0)*kPi*std::exp(-4*x5);
  return Point{-x7*(x2*std::sin(2*x1) + x6*std::sin(x3)*std::cos(x1)), x7*(-x2*std::sin(2*x3) + x6*std::sin(x1)*std::cos(x3))};
}

Point mms_div_first_pk(const MmsParams& m, double X, double Y, double t) {
  const double AF = m.AF, APS = m.APS, B = m.B, C = m.C, mu = m.mu, rho = m.rho;
  const double c = m.c, beta = m.beta;
  (void)AF, (void)APS, (void)B, (void)C, (void)mu, (void)rho, (void)c, (void)beta;
  const double x0 = std::pow(B, 2);
  const double x1 = kPi*B;
  const double x2 = X*x1;
  const double x3 = std::cos(x2);
  const double x4 = std::pow(x3, 2);
  const double x5 = Y*x1;
  const double x6 = std::cos(x5);
  const double x7 = std::pow(x6, 2);
  const double x8 = std::pow(kPi, 2);
  const double x9 = std::pow(C, 2);
  const double x10 = mu*x9;
  const double x11 = 2*x10;
  const double x12 = t/rho;
  const double x13 = x11*x12*x8;
  const double x14 = std::exp(x13);
  const double x15 = x14 - 1;
  const double x16 = std::pow(APS, 2)*std::pow(rho, 2)*x0*std::pow(x15, 2)*x4*x7;
  const double x17 = kPi*x11*x14;
  const double x18 = -x17;
  const double x19 = APS*rho*x15;
  const double x20 = std::sin(x5);
  const double x21 = std::sin(x2);
  const double x22 = B*x21;
  const double x23 = x20*x22;
  const double x24 = x19*x23;
  const double x25 = x18 + x24;
  const double x26 = x17 + x24;
  const double x27 = 2*beta;
  const double x28 = x27 + 2;
  const double x29 = std::pow(x16 - x25*x26, x28);
  const double x30 = B*x19;
  const double x31 = -APS*rho*x15;
  const double x32 = x23*x31;
  const double x33 = x17 + x32;
  const double x34 = 4*x8;
  const double x35 = x27 + 1;
  const double x36 = x30*x35*std::pow(std::pow(C, 4)*std::pow(mu, 2)*x34*std::exp(x10*x12*x34), x35);
  const double x37 = 2*c*x0*x19*std::exp(-x13)/(mu*x9);
  const double x38 = x18 + x32;
  return Point{x3*x37*(x20*x29 + x36*(x20*x30*x7 - x21*x33))/x29, x37*x6*std::pow(x16 - x25*x26, -x28)*(-x21*std::pow(x16 - x33*x38, x28) + x36*(x20*x38 + x22*x31*x4))};
}

}  // namespace fpi
