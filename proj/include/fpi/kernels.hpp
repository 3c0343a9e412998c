#pragma once

// Local residual kernels. Each kernel owns its (frozen) geometric data and
// evaluates the residual contribution for a fixed-size vector of local
// unknowns. Instantiated with double for residuals and with Dual<N> for the
// exact local Jacobian.
//
// Local layouts
//   fluid element   (12): vF[4x2] | pF[4]
//   face            (18): v[6x2]  | p[6]        (nodes of both elements)
//   poro element    (20): vP[4x2] | u[4x2] | pP[4]
//   interface piece (32): fluid element (12) | poro element (20)

#include <array>
#include <vector>

#include "fpi/constitutive.hpp"
#include "fpi/params.hpp"
#include "fpi/tensor2.hpp"

namespace fpi {

struct ShapeQP {
  std::array<double, 4> N{};
  std::array<Point, 4> dN;  // physical (fluid) or material (poro) gradients
  double w = 0.0;
};

template <class T>
Vec2<T> interp_vec(const T* x, const std::array<double, 4>& N, int stride_offset) {
  Vec2<T> r{T(0.0), T(0.0)};
  for (int a = 0; a < 4; ++a) {
    r.x += x[stride_offset + 2 * a] * N[a];
    r.y += x[stride_offset + 2 * a + 1] * N[a];
  }
  return r;
}

template <class T>
Mat2<T> grad_vec(const T* x, const std::array<Point, 4>& dN, int offset) {
  Mat2<T> g{T(0.0), T(0.0), T(0.0), T(0.0)};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 2; ++i) {
      g(i, 0) += x[offset + 2 * a + i] * dN[a].x;
      g(i, 1) += x[offset + 2 * a + i] * dN[a].y;
    }
  return g;
}

template <class T>
T max_abs_component(const T* x, int offset, int count) {
  T m(0.0);
  for (int k = 0; k < count; ++k) m = max_of(m, abs(x[offset + k]));
  return m;
}

// ---------------------------------------------------------------------------
// Fluid

struct FluidStabParams {
  FluidParams fluid;
  StabConstants stab;
  TimeScheme time;
};

struct FluidElementKernel {
  static constexpr int kSize = 12;
  std::vector<ShapeQP> qps;
  std::array<Point, 4> v_n{}, a_n{};  // history velocity / acceleration
  std::array<Point, 4> force{};       // nodal rho * b
  const FluidStabParams* prm = nullptr;

  template <class T>
  void eval(const T* x, T* r) const {
    const double rho = prm->fluid.rho, mu = prm->fluid.mu;
    std::array<Vec2<T>, 4> vdot;
    for (int a = 0; a < 4; ++a) {
      const Vec2<T> v{x[2 * a], x[2 * a + 1]};
      vdot[a] = prm->time.rate(v, lift<T>(v_n[a]), lift<T>(a_n[a]));
    }
    for (const ShapeQP& q : qps) {
      Vec2<T> v = interp_vec(x, q.N, 0);
      Vec2<T> acc{T(0.0), T(0.0)};
      Point f{0.0, 0.0};
      T p(0.0);
      for (int a = 0; a < 4; ++a) {
        acc += vdot[a] * T(q.N[a]);
        f += force[a] * q.N[a];
        p += x[8 + a] * q.N[a];
      }
      const Mat2<T> g = grad_vec(x, q.dN, 0);
      const Mat2<T> eps = sym(g);
      const T divv = trace(g);
      const Vec2<T> mom = (acc + g * v) * T(rho) - lift<T>(f);
      for (int a = 0; a < 4; ++a) {
        const Vec2<T> dN = lift<T>(q.dN[a]);
        const Vec2<T> visc = eps * dN * T(2.0 * mu);
        for (int i = 0; i < 2; ++i) r[2 * a + i] += (mom[i] * q.N[a] + visc[i] - dN[i] * p) * q.w;
        r[8 + a] += divv * (q.N[a] * q.w);
      }
    }
  }
};

/// Shape data of one face quadrature point for the union of the two elements'
/// nodes (6 local nodes; gradients are zero for nodes outside an element).
struct FaceQP {
  std::array<Point, 6> dN0, dN1;  // gradients from element 0 / element 1
  std::array<Mat2<double>, 6> H0, H1;  // second derivatives (fluid ghost penalty only)
  double w = 0.0;
};

struct FaceGeometry {
  std::array<int, 6> nodes{};
  Point n;       // unit normal
  double h = 0;  // max diameter of both elements
  std::vector<FaceQP> qps;
};

/// Jump penalties on the 6-node face patch:
///   tau_g [grad q . n]^2 for every scalar component, tau_d [div v]^2,
///   tau_h |[H q n]|^2 (second order, optional).
template <class T>
void face_jump_terms(const FaceGeometry& f, const T* x, T* r, int v_off, int p_off, const T& tau_u,
                     const T& tau_div, const T& tau_p, const T& tau_u2, const T& tau_p2,
                     bool second_order) {
  for (const FaceQP& q : f.qps) {
    std::array<double, 6> D;
    std::array<Point, 6> G, Q;
    for (int l = 0; l < 6; ++l) {
      G[l] = q.dN0[l] - q.dN1[l];
      D[l] = dot(G[l], f.n);
      Q[l] = (q.H0[l] - q.H1[l]) * f.n;
    }
    Vec2<T> jv{T(0.0), T(0.0)};
    T jdiv(0.0), jp(0.0);
    Vec2<T> jhx{T(0.0), T(0.0)}, jhy{T(0.0), T(0.0)}, jhp{T(0.0), T(0.0)};
    for (int l = 0; l < 6; ++l) {
      const T vx = x[v_off + 2 * l], vy = x[v_off + 2 * l + 1], p = x[p_off + l];
      jv.x += vx * D[l];
      jv.y += vy * D[l];
      jdiv += vx * G[l].x + vy * G[l].y;
      jp += p * D[l];
      if (second_order) {
        jhx += lift<T>(Q[l]) * vx;
        jhy += lift<T>(Q[l]) * vy;
        jhp += lift<T>(Q[l]) * p;
      }
    }
    for (int l = 0; l < 6; ++l) {
      T rx = tau_u * jv.x * D[l] + tau_div * jdiv * G[l].x;
      T ry = tau_u * jv.y * D[l] + tau_div * jdiv * G[l].y;
      T rp = tau_p * jp * D[l];
      if (second_order) {
        const Vec2<T> ql = lift<T>(Q[l]);
        rx += tau_u2 * dot(jhx, ql);
        ry += tau_u2 * dot(jhy, ql);
        rp += tau_p2 * dot(jhp, ql);
      }
      r[v_off + 2 * l] += rx * q.w;
      r[v_off + 2 * l + 1] += ry * q.w;
      r[p_off + l] += rp * q.w;
    }
  }
}

struct FluidFaceTaus {
  double mu, rho, h, theta_dt;
  const StabConstants* stab;
  template <class T>
  void cip(const T& vmax, T& tau_u, T& tau_p, T& tau_div) const {
    const T phi = T(mu) + vmax * (h * stab->c_v * rho) + T(h * h * stab->c_t * rho / theta_dt);
    const double h3 = h * h * h;
    tau_u = vmax * vmax * (stab->gamma_u * rho * rho * h3) / phi;
    tau_p = T(stab->gamma_p * h3) / phi;
    tau_div = phi * (stab->gamma_div * h);
  }
  /// Viscous and transient part of the first-order ghost penalty.
  double ghost_extra() const {
    return stab->gamma_nu_gp * h * mu + stab->gamma_t_gp * h * h * h * rho / theta_dt;
  }
};

struct FluidFaceKernel {
  static constexpr int kSize = 18;
  FaceGeometry geom;
  bool ghost = false;  // ghost-penalty face (else plain CIP)
  const FluidStabParams* prm = nullptr;

  template <class T>
  void eval(const T* x, T* r) const {
    const FluidFaceTaus taus{prm->fluid.mu, prm->fluid.rho, geom.h,
                             prm->time.theta * prm->time.dt, &prm->stab};
    const T vmax = max_abs_component(x, 0, 12);
    T tu, tp, td;
    taus.cip(vmax, tu, tp, td);
    if (!ghost) {
      face_jump_terms(geom, x, r, 0, 12, tu, td, tp, T(0.0), T(0.0), false);
      return;
    }
    const double h = geom.h;
    const T tu1 = tu + T(taus.ghost_extra());
    const T tp2 = tp * (0.05 * h * h);
    const T tu2 = (tu1 + td) * (0.05 * h * h);
    face_jump_terms(geom, x, r, 0, 12, tu1, td, tp, tu2, tp2, true);
  }
};

struct NeumannPoint {
  std::array<double, 4> N{};
  double w = 0.0;
  Point traction;
};

// ---------------------------------------------------------------------------
// Poroelasticity

struct PoroKernelParams {
  FluidParams fluid;
  PoroParams poro;
  StabConstants stab;
  TimeScheme time;
};

struct PoroHistory {
  std::array<Point, 4> u_n{}, vs_n{}, as_n{}, vP_n{}, aP_n{};
  std::array<double, 4> p_n{};
};

template <class T>
std::array<Vec2<T>, 4> solid_velocity(const T* x, const PoroHistory& h, const TimeScheme& ts) {
  std::array<Vec2<T>, 4> vs;
  for (int a = 0; a < 4; ++a) {
    const Vec2<T> u{x[8 + 2 * a], x[8 + 2 * a + 1]};
    vs[a] = ts.rate(u, lift<T>(h.u_n[a]), lift<T>(h.vs_n[a]));
  }
  return vs;
}

inline double history_porosity(const ShapeQP& q, const PoroHistory& h, const PoroParams& prm) {
  if (prm.porosity_mode == PorosityMode::Constant) return prm.phi0;
  Mat2<double> g{0.0, 0.0, 0.0, 0.0};
  double p = 0.0;
  for (int a = 0; a < 4; ++a) {
    g += outer(h.u_n[a], q.dN[a]);
    p += h.p_n[a] * q.N[a];
  }
  const auto k = kinematics(g);
  return porosity(k.J, p, prm);
}

struct PoroElementKernel {
  static constexpr int kSize = 20;
  const std::vector<ShapeQP>* qps = nullptr;  // material 2x2 Gauss data
  PoroHistory hist;
  std::array<Point, 4> force_fluid{};  // nodal rho * b^{PF}   (per current volume)
  std::array<Point, 4> force_solid{};  // nodal rho_s0~ * b0    (per reference volume)
  const PoroKernelParams* prm = nullptr;

  template <class T>
  void eval(const T* x, T* r) const {
    const double rho = prm->fluid.rho, mu = prm->fluid.mu;
    const PoroParams& pp = prm->poro;
    const TimeScheme& ts = prm->time;
    const double rho_s = pp.rho_s0_tilde();
    const auto vs = solid_velocity(x, hist, ts);
    std::array<Vec2<T>, 4> as, aP;
    for (int a = 0; a < 4; ++a) {
      as[a] = ts.rate(vs[a], lift<T>(hist.vs_n[a]), lift<T>(hist.as_n[a]));
      const Vec2<T> v{x[2 * a], x[2 * a + 1]};
      aP[a] = ts.rate(v, lift<T>(hist.vP_n[a]), lift<T>(hist.aP_n[a]));
    }
    for (const ShapeQP& q : *qps) {
      const Kinematics<T> k = kinematics(grad_vec(x, q.dN, 8));
      const Mat2<T> FinvT = transpose(k.Finv);
      std::array<Vec2<T>, 4> dNx;
      for (int a = 0; a < 4; ++a) dNx[a] = FinvT * lift<T>(q.dN[a]);
      Vec2<T> vP = interp_vec(x, q.N, 0);
      Vec2<T> udot{T(0.0), T(0.0)}, uddot{T(0.0), T(0.0)}, vPdot{T(0.0), T(0.0)}, grad0p{T(0.0), T(0.0)};
      Mat2<T> gvP{T(0.0), T(0.0), T(0.0), T(0.0)};
      T p(0.0), div_udot(0.0);
      Point ff{0.0, 0.0}, fs{0.0, 0.0};
      for (int a = 0; a < 4; ++a) {
        udot += vs[a] * T(q.N[a]);
        uddot += as[a] * T(q.N[a]);
        vPdot += aP[a] * T(q.N[a]);
        p += x[16 + a] * q.N[a];
        grad0p += lift<T>(q.dN[a]) * x[16 + a];
        div_udot += dot(vs[a], dNx[a]);
        const Vec2<T> v{x[2 * a], x[2 * a + 1]};
        gvP += outer(v, dNx[a]);
        ff += force_fluid[a] * q.N[a];
        fs += force_solid[a] * q.N[a];
      }
      const T phi = porosity(k.J, p, pp);
      const double phi_n = history_porosity(q, hist, pp);
      const T phidot = (phi - phi_n) / ts.dt;
      const T K = material_permeability(k.J, phi, pp);
      const Mat2<T> kinv = inverse_spatial_permeability(k, K);
      const Vec2<T> w = vP - udot;
      const Vec2<T> drag = kinv * w * (mu * phi);
      const Mat2<T> S = second_pk_stress(k, p, pp);
      const Mat2<T> P = k.F * S;
      const Vec2<T> gradxp = FinvT * grad0p;
      const T wJ = k.J * q.w;
      const T mass = phidot + phi * div_udot;
      const Vec2<T> flux = w * phi;
      const Vec2<T> mom_f = (vPdot - gvP * udot) * T(rho) + drag - lift<T>(ff);
      const Vec2<T> mom_s = uddot * T(rho_s) - drag * (k.J * phi) - gradxp * (k.J * phi) - lift<T>(fs);
      for (int a = 0; a < 4; ++a) {
        const Vec2<T> Pd = P * lift<T>(q.dN[a]);
        for (int i = 0; i < 2; ++i) {
          r[2 * a + i] += (mom_f[i] * q.N[a] - dNx[a][i] * p) * wJ;
          r[8 + 2 * a + i] += (mom_s[i] * q.N[a] + Pd[i]) * q.w;
        }
        r[16 + a] += (mass * q.N[a] - dot(dNx[a], flux)) * wJ;
      }
    }
  }
};

/// Boundary-edge quadrature point: material shape data and the reference
/// outward normal scaled by the reference length weight (N0 dA0).
struct BoundaryQP {
  ShapeQP shape;
  Point nA0;
};

/// Fluid mass flux phi n.(vP - du/dt) through a poro boundary edge.
struct PoroBoundaryKernel {
  static constexpr int kSize = 20;
  std::vector<BoundaryQP> qps;
  PoroHistory hist;
  const PoroKernelParams* prm = nullptr;

  template <class T>
  void eval(const T* x, T* r) const {
    const auto vs = solid_velocity(x, hist, prm->time);
    for (const BoundaryQP& b : qps) {
      const ShapeQP& q = b.shape;
      const Kinematics<T> k = kinematics(grad_vec(x, q.dN, 8));
      const Vec2<T> nda = transpose(k.Finv) * lift<T>(b.nA0) * k.J;
      Vec2<T> udot{T(0.0), T(0.0)};
      T p(0.0);
      for (int a = 0; a < 4; ++a) {
        udot += vs[a] * T(q.N[a]);
        p += x[16 + a] * q.N[a];
      }
      const T phi = porosity(k.J, p, prm->poro);
      const T flux = dot(interp_vec(x, q.N, 0) - udot, nda) * phi;
      for (int a = 0; a < 4; ++a) r[16 + a] += flux * q.N[a];
    }
  }
};

/// Poro CIP scalings: Phi = h^2 (c_k mu phi0 / K0 + c_t rho / (theta dt)).
inline void poro_cip_scalings(double h, double mu, double rho, double phi0, double K0, double theta_dt,
                              const StabConstants& stab, double& tau_p, double& tau_div) {
  const double Phi = h * h * (stab.c_k * mu * phi0 / K0 + stab.c_t * rho / theta_dt);
  tau_p = stab.gamma_p * h * h * h / Phi;
  tau_div = stab.gamma_div * h * Phi;
}

/// Poro CIP on material faces; reactive scaling uses the initial porosity and
/// permeability.
struct PoroFaceKernel {
  static constexpr int kSize = 18;
  FaceGeometry geom;
  double tau_p = 0.0, tau_div = 0.0;

  template <class T>
  void eval(const T* x, T* r) const {
    face_jump_terms(geom, x, r, 0, 12, T(0.0), T(tau_div), T(tau_p), T(0.0), T(0.0), false);
  }
};

// ---------------------------------------------------------------------------
// Interface coupling

struct InterfaceJumps {
  Point g_sigma{0.0, 0.0};
  double g_sigma_n = 0.0;
  Point g_n{0.0, 0.0};
  Point g_t{0.0, 0.0};
};

struct CouplingTerms {
  bool normal_consistency = true;
  bool normal_adjoint = true;
  bool normal_penalty = true;
  bool tangential_consistency = true;
  bool tangential_adjoint = true;
  bool tangential_penalty = true;
};

struct InterfaceQP {
  // fluid (background element, frozen local coordinates)
  std::array<double, 4> NF{};
  std::array<Point, 4> dNF;
  // poro (parent element, material shape data at the edge point)
  ShapeQP poro;
  Point n;  // fluid outward normal
  double w = 0.0;
  InterfaceJumps jumps;
};

struct InterfaceKernelParams {
  FluidParams fluid;
  PoroParams poro;
  StabConstants stab;
  NitscheConfig nitsche;
  TimeScheme time;
  CouplingTerms terms;
};

struct InterfaceKernel {
  static constexpr int kSize = 32;
  static constexpr int kPoro = 12;  // offset of the poro block
  std::vector<InterfaceQP> qps;
  double h_gamma = 0.0;
  PoroHistory hist;
  const InterfaceKernelParams* prm = nullptr;

  template <class T>
  void eval(const T* x, T* r) const {
    const double mu = prm->fluid.mu, rho = prm->fluid.rho;
    const NitscheConfig& nc = prm->nitsche;
    const CouplingTerms& tm = prm->terms;
    const T* xp = x + kPoro;
    T* rp = r + kPoro;
    const auto vs = solid_velocity(xp, hist, prm->time);
    const double hg = h_gamma;
    for (const InterfaceQP& q : qps) {
      const Vec2<T> n = lift<T>(q.n);
      const Vec2<T> vF = interp_vec(x, q.NF, 0);
      const Mat2<T> gvF = grad_vec(x, q.dNF, 0);
      T pF(0.0);
      for (int a = 0; a < 4; ++a) pF += x[8 + a] * q.NF[a];
      const Mat2<T> sigma = sym(gvF) * T(2.0 * mu) - Mat2<T>::identity() * pF;
      const Vec2<T> sn = sigma * n;

      const ShapeQP& sp = q.poro;
      const Kinematics<T> k = kinematics(grad_vec(xp, sp.dN, 8));
      Vec2<T> udot{T(0.0), T(0.0)};
      T pP(0.0);
      for (int a = 0; a < 4; ++a) {
        udot += vs[a] * T(sp.N[a]);
        pP += xp[16 + a] * sp.N[a];
      }
      const Vec2<T> vP = interp_vec(xp, sp.N, 0);
      const T phi = porosity(k.J, pP, prm->poro);
      const T K = material_permeability(k.J, phi, prm->poro);
      const T kappa = slip_coefficient(spatial_permeability(k, K), mu, nc.alpha_bj);

      const InterfaceJumps& g = q.jumps;
      const Vec2<T> rel = vF - udot;
      const Vec2<T> seep = vP - udot;

      // --- normal direction
      const T vmax = max_of(abs(vF.x), abs(vF.y));
      const T phi_gamma =
          T(mu) + vmax * (hg * prm->stab.c_v_gamma * rho) +
          T(hg * hg * prm->stab.c_t_gamma * rho / (prm->time.theta * prm->time.dt));
      const T bn_s = dot(rel - seep * phi - lift<T>(g.g_n), n);
      const Vec2<T> bn = n * bn_s;
      const T snn = dot(sn, n);
      const Vec2<T> tn = n * snn;
      const T pen_n = phi_gamma / (nc.gamma_n * hg);

      // --- tangential direction
      auto tangential = [&](const Vec2<T>& v) { return v - n * dot(v, n); };
      const Vec2<T> st = tangential(sn);
      const Vec2<T> gst = tangential(lift<T>(g.g_sigma));
      const Vec2<T> bt_kin = tangential(rel - seep * (nc.beta_bj * phi) - lift<T>(g.g_t));

      for (int a = 0; a < 4; ++a) {
        const double NF = q.NF[a], NP = sp.N[a];
        const Vec2<T> dN = lift<T>(q.dNF[a]);
        const T dNn = dot(dN, n);
        for (int i = 0; i < 2; ++i) {
          T rvF(0.0), rvP(0.0), ru(0.0);
          if (tm.normal_consistency) {
            rvP += (tn[i] - n[i] * g.g_sigma_n) * NP;
            ru += (tn[i] - n[i] * dot(lift<T>(g.g_sigma), n)) * NP;
            rvF -= tn[i] * NF;
          }
          if (tm.normal_adjoint) {
            // (eps(N e_i) n) . b = 0.5 (b_i dN.n + (dN.b) n_i)
            rvF -= (bn[i] * dNn + dot(dN, bn) * n[i]) * (nc.zeta * mu);
          }
          if (tm.normal_penalty) {
            rvF += bn[i] * pen_n * NF;
            rvP -= bn[i] * pen_n * NP;
            ru -= bn[i] * pen_n * NP;
          }
          if (nc.tangential == TangentialMethod::Substitution) {
            if (!(value(kappa) > 0.0))
              fail(ErrorKind::InvalidArgument, "substitution method undefined at no-slip limit");
            if (tm.tangential_penalty) {
              rvF += bt_kin[i] * NF / kappa;
              ru -= bt_kin[i] * NP / kappa;
            }
            if (tm.tangential_consistency) ru -= gst[i] * NP;
          } else {
            if (tm.tangential_consistency) {
              ru += (st[i] - gst[i]) * NP;
              rvF -= st[i] * NF;
            }
            if (tm.tangential_adjoint || tm.tangential_penalty) {
              const Vec2<T> Bt = bt_kin + st * kappa;
              const T denom = kappa * mu + nc.gamma_t * hg;
              if (tm.tangential_adjoint) {
                const T c_adj = T(nc.zeta * nc.gamma_t * hg) / denom;
                rvF -= (Bt[i] * dNn + dot(dN, Bt) * n[i]) * (c_adj * mu);
              }
              if (tm.tangential_penalty) {
                const T c_pen = T(mu) / denom;
                rvF += Bt[i] * c_pen * NF;
                ru -= Bt[i] * c_pen * NP;
              }
            }
          }
          r[2 * a + i] += rvF * q.w;
          rp[2 * a + i] += rvP * q.w;
          rp[8 + 2 * a + i] += ru * q.w;
        }
        if (tm.normal_adjoint) {
          r[8 + a] -= bn_s * (NF * q.w);
        }
      }
    }
  }
};

}  // namespace fpi
