#!/usr/bin/env python3
"""Symbolic derivation of the manufactured-solution source terms.

Writes src/mms_generated.cpp:
  mms_fluid_force  rho dv/dt + rho (grad v) v - div(sigma)  at (x, y, t)
  mms_div_first_pk Div(F S) of the skeleton stress          at (X, Y, t)

Run from the repository root:  python3 tools/derive_mms.py
"""

import pathlib
import sympy as sp

x, y, X, Y, t = sp.symbols("x y X Y t", real=True)
AF, APS, B, C, mu, rho, c, beta = sp.symbols("AF APS B C mu rho c beta", positive=True)

k = 2 * C**2 * sp.pi**2 * mu / rho
gu = sp.exp(-k * t)
gp = sp.exp(-2 * k * t)

# fluid
v = sp.Matrix([-AF * sp.cos(B * sp.pi * x) * sp.sin(B * sp.pi * y) * gu,
               AF * sp.sin(B * sp.pi * x) * sp.cos(B * sp.pi * y) * gu])
p = -sp.Rational(1, 4) * (sp.cos(2 * B * sp.pi * x) + sp.cos(2 * B * sp.pi * y)) * rho * gp
gv = v.jacobian([x, y])
sigma = -p * sp.eye(2) + mu * (gv + gv.T)
div_sigma = sp.Matrix([sp.diff(sigma[i, 0], x) + sp.diff(sigma[i, 1], y) for i in range(2)])
f_fluid = rho * sp.diff(v, t) + rho * gv * v - div_sigma

# skeleton: u = APS w(X) (1 - g_u)/k, so du/dt = APS w g_u
u = sp.Matrix([-APS * sp.cos(B * sp.pi * X) * sp.sin(B * sp.pi * Y),
               APS * sp.sin(B * sp.pi * X) * sp.cos(B * sp.pi * Y)]) * (1 - gu) / k
F = sp.eye(2) + u.jacobian([X, Y])
J = F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0]
cof = sp.Matrix([[F[1, 1], -F[1, 0]], [-F[0, 1], F[0, 0]]])
# F S = 2c F - 2c J^(-2 beta) F^{-T}, with F^{-T} = cof(F)/J
P = 2 * c * F - 2 * c * J ** (-2 * beta - 1) * cof
div_P = sp.Matrix([sp.diff(P[i, 0], X) + sp.diff(P[i, 1], Y) for i in range(2)])


def emit(name, args, expr):
    reps, out = sp.cse([sp.simplify(e) for e in expr], optimizations="basic")
    lines = [f"Point {name}(const MmsParams& m, {', '.join('double ' + a for a in args)}) {{"]
    lines.append("  const double AF = m.AF, APS = m.APS, B = m.B, C = m.C, mu = m.mu, rho = m.rho;")
    lines.append("  const double c = m.c, beta = m.beta;")
    lines.append("  (void)AF, (void)APS, (void)B, (void)C, (void)mu, (void)rho, (void)c, (void)beta;")
    for s, e in reps:
        lines.append(f"  const double {s} = {sp.cxxcode(e, standard='c++17')};")
    lines.append(f"  return Point{{{sp.cxxcode(out[0])}, {sp.cxxcode(out[1])}}};")
    lines.append("}")
    return "\n".join(lines)


header = """// Generated by tools/derive_mms.py -- do not edit.
#include <cmath>

#include "fpi/mms.hpp"

namespace fpi {

"""
body = "\n\n".join([emit("mms_fluid_force", ["x", "y", "t"], list(f_fluid)),
                    emit("mms_div_first_pk", ["X", "Y", "t"], list(div_P))])
text = header + body.replace("M_PI", "kPi") + "\n\n}  // namespace fpi\n"
path = pathlib.Path(__file__).resolve().parent.parent / "src" / "mms_generated.cpp"
path.write_text(text)
print(f"wrote {path}")
