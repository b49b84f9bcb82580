#!/usr/bin/env python3
"""Generates tests/oracles/reference_values.hpp.

Reference quantiles come from scipy.stats; the tri-layer reflection
coefficient and phase curve are evaluated with mpmath at 50 significant
digits, independently of the C++ implementation. Run from the repo root:

    python3 tests/oracles/gen_reference_values.py
"""

import io

import mpmath as mp
from scipy import stats

mp.mp.dps = 50

# Default material constants (aluminum adherend / epoxy adhesive).
E1 = mp.mpf("69e9")
CL1 = mp.mpf("6320")
ALPHA1 = mp.mpf("0")
EADH = mp.mpf("3.5e9")
CLADH = mp.mpf("2500")

# "typical" parameter setting.
THETA_TYP = {
    "log_k0": mp.mpf("14.85"),
    "alpha0": mp.mpf("8.05e3"),
    "a": mp.mpf("9.62e-6"),
    "b": mp.mpf("-42.19"),
    "l_bl": mp.mpf("9.53e-5"),
}


def reflection_coefficient(theta, omega):
    k = mp.mpf(10) ** theta["log_k0"]
    k1 = omega / CL1 + 1j * ALPHA1
    kadh = omega / CLADH + 1j * theta["alpha0"]
    g1 = E1 * k1
    gadh = EADH * kadh
    cn = g1 * g1 / k
    cd = 2 * g1 * gadh * (1 + g1 / k)
    sn = g1 * g1 - gadh * gadh + (g1 * gadh / k) ** 2
    sd = g1 * g1 + gadh * gadh + (g1 * gadh * gadh / k) * (2 + g1 / k)
    phase = kadh * theta["l_bl"]
    num = cn * mp.cos(phase) + 1j * sn * mp.sin(phase)
    den = cd * mp.cos(phase) + 1j * sd * mp.sin(phase)
    return num / den


def phase_curve(theta, omegas):
    """Principal arg in (-180, 180], unwrapped along the grid, then affine."""
    args_deg = []
    for w in omegas:
        r = reflection_coefficient(theta, w)
        args_deg.append(mp.arg(r) * 180 / mp.pi)
    unwrapped = [args_deg[0]]
    for raw in args_deg[1:]:
        prev = unwrapped[-1]
        shift = mp.floor((prev - raw) / 360 + mp.mpf("0.5")) * 360
        unwrapped.append(raw + shift)
    return [u + theta["a"] * w + theta["b"] for u, w in zip(unwrapped, omegas)]


def default_grid(n=100, fmin=mp.mpf("2e6"), fmax=mp.mpf("8e6")):
    return [2 * mp.pi * (fmin + (fmax - fmin) * i / (n - 1)) for i in range(n)]


def fmt(x, digits=17):
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


out = io.StringIO()
out.write("// Generated by tests/oracles/gen_reference_values.py. Do not edit.\n")
out.write("#pragma once\n\n#include <array>\n#include <complex>\n\n")
out.write("namespace bondgauge::oracle {\n\n")

# --- quantile reference table -------------------------------------------------
# Each row: kind (0=chi2, 1=F, 2=t), d1, d2 (unused for chi2/t), upper tail
# probability, expected quantile.
chi2_cases = [(1, 0.05), (2, 0.3678794411714423), (5, 0.5), (10, 0.01),
              (50, 0.975), (95, 0.05), (100, 0.05), (100, 0.95),
              (200, 0.001), (3, 0.9)]
f_cases = [(1, 10, 0.05), (2, 58, 0.01), (5, 95, 0.05), (5, 95, 0.042),
           (2, 8, 0.01), (2, 18, 0.01), (2, 58, 0.005), (10, 20, 0.5),
           (3, 7, 0.10), (20, 200, 0.025)]
t_cases = [(1, 0.25), (5, 0.05), (10, 0.005), (30, 0.025), (95, 0.025),
           (95, 0.0202020202020202), (200, 0.1), (60, 0.01), (2, 0.05),
           (1000, 0.025)]

rows = []
for dof, p in chi2_cases:
    rows.append((0, dof, 0, p, stats.chi2.isf(p, dof)))
for d1, d2, p in f_cases:
    rows.append((1, d1, d2, p, stats.f.isf(p, d1, d2)))
for dof, p in t_cases:
    rows.append((2, dof, 0, p, stats.t.isf(p, dof)))

out.write("struct QuantileCase { int kind; int d1; int d2; double upper_tail; double expected; };\n")
out.write(f"inline constexpr std::array<QuantileCase, {len(rows)}> kQuantileCases{{{{\n")
for kind, d1, d2, p, q in rows:
    out.write(f"    QuantileCase{{{kind}, {d1}, {d2}, {p!r}, {q!r}}},\n")
out.write("}};\n\n")

# --- Clopper-Pearson reference intervals (Beta inversion) ----------------------
cp_cases = [(1900, 2000, 0.95), (0, 50, 0.95), (50, 50, 0.95), (10, 10, 0.95),
            (480, 500, 0.95), (7, 200, 0.99), (1, 2000, 0.95), (250, 500, 0.90)]
out.write("struct CpCase { int successes; int trials; double confidence; double lower; double upper; };\n")
out.write(f"inline constexpr std::array<CpCase, {len(cp_cases)}> kClopperPearsonCases{{{{\n")
for s, n, conf in cp_cases:
    a = (1.0 - conf) / 2.0
    lo = 0.0 if s == 0 else stats.beta.ppf(a, s, n - s + 1)
    hi = 1.0 if s == n else stats.beta.ppf(1.0 - a, s + 1, n - s)
    out.write(f"    CpCase{{{s}, {n}, {conf!r}, {lo!r}, {hi!r}}},\n")
out.write("}};\n\n")

# --- reflection coefficient at the typical setting, 4 MHz ----------------------
w4 = 2 * mp.pi * mp.mpf("4e6")
r4 = reflection_coefficient(THETA_TYP, w4)
out.write("// R at the typical parameter setting, omega = 2*pi*4e6 rad/s, default materials.\n")
out.write(f"inline constexpr std::complex<double> kReflectionTypical4MHz{{{fmt(mp.re(r4))}, {fmt(mp.im(r4))}}};\n\n")

# --- phase curve on the default 100-point grid ---------------------------------
grid = default_grid()
curve = phase_curve(THETA_TYP, grid)
out.write("// Phase response (deg) at the typical setting on the default grid\n")
out.write("// (100 points, 2-8 MHz linear in Hz, converted to rad/s).\n")
out.write(f"inline constexpr std::array<double, {len(curve)}> kPhaseTypicalDefaultGrid{{{{\n")
for i in range(0, len(curve), 4):
    vals = ", ".join(fmt(v) for v in curve[i:i + 4])
    out.write(f"    {vals},\n")
out.write("}};\n\n")

out.write("}  // namespace bondgauge::oracle\n")

with open("tests/oracles/reference_values.hpp", "w") as fh:
    fh.write(out.getvalue())

# Console summary for spot checks against the values quoted in tests.
print("chi2(100, 0.05) =", stats.chi2.isf(0.05, 100))
print("chi2(1, 0.05)   =", stats.chi2.isf(0.05, 1))
print("f(5, 95, 0.05)  =", stats.f.isf(0.05, 5, 95))
print("f(2, 58, 0.01)  =", stats.f.isf(0.01, 2, 58))
print("t(95, 0.025)    =", stats.t.isf(0.025, 95))
print("R_typ(4MHz)     =", complex(r4))
print("|R|             =", abs(complex(r4)))
print("phase[0], phase[-1] =", float(curve[0]), float(curve[-1]))
print("raw arg range check: first three unwrapped-no-affine:",
      [float(curve[i] - (THETA_TYP['a'] * grid[i] + THETA_TYP['b'])) for i in range(3)])
