#!/usr/bin/env python3
"""Reference evaluation of the built-in physical constants in SI units.

The C++ core hard-codes a handful of derived numbers (unit-conversion factors,
the zero-position emitter-cavity coupling, the default mode-profile width).
This script derives every one of them from CODATA constants so the frozen
values can be audited without rebuilding anything.  Run it with no arguments;
it prints the numbers the library embeds.
"""
import math

# CODATA 2018
hbar = 1.054571817e-34      # J s
h = 6.62607015e-34          # J s (exact)
e = 1.602176634e-19         # C (exact)
eps0 = 8.8541878128e-12     # F/m
c = 299792458.0             # m/s (exact)
debye = 1e-21 / c           # C m

mev_per_thz = h * 1e12 / e * 1e3
hbar_mev_fs = hbar / e * 1e3 * 1e15
c0_nm_fs = c * 1e9 / 1e15
print(f"mev_per_thz   = {mev_per_thz!r}")
print(f"hbar_mev_fs   = {hbar_mev_fs!r}")
print(f"c0_nm_fs      = {c0_nm_fs!r}")

# Default cavity: a quasinormal mode at 338.9 THz with a 9.8 THz decay rate
# (ordinary-frequency convention, converted through E = h * nu).
omega_cav_mev = 338.9 * mev_per_thz
kappa_out_mev = 9.8 * mev_per_thz
print(f"omega_cav_mev = {omega_cav_mev!r}")
print(f"kappa_out_mev = {kappa_out_mev!r}")

# Zero-position coupling for the default emitter:
#   g = sqrt(hbar * omega_c / (2 eps0 eps_r Re V)) * d
# with eps_r = 2.5^2, Re V = 60.01 nm^3, d = 10.1 D.
eps_rel = 2.5 ** 2
re_v = 60.01e-27            # m^3
d = 10.1 * debye
energy_j = omega_cav_mev * 1e-3 * e
field = math.sqrt(energy_j / (2 * eps0 * eps_rel * re_v))
g0_mev = field * d / e * 1e3
print(f"g0_mev        = {g0_mev!r}")

# Default Gaussian profile width: chosen so the coupling falls to the default
# vibrational dephasing rate (25 meV) at a 6 nm offset.
kappa_vib = 25.0
width_nm = 6.0 / math.sqrt(2.0 * math.log(g0_mev / kappa_vib))
print(f"width_nm      = {width_nm!r}")
print(f"g(6 nm)       = {g0_mev * math.exp(-36 / (2 * width_nm ** 2))!r}")

# Damped collective oscillation frequencies at the defaults, for N identical
# centred emitters sharing one photon: sqrt(4 N g0^2 - kappa_out^2).
for n in (1, 2, 8):
    omega = math.sqrt(4 * n * g0_mev ** 2 - kappa_out_mev ** 2)
    print(f"omega_rabi N={n} = {omega!r}")
