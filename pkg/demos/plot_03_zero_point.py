"""
Zero-point field noise of a weighted average
============================================

The vacuum and thermal variance of a spatially weighted field average,
turned into an energy resolution with the light-crossing wait time.
"""

import math
import warnings

import numpy as np

from energyres import zeropoint as zp
from energyres.units import in_hbar

###############################################################################
# The parabolic weighting has closed forms; quadrature reproduces them.
w = zp.Parabolic(1e-3)
print("I_Q =", zp.quantum_shape_integral(w), " (75/4 =", 75 / 4, ")")
print("I_T =", zp.thermal_shape_integral(w), " (15 pi/7 =", 15 * math.pi / 7, ")")

er = zp.er_zeropoint(w, 300.0)
print(f"quantum term {in_hbar(er.quantum):.6f} hbar, thermal term at 300 K {in_hbar(er.thermal):.2f} hbar")

###############################################################################
# The quantum term does not depend on the size of the region.
for r_s in (1e-6, 1e-3, 1.0):
    print(f"r_S = {r_s:g} m  ->  {in_hbar(zp.er_zeropoint(zp.Parabolic(r_s), 0.0).quantum):.9f} hbar")

###############################################################################
# A uniform sphere has a sharp edge; its transform decays too slowly and the
# quantum integral diverges. The engine says so instead of returning a number.
top = zp.TopHat(1e-3)
print(zp.convergence_check(top))
try:
    zp.quantum_shape_integral(top)
except zp.NonConvergentIntegral as exc:
    print(exc)

###############################################################################
# Any tabulated profile works. Profiles peaked harder toward the centre
# average over less effective volume, so their zero-point term grows.
u = np.linspace(0.0, 1.0, 401)
for k in (1, 2, 3):
    s = zp.Sampled.from_shape(u, (1 - u * u) ** k, 1e-3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", zp.AccuracyWarning)
        q = zp.er_zeropoint(s, 0.0).quantum
    print(f"(1 - u^2)^{k}:  {in_hbar(q):.5f} hbar")
