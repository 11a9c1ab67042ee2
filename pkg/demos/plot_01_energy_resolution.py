"""
Energy resolution of a single sensor
====================================

Put a few sensors on the common scale E_R = S_B l^3 / (2 mu0) and compare
them with hbar.
"""

from energyres import erl_metrics as em
from energyres.units import CODATA2018, convert_to_si, in_hbar

###############################################################################
# A vapor cell of 1 cm^3 with 1 fT/rtHz of white field noise.
s_b = convert_to_si(1.0, "fT/rtHz").value
er = em.er_volumetric(s_b, 1e-6)
print(f"vapor cell      E_R = {er.value:.4e} J s = {in_hbar(er):9.2f} hbar")

###############################################################################
# The planar and volumetric forms are the general form with l = sqrt(A) or
# l = cbrt(V); they agree bit for bit.
print("l = cbrt(V) form:", em.er_general(s_b, 1e-2).value == er.value)

###############################################################################
# A SQUID can be quoted through its flux noise and inductance directly.
s_phi = convert_to_si(0.5, "uPhi0/rtHz").value
sq = em.er_squid(s_phi, 1e-10)
print(f"SQUID S_Phi/2L  E_R = {in_hbar(sq):9.2f} hbar")

###############################################################################
# A point probe reading a single spin at 10 nm: moment noise becomes field
# noise through the on-axis dipole field.
s_mu = convert_to_si(1.0, "muB/rtHz").value
field = em.moment_noise_to_field_noise(s_mu, 1e-8)
pt = em.er_general(field, 1e-8)
print(f"point probe     E_R = {in_hbar(pt):9.2f} hbar")

###############################################################################
# A discrete measurement: rms error dB after averaging for T gives
# S_B = dB^2 T.
disc = em.er_from_discrete(1e-15, 1.0, 1e-2)
print(f"discrete        E_R = {in_hbar(disc):9.2f} hbar")

###############################################################################
# What field noise would put that vapor cell exactly at hbar?
V = 1e-6
s_b_hbar = 2 * CODATA2018.mu0 * CODATA2018.hbar / V
print(f"hbar-level ASD for 1 cm^3: {s_b_hbar ** 0.5 * 1e18:.2f} aT/rtHz")
