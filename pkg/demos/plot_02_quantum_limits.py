"""
Candidate limits on the energy resolution
=========================================

Evaluate the known and proposed bounds and check a few of their identities
numerically.
"""

from pathlib import Path

from energyres import quantum_limits as ql
from energyres.erl_metrics import er_volumetric
from energyres.units import in_hbar

###############################################################################
# The table of limit constants, in units of hbar.
for b in ql.bound_table():
    print(f"{b.bound_name:<20s} {in_hbar(b.value):10.6f} hbar   ({b.saturation_condition})")

###############################################################################
# The SERF floor falls as 1/V, so E_R of a noise-floor-limited cell does not
# depend on its size. Parameters here are illustrative, not measured.
species = ql.load_species(Path(__file__).parent / "data" / "sample_species.json")
for V in (1e-9, 1e-6, 1e-3):
    floor = ql.opm_serf_sb_floor(species, V)
    print(f"V = {V:.0e} m^3  floor {floor.value ** 0.5 * 1e18:9.3f} aT/rtHz"
          f"  E_R {in_hbar(er_volumetric(floor, V)):.6f} hbar")

###############################################################################
# Projection noise against self-interaction: the trade-off over
# x = T <dJ_y^2> / V has its minimum at C/D, and the minimum is 4 hbar / 3
# whatever the gyromagnetic ratio.
cfg = ql.SpnMsiConfig(species.gamma)
best = ql.spn_msi_bound(cfg)
for f in (0.01, 0.1, 1.0, 10.0, 100.0):
    x = f * best.x_opt.value
    print(f"x = {f:>6g} x_opt   E_R = {in_hbar(ql.spn_msi_er(x, cfg)):.4f} hbar")

###############################################################################
# Minimum fields from the orthogonalization-time and entropy arguments.
print(f"ML  B_min (1 um^3, 1 us) = {ql.ml_min_field(1e-18, 1e-6).value:.4e} T")
print(f"BB  B_min (R = 1 um)     = {ql.bb_min_field(1e-6).value:.4e} T")
for beta in (1.0, 2.0, 3.0):
    print(f"    resolvable increment at beta = {beta:g}: {ql.bb_resolvable_increment(beta):.3e} B_min")
