"""Energy resolution per bandwidth of magnetic-field sensors and its quantum limits."""
from .units import (
    CODATA2018, ConstantsTable, Dimension, DimensionError, Quantity, in_hbar, quantity,
)
from .erl_metrics import (
    FieldPsd, FieldRms, FluxPsd, Linear, MomentPsd, Planar, Point, SquidLoop,
    UnsupportedGeometry, Volumetric, effective_linear_dimension, er_area,
    er_from_discrete, er_general, er_squid, er_volumetric,
    flux_noise_to_field_noise, moment_noise_to_field_noise,
    observed_energy_decomposition,
)
from .quantum_limits import (
    SpeciesParams, SpnMsiConfig, bb_min_field, bb_resolvable_increment,
    ml_min_field, ml_perturbative_min, nvd_limit, opm_serf_limit,
    opm_serf_sb_floor, self_dipole_field_noise, spn_msi_bound, spn_msi_er,
    tc_limit,
)
from .zeropoint import (
    NonConvergentIntegral, Parabolic, Sampled, TopHat, convergence_check,
    er_zeropoint, field_variance, quantum_shape_integral,
    thermal_shape_integral, weighting_ft,
)

__version__ = "0.1.0"
