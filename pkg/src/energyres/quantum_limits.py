"""Known and candidate quantum limits on the energy resolution.

Technology-specific limits (dc SQUID, SERF alkali-vapor OPM, immobilized spin
ensembles) and the candidate technology-spanning bounds (projection noise plus
magnetic self-interaction, Margolus-Levitin, Bremermann-Bekenstein).

gamma is always a gyromagnetic ratio in 1/(T s), so hbar*gamma is a magnetic
moment. The self-interaction bound is computed as stated even though it
assumes uncorrelated J_x/J_y noise; spin-squeezed states with correlated
components are not covered by it, and the self-action it relies on does not
conserve angular momentum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

from .units import (
    ACTION, CODATA2018, CROSS_SECTION, DIMENSIONLESS, FIELD_PSD, GYROMAGNETIC,
    LENGTH, SPEED, TESLA, TIME, VOLUME, Quantity, as_si,
)

__all__ = [
    "SpeciesParams", "SpnMsiConfig", "BoundResult", "SpnMsiBound",
    "load_species", "tc_limit", "nvd_limit", "opm_serf_sb_floor",
    "opm_serf_limit", "spn_msi_er", "spn_msi_bound", "self_dipole_field_noise",
    "ml_min_field", "ml_perturbative_min", "bb_min_field",
    "bb_resolvable_increment", "bound_table", "SPN_X",
]

# x = T <dJ_y^2> / V
SPN_X = TIME / VOLUME


def _positive(x, dim, name):
    v = as_si(x, dim, name)
    if not v > 0:
        raise ValueError(f"{name} must be strictly positive, got {v!r}")
    return v


@dataclass(frozen=True)
class SpeciesParams:
    """Alkali-vapor parameters entering the SERF noise floor."""

    gamma: float      # 1/(T s)
    v_bar: float      # m/s
    sigma_sd: float   # m^2
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive(self.gamma, GYROMAGNETIC, "gamma"))
        object.__setattr__(self, "v_bar", _positive(self.v_bar, SPEED, "v_bar"))
        object.__setattr__(self, "sigma_sd", _positive(self.sigma_sd, CROSS_SECTION, "sigma_SD"))

    @classmethod
    def from_dict(cls, d: dict) -> "SpeciesParams":
        try:
            return cls(
                gamma=float(d["gamma_per_T_s"]),
                v_bar=float(d["v_bar_m_s"]),
                sigma_sd=float(d["sigma_SD_m2"]),
                label=str(d.get("label", "")),
            )
        except KeyError as exc:
            raise ValueError(f"species parameters missing field {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "gamma_per_T_s": self.gamma,
            "v_bar_m_s": self.v_bar,
            "sigma_SD_m2": self.sigma_sd,
        }


def load_species(path) -> SpeciesParams:
    """Read a species-parameter JSON file.

    Schema: ``{label, gamma_per_T_s, v_bar_m_s, sigma_SD_m2}``.
    """
    with open(path, encoding="utf-8") as fh:
        return SpeciesParams.from_dict(json.load(fh))


@dataclass(frozen=True)
class SpnMsiConfig:
    """Projection-noise / self-interaction model for gyromagnetic ratio `gamma`.

    C = 2/gamma and D = 2 hbar gamma mu0 / 3, so C*D/mu0 = 4 hbar / 3 for
    every gamma.
    """

    gamma: float
    constants: object = CODATA2018

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive(self.gamma, GYROMAGNETIC, "gamma"))

    @property
    def C(self) -> float:
        return 2.0 / self.gamma

    @property
    def D(self) -> float:
        k = self.constants
        return 2.0 * k.hbar * self.gamma * k.mu0 / 3.0


@dataclass(frozen=True)
class BoundResult:
    value: Quantity
    bound_name: str
    saturation_condition: str = ""


class SpnMsiBound(NamedTuple):
    bound: Quantity
    x_opt: Quantity


def tc_limit(constants=CODATA2018) -> Quantity:
    """Floor on S_Phi(0)/(2L) for an optimized dc SQUID: hbar."""
    return Quantity(constants.hbar, ACTION)


def nvd_limit(alpha=0.5, constants=CODATA2018) -> Quantity:
    """alpha * hbar; alpha is about 1/2 for dipolar-coupled disordered spins."""
    a = _positive(alpha, DIMENSIONLESS, "alpha")
    return Quantity(a * constants.hbar, ACTION)


def opm_serf_sb_floor(p: SpeciesParams, volume) -> Quantity:
    """Field-noise floor v_bar sigma_SD / (gamma^2 V) of a SERF magnetometer."""
    V = _positive(volume, VOLUME, "volume")
    return Quantity(p.v_bar * p.sigma_sd / (p.gamma ** 2 * V), FIELD_PSD)


def opm_serf_limit(p: SpeciesParams, constants=CODATA2018) -> Quantity:
    """Volume-independent SERF limit v_bar sigma_SD / (2 mu0 gamma^2)."""
    return Quantity(p.v_bar * p.sigma_sd / (2.0 * constants.mu0 * p.gamma ** 2), ACTION)


def spn_msi_er(x, cfg: SpnMsiConfig) -> Quantity:
    """(C^2/x + D^2 x) / (2 mu0) for x = T <dJ_y^2> / V."""
    xv = _positive(x, SPN_X, "x")
    C, D = cfg.C, cfg.D
    return Quantity((C * C / xv + D * D * xv) / (2.0 * cfg.constants.mu0), ACTION)


def spn_msi_bound(cfg: SpnMsiConfig) -> SpnMsiBound:
    """Minimum of :func:`spn_msi_er` over x: C D / mu0 at x_opt = C / D."""
    C, D = cfg.C, cfg.D
    return SpnMsiBound(
        Quantity(C * D / cfg.constants.mu0, ACTION),
        Quantity(C / D, SPN_X),
    )


def self_dipole_field_noise(delta_jy, gamma, volume, constants=CODATA2018) -> Quantity:
    """Field 2 hbar gamma mu0 dJ_y / (3V) inside a uniformly magnetized sphere."""
    dj = as_si(delta_jy, DIMENSIONLESS, "delta_J_y")
    if dj < 0:
        raise ValueError("delta_J_y must be non-negative")
    g = _positive(gamma, GYROMAGNETIC, "gamma")
    V = _positive(volume, VOLUME, "volume")
    return Quantity(2.0 * constants.hbar * g * constants.mu0 * dj / (3.0 * V), TESLA)


def ml_min_field(volume, duration, constants=CODATA2018) -> Quantity:
    """Smallest field whose energy in `volume` reaches orthogonality within `duration`.

    Solves B^2 V T / (2 mu0) = pi hbar / 2.
    """
    V = _positive(volume, VOLUME, "volume")
    T = _positive(duration, TIME, "T")
    return Quantity(math.sqrt(math.pi * constants.hbar * constants.mu0 / (V * T)), TESLA)


def ml_perturbative_min(b0, volume, duration, constants=CODATA2018) -> Quantity:
    """Smallest perturbation dB on a bias field B0: dB B0 V T / mu0 = pi hbar / 2.

    The energy of the perturbation is only approximately 2 dB B0 V / (2 mu0);
    the equality form is used here.
    """
    B0 = _positive(b0, TESLA, "B0")
    V = _positive(volume, VOLUME, "volume")
    T = _positive(duration, TIME, "T")
    return Quantity(math.pi * constants.hbar * constants.mu0 / (2.0 * B0 * V * T), TESLA)


def bb_min_field(radius, constants=CODATA2018) -> Quantity:
    """One-bit field for a sphere of `radius`, read out after T_m = R/c.

    Solves <B^2> V T_m / (2 mu0) = hbar / (2 pi) with V = 4 pi R^3 / 3.
    """
    R = _positive(radius, LENGTH, "R")
    V = 4.0 * math.pi * R ** 3 / 3.0
    t_m = R / constants.c
    return Quantity(math.sqrt(2.0 * constants.mu0 * constants.hbar / (2.0 * math.pi * V * t_m)), TESLA)


def bb_resolvable_increment(beta, prefactor=1.0) -> float:
    """Smallest resolvable increment dB / B_min for a field of rms beta * B_min.

    Only order-of-magnitude (``prefactor`` defaults to 1). Defined for beta >= 1.
    """
    b = as_si(beta, DIMENSIONLESS, "beta")
    if b < 1.0:
        raise ValueError(f"beta must be >= 1, got {b!r}")
    k = _positive(prefactor, DIMENSIONLESS, "prefactor")
    return k * b * math.exp(-b * b)


def bound_table(constants=CODATA2018) -> list[BoundResult]:
    """The E_R-form constants of all limits, in a fixed order."""
    from .zeropoint import Parabolic, er_zeropoint

    hbar = constants.hbar
    zp = er_zeropoint(Parabolic(1.0), 0.0, constants=constants).quantum
    return [
        BoundResult(tc_limit(constants), "tc", "optimized dc SQUID at zero temperature"),
        BoundResult(nvd_limit(0.5, constants), "nvd", "disordered dipolar-coupled spins"),
        BoundResult(Quantity(4.0 * hbar / 3.0, ACTION), "spn_msi", "x = C/D, minimum-uncertainty state"),
        BoundResult(Quantity(math.pi * hbar / 2.0, ACTION), "ml", "B_min^2 V T / (2 mu0)"),
        BoundResult(Quantity(hbar / (2.0 * math.pi), ACTION), "bb", "<B_min^2> V T_m / (2 mu0), T_m = R/c"),
        BoundResult(zp, "zeropoint_parabolic", "parabolic weighting, T_B = 0, T_m = 2 r_S / c"),
    ]
