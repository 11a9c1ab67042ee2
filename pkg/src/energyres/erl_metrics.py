"""Energy resolution per bandwidth: definitions, geometry rules, conversions.

All E_R forms reduce to ``S_B * l**3 / (2 mu0)`` once the sensor's effective
linear dimension ``l`` is fixed (sqrt(area) for planar sensors, cbrt(volume)
for volumetric ones, standoff distance for point-like ones). The area and
volume forms are therefore routed through :func:`er_general`, which makes
the coincidence between them exact rather than approximate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .units import (
    ACTION, AREA, CODATA2018, ENERGY, FIELD_PSD, FLUX_PSD, HENRY, LENGTH,
    MOMENT_PSD, TESLA, TIME, VOLUME, DIMENSIONLESS, Quantity, as_si,
)

__all__ = [
    "Point", "Linear", "Planar", "Volumetric", "SquidLoop", "SensorGeometry",
    "FieldPsd", "FieldRms", "FluxPsd", "MomentPsd", "SensitivitySpec",
    "UnsupportedGeometry",
    "effective_linear_dimension", "er_squid", "er_area", "er_volumetric",
    "er_general", "er_from_discrete", "observed_energy_decomposition",
    "flux_noise_to_field_noise", "field_noise_to_flux_noise",
    "moment_noise_to_field_noise", "squid_inductance_from_area",
]


class UnsupportedGeometry(ValueError):
    """The geometry has no effective-linear-dimension rule."""


def _positive(x, dim, name: str) -> float:
    v = as_si(x, dim, name)
    if not v > 0:
        raise ValueError(f"{name} must be strictly positive, got {v!r}")
    return v


def _nonnegative(x, dim, name: str) -> float:
    v = as_si(x, dim, name)
    if v < 0:
        raise ValueError(f"{name} must be non-negative, got {v!r}")
    return v


# -- geometry ---------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    """Point-like sensor; `standoff` is the minimum source-detector distance."""
    standoff: float

    def __post_init__(self):
        object.__setattr__(self, "standoff", _positive(self.standoff, LENGTH, "standoff"))


@dataclass(frozen=True)
class Linear:
    length: float

    def __post_init__(self):
        object.__setattr__(self, "length", _positive(self.length, LENGTH, "length"))


@dataclass(frozen=True)
class Planar:
    area: float

    def __post_init__(self):
        object.__setattr__(self, "area", _positive(self.area, AREA, "area"))


@dataclass(frozen=True)
class Volumetric:
    volume: float

    def __post_init__(self):
        object.__setattr__(self, "volume", _positive(self.volume, VOLUME, "volume"))


@dataclass(frozen=True)
class SquidLoop:
    inductance: float
    area: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "inductance", _positive(self.inductance, HENRY, "inductance"))
        if self.area is not None:
            object.__setattr__(self, "area", _positive(self.area, AREA, "area"))


SensorGeometry = Union[Point, Linear, Planar, Volumetric, SquidLoop]


# -- sensitivity ------------------------------------------------------------

@dataclass(frozen=True)
class FieldPsd:
    """dc field-noise power spectral density S_B(0) in T^2/Hz."""
    s_b: float

    def __post_init__(self):
        object.__setattr__(self, "s_b", _positive(self.s_b, FIELD_PSD, "S_B"))


@dataclass(frozen=True)
class FieldRms:
    """RMS error `delta_b` of a measurement lasting `duration`.

    Equivalent to ``FieldPsd(delta_b**2 * duration)``.
    """
    delta_b: float
    duration: float

    def __post_init__(self):
        object.__setattr__(self, "delta_b", _positive(self.delta_b, TESLA, "delta_B"))
        object.__setattr__(self, "duration", _positive(self.duration, TIME, "duration"))

    @property
    def s_b(self) -> float:
        return self.delta_b ** 2 * self.duration


@dataclass(frozen=True)
class FluxPsd:
    s_phi: float

    def __post_init__(self):
        object.__setattr__(self, "s_phi", _positive(self.s_phi, FLUX_PSD, "S_Phi"))


@dataclass(frozen=True)
class MomentPsd:
    """Magnetic-moment noise PSD with the source-sensor `distance`."""
    s_mu: float
    distance: float

    def __post_init__(self):
        object.__setattr__(self, "s_mu", _positive(self.s_mu, MOMENT_PSD, "S_mu"))
        object.__setattr__(self, "distance", _positive(self.distance, LENGTH, "distance"))


SensitivitySpec = Union[FieldPsd, FieldRms, FluxPsd, MomentPsd]


# -- operations -------------------------------------------------------------

def effective_linear_dimension(g: SensorGeometry) -> Quantity:
    """Effective linear dimension l of a sensor geometry.

    Point -> standoff, Planar -> sqrt(A), Volumetric -> cbrt(V), and a SQUID
    loop with a known area -> sqrt(A). Linear sensors have no agreed rule and
    are refused.
    """
    if isinstance(g, Point):
        return Quantity(g.standoff, LENGTH)
    if isinstance(g, Planar):
        return Quantity(math.sqrt(g.area), LENGTH)
    if isinstance(g, Volumetric):
        return Quantity(float(np.cbrt(g.volume)), LENGTH)
    if isinstance(g, SquidLoop):
        if g.area is None:
            raise UnsupportedGeometry(
                "SQUID loop without an area has no effective linear dimension; "
                "use er_squid(S_Phi, L) for the inductance form"
            )
        return Quantity(math.sqrt(g.area), LENGTH)
    if isinstance(g, Linear):
        raise UnsupportedGeometry("no effective-linear-dimension rule for linear sensors")
    raise TypeError(f"not a sensor geometry: {g!r}")


def er_squid(s_phi, inductance) -> Quantity:
    """dc SQUID energy resolution S_Phi(0) / (2 L)."""
    s = _positive(s_phi, FLUX_PSD, "S_Phi")
    L = _positive(inductance, HENRY, "L")
    return Quantity(s / (2.0 * L), ACTION)


def squid_inductance_from_area(area, alpha=1.0, constants=CODATA2018) -> Quantity:
    """Loop inductance L = sqrt(A) mu0 / alpha for a wire geometry factor alpha."""
    A = _positive(area, AREA, "area")
    a = _positive(alpha, DIMENSIONLESS, "alpha")
    return Quantity(math.sqrt(A) * constants.mu0 / a, HENRY)


def er_general(s_b, length, constants=CODATA2018) -> Quantity:
    """Technology-spanning form S_B(0) l^3 / (2 mu0)."""
    s = _positive(s_b, FIELD_PSD, "S_B")
    l = _positive(length, LENGTH, "l")
    return Quantity(s * l ** 3 / (2.0 * constants.mu0), ACTION)


def er_area(s_b, area, alpha=1.0, constants=CODATA2018) -> Quantity:
    """Area form S_B(0) A^(3/2) / (2 mu0).

    `alpha` is the wire geometry factor; it does not change E_R, only the
    threshold ``alpha * hbar`` that the area form is compared against.
    """
    A = _positive(area, AREA, "area")
    _positive(alpha, DIMENSIONLESS, "alpha")
    return er_general(s_b, math.sqrt(A), constants)


def er_volumetric(s_b, volume, constants=CODATA2018) -> Quantity:
    """Volumetric form S_B(0) V / (2 mu0)."""
    V = _positive(volume, VOLUME, "volume")
    return er_general(s_b, float(np.cbrt(V)), constants)


def er_from_discrete(delta_b, duration, length, constants=CODATA2018) -> Quantity:
    """E_R from repeated measurements with RMS error `delta_b` and period `duration`."""
    db = _positive(delta_b, TESLA, "delta_B")
    T = _positive(duration, TIME, "T")
    return er_general(db * db * T, length, constants)


def observed_energy_decomposition(b_true, s_b, duration, volume, constants=CODATA2018):
    """Split the mean apparent magnetostatic energy into (true, bias) terms.

    The bias term times the measurement duration equals
    ``er_volumetric(s_b, volume)``.
    """
    B = _nonnegative(b_true, TESLA, "B_true")
    T = _positive(duration, TIME, "T")
    er = er_volumetric(s_b, volume, constants)
    V = as_si(volume, VOLUME, "volume")
    true_term = Quantity(B * B * V / (2.0 * constants.mu0), ENERGY)
    bias_term = Quantity(er.value / T, ENERGY)
    return true_term, bias_term


def flux_noise_to_field_noise(s_phi, area) -> Quantity:
    """S_B = S_Phi / A^2, from Phi = B A."""
    s = as_si(s_phi, FLUX_PSD, "S_Phi")
    if s < 0:
        raise ValueError("S_Phi must be non-negative")
    A = _positive(area, AREA, "area")
    return Quantity(s / (A * A), FIELD_PSD)


def field_noise_to_flux_noise(s_b, area) -> Quantity:
    """Inverse of :func:`flux_noise_to_field_noise`."""
    s = as_si(s_b, FIELD_PSD, "S_B")
    if s < 0:
        raise ValueError("S_B must be non-negative")
    A = _positive(area, AREA, "area")
    return Quantity(s * A * A, FLUX_PSD)


def moment_noise_to_field_noise(s_mu, distance, constants=CODATA2018) -> Quantity:
    """Equivalent field PSD of a dipole-moment noise seen at `distance`.

    Uses the on-axis dipole field B = mu0 mu / (2 pi d^3), the strongest
    coupling; callers wanting another angular factor can rescale S_mu.
    """
    s = as_si(s_mu, MOMENT_PSD, "S_mu")
    if s < 0:
        raise ValueError("S_mu must be non-negative")
    d = _positive(distance, LENGTH, "distance")
    coupling = constants.mu0 / (2.0 * math.pi * d ** 3)
    return Quantity(s * coupling * coupling, FIELD_PSD)
