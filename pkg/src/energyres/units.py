"""Dimension-checked quantities and the fixed physical-constants table.

Everything is stored in SI base units. A :class:`Quantity` is a float paired
with a :class:`Dimension`, the exponent vector over (m, kg, s, A, K, mol, cd).
Exponents are restricted to multiples of 1/2, which covers every unit the
package needs (T/sqrt(Hz), A^(3/2) and friends) and nothing finer.

Library functions accept either a :class:`Quantity` (dimension checked) or a
plain real number (taken to be in SI units) and return quantities.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

__all__ = [
    "BASE_SYMBOLS", "Dimension", "DimensionError", "Quantity", "quantity",
    "ConstantsTable", "CODATA2018", "in_hbar", "as_si",
    "DIMENSIONLESS", "LENGTH", "AREA", "VOLUME", "TIME", "FREQUENCY",
    "MASS", "CURRENT", "TEMPERATURE", "ENERGY", "ACTION", "TESLA", "WEBER",
    "HENRY", "MAGNETIC_MOMENT", "FIELD_PSD", "FLUX_PSD", "MOMENT_PSD",
    "FIELD_ASD_TIME", "GYROMAGNETIC", "PERMEABILITY", "SPEED",
    "HEAT_CAPACITY", "CROSS_SECTION", "NUMBER_DENSITY",
    "UNIT_SCALES", "convert_to_si",
]

BASE_SYMBOLS = ("m", "kg", "s", "A", "K", "mol", "cd")

_HALF = Fraction(1, 2)


class DimensionError(ValueError):
    """Raised when quantities of incompatible dimension are combined."""


def _as_half_multiple(x) -> Fraction:
    f = Fraction(x)
    if (f / _HALF).denominator != 1:
        raise DimensionError(f"exponent {f} is not a multiple of 1/2")
    return f


@dataclass(frozen=True)
class Dimension:
    """Exponents of the seven SI base dimensions."""

    exponents: tuple = (0, 0, 0, 0, 0, 0, 0)

    def __post_init__(self):
        exps = tuple(self.exponents)
        if len(exps) != len(BASE_SYMBOLS):
            raise DimensionError(f"expected {len(BASE_SYMBOLS)} exponents, got {len(exps)}")
        object.__setattr__(self, "exponents", tuple(_as_half_multiple(e) for e in exps))

    @classmethod
    def of(cls, **powers) -> "Dimension":
        unknown = set(powers) - set(BASE_SYMBOLS)
        if unknown:
            raise DimensionError(f"unknown base dimension(s): {sorted(unknown)}")
        return cls(tuple(powers.get(s, 0) for s in BASE_SYMBOLS))

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, power) -> "Dimension":
        p = Fraction(power)
        return Dimension(tuple(e * p for e in self.exponents))

    def root(self, n: int) -> "Dimension":
        if n <= 0:
            raise DimensionError("root order must be a positive integer")
        try:
            return Dimension(tuple(e / n for e in self.exponents))
        except DimensionError:
            raise DimensionError(f"cannot take root {n} of {self}") from None

    @property
    def is_dimensionless(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(BASE_SYMBOLS, self.exponents):
            if e == 0:
                continue
            parts.append(sym if e == 1 else f"{sym}^{e}")
        return "·".join(parts) if parts else "1"


DIMENSIONLESS = Dimension()
LENGTH = Dimension.of(m=1)
MASS = Dimension.of(kg=1)
TIME = Dimension.of(s=1)
CURRENT = Dimension.of(A=1)
TEMPERATURE = Dimension.of(K=1)
AREA = LENGTH ** 2
VOLUME = LENGTH ** 3
FREQUENCY = TIME ** -1
SPEED = LENGTH / TIME
ENERGY = MASS * AREA / TIME ** 2
ACTION = ENERGY * TIME
TESLA = MASS / (TIME ** 2 * CURRENT)
WEBER = TESLA * AREA
HENRY = WEBER / CURRENT
MAGNETIC_MOMENT = ENERGY / TESLA
PERMEABILITY = TESLA * LENGTH / CURRENT
HEAT_CAPACITY = ENERGY / TEMPERATURE
FIELD_PSD = TESLA ** 2 / FREQUENCY
FLUX_PSD = WEBER ** 2 / FREQUENCY
MOMENT_PSD = MAGNETIC_MOMENT ** 2 / FREQUENCY
FIELD_ASD_TIME = TESLA * TIME ** _HALF
GYROMAGNETIC = (TESLA * TIME) ** -1
CROSS_SECTION = AREA
NUMBER_DENSITY = VOLUME ** -1


@dataclass(frozen=True)
class Quantity:
    """A finite real magnitude in SI base units with its dimension."""

    value: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, Real):
            raise TypeError(f"magnitude must be real, got {type(self.value).__name__}")
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"magnitude must be finite, got {v}")
        object.__setattr__(self, "value", v)

    def _coerce(self, other) -> "Quantity":
        if isinstance(other, Quantity):
            return other
        if isinstance(other, Real):
            return Quantity(other)
        return NotImplemented

    def _same_dim(self, other: "Quantity", op: str) -> None:
        if self.dim != other.dim:
            raise DimensionError(f"cannot {op} [{self.dim}] and [{other.dim}]")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim * other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value / other.value, self.dim / other.dim)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, power):
        return Quantity(self.value ** power, self.dim ** power)

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim)

    def root(self, n: int) -> "Quantity":
        dim = self.dim.root(n)
        if self.value < 0:
            raise ValueError("root of a negative magnitude")
        if n == 2:
            return Quantity(math.sqrt(self.value), dim)
        if n == 3:
            return Quantity(float(np.cbrt(self.value)), dim)
        return Quantity(self.value ** (1.0 / n), dim)

    def sqrt(self) -> "Quantity":
        return self.root(2)

    def _cmp_value(self, other) -> float:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Quantity with {type(other).__name__}")
        self._same_dim(other, "compare")
        return other.value

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __float__(self) -> float:
        return self.value

    def to(self, dim: Dimension) -> float:
        """Magnitude in SI units, after checking the dimension is `dim`."""
        if self.dim != dim:
            raise DimensionError(f"expected [{dim}], got [{self.dim}]")
        return self.value

    def __str__(self) -> str:
        return f"{self.value!r} {self.dim}"


def quantity(magnitude, dim: Dimension = DIMENSIONLESS) -> Quantity:
    return Quantity(magnitude, dim)


def as_si(x, dim: Dimension, name: str = "value") -> float:
    """Return the SI magnitude of `x`, checking dimension when `x` is a Quantity.

    Plain numbers are taken as already being in SI units.
    """
    if isinstance(x, Quantity):
        if x.dim != dim:
            raise DimensionError(f"{name}: expected [{dim}], got [{x.dim}]")
        return x.value
    if isinstance(x, bool) or not isinstance(x, Real):
        raise TypeError(f"{name}: expected a number or Quantity, got {type(x).__name__}")
    v = float(x)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {v}")
    return v


@dataclass(frozen=True)
class ConstantsTable:
    """Exact-decimal constants in SI units (CODATA 2018 by default)."""

    hbar: float = 1.054571817e-34     # J s
    mu0: float = 1.25663706212e-6     # T m / A
    c: float = 299792458.0            # m / s
    k_B: float = 1.380649e-23         # J / K
    mu_B: float = 9.2740100783e-24    # J / T
    Phi0: float = 2.067833848e-15     # Wb

    DIMENSIONS = {
        "hbar": ACTION, "mu0": PERMEABILITY, "c": SPEED,
        "k_B": HEAT_CAPACITY, "mu_B": MAGNETIC_MOMENT, "Phi0": WEBER,
    }

    def quantity(self, name: str) -> Quantity:
        return Quantity(getattr(self, name), self.DIMENSIONS[name])

    def to_json(self) -> str:
        # repr() of a float is the shortest string that round-trips exactly
        return json.dumps({k: repr(v) for k, v in asdict(self).items()}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConstantsTable":
        raw = json.loads(text)
        return cls(**{k: float(v) for k, v in raw.items()})


CODATA2018 = ConstantsTable()


def in_hbar(E, constants: ConstantsTable = CODATA2018) -> float:
    """Express an action in units of the reduced Planck constant."""
    return as_si(E, ACTION, "action") / constants.hbar


# Display units accepted on input. Each maps to (SI scale factor, dimension, squared)
# where `squared` marks amplitude spectral densities that must be squared into PSDs.
_C = CODATA2018
UNIT_SCALES = {
    # field PSD / ASD
    "T^2/Hz": (1.0, FIELD_PSD, False),
    "T/rtHz": (1.0, FIELD_PSD, True),
    "nT/rtHz": (1e-9, FIELD_PSD, True),
    "pT/rtHz": (1e-12, FIELD_PSD, True),
    "fT/rtHz": (1e-15, FIELD_PSD, True),
    "aT/rtHz": (1e-18, FIELD_PSD, True),
    # flux PSD / ASD
    "Wb^2/Hz": (1.0, FLUX_PSD, False),
    "Wb/rtHz": (1.0, FLUX_PSD, True),
    "Phi0/rtHz": (_C.Phi0, FLUX_PSD, True),
    "uPhi0/rtHz": (1e-6 * _C.Phi0, FLUX_PSD, True),
    "nPhi0/rtHz": (1e-9 * _C.Phi0, FLUX_PSD, True),
    # moment PSD / ASD
    "(J/T)^2/Hz": (1.0, MOMENT_PSD, False),
    "J/T/rtHz": (1.0, MOMENT_PSD, True),
    "muB/rtHz": (_C.mu_B, MOMENT_PSD, True),
    # rms field for discrete measurements
    "T": (1.0, TESLA, False),
    "nT": (1e-9, TESLA, False),
    "pT": (1e-12, TESLA, False),
    "fT": (1e-15, TESLA, False),
}


def convert_to_si(value: float, units: str) -> Quantity:
    """Convert a value in one of the fixed display units into an SI quantity.

    Amplitude densities (``.../rtHz``) come back squared, as power spectral
    densities.
    """
    try:
        scale, dim, squared = UNIT_SCALES[units]
    except KeyError:
        raise DimensionError(
            f"unsupported unit {units!r}; expected one of {sorted(UNIT_SCALES)}"
        ) from None
    v = float(value) * scale
    return Quantity(v * v if squared else v, dim)
