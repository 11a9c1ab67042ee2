"""Zero-point and thermal fluctuations of the weighted average field.

An ideal instantaneous measurement of the z field averaged over a sphere of
radius r_S with radial weighting rho(r) has variance

    <Bz^2> = mu0 hbar c / (6 pi^2 r_S^4) * I_Q  +  mu0 k_B T_B / (3 pi^2 r_S^3) * I_T

with the dimensionless shape integrals

    I_Q = int_0^inf zeta^3 |F(zeta)|^2 dzeta,   I_T = int_0^inf zeta^2 |F(zeta)|^2 dzeta,

where F(zeta) = 4 pi int r^2 rho(r) sin(kr)/(kr) dr, zeta = k r_S. The thermal
term is the Rayleigh-Jeans part of the mode occupation. Repeating the
measurement every T_m = 2 r_S / c (the time for the back-action to leave the
region) gives E_R = <Bz^2> V_S T_m / (2 mu0), i.e.

    E_R = (2 / (9 pi)) I_Q hbar  +  (4 / (9 pi)) I_T (r_S / c) k_B T_B.

For the parabolic weighting rho = 5/(2 V_S) (1 - r^2/r_S^2), I_Q = 75/4 and
I_T = 15 pi / 7, giving 175/(42 pi) hbar + (20/21)(r_S/c) k_B T_B.

Note that this treats the field average as an ideal observable. A sensor in
equilibrium with the vacuum (e.g. a stiff ferromagnet in its joint ground
state with the field) would not precess, so the quantum term here is not
obviously a fundamental limit.

Quadrature: the integrands are non-negative but |F|^2 oscillates under a
power-law envelope, so the half line is cut at consecutive zeros of F, each
piece is integrated by adaptive Gauss-Legendre, and the slowly converging
series of pieces is summed with a Levin u-transform.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .units import ACTION, CODATA2018, Quantity, TESLA, as_si, LENGTH

__all__ = [
    "NonConvergentIntegral", "AccuracyWarning",
    "RadialWeighting", "Parabolic", "TopHat", "Sampled",
    "FieldVariance", "ZeroPointResolution", "ConvergenceVerdict",
    "QuadratureResult",
    "weighting_ft", "numeric_transform", "shape_integral",
    "quantum_shape_integral", "thermal_shape_integral", "field_variance",
    "er_zeropoint", "convergence_check", "parabolic_closed_form",
    "PARABOLIC_I_Q", "PARABOLIC_I_T", "NORMALIZATION_TOL",
]

PARABOLIC_I_Q = 75.0 / 4.0
PARABOLIC_I_T = 15.0 * math.pi / 7.0
NORMALIZATION_TOL = 1e-9

# tail exponent thresholds for sum convergence of zeta^n |F|^2 and the
# margin a fitted exponent must clear
_QUANTUM_THRESHOLD = 4.0
_THERMAL_THRESHOLD = 3.0
_EXPONENT_MARGIN = 0.25


class NonConvergentIntegral(ArithmeticError):
    """A shape integral diverges because |F|^2 decays too slowly."""

    def __init__(self, message, tail_exponent=None):
        super().__init__(message)
        self.tail_exponent = tail_exponent


class AccuracyWarning(UserWarning):
    pass


# -- Gauss-Legendre ---------------------------------------------------------

@lru_cache(maxsize=None)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _sph_ratio(n: int, z: np.ndarray) -> np.ndarray:
    """j_n(z) / z^n for n = 1, 2, accurate down to z = 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 1.0
    if np.any(small):
        zs = z[small]
        y = -0.5 * zs * zs
        # sum_k y^k / (k! (2n+2k+1)!!)
        term = np.full_like(zs, 1.0 / math.prod(range(1, 2 * n + 2, 2)))
        acc = term.copy()
        for k in range(1, 20):
            term = term * y / (k * (2 * n + 2 * k + 1))
            acc += term
        out[small] = acc
    big = ~small
    if np.any(big):
        zb = z[big]
        s, c = np.sin(zb), np.cos(zb)
        if n == 1:
            out[big] = (s - zb * c) / zb ** 3
        elif n == 2:
            out[big] = ((3.0 - zb * zb) * s - 3.0 * zb * c) / zb ** 5
        else:
            raise ValueError("only n = 1, 2 supported")
    return out


# -- weightings -------------------------------------------------------------

class RadialWeighting:
    """Normalized, non-negative radial weighting supported on [0, r_s].

    Subclasses provide `density(r)` in 1/m^3 and `transform(zeta)`.
    """

    r_s: float
    name = "weighting"

    @property
    def volume(self) -> float:
        return 4.0 * math.pi * self.r_s ** 3 / 3.0

    def density(self, r):
        raise NotImplementedError

    def transform(self, zeta):
        raise NotImplementedError

    def shape(self, u):
        """Dimensionless profile g(u) = 4 pi r_s^3 rho(u r_s), with int u^2 g du = 1."""
        return 4.0 * math.pi * self.r_s ** 3 * self.density(np.asarray(u, dtype=float) * self.r_s)

    def knots(self) -> np.ndarray:
        """Breakpoints of the profile in u = r / r_s (where it may be non-smooth)."""
        return np.array([0.0, 1.0])

    def normalization(self) -> float:
        """int_0^r_s 4 pi r^2 rho(r) dr, by piecewise Gauss-Legendre."""
        x, w = _gl(16)
        total = 0.0
        kn = self.knots()
        for a, b in zip(kn[:-1], kn[1:]):
            u = 0.5 * (b - a) * x + 0.5 * (a + b)
            total += 0.5 * (b - a) * float(np.dot(w, u * u * self.shape(u)))
        return total


def _check_radius(r_s) -> float:
    v = as_si(r_s, LENGTH, "r_S")
    if not v > 0:
        raise ValueError(f"r_S must be strictly positive, got {v!r}")
    return v


@dataclass(frozen=True)
class Parabolic(RadialWeighting):
    """rho(r) = 5/(2 V_S) (1 - r^2/r_S^2) inside the sphere."""

    r_s: float
    name = "parabolic"

    def __post_init__(self):
        object.__setattr__(self, "r_s", _check_radius(self.r_s))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        u2 = (r / self.r_s) ** 2
        return np.where(r <= self.r_s, 2.5 / self.volume * (1.0 - u2), 0.0)

    def transform(self, zeta):
        z = np.asarray(zeta, dtype=float)
        return 15.0 * _sph_ratio(2, z)


@dataclass(frozen=True)
class TopHat(RadialWeighting):
    """Uniform weighting 1/V_S inside the sphere."""

    r_s: float
    name = "tophat"

    def __post_init__(self):
        object.__setattr__(self, "r_s", _check_radius(self.r_s))

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.r_s, 1.0 / self.volume, 0.0)

    def transform(self, zeta):
        z = np.asarray(zeta, dtype=float)
        return 3.0 * _sph_ratio(1, z)


@dataclass(frozen=True, eq=False)
class Sampled(RadialWeighting):
    """Tabulated weighting, interpolated with a monotone (PCHIP) cubic.

    `radii` must start at 0 and increase strictly; the last radius is r_S.
    With ``normalize=True`` the densities are rescaled to unit weight,
    otherwise they must already integrate to 1 within 1e-9.
    """

    radii: tuple
    densities: tuple
    normalize: bool = False
    name = "sampled"
    _interp: object = field(init=False, repr=False)

    def __post_init__(self):
        r = np.array(self.radii, dtype=float)
        rho = np.array(self.densities, dtype=float)
        if r.ndim != 1 or r.shape != rho.shape or r.size < 3:
            raise ValueError("radii and densities must be 1-d sequences of equal length >= 3")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(rho))):
            raise ValueError("radii and densities must be finite")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise ValueError("radii must start at 0 and increase strictly")
        if np.any(rho < 0):
            raise ValueError("densities must be non-negative")
        object.__setattr__(self, "radii", tuple(r.tolist()))
        object.__setattr__(self, "_interp", PchipInterpolator(r, rho, extrapolate=False))
        norm = self.normalization()
        if self.normalize:
            if not norm > 0:
                raise ValueError("weighting has zero total weight")
            rho = rho / norm
            object.__setattr__(self, "_interp", PchipInterpolator(r, rho, extrapolate=False))
            norm = self.normalization()
        object.__setattr__(self, "densities", tuple(rho.tolist()))
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"weighting is not normalized: integral = {norm!r}")

    @property
    def r_s(self) -> float:
        return self.radii[-1]

    @classmethod
    def from_shape(cls, u, shape, r_s) -> "Sampled":
        """Build from a relative profile on u = r / r_s in [0, 1]; normalizes."""
        r_s = _check_radius(r_s)
        u = np.asarray(u, dtype=float)
        if u[-1] != 1.0:
            raise ValueError("profile must end at u = 1")
        return cls(tuple((u * r_s).tolist()), tuple(np.asarray(shape, float).tolist()), normalize=True)

    @classmethod
    def from_weighting(cls, w: RadialWeighting, n: int = 201) -> "Sampled":
        """Tabulate another weighting on `n` equally spaced radii."""
        u = np.linspace(0.0, 1.0, n)
        return cls.from_shape(u, w.density(u * w.r_s), w.r_s)

    def density(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= 0) & (r <= self.r_s)
        out = np.zeros_like(r)
        # PCHIP keeps sign between knots; clip roundoff at zero-valued knots
        out[inside] = np.maximum(self._interp(r[inside]), 0.0)
        return out

    def knots(self) -> np.ndarray:
        return np.asarray(self.radii) / self.r_s

    def transform(self, zeta):
        return numeric_transform(self, zeta)


def numeric_transform(w: RadialWeighting, zeta) -> np.ndarray:
    """F(zeta) by direct quadrature of the spherical transform.

    Works for any weighting. Each knot interval is cut into equal panels
    spanning at most 8 pi of kernel phase, with 32 Gauss-Legendre nodes each,
    so the oscillating kernel stays resolved at large zeta.
    """
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    if np.any(z < 0):
        raise ValueError("zeta must be non-negative")
    kn = w.knots()
    hmax = float(np.max(np.diff(kn)))
    splits = np.maximum(1, np.ceil(z * hmax / (8.0 * math.pi))).astype(int)
    x, wts = _gl(32)
    out = np.empty_like(z)
    for m in np.unique(splits):
        idx = np.flatnonzero(splits == m)
        t = np.linspace(0.0, 1.0, m + 1)
        sub = (kn[:-1, None] + np.diff(kn)[:, None] * t[None, :])
        a, b = sub[:, :-1].ravel()[:, None], sub[:, 1:].ravel()[:, None]
        u = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
        weights = (0.5 * (b - a) * wts).ravel() * u * u * w.shape(u)
        # keep each block of the kernel matrix near 4M entries
        step = max(1, 4_000_000 // u.size)
        for i in range(0, idx.size, step):
            sel = idx[i:i + step]
            # np.sinc(t) = sin(pi t)/(pi t)
            out[sel] = np.sinc(np.outer(z[sel], u) / np.pi) @ weights
    return out.reshape(np.shape(zeta)) if np.ndim(zeta) else out


def weighting_ft(w: RadialWeighting, zeta):
    """Normalized transform F(zeta), F(0) = 1, for zeta >= 0."""
    z = np.asarray(zeta, dtype=float)
    if np.any(z < 0) or not np.all(np.isfinite(z)):
        raise ValueError("zeta must be finite and non-negative")
    out = np.asarray(w.transform(z), dtype=float)
    return float(out) if out.ndim == 0 else out


# -- convergence ------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceVerdict:
    converges_quantum: bool
    converges_thermal: bool
    tail_exponent_estimate: float


def convergence_check(w: RadialWeighting, probe=(1e3, 1e4), n_windows: int = 24) -> ConvergenceVerdict:
    """Estimate the power-law decay exponent p of |F(zeta)|^2.

    The envelope maximum of |F|^2 is taken in `n_windows` log-spaced windows of
    width 2 pi across `probe`, and p is minus the least-squares slope in
    log-log. zeta^3 |F|^2 is integrable for p > 4, zeta^2 |F|^2 for p > 3; a
    fitted exponent must clear the threshold by 0.25 to count.
    """
    lo, hi = probe
    starts = np.geomspace(lo, hi - 2 * math.pi, n_windows)
    offs = np.linspace(0.0, 2 * math.pi, 65)
    grid = starts[:, None] + offs[None, :]
    f2 = np.asarray(w.transform(grid.ravel()), dtype=float).reshape(grid.shape) ** 2
    env = f2.max(axis=1)
    tiny = np.finfo(float).tiny
    slope = np.polyfit(np.log(starts + math.pi), np.log(np.maximum(env, tiny)), 1)[0]
    p = float(-slope)
    return ConvergenceVerdict(
        converges_quantum=p > _QUANTUM_THRESHOLD + _EXPONENT_MARGIN,
        converges_thermal=p > _THERMAL_THRESHOLD + _EXPONENT_MARGIN,
        tail_exponent_estimate=p,
    )


# -- quadrature -------------------------------------------------------------

class QuadratureResult(NamedTuple):
    value: float
    error: float
    n_segments: int


def _find_zeros(f, upto: float, step: float = math.pi / 16) -> list[float]:
    grid = np.arange(step, upto + step, step)
    vals = f(grid)
    zeros = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        zeros.append(brentq(lambda t: float(f(np.array([t]))[0]), a, b, xtol=1e-14, rtol=1e-15))
    for i in np.nonzero(vals == 0)[0]:
        zeros.append(float(grid[i]))
    return sorted(set(zeros))


def _segments(w: RadialWeighting, n_segments: int) -> list[float]:
    """Integration breakpoints: 0 then consecutive zeros of F.

    Falls back to a uniform pi grid where F has no regular zeros.
    """
    zeros = _find_zeros(w.transform, (n_segments + 2) * math.pi)
    if len(zeros) >= n_segments and np.max(np.diff([0.0] + zeros[:n_segments])) < 2 * math.pi:
        return [0.0] + zeros[:n_segments]
    return [i * math.pi for i in range(n_segments + 1)]


def _adaptive_gl(f, a: float, b: float, rtol: float = 1e-13, atol: float = 0.0,
                 n: int = 32, depth: int = 0) -> float:
    x, wts = _gl(n)

    def rule(lo, hi):
        return 0.5 * (hi - lo) * float(np.dot(wts, f(0.5 * (hi - lo) * x + 0.5 * (hi + lo))))

    mid = 0.5 * (a + b)
    whole = rule(a, b)
    halves = rule(a, mid) + rule(mid, b)
    if abs(whole - halves) <= rtol * abs(halves) + atol or depth >= 16:
        return halves
    return (_adaptive_gl(f, a, mid, rtol, 0.5 * atol, n, depth + 1)
            + _adaptive_gl(f, mid, b, rtol, 0.5 * atol, n, depth + 1))


def _levin_u(partial: np.ndarray, terms: np.ndarray, n0: int, k: int) -> float:
    """Levin u-transform L_k^(n0) of partial sums (beta = 1)."""
    j = np.arange(k + 1)
    idx = n0 + j
    omega = (idx + 1.0) * terms[idx]
    binom = np.array([math.comb(k, int(i)) for i in j], dtype=float)
    ratio = ((n0 + j + 1.0) / (n0 + k + 1.0)) ** (k - 1)
    c = ((-1.0) ** j) * binom * ratio / omega
    return float(np.dot(c, partial[idx]) / np.sum(c))


def _accelerate(terms: np.ndarray, n0: int = 2, kmax: int = 18):
    partial = np.cumsum(terms)
    k_top = min(kmax, terms.size - n0 - 1)
    if k_top < 3 or np.any(terms[n0:] == 0):
        return float(math.fsum(terms)), float("inf")
    est = [_levin_u(partial, terms, n0, k) for k in range(2, k_top + 1)]
    diffs = np.abs(np.diff(est))
    i = int(np.argmin(diffs))
    return est[i + 1], float(diffs[i])


def shape_integral(w: RadialWeighting, power: int, rtol: float = 1e-8,
                   n_segments: int = 48, workers: int = 1) -> QuadratureResult:
    """int_0^inf zeta^power |F(zeta)|^2 dzeta for a convergent tail.

    Segments are evaluated in input order (optionally on a thread pool) and
    combined with exactly-rounded summation, so the result does not depend on
    `workers`.
    """
    bounds = _segments(w, n_segments)

    def integrand(z):
        return z ** power * np.asarray(w.transform(z), dtype=float) ** 2

    pairs = list(zip(bounds[:-1], bounds[1:]))
    # absolute floor: the transform itself carries ~1e-16 relative noise, so
    # far-tail segments cannot meet a purely relative target
    x, wts = _gl(32)
    coarse = math.fsum(0.5 * (b - a) * float(np.dot(wts, integrand(0.5 * (b - a) * x + 0.5 * (a + b))))
                       for a, b in pairs)
    atol = 1e-15 * abs(coarse)

    def piece(ab):
        return _adaptive_gl(integrand, ab[0], ab[1], atol=atol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(piece, pairs))
    else:
        terms = [piece(ab) for ab in pairs]
    terms = np.array(terms)
    value, err = _accelerate(terms)
    if not err <= rtol * abs(value):
        warnings.warn(
            f"shape integral (power {power}) error estimate {err:.3g} exceeds "
            f"rtol {rtol:g} of value {value:.12g}", AccuracyWarning, stacklevel=2,
        )
    return QuadratureResult(value, err, len(pairs))


def _checked(w: RadialWeighting, which: str) -> None:
    verdict = convergence_check(w)
    ok = verdict.converges_quantum if which == "quantum" else verdict.converges_thermal
    if not ok:
        threshold = _QUANTUM_THRESHOLD if which == "quantum" else _THERMAL_THRESHOLD
        raise NonConvergentIntegral(
            f"NonConvergentIntegral: {which} shape integral of the {w.name} weighting "
            f"diverges; |F|^2 tail exponent ~ {verdict.tail_exponent_estimate:.3f} "
            f"(needs > {threshold:g})",
            verdict.tail_exponent_estimate,
        )


def quantum_shape_integral(w: RadialWeighting, rtol: float = 1e-8, workers: int = 1) -> float:
    """I_Q = int zeta^3 |F|^2 dzeta (75/4 for the parabolic weighting)."""
    _checked(w, "quantum")
    return shape_integral(w, 3, rtol=rtol, workers=workers).value


def thermal_shape_integral(w: RadialWeighting, rtol: float = 1e-8, workers: int = 1) -> float:
    """I_T = int zeta^2 |F|^2 dzeta (15 pi / 7 for the parabolic weighting)."""
    _checked(w, "thermal")
    return shape_integral(w, 2, rtol=rtol, workers=workers).value


# -- physical results -------------------------------------------------------

@dataclass(frozen=True)
class FieldVariance:
    quantum: Quantity    # T^2
    thermal: Quantity    # T^2
    t_b: float           # K

    @property
    def total(self) -> Quantity:
        return self.quantum + self.thermal


@dataclass(frozen=True)
class ZeroPointResolution:
    quantum: Quantity    # J s
    thermal: Quantity    # J s

    @property
    def total(self) -> Quantity:
        return self.quantum + self.thermal


def _temperature(t_b) -> float:
    t = float(t_b)
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"T_B must be finite and non-negative, got {t_b!r}")
    return t


def _variance_from_integrals(r_s, i_q, i_t, t_b, k) -> FieldVariance:
    q = k.mu0 * k.hbar * k.c / (6.0 * math.pi ** 2 * r_s ** 4) * i_q
    th = k.mu0 * k.k_B * t_b / (3.0 * math.pi ** 2 * r_s ** 3) * i_t
    return FieldVariance(Quantity(q, TESLA ** 2), Quantity(th, TESLA ** 2), t_b)


def field_variance(w: RadialWeighting, t_b, constants=CODATA2018, workers: int = 1) -> FieldVariance:
    """Quantum and Rayleigh-Jeans thermal variance of the weighted field average."""
    t_b = _temperature(t_b)
    i_q = quantum_shape_integral(w, workers=workers)
    i_t = thermal_shape_integral(w, workers=workers) if t_b > 0 else 0.0
    return _variance_from_integrals(w.r_s, i_q, i_t, t_b, constants)


def er_zeropoint(w: RadialWeighting, t_b, constants=CODATA2018, workers: int = 1) -> ZeroPointResolution:
    """<Bz^2> V_S T_m / (2 mu0) with back-action wait time T_m = 2 r_S / c."""
    var = field_variance(w, t_b, constants, workers)
    t_m = 2.0 * w.r_s / constants.c
    scale = w.volume * t_m / (2.0 * constants.mu0)
    return ZeroPointResolution(
        Quantity(var.quantum.value * scale, ACTION),
        Quantity(var.thermal.value * scale, ACTION),
    )


def parabolic_closed_form(r_s, t_b, constants=CODATA2018):
    """Closed-form (variance, E_R) for the parabolic weighting, no quadrature.

    Variance: 25 c mu0 hbar / (8 pi^2 r_S^4) + 5 mu0 k_B T_B / (7 pi r_S^3).
    E_R: 175/(42 pi) hbar + (20/21)(r_S/c) k_B T_B.
    """
    r = _check_radius(r_s)
    t = _temperature(t_b)
    k = constants
    var = FieldVariance(
        Quantity(25.0 * k.c * k.mu0 * k.hbar / (8.0 * math.pi ** 2 * r ** 4), TESLA ** 2),
        Quantity(5.0 * k.mu0 * k.k_B * t / (7.0 * math.pi * r ** 3), TESLA ** 2),
        t,
    )
    er = ZeroPointResolution(
        Quantity(175.0 / (42.0 * math.pi) * k.hbar, ACTION),
        Quantity(20.0 / 21.0 * r / k.c * k.k_B * t, ACTION),
    )
    return var, er
