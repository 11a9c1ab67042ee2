"""Independent reference computations for the zero-point shape integrals.

None of these touch the Fourier-space quadrature engine under test:

* real_space_iq: I_Q from a double integral over the sphere of the weighting
  gradient against the 1/|r - r'|^2 kernel (the position-space form of the
  |k| weight), with the angular integral done in closed form.
* parseval_it: I_T = 8 pi^3 r_S^3 int r^2 rho^2 dr (Parseval).
* direct_ft: F(zeta) by scipy.quad of the radial sinc integral.
* brute_force_shape_integral: plain truncated quadrature of zeta^n |F|^2 on
  fixed pi-wide panels plus an explicit asymptotic tail.
"""
import math

from scipy import integrate


def _angular_kernel(a, b):
    # int_{-1}^{1} t / (a^2 + b^2 - 2 a b t) dt
    return -1.0 / (a * b) + (a * a + b * b) / (2.0 * a * a * b * b) * math.log((a + b) / abs(a - b))


def real_space_iq(drho_du, epsrel=1e-11):
    """I_Q for a weighting given by d(rho)/du on u in [0, 1], r_S = 1.

    rho must vanish continuously at u = 1 (no surface delta in the gradient).
    """
    def inner(a):
        f = lambda b: b * b * drho_du(b) * _angular_kernel(a, b)
        return (integrate.quad(f, 0.0, a, limit=200)[0]
                + integrate.quad(f, a, 1.0, limit=200)[0])

    val, _ = integrate.quad(lambda a: a * a * drho_du(a) * inner(a), 0.0, 1.0,
                            limit=200, epsabs=0.0, epsrel=epsrel)
    return 8.0 * math.pi ** 2 * val


def parseval_it(rho_u):
    """I_T for a weighting rho(u), r_S = 1."""
    val, _ = integrate.quad(lambda u: u * u * rho_u(u) ** 2, 0.0, 1.0, epsabs=0.0, epsrel=1e-13)
    return 8.0 * math.pi ** 3 * val


def direct_ft(rho_u, zeta):
    """F(zeta) = 4 pi int_0^1 u^2 rho(u) sin(zeta u)/(zeta u) du, r_S = 1."""
    if zeta == 0.0:
        f = lambda u: u * u * rho_u(u)
    else:
        f = lambda u: u * u * rho_u(u) * math.sin(zeta * u) / (zeta * u)
    return 4.0 * math.pi * integrate.quad(f, 0.0, 1.0, limit=400, epsabs=1e-15, epsrel=1e-12)[0]


def brute_force_shape_integral(F, power, n_panels=4000, tail_coefficient=None):
    """int_0^Z zeta^power F^2 on pi panels (Z = n_panels pi), plus tail.

    `tail_coefficient` c adds int_Z^inf c / zeta^q with the panel-averaged
    envelope c zeta^-q supplied by the caller as (c, q).
    """
    total = 0.0
    for i in range(n_panels):
        a, b = i * math.pi, (i + 1) * math.pi
        total += integrate.quad(lambda z: z ** power * F(z) ** 2, a, b, epsabs=1e-15, epsrel=1e-12)[0]
    if tail_coefficient is not None:
        c, q = tail_coefficient
        Z = n_panels * math.pi
        total += c * Z ** (1 - q) / (q - 1)
    return total


def parabolic_F(z):
    """15 [(3 - z^2) sin z - 3 z cos z] / z^5, via Taylor series near 0."""
    if z < 0.05:
        return 1.0 - z * z / 14.0 + z ** 4 / 504.0
    return 15.0 * ((3.0 - z * z) * math.sin(z) - 3.0 * z * math.cos(z)) / z ** 5


def golden_section_min(f, lo, hi, iters=200):
    """Minimize a unimodal f on [lo, hi]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        if b - a <= 1e-15 * (abs(a) + abs(b)):
            break
    x = 0.5 * (a + b)
    return x, f(x)
