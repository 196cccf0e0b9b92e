"""Independent reference implementations used only by the test suite.

Everything here is deliberately written against mpmath/scipy primitives so
that no production code path is exercised: the package under test evaluates
Bessel values through its own series/recurrence core, while these oracles
use arbitrary-precision ascending series and adaptive quadrature.
"""

from __future__ import annotations

import mpmath as mp


def bessel_j_series(n: int, z: float, terms: int = 30) -> float:
    """Ascending power series for J_n(z), evaluated in 50-digit arithmetic.

    sum_{k=0..terms-1} (-1)^k (z/2)^(n+2k) / (k! (n+k)!)

    Thirty terms at 50 digits are exact to double precision for z <= 50;
    callers needing larger arguments should pass more terms.  The working
    precision grows with z because the alternating partial sums reach ~e^z.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    with mp.workdps(50 + int(0.45 * abs(z))):
        half = mp.mpf(z) / 2
        total = mp.mpf(0)
        for k in range(terms):
            term = (-1) ** k * half ** (n + 2 * k) / (mp.factorial(k) * mp.factorial(n + k))
            total += term
        return float(total)


def bessel_i_series(n: int, z: float, terms: int = 30) -> float:
    """Ascending power series for I_n(z) (all-positive terms), 50 digits."""
    if n < 0:
        raise ValueError("order must be non-negative")
    with mp.workdps(50):
        half = mp.mpf(z) / 2
        total = mp.mpf(0)
        for k in range(terms):
            total += half ** (n + 2 * k) / (mp.factorial(k) * mp.factorial(n + k))
        return float(total)


def bessel_j_exact(n: int, z: float) -> float:
    """J_n(z) from mpmath's own implementation (independent cross-check)."""
    with mp.workdps(40):
        return float(mp.besselj(n, z))


def bessel_i_exact(n: int, z: float) -> float:
    """I_n(z) from mpmath's own implementation (independent cross-check)."""
    with mp.workdps(40):
        return float(mp.besseli(n, z))


def laplace_transform_j0(omega: float, energy: complex, t_max: float) -> complex:
    """Quadrature for integral_0^T J_0(omega*tau) e^{i E tau} d(tau), Im E > 0.

    Uses scipy's adaptive quadrature on real and imaginary parts separately
    with scipy's Bessel J_0, so the integrand never touches package code.
    """
    from scipy.integrate import quad
    from scipy.special import j0

    def integrand_re(t: float) -> float:
        return (j0(omega * t) * complex(mp.exp(1j * energy * t))).real

    def integrand_im(t: float) -> float:
        return (j0(omega * t) * complex(mp.exp(1j * energy * t))).imag

    pieces = 40
    edges = [t_max * k / pieces for k in range(pieces + 1)]
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        re, _ = quad(integrand_re, a, b, limit=200)
        im, _ = quad(integrand_im, a, b, limit=200)
        total += re + 1j * im
    return total
