"""Special functions and exact unit-phase arithmetic for the kernel formulas.

Bessel evaluation is delegated to the active backend (compiled extension or
pure Python, see `orbitwalk._backend`); this module owns argument validation
and the shared range caps.
"""

from __future__ import annotations

import math

from ._backend import BACKEND_NAME, COMPILED, core
from .errors import DomainError

__all__ = [
    "N_MAX",
    "Z_MAX",
    "BACKEND_NAME",
    "COMPILED",
    "bessel_j",
    "bessel_i",
    "j_row",
    "i_row",
    "quarter_phase",
]

N_MAX = 10_000
Z_MAX = 1e4

_QUARTER = (1 + 0j, 1j, -1 + 0j, -1j)


def _check(n: int, z: float) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"order must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"order must be non-negative, got {n}")
    if n > N_MAX:
        raise DomainError(f"order {n} exceeds N_MAX = {N_MAX}")
    if not math.isfinite(z):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z < 0.0:
        raise DomainError(f"argument must be non-negative, got {z}")
    if z > Z_MAX:
        raise DomainError(f"argument {z} exceeds Z_MAX = {Z_MAX}")


def bessel_j(n: int, z: float) -> float:
    """Bessel function J_n(z) for integer n >= 0 and real 0 <= z <= Z_MAX.

    Absolute error is below 1e-13 for z <= 100.  J_{-n} = (-1)^n J_n is the
    caller's business.
    """
    _check(n, float(z))
    return core.bessel_j(n, float(z))


def bessel_i(n: int, z: float) -> float:
    """Modified Bessel function I_n(z), same domain rules as `bessel_j`.

    Raises OverflowError once I_n(z) leaves the double-precision range.
    """
    _check(n, float(z))
    return core.bessel_i(n, float(z))


def j_row(nmax: int, z: float) -> list:
    """[J_0(z), ..., J_nmax(z)] computed in a single backward pass."""
    _check(nmax, float(z))
    return core.j_row(nmax, float(z))


def i_row(nmax: int, z: float) -> list:
    """[I_0(z), ..., I_nmax(z)] computed in a single backward pass."""
    _check(nmax, float(z))
    return core.i_row(nmax, float(z))


def quarter_phase(k: int) -> complex:
    """Exact e^{i pi k / 2} as an element of {1, i, -1, -i}.

    Pure integer arithmetic mod 4 — no floating trigonometry, so products of
    many phases stay exact.
    """
    return _QUARTER[k & 3]
