"""Weighted image sums over the symmetry group: kernels on the orbit space.

The single engine `_orbit_sum` walks the group shell by shell (shells are
indexed by max winding), weights each image by the representation, and stops
once whole shells fall below tolerance.  Time, heat, and resolvent kernels
plug in different free-lattice term functions; identical-walker kernels can
alternatively be assembled as permanents/determinants of single-walker sums.
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError
from .group import (
    OrbitSpaceSpec,
    Representation,
    act,
    check_in_domain,
    enumerate_shell,
    fundamental_domain,
    perm_parity,
    rep_weight,
    translation,
    validate_representation,
)
from .kernels import CoinSpec, KernelParams, coined_line_kernel, resolvent_momentum, window_radius
from .special import i_row, j_row, quarter_phase

FACTORIZE_FROM = 4  # walker count at which the permanent/determinant path takes over


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop the shell sum: absolute term tolerance and shell caps."""

    tol: float = 1e-14
    max_shell: int = 64
    consecutive_quiet_shells: int = 2

    def __post_init__(self):
        if not self.tol > 0.0:
            raise DomainError("tol must be positive")
        if self.max_shell < 1:
            raise DomainError("max_shell must be positive")
        if self.consecutive_quiet_shells < 1:
            raise DomainError("consecutive_quiet_shells must be positive")


@dataclass(frozen=True)
class OrbitKernelReport:
    """Converged image-sum value plus how hard the sum had to work."""

    value: complex
    shells_used: int
    last_shell_magnitude: float
    terms_evaluated: int


def _as_point(space: OrbitSpaceSpec, v) -> tuple:
    if isinstance(v, int):
        v = (v,)
    pt = tuple(int(c) for c in v)
    if len(pt) != space.N:
        raise DomainError(f"point {pt} has {len(pt)} coordinates, space has N={space.N}")
    return pt


def _orbit_sum(space, D, x, y, term, trunc) -> OrbitKernelReport:
    """sum_gamma D(gamma) * term(x, gamma y), truncated per policy."""
    validate_representation(space, D)
    total = 0j
    terms = 0
    quiet = 0
    shells_used = 0
    last_mag = 0.0
    for shell in range(trunc.max_shell + 1):
        elements = enumerate_shell(space, D, shell)
        if not elements:
            return OrbitKernelReport(total, shells_used, 0.0, terms)  # group exhausted: exact
        shell_max = 0.0
        for g in elements:
            contrib = rep_weight(D, g) * term(x, act(g, y, space))
            total += contrib
            mag = abs(contrib)
            if mag > shell_max:
                shell_max = mag
            terms += 1
        shells_used = shell + 1
        last_mag = shell_max
        if shell_max < trunc.tol:
            quiet += 1
            if quiet >= trunc.consecutive_quiet_shells:
                return OrbitKernelReport(total, shells_used, last_mag, terms)
        else:
            quiet = 0
    raise TruncationError(
        f"image sum did not converge within {trunc.max_shell} shells "
        f"(last shell magnitude {last_mag:.3e}, tol {trunc.tol:.3e})"
    )


def _time_term(p: KernelParams):
    """Free time-evolution term with a precomputed Bessel row."""
    z = p.omega * abs(p.tau)
    radius = window_radius(p.omega, p.tau)
    row = j_row(radius, z)
    sign = 1 if p.tau >= 0.0 else -1

    def term(x: tuple, gy: tuple) -> complex:
        prod = 1.0
        phase = 0
        for xi, yi in zip(x, gy):
            d = xi - yi if xi >= yi else yi - xi
            if d > radius:
                return 0j
            prod *= row[d]
            phase += d
        return quarter_phase(sign * phase) * prod

    return term


def _heat_term(p: KernelParams):
    z = p.beta * p.omega
    radius = window_radius(p.omega, p.beta)
    row = i_row(radius, z)

    def term(x: tuple, gy: tuple) -> complex:
        prod = 1.0
        for xi, yi in zip(x, gy):
            d = abs(xi - yi)
            if d > radius:
                return 0j
            prod *= row[d]
        return complex(prod)

    return term


def _resolvent_term(p: KernelParams):
    q = resolvent_momentum(p)
    prefactor = 1.0 / (1j * p.omega * cmath.sin(q))
    decay = cmath.exp(1j * q)
    cache = {0: complex(prefactor)}

    def pow_cached(d: int) -> complex:
        val = cache.get(d)
        if val is None:
            val = complex(prefactor * decay**d)
            cache[d] = val
        return val

    def term(x: tuple, gy: tuple) -> complex:
        out = 1 + 0j
        for xi, yi in zip(x, gy):
            out *= pow_cached(abs(xi - yi))
        return out

    return term


def _single_walker_space(space: OrbitSpaceSpec) -> OrbitSpaceSpec:
    return OrbitSpaceSpec(space.kind, space.L, 1, space.boundary_convention)


def _factorized_report(space, D, x, y, p, trunc) -> OrbitKernelReport:
    """Permanent/determinant of the single-walker orbit kernel matrix."""
    single = _single_walker_space(space)
    D1 = Representation(D.theta, D.phi, "Boson")
    n = space.N
    shells = 0
    terms = 0
    worst = 0.0
    matrix = [[0j] * n for _ in range(n)]
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            rep = orbit_kernel(single, D1, (xi,), (yj,), p, trunc, restrict_domain=False)
            matrix[i][j] = rep.value
            shells = max(shells, rep.shells_used)
            terms += rep.terms_evaluated
            worst = max(worst, rep.last_shell_magnitude)
    fermion = D.statistics == "Fermion"
    total = 0j
    for perm in itertools.permutations(range(n)):
        prod = 1 + 0j
        for i, j in enumerate(perm):
            prod *= matrix[i][j]
        if fermion and perm_parity(perm):
            total -= prod
        else:
            total += prod
    return OrbitKernelReport(total, shells, worst, terms)


def orbit_kernel(
    space: OrbitSpaceSpec,
    D: Representation,
    x,
    y,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    *,
    restrict_domain: bool = True,
    method: str = "auto",
) -> OrbitKernelReport:
    """Time-evolution kernel U_tau(x, y) on the orbit space.

    `method` selects between the direct group sum ("direct") and the
    permanent/determinant factorization over single-walker kernels
    ("factorized"); "auto" switches to the factorization for N >= 4.
    Set restrict_domain=False to evaluate at points outside the fundamental
    domain (the sum is equivariant there).
    """
    trunc = trunc or TruncationPolicy()
    x, y = _as_point(space, x), _as_point(space, y)
    if restrict_domain:
        check_in_domain(space, x, "x")
        check_in_domain(space, y, "y")
    if method not in ("auto", "direct", "factorized"):
        raise DomainError(f"unknown method {method!r}")
    if method == "factorized" or (method == "auto" and space.N >= FACTORIZE_FROM):
        validate_representation(space, D)
        return _factorized_report(space, D, x, y, p, trunc)
    return _orbit_sum(space, D, x, y, _time_term(p), trunc)


def orbit_resolvent(
    space: OrbitSpaceSpec,
    D: Representation,
    x,
    y,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    *,
    restrict_domain: bool = True,
) -> OrbitKernelReport:
    """Resolvent kernel G_E(x, y) on the orbit space (Im E > 0)."""
    trunc = trunc or TruncationPolicy()
    x, y = _as_point(space, x), _as_point(space, y)
    if restrict_domain:
        check_in_domain(space, x, "x")
        check_in_domain(space, y, "y")
    return _orbit_sum(space, D, x, y, _resolvent_term(p), trunc)


def local_dos(
    space: OrbitSpaceSpec,
    D: Representation,
    x,
    e_real: float,
    eta: float,
    trunc: TruncationPolicy | None = None,
    *,
    omega: float = 1.0,
) -> float:
    """Lorentzian-broadened local density of states -(1/pi) Im G(x, x)."""
    if not 1e-6 <= eta <= 1.0:
        raise DomainError(f"broadening eta must lie in [1e-6, 1], got {eta}")
    p = KernelParams(omega=omega, energy=complex(e_real, eta))
    rep = orbit_resolvent(space, D, x, x, p, trunc)
    return -rep.value.imag / math.pi


def orbit_heat_kernel(
    space: OrbitSpaceSpec,
    D: Representation,
    x,
    y,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    *,
    restrict_domain: bool = True,
) -> OrbitKernelReport:
    """Unnormalized Gibbs kernel <x| e^{-beta H} |y> on the orbit space."""
    trunc = trunc or TruncationPolicy()
    x, y = _as_point(space, x), _as_point(space, y)
    if restrict_domain:
        check_in_domain(space, x, "x")
        check_in_domain(space, y, "y")
    return _orbit_sum(space, D, x, y, _heat_term(p), trunc)


def partition_function(
    space: OrbitSpaceSpec,
    D: Representation,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
) -> float:
    """Z(beta): trace of the Gibbs kernel over the finite fundamental domain."""
    if space.kind not in ("Circle", "Interval"):
        raise DomainError(f"partition function needs a finite domain, not {space.kind}")
    trunc = trunc or TruncationPolicy()
    total = 0.0
    for point in fundamental_domain(space):
        total += orbit_heat_kernel(space, D, point, point, p, trunc).value.real
    return total


def orbit_density_matrix(
    space: OrbitSpaceSpec,
    D: Representation,
    x,
    y,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
) -> complex:
    """Canonical density matrix entry rho_beta(x, y) = heat(x, y) / Z(beta)."""
    z = partition_function(space, D, p, trunc)
    return orbit_heat_kernel(space, D, x, y, p, trunc).value / z


def orbit_coined_kernel(
    space: OrbitSpaceSpec,
    D: Representation,
    steps: int,
    x: int,
    y: int,
    c: CoinSpec,
    trunc: TruncationPolicy | None = None,
    *,
    restrict_domain: bool = True,
) -> np.ndarray:
    """Discrete-time kernel on the circle: sum_n e^{i n theta} B_steps(x - y - nL).

    The line blocks have a strict light cone, so the winding sum is finite and
    the result exact; the truncation policy is accepted for interface
    uniformity but never cuts anything off.
    """
    if space.kind != "Circle" or space.N != 1:
        raise DomainError("discrete-time orbit kernels are wired for the single-walker circle")
    validate_representation(space, D)
    if restrict_domain:
        check_in_domain(space, (x,), "x")
        check_in_domain(space, (y,), "y")
    L = space.L
    reach = abs(steps) * max((abs(s) for s in c.shifts), default=0)
    out = np.zeros((c.d, c.d), dtype=complex)
    n_lo = math.ceil((x - y - reach) / L)
    n_hi = math.floor((x - y + reach) / L)
    for n in range(n_lo, n_hi + 1):
        out += rep_weight(D, translation(power=n)) * coined_line_kernel(steps, x, y + n * L, c)
    return out


def _infinite_window(space: OrbitSpaceSpec, support, p: KernelParams):
    radius = window_radius(p.omega, p.tau)
    coords = [c for pt in support for c in pt]
    lo, hi = min(coords) - radius, max(coords) + radius
    return lo, hi


def evolve_state(
    space: OrbitSpaceSpec,
    D: Representation,
    psi0: dict,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    *,
    window=None,
) -> dict:
    """Apply U_tau to a finitely supported state; returns amplitudes by point.

    Finite spaces evolve onto the whole fundamental domain; Line/HalfLine use
    the given (lo, hi) site window or, by default, the light cone around the
    initial support.
    """
    trunc = trunc or TruncationPolicy()
    state = {_as_point(space, pt): complex(a) for pt, a in psi0.items()}
    if not state:
        raise DomainError("initial state must have at least one amplitude")
    for pt in state:
        check_in_domain(space, pt, "initial-state point")
    norm = sum(abs(a) ** 2 for a in state.values())
    if abs(norm - 1.0) > 1e-12:
        warnings.warn(f"initial state norm {norm:.6f} differs from 1", stacklevel=2)
    if space.kind in ("Circle", "Interval"):
        points = fundamental_domain(space)
    else:
        points = fundamental_domain(space, window or _infinite_window(space, state, p))
    out = {}
    for target in points:
        amp = 0j
        for source, a in state.items():
            if a != 0j:
                amp += orbit_kernel(space, D, target, source, p, trunc).value * a
        out[target] = amp
    return out


def probability(
    space: OrbitSpaceSpec,
    D: Representation,
    psi0: dict,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    x=None,
) -> float:
    """Detection probability |(U_tau psi0)(x)|^2 at a single point."""
    if x is None:
        raise DomainError("a detection point x is required")
    trunc = trunc or TruncationPolicy()
    target = _as_point(space, x)
    check_in_domain(space, target, "x")
    amp = 0j
    for source, a in psi0.items():
        src = _as_point(space, source)
        check_in_domain(space, src, "initial-state point")
        if complex(a) != 0j:
            amp += orbit_kernel(space, D, target, src, p, trunc).value * complex(a)
    return abs(amp) ** 2
