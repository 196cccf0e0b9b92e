"""Self-checks: algebraic properties and oracle agreement for a configured space.

Each check returns a CheckResult with the worst deviation it measured; the
suite passes iff every deviation is within its tolerance.  Infinite spaces
are probed through an explicit site window.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import oracle
from .errors import DomainError
from .group import (
    OrbitSpaceSpec,
    Representation,
    act,
    fundamental_domain,
    perm_parity,
    reflection,
    rep_value,
    translation,
)
from .kernels import KernelParams, window_radius
from .orbit import TruncationPolicy, orbit_kernel

COMPOSITION_TOL = 1e-10
UNITARITY_TOL = 1e-12
INITIAL_TOL = 1e-12
EQUIVARIANCE_TOL = 1e-12
ORACLE_TOL = 1e-10
GAUGE_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""


def _probe_points(space: OrbitSpaceSpec, window) -> list:
    if space.kind in ("Circle", "Interval"):
        points = fundamental_domain(space)
    else:
        if window is None:
            raise DomainError(f"{space.kind} verification needs an explicit window")
        points = fundamental_domain(space, window)
    return points[:8] if len(points) > 8 else points


def _kernel(space, D, x, y, p, trunc):
    return orbit_kernel(space, D, x, y, p, trunc).value


def _symmetrized_delta(x: tuple, y: tuple, statistics: str) -> float:
    """tau=0 kernel for identical walkers: signed sum of coordinate matchings."""
    total = 0.0
    for perm in itertools.permutations(range(len(x))):
        if all(x[i] == y[j] for i, j in enumerate(perm)):
            total += -1.0 if (statistics == "Fermion" and perm_parity(perm)) else 1.0
    return total


def check_initial_condition(space, D, trunc, window=None) -> CheckResult:
    p = KernelParams(omega=1.0, tau=0.0)
    worst = 0.0
    for x in _probe_points(space, window):
        for y in _probe_points(space, window):
            want = _symmetrized_delta(x, y, D.statistics)
            worst = max(worst, abs(_kernel(space, D, x, y, p, trunc) - want))
    return CheckResult("initial_condition", worst <= INITIAL_TOL, worst, INITIAL_TOL)


def _gluing_weight(z: tuple) -> float:
    """1 / prod(multiplicity!): symmetrized kernels overcount coincident points."""
    weight = 1.0
    run = 1
    for a, b in zip(z, z[1:]):
        run = run + 1 if a == b else 1
        weight /= run
    return weight


def check_composition(space, D, p, trunc, window=None) -> CheckResult:
    half = KernelParams(omega=p.omega, tau=0.5 * p.tau)
    probes = _probe_points(space, window)
    if space.kind in ("Circle", "Interval"):
        middles = fundamental_domain(space)
    else:
        coords = [c for pt in probes for c in pt]
        reach = window_radius(p.omega, p.tau) + 8
        lo = min(coords) - reach if space.kind == "Line" else max(1, min(coords) - reach)
        middles = fundamental_domain(space, (lo, max(coords) + reach))
    worst = 0.0
    for x in probes[:3]:
        for y in probes[:3]:
            glued = sum(
                _gluing_weight(z)
                * _kernel(space, D, x, z, half, trunc)
                * _kernel(space, D, z, y, half, trunc)
                for z in middles
            )
            worst = max(worst, abs(glued - _kernel(space, D, x, y, p, trunc)))
    return CheckResult("composition", worst <= COMPOSITION_TOL, worst, COMPOSITION_TOL)


def check_unitarity(space, D, p, trunc, window=None) -> CheckResult:
    back = KernelParams(omega=p.omega, tau=-p.tau)
    worst = 0.0
    probes = _probe_points(space, window)
    for x in probes:
        for y in probes:
            forward = _kernel(space, D, x, y, p, trunc)
            backward = _kernel(space, D, y, x, back, trunc)
            worst = max(worst, abs(forward.conjugate() - backward))
    return CheckResult("unitarity", worst <= UNITARITY_TOL, worst, UNITARITY_TOL)


def check_equivariance(space, D, p, trunc, window=None) -> CheckResult:
    generators = []
    if space.has_translations:
        generators.append(translation(0, space.N))
    if space.has_reflections:
        generators.append(reflection(0, space.N))
    if not generators:
        return CheckResult("equivariance", True, 0.0, EQUIVARIANCE_TOL, "no generators")
    probes = _probe_points(space, window)[:3]
    worst = 0.0
    for g in generators:
        weight = rep_value(D, g, space)
        for x in probes:
            for y in probes:
                moved = orbit_kernel(
                    space, D, act(g, x, space), y, p, trunc, restrict_domain=False
                ).value
                worst = max(worst, abs(moved - weight * _kernel(space, D, x, y, p, trunc)))
    return CheckResult("equivariance", worst <= EQUIVARIANCE_TOL, worst, EQUIVARIANCE_TOL)


def _oracle_decomposition(space: OrbitSpaceSpec, D: Representation, p: KernelParams, window):
    if space.kind == "Circle":
        boundary = oracle.CircleTwisted(D.theta)
        sites = space.L
    elif space.kind == "Interval":
        if space.boundary_convention == "Dirichlet":
            boundary = oracle.Dirichlet()
        else:
            boundary = oracle.IntervalPhase(D.theta, D.phi)
        sites = space.L
    elif space.kind == "HalfLine":
        if space.boundary_convention == "Dirichlet":
            boundary = oracle.Dirichlet()
        else:
            boundary = oracle.HalfLinePhase(D.phi)
        sites = max(oracle.half_line_window(p.omega, p.tau), (window[1] if window else 0) + 40)
    else:
        return None
    spec = oracle.HamiltonianSpec(sites, p.omega, boundary)
    return oracle.diagonalize(oracle.build_hamiltonian(spec))


def check_against_oracle(space, D, p, trunc, window=None) -> CheckResult:
    dec = _oracle_decomposition(space, D, p, window)
    if dec is None:
        return CheckResult("orbit_vs_oracle", True, 0.0, ORACLE_TOL, "free line: orbit sum is the reference")
    worst = 0.0
    for x in _probe_points(space, window):
        for y in _probe_points(space, window):
            got = _kernel(space, D, x, y, p, trunc)
            if space.N == 1:
                want = oracle.spectral_kernel(dec, p.tau, x[0], y[0])
            else:
                want = oracle.many_body_kernel(dec, space.N, D.statistics, x, y, p.tau)
            worst = max(worst, abs(got - want))
    return CheckResult("orbit_vs_oracle", worst <= ORACLE_TOL, worst, ORACLE_TOL)


def check_gauge(space, D, p) -> CheckResult:
    deviation = oracle.gauge_check(space.L, D.theta, p.tau, omega=p.omega)
    return CheckResult("gauge_equivalence", deviation <= GAUGE_TOL, deviation, GAUGE_TOL)


def run_checks(
    space: OrbitSpaceSpec,
    D: Representation,
    p: KernelParams,
    trunc: TruncationPolicy | None = None,
    window=None,
) -> list[CheckResult]:
    """Full property suite for one (space, representation, parameters) triple."""
    trunc = trunc or TruncationPolicy()
    if not math.isfinite(p.tau) or p.tau == 0.0:
        raise DomainError("verification needs a nonzero finite tau")
    results = [
        check_initial_condition(space, D, trunc, window),
        check_composition(space, D, p, trunc, window),
        check_unitarity(space, D, p, trunc, window),
        check_equivariance(space, D, p, trunc, window),
        check_against_oracle(space, D, p, trunc, window),
    ]
    if space.kind == "Circle" and space.N == 1:
        results.append(check_gauge(space, D, p))
    return results


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
