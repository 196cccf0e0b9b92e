"""Timings for the Bessel core: compiled extension vs pure Python.

Run as `python benchmarks/bench_core.py`.  Each workload is timed over
enough repetitions to be stable on a laptop; the table reports per-call
microseconds and the compiled speedup.  The orbit-sum row times the full
image-sum engine under whichever backend is active for this process
(select it with ORBITWALK_BACKEND=pure|compiled).
"""

from __future__ import annotations

import math
import timeit

from orbitwalk import BACKEND_NAME
from orbitwalk import _core_py
from orbitwalk.group import OrbitSpaceSpec, Representation
from orbitwalk.kernels import KernelParams
from orbitwalk.orbit import orbit_kernel

try:
    from orbitwalk import _core
except ImportError:
    _core = None

WORKLOADS = [
    ("bessel_j(3, 2.5)", lambda m: m.bessel_j(3, 2.5), 20000),
    ("bessel_j(15, 40.0)", lambda m: m.bessel_j(15, 40.0), 20000),
    ("bessel_i(4, 1.8)", lambda m: m.bessel_i(4, 1.8), 20000),
    ("j_row(60, 5.0)", lambda m: m.j_row(60, 5.0), 5000),
    ("j_row(140, 90.0)", lambda m: m.j_row(140, 90.0), 2000),
    ("i_row(60, 2.0)", lambda m: m.i_row(60, 2.0), 5000),
]


def per_call_us(fn, repeats: int) -> float:
    best = min(timeit.repeat(fn, number=repeats, repeat=3))
    return 1e6 * best / repeats


def bench_orbit_sum() -> float:
    space = OrbitSpaceSpec("Circle", 6)
    D = Representation(theta=math.pi / 2)
    p = KernelParams(omega=1.0, tau=5.0)

    def sweep():
        for x in range(1, 7):
            for y in range(1, 7):
                orbit_kernel(space, D, x, y, p)

    return per_call_us(sweep, 20)


def main() -> None:
    rows = []
    for label, call, repeats in WORKLOADS:
        pure = per_call_us(lambda: call(_core_py), repeats)
        if _core is None:
            rows.append((label, pure, None, None))
        else:
            fast = per_call_us(lambda: call(_core), repeats)
            rows.append((label, pure, fast, pure / fast))

    width = max(len(r[0]) for r in rows) + 2
    print(f"{'workload':<{width}}{'pure (us)':>12}{'compiled (us)':>15}{'speedup':>10}")
    for label, pure, fast, ratio in rows:
        if fast is None:
            print(f"{label:<{width}}{pure:>12.2f}{'absent':>15}{'-':>10}")
        else:
            print(f"{label:<{width}}{pure:>12.2f}{fast:>15.2f}{ratio:>9.1f}x")

    sweep_us = bench_orbit_sum()
    print(f"\norbit kernel 6x6 sweep (omega*tau=5, {BACKEND_NAME} backend): "
          f"{sweep_us / 1000.0:.2f} ms")
    if _core is None:
        print("compiled extension not built; only the pure-Python core was timed")


if __name__ == "__main__":
    main()
