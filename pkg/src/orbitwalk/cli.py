"""Command-line surface: JSON-configured runs emitting CSV or JSON tables.

Every run starts from the same default config, merges the user's JSON file
over it, then applies `--set key=value` and the dedicated flags.  The fully
resolved config is echoed in the output header so any emitted table can be
reproduced from its own file.  Exit codes: 0 success, 2 config error,
3 convergence failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys

import numpy as np

from .errors import ConfigError, DomainError, RepresentationError, TruncationError
from .group import OrbitSpaceSpec, Representation, fundamental_domain
from .kernels import CoinSpec, KernelParams, hadamard_coin
from .orbit import (
    TruncationPolicy,
    orbit_coined_kernel,
    orbit_density_matrix,
    orbit_kernel,
    orbit_resolvent,
    partition_function,
)
from . import oracle
from .verify import all_passed, run_checks

COMMANDS = ("evolve", "resolvent", "thermal", "dos", "coined", "verify")

DEFAULT_CONFIG = {
    "space": {"kind": "Circle", "L": 4, "N": 1, "boundary_convention": "Standard"},
    "representation": {"theta": 0.0, "phi": 0.0, "statistics": "Boson"},
    "params": {"omega": 1.0, "tau": 1.0, "beta": 1.0, "energy": [0.4, 0.3]},
    "truncation": {"tol": 1e-14, "max_shell": 64, "consecutive_quiet_shells": 2},
    "initial_state": [[1, 1.0, 0.0]],
    "window": None,
    "dos": {"eta": 0.05, "e_min": None, "e_max": None, "points": 201},
    "coined": {"steps": 4, "coin": "hadamard", "source": 1},
    "output": {"format": "csv", "path": None, "precision": 12},
}

_REPLACED_WHOLESALE = ("initial_state", "window", "energy", "coin")


def _merge(defaults: dict, user: dict, prefix: str = "") -> dict:
    out = copy.deepcopy(defaults)
    for key, value in user.items():
        path = f"{prefix}{key}"
        if key not in defaults:
            raise ConfigError(f"unknown config key {path!r}")
        if isinstance(defaults[key], dict) and key not in _REPLACED_WHOLESALE:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {path!r} must be an object")
            out[key] = _merge(defaults[key], value, prefix=f"{path}.")
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(path, encoding="utf-8") as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    user.pop("command", None)  # the subcommand on the command line wins
    return _merge(DEFAULT_CONFIG, user)


def apply_set(config: dict, assignment: str) -> None:
    key, sep, raw = assignment.partition("=")
    if not sep or not key:
        raise ConfigError(f"--set needs key=value, got {assignment!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ConfigError(f"unknown config key {key!r}")
        node = node[part]
    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError(f"unknown config key {key!r}")
    node[leaf] = value


def apply_flags(config: dict, args: argparse.Namespace) -> None:
    for assignment in args.set or []:
        apply_set(config, assignment)
    if args.tolerance is not None:
        config["truncation"]["tol"] = args.tolerance
    if args.max_shell is not None:
        config["truncation"]["max_shell"] = args.max_shell
    if args.window is not None:
        lo, sep, hi = args.window.partition(":")
        if not sep:
            raise ConfigError("--window needs the form lo:hi")
        try:
            config["window"] = [int(lo), int(hi)]
        except ValueError as exc:
            raise ConfigError(f"--window bounds must be integers: {args.window!r}") from exc
    if args.output is not None:
        config["output"]["path"] = args.output
    if args.format is not None:
        config["output"]["format"] = args.format
    if args.precision is not None:
        config["output"]["precision"] = args.precision


class ResolvedRun:
    """Typed view of a fully merged config."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        try:
            self.space = OrbitSpaceSpec(**config["space"])
            self.representation = Representation(**config["representation"])
            raw = config["params"]
            energy = raw["energy"]
            if not (isinstance(energy, (list, tuple)) and len(energy) == 2):
                raise ConfigError("params.energy must be [re, im]")
            self.params = KernelParams(
                omega=float(raw["omega"]),
                tau=float(raw["tau"]),
                beta=float(raw["beta"]),
                energy=complex(float(energy[0]), float(energy[1])),
            )
            self.truncation = TruncationPolicy(**config["truncation"])
        except (DomainError, RepresentationError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        self.window = self._resolve_window(config["window"])
        self.output_format = config["output"]["format"]
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.output_format!r}")
        self.precision = config["output"]["precision"]
        if not isinstance(self.precision, int) or not 1 <= self.precision <= 17:
            raise ConfigError("output precision must be an integer in 1..17")
        self.path = config["output"]["path"]
        self.initial_state = self._resolve_state(config["initial_state"])
        self._validate_for_command()

    def _resolve_window(self, raw):
        if raw is None:
            return None
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            raise ConfigError("window must be [lo, hi]")
        lo, hi = int(raw[0]), int(raw[1])
        if lo > hi:
            raise ConfigError(f"window {raw} is empty")
        return lo, hi

    def _resolve_state(self, raw) -> dict:
        if not isinstance(raw, list) or not raw:
            raise ConfigError("initial_state must be a non-empty list of [point, re, im]")
        state = {}
        for entry in raw:
            if not (isinstance(entry, list) and len(entry) == 3):
                raise ConfigError(f"initial_state entry {entry!r} is not [point, re, im]")
            point, re_part, im_part = entry
            if isinstance(point, list):
                point = tuple(int(c) for c in point)
            else:
                point = (int(point),)
            state[point] = complex(float(re_part), float(im_part))
        return state

    def _validate_for_command(self):
        infinite = self.space.kind in ("Line", "HalfLine")
        if infinite and self.window is None and self.command in ("evolve", "resolvent", "dos", "verify"):
            raise ConfigError(f"{self.space.kind} runs need an explicit window (lo:hi)")
        if self.command == "thermal" and infinite:
            raise ConfigError("thermal runs need a finite space")
        if self.command == "coined" and (self.space.kind != "Circle" or self.space.N != 1):
            raise ConfigError("coined runs need a single-walker Circle space")
        if self.command == "resolvent" and self.params.energy.imag <= 0.0:
            raise ConfigError("resolvent energy must have positive imaginary part")
        if self.command in ("evolve",):
            for point in self.initial_state:
                if len(point) != self.space.N:
                    raise ConfigError(f"initial-state point {point} has wrong walker count")

    def domain_points(self) -> list:
        if self.space.kind in ("Circle", "Interval"):
            return fundamental_domain(self.space)
        return fundamental_domain(self.space, self.window)

    def coin(self) -> CoinSpec:
        raw = self.config["coined"]["coin"]
        if raw == "hadamard":
            return hadamard_coin()
        if isinstance(raw, dict):
            try:
                matrix = np.array(
                    [[complex(c[0], c[1]) for c in row] for row in raw["matrix"]]
                )
                return CoinSpec(matrix.shape[0], matrix, tuple(int(s) for s in raw["shifts"]))
            except (KeyError, TypeError, ValueError, DomainError) as exc:
                raise ConfigError(f"bad custom coin: {exc}") from exc
        raise ConfigError(f"unknown coin {raw!r}")


# -- table assembly -------------------------------------------------------


class Table:
    """Column-ordered rows of already-stringified cells."""

    def __init__(self, columns: list[str]):
        self.columns = columns
        self.rows: list[list[str]] = []

    def add(self, *cells):
        if len(cells) != len(self.columns):
            raise ValueError("row width mismatch")
        self.rows.append([str(c) for c in cells])


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}e}"


def _site_columns(prefix: str, n: int) -> list[str]:
    return [prefix] if n == 1 else [f"{prefix}_{i + 1}" for i in range(n)]


def _echoed_config(config: dict) -> dict:
    """The config as echoed into output: the destination path is not content."""
    echoed = copy.deepcopy(config)
    echoed["output"]["path"] = None
    return echoed


def _canonical(config: dict) -> str:
    return json.dumps(_echoed_config(config), sort_keys=True, separators=(",", ":"))


def emit(run: ResolvedRun, table: Table, meta: dict) -> str:
    if run.output_format == "csv":
        lines = [f"# orbitwalk {run.command}", f"# config {_canonical(run.config)}"]
        for key in sorted(meta):
            if key == "config":
                continue
            lines.append(f"# {key} {json.dumps(meta[key], sort_keys=True)}")
        lines.append(",".join(table.columns))
        lines.extend(",".join(row) for row in table.rows)
        return "\n".join(lines) + "\n"
    columns = {name: [] for name in table.columns}
    for row in table.rows:
        for name, cell in zip(table.columns, row):
            if cell == "":
                columns[name].append(None)
            else:
                try:
                    columns[name].append(json.loads(cell))
                except json.JSONDecodeError:
                    columns[name].append(cell)
    payload = {
        "command": run.command,
        "meta": {"config": _echoed_config(run.config), **meta},
        "columns": columns,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- command handlers ------------------------------------------------------


def run_evolve(run: ResolvedRun) -> tuple[Table, dict, int]:
    table = Table(_site_columns("site", run.space.N) + ["re_amplitude", "im_amplitude", "probability"])
    norm = sum(abs(a) ** 2 for a in run.initial_state.values())
    if abs(norm - 1.0) > 1e-12:
        print(f"warning: initial state norm {norm:.6f} differs from 1", file=sys.stderr)
    shells = 0
    total = 0.0
    for target in run.domain_points():
        amp = 0j
        for source, weight in run.initial_state.items():
            rep = orbit_kernel(run.space, run.representation, target, source, run.params, run.truncation)
            amp += rep.value * weight
            shells = max(shells, rep.shells_used)
        prob = abs(amp) ** 2
        total += prob
        table.add(
            *[str(c) for c in target],
            _fmt(amp.real, run.precision),
            _fmt(amp.imag, run.precision),
            _fmt(prob, run.precision),
        )
    table.add(*["total"] + [""] * (run.space.N - 1), "", "", _fmt(total, run.precision))
    return table, {"shells_used": shells, "total_probability": total}, 0


def run_resolvent(run: ResolvedRun) -> tuple[Table, dict, int]:
    table = Table(
        _site_columns("x", run.space.N) + _site_columns("y", run.space.N) + ["re", "im"]
    )
    shells = 0
    points = run.domain_points()
    for x in points:
        for y in points:
            rep = orbit_resolvent(run.space, run.representation, x, y, run.params, run.truncation)
            shells = max(shells, rep.shells_used)
            table.add(
                *[str(c) for c in x],
                *[str(c) for c in y],
                _fmt(rep.value.real, run.precision),
                _fmt(rep.value.imag, run.precision),
            )
    return table, {"shells_used": shells}, 0


def run_thermal(run: ResolvedRun) -> tuple[Table, dict, int]:
    z = partition_function(run.space, run.representation, run.params, run.truncation)
    table = Table(
        _site_columns("x", run.space.N) + _site_columns("y", run.space.N) + ["re_density", "im_density"]
    )
    points = run.domain_points()
    for x in points:
        for y in points:
            value = orbit_density_matrix(run.space, run.representation, x, y, run.params, run.truncation)
            table.add(
                *[str(c) for c in x],
                *[str(c) for c in y],
                _fmt(value.real, run.precision),
                _fmt(value.imag, run.precision),
            )
    width = 2 * run.space.N
    table.add(*["Z"] + [""] * (width - 1), _fmt(z, run.precision), "")
    return table, {"partition_function": z}, 0


def run_dos(run: ResolvedRun) -> tuple[Table, dict, int]:
    section = run.config["dos"]
    eta = float(section["eta"])
    if not 1e-6 <= eta <= 1.0:
        raise ConfigError(f"dos.eta must lie in [1e-6, 1], got {eta}")
    # Default sweep: band [-omega, omega] plus 60*eta of margin so the
    # Lorentzian tails carry < 1% of the weight per edge state.
    reach = run.params.omega + 60.0 * eta
    e_min = float(section["e_min"]) if section["e_min"] is not None else -reach
    e_max = float(section["e_max"]) if section["e_max"] is not None else reach
    points = int(section["points"])
    if points < 2 or e_max <= e_min:
        raise ConfigError("dos sweep needs points >= 2 and e_max > e_min")
    sites = run.domain_points()
    labels = ["_".join(str(c) for c in pt) for pt in sites]
    table = Table(["energy"] + [f"dos_{lab}" for lab in labels])
    energies = [e_min + (e_max - e_min) * k / (points - 1) for k in range(points)]
    values = np.empty((points, len(sites)))
    shells = 0
    for row, e_real in enumerate(energies):
        p = KernelParams(omega=run.params.omega, energy=complex(e_real, eta))
        for col, site in enumerate(sites):
            rep = orbit_resolvent(run.space, run.representation, site, site, p, run.truncation)
            shells = max(shells, rep.shells_used)
            values[row, col] = -rep.value.imag / math.pi
        table.add(_fmt(e_real, run.precision), *(_fmt(v, run.precision) for v in values[row]))
    steps = np.diff(np.asarray(energies))[:, None]
    integrals = 0.5 * np.sum(steps * (values[1:] + values[:-1]), axis=0)
    table.add("total", *(_fmt(v, run.precision) for v in integrals))
    return table, {"shells_used": shells, "integrals": [float(_fmt(v, 10)) for v in integrals]}, 0


def run_coined(run: ResolvedRun) -> tuple[Table, dict, int]:
    section = run.config["coined"]
    steps = int(section["steps"])
    source = int(section["source"])
    coin = run.coin()
    L = run.space.L
    if not 1 <= source <= L:
        raise ConfigError(f"coined.source must lie in 1..{L}")
    power = oracle.coined_circle_power(L, run.representation.theta, coin, abs(steps))
    if steps < 0:
        power = power.conj().T
    table = Table(["x", "y", "i", "j", "re", "im", "deviation", "probability"])
    worst = 0.0
    for x in range(1, L + 1):
        for y in range(1, L + 1):
            block = orbit_coined_kernel(run.space, run.representation, steps, x, y, coin, run.truncation)
            want = oracle.coined_circle_block(power, coin.d, x, y)
            for i in range(coin.d):
                for j in range(coin.d):
                    dev = abs(block[i, j] - want[i, j])
                    worst = max(worst, dev)
                    table.add(
                        x, y, i, j,
                        _fmt(block[i, j].real, run.precision),
                        _fmt(block[i, j].imag, run.precision),
                        _fmt(dev, run.precision),
                        "",
                    )
    coin_state = np.zeros(coin.d, dtype=complex)
    coin_state[0] = 1.0
    total = 0.0
    dist_rows = []
    for x in range(1, L + 1):
        block = orbit_coined_kernel(run.space, run.representation, steps, x, source, coin, run.truncation)
        prob = float(np.sum(np.abs(block @ coin_state) ** 2))
        total += prob
        dist_rows.append((x, prob))
    for x, prob in dist_rows:
        table.add(x, "", "", "", "", "", "", _fmt(prob, run.precision))
    table.add("total", "", "", "", "", "", "", _fmt(total, run.precision))
    return table, {"deviations": {"max_vs_matrix_power": float(_fmt(worst, 10))}}, 0


def run_verify(run: ResolvedRun) -> tuple[Table, dict, int]:
    results = run_checks(
        run.space, run.representation, run.params, run.truncation, window=run.window
    )
    table = Table(["check", "passed", "deviation", "tolerance", "detail"])
    deviations = {}
    for r in results:
        table.add(
            r.name,
            "pass" if r.passed else "fail",
            _fmt(r.deviation, run.precision),
            _fmt(r.tolerance, 2),
            r.detail,
        )
        deviations[r.name] = float(_fmt(r.deviation, 10))
    ok = all_passed(results)
    return table, {"deviations": deviations, "all_passed": ok}, 0 if ok else 4


HANDLERS = {
    "evolve": run_evolve,
    "resolvent": run_resolvent,
    "thermal": run_thermal,
    "dos": run_dos,
    "coined": run_coined,
    "verify": run_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitwalk",
        description="Lattice walk kernels on quotient spaces: evolve states, "
        "compute resolvents, thermal states, densities of states, coined steps, "
        "and run the self-check suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(COMMANDS))
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one config field (dotted path, JSON value)")
        p.add_argument("--tolerance", type=float, default=None, help="truncation tolerance")
        p.add_argument("--max-shell", type=int, default=None, help="shell cap for image sums")
        p.add_argument("--window", default=None, metavar="LO:HI",
                       help="site window for infinite spaces")
        p.add_argument("--output", default=None, help="write to this path instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--precision", type=int, default=None, help="significant digits")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        apply_flags(config, args)
        run = ResolvedRun(args.command, config)
        table, meta, code = HANDLERS[args.command](run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RepresentationError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3
    text = emit(run, table, meta)
    if run.path is None:
        sys.stdout.write(text)
    else:
        with open(run.path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
