"""Command-line interface: inversion time series, saddle trajectories,
characteristic times, and the acceptance self-test.

Output is a deterministic CSV (``# key=value`` metadata lines, header row,
17-significant-digit values, LF endings) or an equivalent JSON document.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .contour import inversion_contour_detuned, inversion_contour_resonant
from .envelopes import collapse_detuned, collapse_resonant, revival_detuned, revival_resonant
from .exact import (
    TIME_UNITS,
    ModelParams,
    inversion_exact_grid,
    make_poisson,
    static_part,
    static_part_estimate,
)
from .exceptions import InvalidParameterError, JcsumError
from .saddle import crossing_times, inversion_saddle_grid, revival_times, trace_trajectory

__all__ = ["RunConfig", "cmd_inversion", "cmd_trajectory", "cmd_times", "cmd_selftest", "main"]

_METHODS = ("exact", "contour", "saddle", "collapse", "revival")


@dataclass
class RunConfig:
    """Validated options shared by the data-producing subcommands."""

    alpha: float = 5.0
    nu: float = 0.0
    methods: tuple = ("exact",)
    branches: tuple = (0, 1, 2, 3)
    t_start: float = 0.0
    t_stop: float = 100.0
    t_count: int = 1001
    unit: str = "lambda-t"
    fmt: str = "csv"
    out: str | None = None
    policy: str = "sum"
    static_mode: str = "exact"
    tolerance_scale: float = 1.0
    criteria: tuple | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise InvalidParameterError("--alpha must be > 0")
        if self.nu < 0:
            raise InvalidParameterError("--nu must be >= 0")
        bad = [m for m in self.methods if m not in _METHODS]
        if bad:
            raise InvalidParameterError(f"unknown methods {bad}; choose from {_METHODS}")
        if not self.methods:
            raise InvalidParameterError("at least one method is required")
        if self.t_count < 2:
            raise InvalidParameterError("--t-count must be >= 2")
        if not self.t_start < self.t_stop:
            raise InvalidParameterError("--t-start must be < --t-stop")
        if self.unit not in TIME_UNITS:
            raise InvalidParameterError(f"--unit must be one of {TIME_UNITS}")
        if self.static_mode not in ("exact", "minus-nu", "none"):
            raise InvalidParameterError("--static-part must be exact, minus-nu or none")

    @property
    def params(self) -> ModelParams:
        return ModelParams(alpha=self.alpha, nu=self.nu, time_unit=self.unit)

    @property
    def period(self) -> float:
        """Revival period T = 2 pi |alpha| (1+nu)^{1/2} in lambda-t."""
        return 2.0 * math.pi * self.alpha * math.sqrt(1.0 + self.nu)

    def to_lambda_t(self, x: np.ndarray) -> np.ndarray:
        if self.unit == "lambda-t":
            return x
        if self.unit == "t-over-alpha":
            return x * self.alpha
        return x * self.period

    def grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_stop, self.t_count)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_table(config: RunConfig, meta: dict, header: list, rows, stream):
    if config.fmt == "csv":
        for key, value in meta.items():
            stream.write(f"# {key}={value}\n")
        stream.write(",".join(header) + "\n")
        for row in rows:
            stream.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        doc = {
            "meta": meta,
            "columns": header,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        json.dump(doc, stream, indent=1, sort_keys=True)
        stream.write("\n")


def _emit(config: RunConfig, meta: dict, header: list, rows) -> int:
    if config.out:
        with open(config.out, "w", newline="") as fh:
            _write_table(config, meta, header, rows, fh)
    else:
        _write_table(config, meta, header, rows, sys.stdout)
    return 0


def _base_meta(config: RunConfig, command: str) -> dict:
    return {
        "generator": f"jcsum {__version__}",
        "command": command,
        "alpha": _fmt(config.alpha),
        "nu": _fmt(config.nu),
        "unit": config.unit,
        "t-start": _fmt(config.t_start),
        "t-stop": _fmt(config.t_stop),
        "t-count": config.t_count,
    }


def _static_value(config: RunConfig) -> float:
    """Constant added to the approximate detuned methods, per --static-part."""
    if config.nu == 0.0 or config.static_mode == "none":
        return 0.0
    if config.static_mode == "minus-nu":
        return static_part_estimate(config.alpha, config.params.mu)
    return static_part(config.alpha, config.params.mu)


def cmd_inversion(config: RunConfig) -> int:
    t_unit = config.grid()
    t = config.to_lambda_t(t_unit)
    params = config.params
    sp = _static_value(config)
    header = ["time"]
    columns = [t_unit]

    for method in config.methods:
        if method == "exact":
            dist = make_poisson(config.alpha, 1e-16)
            header.append("exact")
            columns.append(inversion_exact_grid(dist, params, t))
        elif method == "contour":
            if config.nu == 0.0:
                vals = [inversion_contour_resonant(config.alpha, x) for x in t]
            else:
                vals = [inversion_contour_detuned(params, x) + (sp if x > 0 else 0.0) for x in t]
            header.append("contour")
            columns.append(np.asarray(vals))
        elif method == "saddle":
            series = inversion_saddle_grid(params, t, list(config.branches), policy=config.policy)
            header.append("saddle")
            columns.append(np.asarray(series.values["saddle"]) + sp)
            for k in sorted(series.branch_contributions):
                header.append(f"saddle_k{k}")
                columns.append(np.asarray(series.branch_contributions[k]))
        elif method == "collapse":
            if config.nu == 0.0:
                vals = [collapse_resonant(config.alpha, x) for x in t]
            else:
                vals = [collapse_detuned(config.alpha, config.nu, x) + sp for x in t]
            header.append("collapse")
            columns.append(np.asarray(vals))
        elif method == "revival":
            n_list = [k for k in config.branches if k >= 1] or [1]
            if config.nu == 0.0:
                vals = [sum(revival_resonant(config.alpha, n, x) for n in n_list) for x in t]
            else:
                vals = [
                    sum(revival_detuned(config.alpha, config.nu, n, x) for n in n_list) + sp
                    for x in t
                ]
            header.append("revival")
            columns.append(np.asarray(vals))

    meta = _base_meta(config, "inversion")
    meta["methods"] = ",".join(config.methods)
    meta["branches"] = ",".join(str(k) for k in config.branches)
    meta["policy"] = config.policy
    meta["static-part"] = config.static_mode
    meta["static-value"] = _fmt(sp)
    rows = np.column_stack(columns)
    return _emit(config, meta, header, rows)


def cmd_trajectory(config: RunConfig) -> int:
    """Per-branch saddle trajectories; the time grid is read as tau directly."""
    lo = max(config.t_start, 1e-6)
    tau = np.geomspace(math.sqrt(lo), math.sqrt(config.t_stop), config.t_count) ** 2
    header = ["branch", "tau", "re_F", "im_F", "re_phi", "im_phi"]
    rows = []
    for k in config.branches:
        traj = trace_trajectory(k, config.nu, tau)
        for i in range(len(tau)):
            rows.append(
                (k, tau[i], traj.F[i].real, traj.F[i].imag, traj.phi[i].real, traj.phi[i].imag)
            )
    meta = _base_meta(config, "trajectory")
    meta["branches"] = ",".join(str(k) for k in config.branches)
    meta["grid"] = "tau (geometric in tau^1/2)"
    return _emit(config, meta, header, rows)


def cmd_times(config: RunConfig) -> int:
    n_max = max([k for k in config.branches if k >= 1] or [3])
    scale = {"lambda-t": 1.0, "t-over-alpha": 1.0 / config.alpha, "t-over-T": 1.0 / config.period}[
        config.unit
    ]
    t_rev = revival_times(config.alpha, config.nu, n_max)
    header = ["n", "revival_time", "crossing_formula", "crossing_refined"]
    crossings = {c.n: c for c in crossing_times(config.alpha, n_max)} if config.nu == 0.0 else {}
    rows = []
    for n in range(1, n_max + 1):
        c = crossings.get(n)
        rows.append(
            (
                n,
                t_rev[n - 1] * scale,
                (c.formula * scale) if c else math.nan,
                (c.refined * scale) if c else math.nan,
            )
        )
    meta = _base_meta(config, "times")
    # collapse envelope std in lambda-t is (1+nu)^{1/2}
    meta["collapse-width"] = _fmt(math.sqrt(1.0 + config.nu) * scale)
    return _emit(config, meta, header, rows)


def cmd_selftest(config: RunConfig) -> int:
    from .acceptance import run_criteria

    numbers = set(config.criteria) if config.criteria else None
    results = run_criteria(numbers, tolerance_scale=config.tolerance_scale)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failed += not r.passed
        print(f"[{status}] {r.number:2d}. {r.name}")
        print(f"        measured: {r.measured}")
        print(f"        required: {r.tolerance}   ({r.seconds:.2f}s)")
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 1 if failed else 0


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="jcsum",
        description="Jaynes-Cummings collapse and revival by exact sum, "
        "contour quadrature and saddle-point asymptotics.",
    )
    parser.add_argument("--version", action="version", version=f"jcsum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file with defaults; flags override it")
        p.add_argument("--alpha", type=float, help="coherent amplitude |alpha|")
        p.add_argument("--nu", type=float, help="relative detuning mu/alpha^2")
        p.add_argument("--branches", help="comma-separated branch labels, e.g. 0,1,2")
        p.add_argument("--t-start", type=float, dest="t_start")
        p.add_argument("--t-stop", type=float, dest="t_stop")
        p.add_argument("--t-count", type=int, dest="t_count")
        p.add_argument("--unit", choices=TIME_UNITS)
        p.add_argument("--format", choices=("csv", "json"), dest="fmt")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--policy", choices=("sum", "max"))
        p.add_argument(
            "--static-part", choices=("exact", "minus-nu", "none"), dest="static_mode",
            help="constant added to approximate detuned curves",
        )

    p_inv = sub.add_parser("inversion", help="atomic inversion time series")
    add_common(p_inv)
    p_inv.add_argument("--methods", help="comma-separated subset of " + ",".join(_METHODS))

    p_traj = sub.add_parser("trajectory", help="saddle trajectories (grid read as tau)")
    add_common(p_traj)

    p_times = sub.add_parser("times", help="revival and crossing times")
    add_common(p_times)

    p_self = sub.add_parser("selftest", help="run the acceptance suite")
    add_common(p_self)
    p_self.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    p_self.add_argument(
        "--tolerance-scale", type=float, dest="tolerance_scale",
        help="multiply all tolerances (negative-control hook)",
    )

    return parser.parse_args(argv)


def _build_config(args) -> RunConfig:
    settings = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            settings.update(json.load(fh))
    for key in (
        "alpha", "nu", "t_start", "t_stop", "t_count", "unit", "fmt", "out",
        "policy", "static_mode", "tolerance_scale",
    ):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    for key, cast in (("methods", str), ("branches", int), ("criteria", int)):
        raw = getattr(args, key, None)
        if raw is not None:
            settings[key] = tuple(cast(tok.strip()) for tok in str(raw).split(",") if tok.strip())
    known = {f.name for f in RunConfig.__dataclass_fields__.values()}
    unknown = set(settings) - {f for f in known}
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**settings)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        config = _build_config(args)
        handler = {
            "inversion": cmd_inversion,
            "trajectory": cmd_trajectory,
            "times": cmd_times,
            "selftest": cmd_selftest,
        }[args.command]
        return handler(config)
    except (JcsumError, OSError, ValueError) as exc:
        print(f"jcsum: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
