"""Command-line front end: simulation, verification scans, and GOF testing.

Subcommands: simulate, identity-check, rate-scan, covariance-check,
limit-law, gof-test.  Flag values override a key=value config file, which
overrides the MSPACINGS_SEED environment variable (seed only) and the built-in
defaults.  Reports are written atomically (temp file + rename) as CSV or JSON,
with a matplotlib figure rendered next to the report unless --no-figures is
given.  Exit status: 0 pass, 1 a check failed or the GOF test rejected,
2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gamma import GammaKernel
from .gaussian import LimitProcessSpec, limit_V, limit_W, LimitProcessSampler, simulate_bridge
from .process import ProcessPath, t_grid, x_grid
from .pyke import (
    alpha_via_representation,
    beta_process,
    gamma_via_representation,
    general_n_empirical,
    kappa_process,
    sample_block,
    uniform_quantile_process,
)
from .rates import ExperimentPlan, run_experiment, _map_replications
from .spacings import SortedUniformSample, alpha_process, compute_spacings, gamma_process
from .streams import substream

__all__ = ["RunConfig", "GofResult", "gof_test", "run", "main", "IDENTITY_TOLERANCE"]

DEFAULT_SEED = 1729
ENV_SEED = "MSPACINGS_SEED"
IDENTITY_TOLERANCE = 1e-10

# stream ids disjoint from the experiment kinds in rates
_SIM_STREAM = 100
_GOF_STREAM = 101
_IDCHECK_STREAM = 102

COMMANDS = ("simulate", "identity-check", "rate-scan", "covariance-check", "limit-law", "gof-test")
_PROCESS_CHOICES = ("alpha", "gamma", "beta", "kappa", "uniform-quantile", "bridge", "limit-w", "limit-v")
_RATE_KIND_MAP = {
    "tn": "rate_tn",
    "rn": "rate_rn",
    "kappa-un": "rate_kappa_un",
    "finite-n": "finite_n_law",
}
_LIMIT_KIND_MAP = {"alpha": "limit_law_alpha", "gamma": "limit_law_gamma"}

_DEFAULTS = {
    "m": 2,
    "n": 1000,
    "a": 0.9,
    "grid": 512,
    "seed": None,
    "format": "json",
    "workers": 1,
    "figures": True,
    "level": 0.05,
    "process": "alpha",
}
_LADDER_DEFAULTS = {
    "rate-scan": (128, 256, 512, 1024, 2048, 4096, 8192),
    "rate-scan/finite-n": (10, 100, 1000),
    # reaches down to N = 8: law distances are resolvable there at moderate
    # replication counts, which gives the decreasing-trend check real power
    "limit-law": (8, 32, 128, 512, 2048, 4096),
    "covariance-check": (4096,),
    "identity-check": (3, 10, 100),
}
_REPS_DEFAULTS = {
    "rate-scan": 400,
    "rate-scan/finite-n": 20000,
    "limit-law": 2000,
    "covariance-check": 2000,
    "identity-check": 100,
    "gof-test": 999,
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command plus every knob after precedence merging."""

    command: str
    m: int = 2
    n: int | None = None
    n_ladder: tuple[int, ...] | None = None
    a: float = 0.9
    grid: int = 512
    reps: int | None = None
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "json"
    data: str | None = None
    level: float = 0.05
    kind: str | None = None
    process: str = "alpha"
    workers: int = 1
    figures: bool = True
    given: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0.0 < self.a <= 1.0:
            raise ValueError("a must be in (0, 1]")
        if self.grid < 2:
            raise ValueError("grid resolution must be at least 2")
        if self.reps is not None and self.reps < 1:
            raise ValueError("reps must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must be in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.command == "gof-test" and not self.data:
            raise ValueError("gof-test requires --data")
        if self.command == "simulate" and self.process not in _PROCESS_CHOICES:
            raise ValueError(f"unknown process {self.process!r}")


@dataclass(frozen=True)
class GofResult:
    """Outcome of the spacings goodness-of-fit test against uniformity."""

    statistic: float
    p_value: float
    null_reps: int
    level: float
    reject: bool
    m: int
    a: float
    n: int
    count: int
    seed: int
    null_quantiles: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": "gof_test",
            "statistic": self.statistic,
            "p_value": self.p_value,
            "null_reps": self.null_reps,
            "level": self.level,
            "reject": self.reject,
            "m": self.m,
            "a": self.a,
            "n": self.n,
            "N": self.count,
            "seed": self.seed,
            "null_quantiles": list(self.null_quantiles),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        d = {k: v for k, v in self.to_dict().items() if not isinstance(v, (list, dict))}
        keys = list(d.keys())
        return ",".join(keys) + "\n" + ",".join(_cell(d[k]) for k in keys) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def mc_p_value(null_sups: np.ndarray, statistic: float) -> float:
    """Finite-sample-valid Monte Carlo p-value (r + 1) / (R + 1); never zero."""
    r = int(np.sum(np.asarray(null_sups, dtype=float) >= statistic))
    return (r + 1) / (null_sups.size + 1)


def gof_test(
    data,
    m: int,
    a: float = 0.9,
    null_reps: int = 999,
    seed: int = DEFAULT_SEED,
    level: float = 0.05,
    grid_resolution: int = 512,
    workers: int = 1,
) -> GofResult:
    """Test whether data on [0, 1] looks uniform through its m-spacings.

    The statistic is the sup of the empirical spacings process over
    [0, Q(a)]; its null distribution is simulated from the limit process, so
    no tables ship with the package.  Endpoints 0 and 1 are adjoined to the
    data internally, giving sample-size parameter n = len(data) + 1.
    """
    values = np.asarray(data, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("data must be a nonempty 1-d sequence")
    if np.any(~np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise ValueError("data values must lie in [0, 1]")
    n = values.size + 1
    if n < 2 * m:
        raise ValueError(f"need n = len(data) + 1 >= 2m, got n={n}, m={m}")
    kernel = GammaKernel(m)
    sample = SortedUniformSample.from_interior(values)
    spac = compute_spacings(sample, m)
    grid = x_grid(kernel, a, grid_resolution)
    statistic = alpha_process(spac, grid, kernel).sup_norm()

    spec = LimitProcessSpec(kernel=kernel, side="empirical")
    sampler = LimitProcessSampler(spec, x_points=grid)

    def null_stat(rng: np.random.Generator) -> float:
        return float(np.max(np.abs(sampler.sample(rng)["v_star"])))

    null = np.asarray(
        _map_replications(null_reps, null_stat, seed=seed, key=(_GOF_STREAM, 0, 0), workers=workers)
    )
    p_value = mc_p_value(null, statistic)
    quantiles = tuple(float(q) for q in np.quantile(null, (0.05, 0.25, 0.5, 0.75, 0.95)))
    return GofResult(
        statistic=float(statistic),
        p_value=float(p_value),
        null_reps=int(null_reps),
        level=float(level),
        reject=bool(p_value <= level),
        m=int(m),
        a=float(a),
        n=int(n),
        count=int(n // m),
        seed=int(seed),
        null_quantiles=quantiles,
    )


# -- identity check -------------------------------------------------------------


def identity_check(
    ms: tuple[int, ...] = (1, 2, 3),
    counts: tuple[int, ...] = (3, 10, 100),
    seeds: int = 100,
    a: float = 0.9,
    grid_resolution: int = 128,
    seed: int = DEFAULT_SEED,
) -> dict:
    """Exercise the exact reassembly identities over many draws.

    For every (m, N, seed) the assembled and direct processes must agree
    pointwise to 1e-10: empirical and quantile side at n = m N, and the
    padded-ecdf empirical construction at n not a multiple of m.
    """
    cases = []
    worst = 0.0
    case_idx = 0
    for m in ms:
        kernel = GammaKernel(m)
        for n_count in counts:
            xs = x_grid(kernel, a, grid_resolution)
            ts = t_grid(a, grid_resolution)
            extra_ns = [m * n_count + r for r in {1, max(1, m - 1)} if r % m != 0 or m == 1]
            for s in range(seeds):
                rng = substream(seed, _IDCHECK_STREAM, case_idx, s)
                block = sample_block(m * n_count, m, rng)
                assembled, direct = alpha_via_representation(block, xs, kernel)
                d_alpha = float(np.max(np.abs(assembled.values - direct.values)))
                assembled, direct = gamma_via_representation(block, ts, kernel)
                d_gamma = float(np.max(np.abs(assembled.values - direct.values)))
                d_general = 0.0
                for n_general in extra_ns:
                    gblock = sample_block(n_general, m, substream(seed, _IDCHECK_STREAM, case_idx, s, n_general))
                    assembled, direct = general_n_empirical(gblock, xs, kernel)
                    d_general = max(d_general, float(np.max(np.abs(assembled.values - direct.values))))
                worst = max(worst, d_alpha, d_gamma, d_general)
                if s == 0:
                    cases.append(
                        {
                            "m": int(m),
                            "N": int(n_count),
                            "alpha_max_diff": d_alpha,
                            "gamma_max_diff": d_gamma,
                            "general_n_max_diff": d_general,
                        }
                    )
            case_idx += 1
    return {
        "kind": "identity_check",
        "tolerance": IDENTITY_TOLERANCE,
        "max_abs_discrepancy": worst,
        "seeds_per_case": int(seeds),
        "sample_cases": cases,
        "passed": bool(worst <= IDENTITY_TOLERANCE),
    }


# -- config file / argument merging ------------------------------------------------


_CONFIG_COERCERS = {
    "m": int,
    "n": int,
    "n_ladder": lambda s: tuple(int(v) for v in str(s).split(",") if v.strip()),
    "a": float,
    "grid": int,
    "reps": int,
    "seed": int,
    "out": str,
    "format": str,
    "data": str,
    "level": float,
    "kind": str,
    "process": str,
    "workers": int,
    "figures": lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
}


def _read_config_file(path: str) -> dict:
    values: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key == "n_ladder" or key == "nladder":
            key = "n_ladder"
        if key not in _CONFIG_COERCERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_COERCERS[key](value.strip())
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values


def _merge(command: str, cli_values: dict, file_values: dict) -> RunConfig:
    merged: dict = {}
    given: list[str] = []
    for key in (
        "m",
        "n",
        "n_ladder",
        "a",
        "grid",
        "reps",
        "seed",
        "out",
        "format",
        "data",
        "level",
        "kind",
        "process",
        "workers",
        "figures",
    ):
        value = cli_values.get(key)
        if value is None:
            value = file_values.get(key)
        if value is not None:
            given.append(key)
        if value is None and key == "seed":
            env = os.environ.get(ENV_SEED)
            if env is not None:
                value = int(env)
        if value is None:
            value = _DEFAULTS.get(key)
        merged[key] = value
    if merged["seed"] is None:
        merged["seed"] = DEFAULT_SEED
    if merged["n_ladder"] is not None:
        merged["n_ladder"] = tuple(int(v) for v in merged["n_ladder"])
    return RunConfig(command=command, given=tuple(given), **merged)


def _parse_ladder(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad ladder {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="spacings order m")
    common.add_argument("--n", type=int, default=None, help="sample size parameter n")
    common.add_argument("--N-ladder", dest="n_ladder", type=_parse_ladder, default=None, help="comma-separated ladder of N (or n) values")
    common.add_argument("--a", type=float, default=None, help="domain fraction in (0, 1]")
    common.add_argument("--grid", type=int, default=None, help="evaluation grid resolution")
    common.add_argument("--reps", type=int, default=None, help="replications (or null draws)")
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--out", type=str, default=None, help="report output path")
    common.add_argument("--format", type=str, choices=("csv", "json"), default=None, help="report format")
    common.add_argument("--config", type=str, default=None, help="key = value config file")
    common.add_argument("--workers", type=int, default=None, help="worker threads (never changes results)")
    common.add_argument("--figures", action=argparse.BooleanOptionalAction, default=None, help="render a figure next to the report")

    parser = argparse.ArgumentParser(prog="mspacings", description="Uniform m-spacings processes: simulation, verification, and testing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[common], help="simulate one process path")
    p_sim.add_argument("--process", type=str, choices=_PROCESS_CHOICES, default=None, help="which path to simulate")

    sub.add_parser("identity-check", parents=[common], help="verify the exact reassembly identities")

    p_rate = sub.add_parser("rate-scan", parents=[common], help="log-log rate regression over an N ladder")
    p_rate.add_argument("--kind", type=str, choices=tuple(_RATE_KIND_MAP), default=None, help="which statistic to scan")

    sub.add_parser("covariance-check", parents=[common], help="empirical vs closed-form limit covariances")

    p_limit = sub.add_parser("limit-law", parents=[common], help="KS distance of sup statistics to the limit laws")
    p_limit.add_argument("--kind", type=str, choices=tuple(_LIMIT_KIND_MAP), default=None, help="empirical (alpha) or quantile (gamma) side")

    p_gof = sub.add_parser("gof-test", parents=[common], help="goodness-of-fit test for uniformity from m-spacings")
    p_gof.add_argument("--data", type=str, default=None, help="input file, one real in [0, 1] per line")
    p_gof.add_argument("--level", type=float, default=None, help="test level")

    return parser


# -- command execution ---------------------------------------------------------------


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _write_outputs(cfg: RunConfig, payload, render) -> None:
    """Write the delimited report, then the figure beside it."""
    if cfg.out is None:
        return
    out = Path(cfg.out)
    text = payload.to_json() if cfg.format == "json" else payload.to_csv()
    _atomic_write(out, text)
    if cfg.figures:
        from . import figures

        render_fn = getattr(figures, render)
        render_fn(payload, out.with_suffix(".png"))


class _DictReport:
    """Minimal serializable wrapper for dict-shaped reports."""

    def __init__(self, payload: dict):
        self.payload = payload

    def to_dict(self) -> dict:
        return self.payload

    def to_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        flat = {k: v for k, v in self.payload.items() if not isinstance(v, (list, dict))}
        keys = list(flat.keys())
        return ",".join(keys) + "\n" + ",".join(_cell(flat[k]) for k in keys) + "\n"


def _run_simulate(cfg: RunConfig) -> tuple[int, ProcessPath]:
    kernel = GammaKernel(cfg.m)
    rng = substream(cfg.seed, _SIM_STREAM, 0)
    n = cfg.n if cfg.n is not None else _DEFAULTS["n"]
    xs = x_grid(kernel, cfg.a, cfg.grid)
    ts = t_grid(cfg.a, cfg.grid)
    if cfg.process == "alpha":
        spac = compute_spacings(SortedUniformSample.draw(n, rng), cfg.m)
        path = alpha_process(spac, xs, kernel)
    elif cfg.process == "gamma":
        spac = compute_spacings(SortedUniformSample.draw(n, rng), cfg.m)
        path = gamma_process(spac.ordered(), ts, kernel)
    elif cfg.process == "beta":
        path = beta_process(sample_block(n, cfg.m, rng), xs, kernel)
    elif cfg.process == "kappa":
        path = kappa_process(sample_block(n, cfg.m, rng), ts, kernel)
    elif cfg.process == "uniform-quantile":
        path = uniform_quantile_process(sample_block(n, cfg.m, rng), ts, kernel)
    elif cfg.process == "bridge":
        path = simulate_bridge(np.linspace(0.0, 1.0, cfg.grid), rng).as_process_path()
    else:
        side = "quantile" if cfg.process == "limit-w" else "empirical"
        spec = LimitProcessSpec(kernel=kernel, side=side)
        sampler = LimitProcessSampler(spec, t_points=ts if side == "quantile" else None, x_points=None if side == "quantile" else xs)
        bridge = sampler.union_bridge(rng)
        path = limit_W(bridge, ts, spec) if side == "quantile" else limit_V(bridge, xs, spec)
    return 0, path


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit status."""
    workers = cfg.workers
    if cfg.command == "simulate":
        status, path = _run_simulate(cfg)
        _write_outputs(cfg, path, "render_path")
        print(f"simulate {cfg.process}: {len(path)} grid points, sup |path| = {path.sup_norm():.6f}")
        return status

    if cfg.command == "identity-check":
        counts = cfg.n_ladder if cfg.n_ladder is not None else _LADDER_DEFAULTS["identity-check"]
        seeds = cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["identity-check"]
        report = identity_check(
            ms=(cfg.m,) if "m" in cfg.given else (1, 2, 3),
            counts=tuple(counts),
            seeds=seeds,
            a=cfg.a,
            grid_resolution=cfg.grid if "grid" in cfg.given else 128,
            seed=cfg.seed,
        )
        wrapped = _DictReport(report)
        _write_outputs(cfg, wrapped, "render_identity")
        print(
            f"identity-check: max discrepancy {report['max_abs_discrepancy']:.3e} "
            f"(tolerance {report['tolerance']:.0e}) -> {'PASS' if report['passed'] else 'FAIL'}"
        )
        return 0 if report["passed"] else 1

    if cfg.command == "gof-test":
        values = _read_data_file(cfg.data)
        result = gof_test(
            values,
            m=cfg.m,
            a=cfg.a,
            null_reps=cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["gof-test"],
            seed=cfg.seed,
            level=cfg.level,
            grid_resolution=cfg.grid,
            workers=workers,
        )
        _write_outputs(cfg, result, "render_gof")
        verdict = "REJECT uniformity" if result.reject else "no rejection"
        print(
            f"gof-test: statistic {result.statistic:.4f}, p-value {result.p_value:.4f} "
            f"({result.null_reps} null draws) -> {verdict} at level {result.level}"
        )
        return 1 if result.reject else 0

    plan = _plan_from_config(cfg)
    report = run_experiment(plan, workers=workers)
    _write_outputs(cfg, report, "render_report")
    print(report.summary())
    if report.passed is None:
        return 0
    return 0 if report.passed else 1


def _plan_from_config(cfg: RunConfig) -> ExperimentPlan:
    if cfg.command == "rate-scan":
        kind_flag = cfg.kind or "tn"
        kind = _RATE_KIND_MAP[kind_flag]
        if kind == "finite_n_law":
            ladder = cfg.n_ladder or _LADDER_DEFAULTS["rate-scan/finite-n"]
            reps = cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["rate-scan/finite-n"]
            m = cfg.m if "m" in cfg.given else 1
        else:
            ladder = cfg.n_ladder or _LADDER_DEFAULTS["rate-scan"]
            reps = cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["rate-scan"]
            m = cfg.m
    elif cfg.command == "limit-law":
        kind = _LIMIT_KIND_MAP[cfg.kind or "alpha"]
        ladder = cfg.n_ladder or _LADDER_DEFAULTS["limit-law"]
        reps = cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["limit-law"]
        m = cfg.m
    elif cfg.command == "covariance-check":
        kind = "covariance_check"
        ladder = cfg.n_ladder or _LADDER_DEFAULTS["covariance-check"]
        reps = cfg.reps if cfg.reps is not None else _REPS_DEFAULTS["covariance-check"]
        m = cfg.m
    else:
        raise ValueError(f"no experiment plan for command {cfg.command!r}")
    return ExperimentPlan(
        kind=kind,
        m=m,
        n_ladder=tuple(ladder),
        replications=reps,
        a=cfg.a,
        grid_resolution=cfg.grid,
        seed=cfg.seed,
    )


def _read_data_file(path: str) -> np.ndarray:
    values = []
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not a number: {raw!r}") from exc
    return np.asarray(values, dtype=float)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cli_values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_values = _read_config_file(args.config) if args.config else {}
        cfg = _merge(args.command, cli_values, file_values)
        return run(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
