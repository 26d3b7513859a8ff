"""Experiment configuration, presets, and CSV/JSON result emission.

Real-valued threshold formulas are mapped to integers with a single ceiling
policy, recorded in every output row.  A run record echoes the fully merged
configuration, so re-running the echo reproduces the record bit for bit
(wall time aside).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, asdict

from . import __version__
from .cube import CubeSpec
from .engine import make_schedule
from .estimator import TrialPlan, estimate_pc, percolation_probability

CSV_HEADER = ("experiment,n,k,variant,r,t,p,trials,successes,p_hat,"
              "ci_low,ci_high,pc_lo,pc_hi,seed,policy")

PRESETS = {
    "theorem1": {"k": 1, "ns": (12, 16, 20), "threshold": "power:0.8",
                 "variant": "boot", "t": None, "pc": True},
    "theorem2": {"k": 1, "ns": (12, 16, 20), "threshold": "power:0.85",
                 "variant": "boot2", "t": "half_power:0.1", "pc": True},
    "theorem3": {"k": 2, "ns": (8, 10, 12), "threshold": "majority",
                 "variant": "boot", "t": None, "pc": True},
}

# Default first-step slack for relaxed runs that do not set --t:
# t = ceil(DEFAULT_EPS2 * n^a), a small fraction of the base threshold.
DEFAULT_EPS2 = 0.05


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class JobSpec:
    """One resolved (graph, schedule, p-mode) unit of an experiment."""

    n: int
    k: int
    variant: str
    r: int
    t: int
    N: int
    p_points: tuple[float, ...]  # empty in auto-pc mode
    auto_pc: bool
    policy: str


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    jobs: tuple[JobSpec, ...]
    trials: int
    seed: int
    tolerance: float
    output: str | None
    fmt: str
    echo: tuple[tuple[str, object], ...]  # merged raw inputs, sorted

    def echo_dict(self) -> dict:
        return dict(self.echo)


@dataclass
class RunRecord:
    config: dict
    resolved: list[dict]
    rows: list[dict]
    seed: int
    version: str
    wall_time: float


def _ceil_int(x: float) -> int:
    return int(math.ceil(x - 1e-12))  # guard against 4.000000000000001


def _resolve_threshold(spec_str: str, n: int, k: int) -> tuple[int, float | None]:
    """Returns (r, a) where a is the exponent when the power form is used."""
    N = CubeSpec(n, k).degree
    if spec_str.startswith("const:"):
        return int(spec_str[6:]), None
    if spec_str.startswith("power:"):
        a = float(spec_str[6:])
        return _ceil_int(n ** a), a
    if spec_str == "majority":
        return _ceil_int(N / 2), None
    raise ConfigError(f"unknown threshold spec {spec_str!r}")


def _resolve_t(spec_str: str | int | None, n: int, k: int,
               a: float | None, variant: str) -> int:
    if variant == "boot":
        return 0
    if spec_str is None:
        if a is None:
            raise ConfigError(f"{variant} needs --t (no power exponent to "
                              "derive it from)")
        return _ceil_int(DEFAULT_EPS2 * n ** a)
    if isinstance(spec_str, int):
        return spec_str
    s = str(spec_str)
    if s.isdigit():
        return int(s)
    if s.startswith("eps2_na:"):
        if a is None:
            raise ConfigError("eps2_na requires a power threshold")
        return _ceil_int(float(s[8:]) * n ** a)
    if s.startswith("half_power:"):
        if a is None:
            raise ConfigError("half_power requires a power threshold")
        delta = float(s[11:])
        return _ceil_int(0.1 * n ** (a / 2.0 + delta))
    if s.startswith("linear:"):
        return _ceil_int(float(s[7:]) * n)
    if s.startswith("k_power:"):
        return _ceil_int(float(s[8:]) * n ** (k / 2.0))
    raise ConfigError(f"unknown t spec {s!r}")


def _resolve_p_points(p_spec, auto_pc: bool) -> tuple[float, ...]:
    if auto_pc:
        if p_spec is not None:
            raise ConfigError("--p and --pc are mutually exclusive")
        return ()
    if p_spec is None:
        raise ConfigError("one of --p or --pc is required")
    if isinstance(p_spec, (int, float)):
        pts = (float(p_spec),)
    else:
        s = str(p_spec)
        if s.startswith("sweep:"):
            parts = s.split(":")
            if len(parts) != 4:
                raise ConfigError("sweep format is sweep:start:stop:points")
            start, stop, num = float(parts[1]), float(parts[2]), int(parts[3])
            if num < 2:
                raise ConfigError("sweep needs at least 2 points")
            stepw = (stop - start) / (num - 1)
            pts = tuple(start + i * stepw for i in range(num))
        else:
            pts = (float(s),)
    for p in pts:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"p={p} outside [0, 1]")
    return pts


def _make_job(experiment: str, n: int, k: int, threshold: str, variant: str,
              t_spec, p_spec, auto_pc: bool) -> JobSpec:
    try:
        cube = CubeSpec(n, k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    r, a = _resolve_threshold(threshold, n, k)
    t = _resolve_t(t_spec, n, k, a, variant)
    try:
        make_schedule(variant, r, t)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    policy = f"ceil;threshold={threshold};t={t_spec if t_spec is not None else 'default'}"
    return JobSpec(n, k, variant, r, t, cube.degree,
                   _resolve_p_points(p_spec, auto_pc), auto_pc, policy)


def build_config(raw: dict) -> ExperimentConfig:
    """Resolve a merged flag/file dictionary into an executable config."""
    merged = {
        "n": None, "k": 1, "threshold": None, "variant": "boot", "t": None,
        "p": None, "pc": False, "trials": 10000, "seed": 0,
        "tolerance": 0.01, "output": None, "format": "csv", "preset": None,
    }
    unknown = set(raw) - set(merged)
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    merged.update({k: v for k, v in raw.items() if v is not None})

    if merged["format"] not in ("csv", "json"):
        raise ConfigError(f"unknown format {merged['format']!r}")
    if merged["trials"] < 1:
        raise ConfigError("trials must be >= 1")
    if merged["preset"] is not None and merged["preset"] not in PRESETS:
        raise ConfigError(f"unknown preset {merged['preset']!r}; "
                          f"have {sorted(PRESETS)}")
    wants_pc = bool(merged["pc"]) or (merged["preset"] is not None
                                      and PRESETS[merged["preset"]]["pc"])
    if wants_pc and merged["trials"] < 1000:
        raise ConfigError("p_c bisection needs trials >= 1000 per point")
    if not 0.0 < merged["tolerance"] < 1.0:
        raise ConfigError("tolerance must be in (0, 1)")

    jobs = []
    try:
        if merged["preset"] is not None:
            name = merged["preset"]
            ps = PRESETS[name]
            for n in ps["ns"]:
                jobs.append(_make_job(name, n, ps["k"], ps["threshold"],
                                      ps["variant"], ps["t"], None, ps["pc"]))
            experiment = name
        else:
            if merged["n"] is None or merged["threshold"] is None:
                raise ConfigError("--n and --threshold are required "
                                  "(or use --preset)")
            experiment = "custom"
            jobs.append(_make_job(experiment, merged["n"], merged["k"],
                                  merged["threshold"], merged["variant"],
                                  merged["t"], merged["p"], merged["pc"]))
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:  # malformed numeric fields
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(
        experiment=experiment, jobs=tuple(jobs), trials=merged["trials"],
        seed=merged["seed"], tolerance=merged["tolerance"],
        output=merged["output"], fmt=merged["format"],
        echo=tuple(sorted(merged.items(), key=lambda kv: kv[0])))


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cubeboot",
        description="Bootstrap percolation experiments on Q_n and Q_{k,n}")
    ap.add_argument("--config", help="JSON config file (flags override it)")
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--n", type=int)
    ap.add_argument("--k", type=int)
    ap.add_argument("--threshold", help="const:R | power:A | majority")
    ap.add_argument("--variant", choices=("boot", "boot1", "boot2", "boot3"))
    ap.add_argument("--t", help="integer | eps2_na:E | half_power:D | "
                                "linear:C | k_power:C")
    ap.add_argument("--p", help="probability or sweep:start:stop:points")
    ap.add_argument("--pc", action="store_true", default=None,
                    help="bisect for the critical probability")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tolerance", type=float)
    ap.add_argument("--output", help="output path (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    return ap


def parse_config(argv: list[str]) -> ExperimentConfig:
    """Build a config from command-line flags plus an optional JSON file."""
    ns = _build_parser().parse_args(argv)
    raw: dict = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                raw.update(json.load(fh))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON config: {exc}") from None
    for key in ("preset", "n", "k", "threshold", "variant", "t", "p", "pc",
                "trials", "seed", "tolerance", "output", "format"):
        val = getattr(ns, key)
        if val is not None:
            raw[key] = val
    return build_config(raw)


def _workers_from_env() -> int:
    val = os.environ.get("CUBEBOOT_THREADS", "1")
    try:
        return max(1, int(val))
    except ValueError:
        return 1


def _point_row(job: JobSpec, p: float, est, seed: int,
               experiment: str) -> dict:
    return {
        "experiment": experiment, "n": job.n, "k": job.k,
        "variant": job.variant, "r": job.r, "t": job.t, "p": p,
        "trials": est.trials, "successes": est.successes,
        "p_hat": est.p_hat, "ci_low": est.ci_low, "ci_high": est.ci_high,
        "pc_lo": None, "pc_hi": None, "seed": seed, "policy": job.policy,
    }


def run_experiment(config: ExperimentConfig,
                   workers: int | None = None) -> RunRecord:
    """Execute every job of the config; deterministic given the config."""
    if workers is None:
        workers = _workers_from_env()
    t_start = time.perf_counter()
    rows: list[dict] = []
    resolved: list[dict] = []
    for job in config.jobs:
        spec = CubeSpec(job.n, job.k)
        schedule = make_schedule(job.variant, job.r, job.t)
        info = {"n": job.n, "k": job.k, "N": job.N, "r": job.r, "t": job.t,
                "variant": job.variant}
        if job.auto_pc:
            pc = estimate_pc(spec, schedule, config.trials, config.tolerance,
                             config.seed, workers=workers)
            for p, est in pc.evaluations:
                rows.append(_point_row(job, p, est, config.seed,
                                       config.experiment))
            summary = _point_row(job, None, _EMPTY_EST, config.seed,
                                 config.experiment)
            summary.update({"p": None, "trials": None, "successes": None,
                            "p_hat": None, "ci_low": None, "ci_high": None,
                            "pc_lo": pc.lo, "pc_hi": pc.hi,
                            "policy": job.policy + ";" + pc.policy})
            rows.append(summary)
            info["pc_lo"], info["pc_hi"] = pc.lo, pc.hi
            info["ci_limited"] = pc.ci_limited
            mid = (pc.lo + pc.hi) / 2.0
            if config.experiment == "theorem1":
                info["reference_first_order"] = job.n ** (0.8 - 1.0)
            elif config.experiment == "theorem2":
                a, delta = 0.85, 0.1
                info["reference_lower"] = (job.n ** (a - 1.0)
                                           - job.n ** (a / 2.0 - 1.0 + delta))
                info["reference_upper"] = (job.n ** (a - 1.0)
                                           - job.n ** (a / 2.0 - 1.0))
            elif config.experiment == "theorem3":
                info["gap_statistic"] = ((0.5 - mid) * job.n ** (job.k / 2.0)
                                         / math.sqrt(math.log(job.n)))
        else:
            for p in job.p_points:
                est = percolation_probability(
                    TrialPlan(spec, schedule, p, config.trials, config.seed),
                    workers=workers)
                rows.append(_point_row(job, p, est, config.seed,
                                       config.experiment))
        resolved.append(info)
    return RunRecord(config=config.echo_dict(), resolved=resolved, rows=rows,
                     seed=config.seed, version=__version__,
                     wall_time=time.perf_counter() - t_start)


class _Empty:
    trials = successes = None
    p_hat = ci_low = ci_high = None


_EMPTY_EST = _Empty()


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def format_csv(record: RunRecord) -> str:
    header_cols = CSV_HEADER.split(",")
    lines = [CSV_HEADER]
    for row in record.rows:
        lines.append(",".join(_fmt_cell(row[c]) for c in header_cols))
    return "\n".join(lines) + "\n"


def format_json(record: RunRecord) -> str:
    return json.dumps(asdict(record), indent=2, sort_keys=True) + "\n"


def load_record(text: str) -> RunRecord:
    """Inverse of format_json."""
    data = json.loads(text)
    return RunRecord(**data)


def emit_results(record: RunRecord, fmt: str, path: str | None) -> str:
    """Render the record and write it to path (or stdout); returns the text."""
    text = format_csv(record) if fmt == "csv" else format_json(record)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        record = run_experiment(config)
        emit_results(record, config.fmt, config.output)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures exit 3
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
