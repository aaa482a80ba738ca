"""Experiment runner and command-line interface.

Assembles objective / oracle / solver from a flat key=value config file,
computes a reference optimum, runs the requested methods, and writes one
trace CSV per method plus a summary CSV and a rendered figure.

Commands:
    run <config>        run the experiment described by the config
    reference <config>  estimate the reference optimum and its certificate
    slope <trace>       log-log suboptimality slope over an iteration window

Exit codes: 0 success, 1 config/parse error, 2 solver error, 3 dataset error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import figures
from .data import (inject_outliers, load_breast_cancer, load_movielens,
                   load_pima, synth_quadratic, train_test_split)
from .errors import (ConfigError, DataError, InsufficientData, JacobiFWError,
                     NonpositiveGap)
from .objectives import (HuberRidgeObjective, LogisticObjective,
                         MatrixCompletionObjective, normalized_test_error)
from .oracles import ConstraintSet
from .polynomials import JacobiParams
from .solvers import FW, JFW, SolverConfig, TraceRecord, run_fw, run_jfw

TASKS = ("logistic", "huber_ridge", "matrix_completion", "synthetic")
TRACE_COLUMNS = ("k", "f_value", "duality_gap", "subopt", "normalized_error",
                 "wall_ms", "feasibility_slack")


@dataclass
class ExperimentConfig:
    task: str
    output_dir: str = "results"
    dataset_path: Optional[str] = None
    constraint: str = "l2"
    radius: float = 1.0
    methods: tuple = (FW, JFW)
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    delta: Optional[float] = None
    max_iters: int = 1000
    seed: int = 0
    outlier_fraction: Optional[float] = None
    train_fraction: Optional[float] = None
    reference: str = "long_run"
    dimension: Optional[int] = None
    condition: Optional[float] = None
    interior: bool = True

    def jacobi_params(self) -> JacobiParams:
        try:
            return JacobiParams(alpha=self.alpha, beta=self.beta, gamma=self.gamma)
        except (TypeError, ValueError) as err:
            raise ConfigError(f"invalid jacobi parameters: {err}") from None


_PARSERS = {
    "task": str,
    "output_dir": str,
    "dataset_path": str,
    "constraint": str,
    "radius": float,
    "methods": lambda s: tuple(m.strip().lower() for m in s.split(",") if m.strip()),
    "alpha": float,
    "beta": float,
    "gamma": float,
    "delta": float,
    "max_iters": int,
    "seed": int,
    "outlier_fraction": float,
    "train_fraction": float,
    "reference": str,
    "dimension": int,
    "condition": float,
    "interior": lambda s: {"true": True, "false": False}[s.lower()],
}

_TASK_REQUIRED = {
    "logistic": ("dataset_path",),
    "huber_ridge": ("dataset_path", "delta"),
    "matrix_completion": ("dataset_path", "delta", "outlier_fraction",
                          "train_fraction"),
    "synthetic": ("dimension", "condition"),
}

_TASK_FORBIDDEN = {
    "logistic": ("delta", "outlier_fraction", "train_fraction", "dimension",
                 "condition"),
    "huber_ridge": ("outlier_fraction", "train_fraction", "dimension",
                    "condition"),
    "matrix_completion": ("dimension", "condition"),
    "synthetic": ("dataset_path", "delta", "outlier_fraction", "train_fraction"),
}


def parse_config(path) -> ExperimentConfig:
    """Parse a flat key = value config file; unknown keys are errors."""
    values = {}
    try:
        fh = open(path)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            try:
                values[key] = _PARSERS[key](value)
            except (ValueError, KeyError):
                raise ConfigError(
                    f"{path}:{lineno}: cannot parse {value!r} for key {key!r}"
                ) from None
    return build_config(values)


def build_config(values: dict) -> ExperimentConfig:
    """Validate a parsed key/value mapping into an ExperimentConfig."""
    if "task" not in values:
        raise ConfigError("missing required key 'task'")
    if values["task"] == "matrix_completion" and "reference" not in values:
        # a long-run reference on a completion problem costs one huge
        # nuclear-oracle run; progress is tracked by normalized error instead
        values = dict(values, reference="none")
    cfg = ExperimentConfig(**values)
    if cfg.task not in TASKS:
        raise ConfigError(f"task must be one of {TASKS}, got {cfg.task!r}")
    for key in _TASK_REQUIRED[cfg.task]:
        if getattr(cfg, key) is None:
            raise ConfigError(f"task {cfg.task!r} requires key {key!r}")
    for key in _TASK_FORBIDDEN[cfg.task]:
        if key in values:
            raise ConfigError(f"key {key!r} does not apply to task {cfg.task!r}")
    if not cfg.methods or not set(cfg.methods) <= {FW, JFW}:
        raise ConfigError(f"methods must be a subset of {{fw, jfw}}, got {cfg.methods}")
    if JFW in cfg.methods and None in (cfg.alpha, cfg.beta, cfg.gamma):
        raise ConfigError("methods include 'jfw': alpha, beta, gamma are required")
    if cfg.task == "matrix_completion" and cfg.constraint != "nuclear":
        raise ConfigError("matrix_completion requires constraint = nuclear")
    if cfg.task == "synthetic" and cfg.constraint != "l2":
        raise ConfigError("synthetic task requires constraint = l2")
    if cfg.reference != "none" and cfg.reference != "long_run" \
            and not cfg.reference.startswith("file:"):
        raise ConfigError(
            f"reference must be 'none', 'long_run', or 'file:<path>', got {cfg.reference!r}"
        )
    if cfg.max_iters < 1:
        raise ConfigError(f"max_iters must be >= 1, got {cfg.max_iters}")
    try:
        ConstraintSet(kind=cfg.constraint, radius=cfg.radius)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return cfg


def _load_dataset(loader, path):
    try:
        return loader(path)
    except FileNotFoundError:
        raise DataError(f"dataset file not found: {path}") from None


def build_problem(cfg: ExperimentConfig):
    """Assemble (objective, constraint set, start point, normalized-error fn,
    exact reference value) for the configured task."""
    cset = ConstraintSet(kind=cfg.constraint, radius=cfg.radius)
    if cfg.task == "logistic":
        ds = _load_dataset(load_breast_cancer, cfg.dataset_path)
        obj = LogisticObjective(ds.features, ds.targets)
        return obj, cset, np.zeros(obj.dim), None, None
    if cfg.task == "huber_ridge":
        ds = _load_dataset(load_pima, cfg.dataset_path)
        obj = HuberRidgeObjective(ds.features, ds.targets, delta=cfg.delta)
        return obj, cset, np.zeros(obj.dim), None, None
    if cfg.task == "matrix_completion":
        ds = _load_dataset(load_movielens, cfg.dataset_path)
        corrupted = inject_outliers(ds, cfg.outlier_fraction, seed=cfg.seed)
        train, test = train_test_split(corrupted, cfg.train_fraction,
                                       seed=cfg.seed + 1)
        shape = (ds.n_items, ds.n_users)  # items index rows, users columns
        def as_triples(part):
            return np.column_stack([part.items, part.users, part.ratings])
        obj = MatrixCompletionObjective(as_triples(train), shape, delta=cfg.delta)
        test_obj = MatrixCompletionObjective(as_triples(test), shape, delta=cfg.delta)
        nerr_fn = lambda X: normalized_test_error(test_obj, X)
        return obj, cset, np.zeros(shape), nerr_fn, None
    # synthetic
    obj, cset, x_star, _, _ = synth_quadratic(
        cfg.dimension, cfg.condition, cfg.radius, cfg.interior, cfg.seed)
    x0 = np.zeros(cfg.dimension)
    x0[0] = cfg.radius  # deterministic boundary vertex start
    return obj, cset, x0, None, float(obj.value(x_star))


def compute_reference(cfg: ExperimentConfig, budget_multiplier: int = 100):
    """Reference optimum estimate and its duality-gap certificate.

    Synthetic tasks return their closed-form optimum exactly.  Other tasks
    run vanilla FW for budget_multiplier * max_iters iterations with a
    duality-gap floor of 1e-10 and return the smallest objective value seen;
    the final duality gap bounds how far that value can sit above f*.
    """
    obj, cset, x0, _, exact = build_problem(cfg)
    if exact is not None:
        return exact, 0.0
    solver_cfg = SolverConfig(method=FW, max_iters=budget_multiplier * cfg.max_iters,
                              seed=cfg.seed, gap_floor=1e-10)
    trace = run_fw(obj, cset, x0, solver_cfg)
    f_star = min(rec.f_value for rec in trace)
    certificate = trace[-1].duality_gap
    return f_star, certificate


def rate_slope(trace, k_min: int, k_max: int) -> float:
    """Least-squares slope of log(subopt) versus log(k) over [k_min, k_max].

    Zero or negative suboptimality entries are skipped; fewer than 10
    window entries raises InsufficientData, fewer than 10 surviving
    positive entries raises NonpositiveGap.
    """
    window = [rec for rec in trace
              if k_min <= rec.k <= k_max and rec.subopt is not None and rec.k >= 1]
    if len(window) < 10:
        raise InsufficientData(
            f"only {len(window)} trace points with suboptimality in [{k_min}, {k_max}]"
        )
    pts = [(rec.k, rec.subopt) for rec in window if rec.subopt > 0]
    if len(pts) < 10:
        raise NonpositiveGap(
            f"only {len(pts)} positive suboptimality values remain in the window"
        )
    ks, vals = zip(*pts)
    slope, _ = np.polyfit(np.log(ks), np.log(vals), 1)
    return float(slope)


@dataclass
class RunSummary:
    method: str
    final_f: float
    final_gap: Optional[float]
    final_subopt: Optional[float]
    final_normalized_error: Optional[float]
    rate_slope: Optional[float]
    iterations: int
    wall_ms: float
    feasibility_max_slack: float


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trace(path, records, timing: bool = False):
    """Write trace records as CSV, atomically (temp file + rename).

    wall_ms is left empty unless timing=True so that reruns with the same
    config and seed produce byte-identical files.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for rec in records:
                writer.writerow([
                    rec.k,
                    _fmt(rec.f_value),
                    _fmt(rec.duality_gap),
                    _fmt(rec.subopt),
                    _fmt(rec.normalized_error),
                    _fmt(rec.wall_ms) if timing else "",
                    _fmt(rec.feasibility_slack),
                ])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_trace(path) -> list:
    """Load a trace CSV written by write_trace back into TraceRecords."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRACE_COLUMNS:
            raise ConfigError(f"{path}: not a trace file (header {reader.fieldnames})")
        for row in reader:
            records.append(TraceRecord(
                k=int(row["k"]),
                f_value=float(row["f_value"]),
                duality_gap=float(row["duality_gap"]) if row["duality_gap"] else None,
                subopt=float(row["subopt"]) if row["subopt"] else None,
                normalized_error=(float(row["normalized_error"])
                                  if row["normalized_error"] else None),
                wall_ms=float(row["wall_ms"]) if row["wall_ms"] else 0.0,
                feasibility_slack=(float(row["feasibility_slack"])
                                   if row["feasibility_slack"] else 0.0),
            ))
    return records


def run_experiment(cfg: ExperimentConfig, timing: bool = False,
                   plot: bool = True) -> list:
    """Run every configured method on the configured problem.

    Writes <task>_<method>_<seed>.csv per method, a summary CSV, and (by
    default) a rendered figure into output_dir; returns the RunSummary list.
    All methods share one reference optimum so their suboptimality curves
    are directly comparable.
    """
    obj, cset, x0, nerr_fn, exact = build_problem(cfg)

    f_star = None
    if exact is not None:
        f_star = exact
    elif cfg.reference == "long_run":
        f_star, _ = compute_reference(cfg)
    elif cfg.reference.startswith("file:"):
        ref_path = cfg.reference[len("file:"):]
        try:
            with open(ref_path) as fh:
                f_star = float(fh.read().strip())
        except FileNotFoundError:
            raise ConfigError(f"reference file not found: {ref_path}") from None
        except ValueError:
            raise ConfigError(f"reference file {ref_path} is not a single number") from None

    os.makedirs(cfg.output_dir, exist_ok=True)
    summaries = []
    traces = {}
    for method in cfg.methods:
        solver_cfg = SolverConfig(
            method=method,
            max_iters=cfg.max_iters,
            jacobi=cfg.jacobi_params() if method == JFW else None,
            seed=cfg.seed,
        )
        runner = run_jfw if method == JFW else run_fw
        trace = runner(obj, cset, x0, solver_cfg, f_star=f_star,
                       normalized_error_fn=nerr_fn)
        traces[method] = trace
        trace_path = os.path.join(cfg.output_dir,
                                  f"{cfg.task}_{method}_{cfg.seed}.csv")
        write_trace(trace_path, trace, timing=timing)

        final = trace[-1]
        try:
            slope = rate_slope(trace, max(1, cfg.max_iters // 10), cfg.max_iters)
        except (InsufficientData, NonpositiveGap):
            slope = None
        summaries.append(RunSummary(
            method=method,
            final_f=final.f_value,
            final_gap=final.duality_gap,
            final_subopt=final.subopt,
            final_normalized_error=final.normalized_error,
            rate_slope=slope,
            iterations=final.k,
            wall_ms=final.wall_ms,
            feasibility_max_slack=max(rec.feasibility_slack for rec in trace),
        ))

    summary_path = os.path.join(cfg.output_dir, f"{cfg.task}_summary_{cfg.seed}.csv")
    fields = [f.name for f in dataclasses.fields(RunSummary)]
    directory = os.path.dirname(os.path.abspath(summary_path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for summary in summaries:
            writer.writerow([_fmt(getattr(summary, name)) for name in fields])
    os.replace(tmp, summary_path)

    if plot:
        figures.render_traces(
            traces,
            os.path.join(cfg.output_dir, f"{cfg.task}_{cfg.seed}.png"),
            title=f"{cfg.task} (seed {cfg.seed})",
        )
    return summaries


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with the
    # solver-error exit code; surface usage problems as config errors instead
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobifw",
                     description="Frank-Wolfe / accelerated Frank-Wolfe experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment described by a config file")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", help="override the config's output_dir")
    p_run.add_argument("--seed", type=int, help="override the config's seed")
    p_run.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_run.add_argument("--timing", action="store_true",
                       help="fill the wall_ms trace column (breaks byte-identical reruns)")

    p_ref = sub.add_parser("reference", help="estimate the reference optimum")
    p_ref.add_argument("config")
    p_ref.add_argument("--seed", type=int, help="override the config's seed")
    p_ref.add_argument("--budget-multiplier", type=int, default=100)

    p_slope = sub.add_parser("slope", help="log-log suboptimality slope of a trace file")
    p_slope.add_argument("trace")
    p_slope.add_argument("--kmin", type=int, required=True)
    p_slope.add_argument("--kmax", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            cfg = parse_config(args.config)
            if args.output_dir is not None:
                cfg = dataclasses.replace(cfg, output_dir=args.output_dir)
            if args.seed is not None:
                cfg = dataclasses.replace(cfg, seed=args.seed)
            summaries = run_experiment(cfg, timing=args.timing, plot=not args.no_plot)
            for s in summaries:
                progress = (f"subopt={s.final_subopt:.6e}" if s.final_subopt is not None
                            else f"normalized_error={s.final_normalized_error:.6f}"
                            if s.final_normalized_error is not None
                            else f"f={s.final_f:.6e}")
                slope = "n/a" if s.rate_slope is None else f"{s.rate_slope:.3f}"
                print(f"{s.method}: iters={s.iterations} {progress} "
                      f"gap={s.final_gap:.3e} slope={slope} "
                      f"max_slack={s.feasibility_max_slack:.2e} "
                      f"wall_ms={s.wall_ms:.1f}")
        elif args.command == "reference":
            cfg = parse_config(args.config)
            if args.seed is not None:
                cfg = dataclasses.replace(cfg, seed=args.seed)
            f_star, certificate = compute_reference(cfg, args.budget_multiplier)
            print(f"reference={f_star!r} certificate_gap={certificate!r}")
        else:  # slope
            trace = read_trace(args.trace)
            print(repr(rate_slope(trace, args.kmin, args.kmax)))
        return 0
    except (ConfigError, InsufficientData, NonpositiveGap) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except DataError as err:
        print(f"dataset error: {err}", file=sys.stderr)
        return 3
    except JacobiFWError as err:
        print(f"solver error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
