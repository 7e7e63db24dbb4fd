"""Experiment runner: benchmark-protocol defaults, reports, and figures.

Defaults follow the convex benchmark protocol: 30 epochs, lam = 1/N,
batch size min(256, ceil(0.01 N)), step size 1.0 decayed by 0.995 per
epoch. The switching presets are, in iterations, round(5N/B) for both
phases of obprox_sg and round(15N/B) proximal iterations followed by
orthant steps forever for obprox_sg_plus. RDA's gamma is tuned over a
small documented grid (best final objective) unless fixed explicitly.

Each solver writes a per-epoch trace CSV and a JSON summary; the
experiment writes a combined comparison table (objective, density,
relative runtime, where relative means scaled by the slowest solver in
the same experiment) and, unless disabled, renders the matching figures
next to the CSVs.
"""

import json
import math
import os
from dataclasses import dataclass, field

from .dataio import Dataset, benchmark_batch_size, load_dataset
from .losses import LogisticLoss
from .run import SOLVER_METHODS, run_solver
from .solvers import SolverConfig

RDA_GAMMA_GRID = (1.0, 5.0, 10.0, 20.0, 50.0)


@dataclass
class ExperimentSpec:
    """One benchmark run: a dataset, a solver list, and shared defaults."""

    dataset: object = None
    solvers: tuple = SOLVER_METHODS
    epochs: int = 30
    lam: object = "1/N"
    batch_size: object = "paper"
    alpha0: float = 1.0
    decay: float = 0.995
    seed: int = 0
    n_p: object = None
    n_o: object = None
    rda_gamma: float = None
    svrg_inner: int = None
    out_dir: str = "results"
    plots: bool = True
    feature_count: int = None

    def __post_init__(self):
        for solver in self.solvers:
            if solver not in SOLVER_METHODS:
                raise ValueError(
                    f"unknown solver {solver!r}; expected one of {SOLVER_METHODS}"
                )


def spec_from_dict(raw, **overrides):
    """Build an ExperimentSpec from a config dict, applying overrides last.

    None values are treated as unset (the dataclass default applies), so
    CLI flags that were not passed never mask config-file entries.
    """
    known = set(ExperimentSpec.__dataclass_fields__)
    merged = {}
    for source in (raw, overrides):
        for key, value in source.items():
            if key not in known:
                raise ValueError(f"unknown experiment key {key!r}")
            if value is None:
                continue
            merged[key] = value
    if "solvers" in merged:
        merged["solvers"] = tuple(merged["solvers"])
    return ExperimentSpec(**merged)


def resolve_lambda(lam, num_examples):
    """The l1 weight; the string "1/N" resolves once N is known."""
    if isinstance(lam, str):
        if lam.strip().lower() == "1/n":
            return 1.0 / num_examples
        return float(lam)
    return float(lam)


def resolve_batch_size(batch_size, num_examples):
    if isinstance(batch_size, str):
        if batch_size.strip().lower() == "paper":
            return benchmark_batch_size(num_examples)
        batch_size = int(batch_size)
    return min(int(batch_size), num_examples)


def resolve_switching(value):
    if value is None:
        return None
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        return int(value)
    return value


def schedule_preset(solver, num_examples, batch_size):
    """Switching iteration counts (n_p, n_o) for the two orthant solvers."""
    per_epoch = num_examples / batch_size
    if solver == "obprox_sg":
        return round(5 * per_epoch), round(5 * per_epoch)
    if solver == "obprox_sg_plus":
        return round(15 * per_epoch), math.inf
    return math.inf, 0


def build_config(spec, solver, num_examples, rda_gamma=None):
    lam = resolve_lambda(spec.lam, num_examples)
    batch = resolve_batch_size(spec.batch_size, num_examples)
    n_p, n_o = schedule_preset(solver, num_examples, batch)
    if resolve_switching(spec.n_p) is not None:
        n_p = resolve_switching(spec.n_p)
    if resolve_switching(spec.n_o) is not None:
        n_o = resolve_switching(spec.n_o)
    return SolverConfig(
        lam=lam,
        batch_size=batch,
        epochs=spec.epochs,
        seed=spec.seed,
        alpha0=spec.alpha0,
        decay_factor=spec.decay,
        n_p=n_p,
        n_o=n_o,
        rda_gamma=rda_gamma if rda_gamma is not None else spec.rda_gamma,
        svrg_inner=spec.svrg_inner,
    )


def tune_rda_gamma(spec, loss, grid=RDA_GAMMA_GRID):
    """Run RDA once per grid value and keep the best final objective."""
    best = None
    for gamma in grid:
        config = build_config(spec, "rda", loss.num_examples, rda_gamma=gamma)
        result = run_solver(config, loss, "rda")
        if best is None or result.trace.final.F < best[1].trace.final.F:
            best = (gamma, result, config)
    return best


@dataclass
class ExperimentReport:
    out_dir: str
    results: dict
    configs: dict
    comparison: list
    paths: dict = field(default_factory=dict)


def _config_echo(config):
    echo = {
        "lam": config.lam,
        "batch_size": config.batch_size,
        "epochs": config.epochs,
        "seed": config.seed,
        "alpha0": config.alpha0,
        "decay_factor": config.decay_factor,
        "n_p": "inf" if math.isinf(config.n_p) else int(config.n_p),
        "n_o": "inf" if math.isinf(config.n_o) else int(config.n_o),
        "rda_gamma": config.rda_gamma,
        "svrg_inner": config.svrg_inner,
        "schedule": config.schedule,
    }
    return echo


def comparison_text(rows):
    header = f"{'solver':<16}{'F':>10}{'f':>10}{'density_%':>12}{'rel_runtime':>13}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row['solver']:<16}{row['final_F']:>10.3f}{row['final_f']:>10.3f}"
            f"{row['density_percent']:>12.2f}{row['relative_runtime']:>13.2f}"
        )
    return "\n".join(lines) + "\n"


def run_experiment(spec):
    """Run every solver in the spec on one dataset and write all reports."""
    dataset = spec.dataset
    if not isinstance(dataset, Dataset):
        dataset = load_dataset(dataset, num_features=spec.feature_count)
    loss = LogisticLoss(dataset)

    results, configs = {}, {}
    for solver in spec.solvers:
        if solver == "rda" and spec.rda_gamma is None:
            gamma, result, config = tune_rda_gamma(spec, loss)
            results[solver], configs[solver] = result, config
        else:
            config = build_config(spec, solver, loss.num_examples)
            results[solver] = run_solver(config, loss, solver)
            configs[solver] = config

    max_runtime = max(r.runtime_seconds for r in results.values())
    comparison = []
    for solver in spec.solvers:
        final = results[solver].trace.final
        comparison.append(
            {
                "solver": solver,
                "final_F": final.F,
                "final_f": final.f,
                "density_percent": final.density_percent,
                "relative_runtime": results[solver].runtime_seconds / max_runtime,
            }
        )

    os.makedirs(spec.out_dir, exist_ok=True)
    report = ExperimentReport(
        out_dir=spec.out_dir, results=results, configs=configs, comparison=comparison
    )
    for solver, result in results.items():
        trace_path = os.path.join(spec.out_dir, f"trace_{solver}.csv")
        result.trace.to_csv(trace_path)
        weights_path = os.path.join(spec.out_dir, f"weights_{solver}.npz")
        result.weights.save(weights_path)
        summary = {
            "solver": solver,
            "final_F": result.trace.final.F,
            "final_f": result.trace.final.f,
            "density_percent": result.trace.final.density_percent,
            "runtime_seconds": result.runtime_seconds,
            "relative_runtime": result.runtime_seconds / max_runtime,
            "config": _config_echo(configs[solver]),
        }
        summary_path = os.path.join(spec.out_dir, f"summary_{solver}.json")
        with open(summary_path, "w") as handle:
            json.dump(summary, handle, indent=2, sort_keys=True)
            handle.write("\n")
        report.paths[solver] = {
            "trace": trace_path,
            "summary": summary_path,
            "weights": weights_path,
        }

    comparison_path = os.path.join(spec.out_dir, "comparison.csv")
    with open(comparison_path, "w") as handle:
        handle.write("solver,final_F,final_f,density_percent,relative_runtime\n")
        for row in comparison:
            handle.write(
                f"{row['solver']},{row['final_F']!r},{row['final_f']!r},"
                f"{row['density_percent']!r},{row['relative_runtime']!r}\n"
            )
    text_path = os.path.join(spec.out_dir, "comparison.txt")
    with open(text_path, "w") as handle:
        handle.write(comparison_text(comparison))
    report.paths["comparison"] = {"csv": comparison_path, "txt": text_path}

    if spec.plots:
        from .plots import render_report_figures

        traces = {solver: result.trace for solver, result in results.items()}
        runtimes = {row["solver"]: row["relative_runtime"] for row in comparison}
        report.paths["figures"] = render_report_figures(traces, runtimes, spec.out_dir)
    return report
