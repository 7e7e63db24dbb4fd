"""Stochastic solvers for l1-regularized empirical risk minimization.

Implements four solvers over one deterministic mini-batch loop: plain
proximal stochastic gradient (prox_sg), regularized dual averaging (rda),
proximal SVRG (prox_svrg), and an orthant-projection method (obprox_sg /
obprox_sg_plus) that alternates proximal steps with sign-constrained
projected gradient steps to drive coordinates to exact zero.
"""

from .dataio import Dataset, SparseExample, load_dataset, make_batches, parse_libsvm, benchmark_batch_size
from .losses import CompositeObjective, LogisticLoss, TinyNetLoss, WeightVector, index_sets
from .solvers import OrthantFace, SolverConfig, StepKind, prox_shrink, select_step
from .run import RunResult, SolverDiverged, obprox_run, run_solver
from .diagnostics import IterateTrace, density, gradient_mapping, support_delta

__all__ = [
    "CompositeObjective",
    "Dataset",
    "IterateTrace",
    "LogisticLoss",
    "OrthantFace",
    "RunResult",
    "SolverConfig",
    "SolverDiverged",
    "SparseExample",
    "StepKind",
    "TinyNetLoss",
    "WeightVector",
    "density",
    "gradient_mapping",
    "index_sets",
    "load_dataset",
    "make_batches",
    "obprox_run",
    "benchmark_batch_size",
    "parse_libsvm",
    "prox_shrink",
    "run_solver",
    "select_step",
    "support_delta",
]
