"""The deterministic outer loop driving all four solvers.

One run executes epochs * ceil(N / batch_size) iterations over seeded
epoch partitions from dataio.make_batches. Identical (config, loss)
pairs produce identical iterates and traces; wall time is measured but
never feeds back into the trajectory.
"""

import math
import time

import numpy as np

from .dataio import make_batches
from .diagnostics import EpochRecord, IterateTrace, density, gradient_mapping
from .losses import CompositeObjective, WeightVector
from .solvers import (
    OrthantFace,
    RdaState,
    StepKind,
    SvrgState,
    orthant_step,
    prox_sg_step,
    prox_svrg_step,
    rda_step,
    select_step,
)

SOLVER_METHODS = ("prox_sg", "rda", "prox_svrg", "obprox_sg", "obprox_sg_plus")


class SolverDiverged(RuntimeError):
    """Objective became non-finite; the partial trace is preserved on
    the exception."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class RunResult:
    def __init__(self, weights, trace, runtime_seconds, method):
        self.weights = weights
        self.trace = trace
        self.runtime_seconds = runtime_seconds
        self.method = method


def _dispatch(method, config, objective, w, batch, alpha, k, rda_state, svrg_state):
    if method == "prox_sg":
        return prox_sg_step(objective, w, batch, alpha), "prox"
    if method in ("obprox_sg", "obprox_sg_plus"):
        kind = select_step(k, config.n_p, config.n_o)
        if kind is StepKind.PROX:
            return prox_sg_step(objective, w, batch, alpha), "prox"
        face = OrthantFace.from_iterate(w.x)
        return orthant_step(objective, w, batch, alpha, face), "orthant"
    if method == "rda":
        return rda_step(rda_state, objective, w, batch, config.rda_gamma), "rda"
    if method == "prox_svrg":
        return prox_svrg_step(svrg_state, objective, w, batch, alpha), "svrg"
    raise ValueError(f"unknown solver {method!r}; expected one of {SOLVER_METHODS}")


def run_solver(config, loss, method, x0=None, iterate_callback=None):
    """Run one solver to completion and return its RunResult.

    ``x0`` defaults to the all-zero iterate. ``iterate_callback``, if
    given, is called as callback(k, step_type, weights) after every
    iteration; it must not mutate the weights.
    """
    if method not in SOLVER_METHODS:
        raise ValueError(f"unknown solver {method!r}; expected one of {SOLVER_METHODS}")
    if method == "rda" and config.rda_gamma is None:
        raise ValueError("rda requires config.rda_gamma")
    objective = CompositeObjective(loss=loss, lam=config.lam)
    w = x0.copy() if x0 is not None else WeightVector.zeros(loss.dim, loss.bias_dim)

    num_batches = math.ceil(loss.num_examples / config.batch_size)
    svrg_period = config.svrg_inner if config.svrg_inner is not None else num_batches
    rda_state = RdaState.for_loss(loss) if method == "rda" else None
    svrg_state = SvrgState() if method == "prox_svrg" else None

    full_batch = np.arange(loss.num_examples)
    trace = IterateTrace()
    start = time.perf_counter()
    k = 0
    for epoch in range(config.epochs):
        epoch_start = time.perf_counter()
        alpha = config.alpha0
        step_type = "prox"
        for batch in make_batches(loss.num_examples, config.batch_size, config.seed, epoch):
            alpha = config.step_size(epoch, k)
            if method == "prox_svrg" and k % svrg_period == 0:
                svrg_state.refresh(objective, w)
            w, step_type = _dispatch(
                method, config, objective, w, batch, alpha, k, rda_state, svrg_state
            )
            k += 1
            if iterate_callback is not None:
                iterate_callback(k - 1, step_type, w)
        composite, smooth = objective.value(w, full_batch)
        if not math.isfinite(composite):
            raise SolverDiverged(
                f"{method}: objective non-finite at epoch {epoch}", trace
            )
        grad_map = gradient_mapping(objective, w, eta=alpha)
        trace.append(
            EpochRecord(
                epoch=epoch,
                k=k,
                F=composite,
                f=smooth,
                density_percent=density(w),
                grad_map_norm=float(np.linalg.norm(grad_map)),
                step_type=step_type,
                wall_time_seconds=time.perf_counter() - epoch_start,
            )
        )
    return RunResult(w, trace, time.perf_counter() - start, method)


def obprox_run(config, loss, x0=None, iterate_callback=None):
    """Run the orthant-switching solver; switching comes from config.n_p/n_o."""
    return run_solver(config, loss, "obprox_sg", x0=x0, iterate_callback=iterate_callback)
