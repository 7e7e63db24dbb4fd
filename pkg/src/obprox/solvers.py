"""Step functions for the four stochastic solvers.

Every step maps the current WeightVector to the next one given a
mini-batch; accumulator state (dual-averaging sums, variance-reduction
snapshots) travels in explicit state objects so the outer loop stays a
plain deterministic driver.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .losses import WeightVector


class StepKind(Enum):
    PROX = "prox"
    ORTHANT = "orthant"


def prox_shrink(trial, threshold):
    """Coordinatewise soft-thresholding by ``threshold`` (>= 0).

    Moves each entry toward zero by the threshold and clamps at zero;
    ties at exactly the threshold map to zero.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    trial = np.asarray(trial, dtype=np.float64)
    return np.sign(trial) * np.maximum(np.abs(trial) - threshold, 0.0)


@dataclass
class OrthantFace:
    """Sign pattern in {-1, 0, +1}^n and its Euclidean projection.

    A point belongs to the face iff every coordinate is zero or matches
    the pattern's sign; projection zeroes any coordinate whose sign
    disagrees.
    """

    pattern: np.ndarray

    def __post_init__(self):
        self.pattern = np.asarray(self.pattern, dtype=np.float64)
        if not np.all(np.isin(self.pattern, (-1.0, 0.0, 1.0))):
            raise ValueError("pattern entries must be -1, 0, or +1")

    @classmethod
    def from_iterate(cls, x):
        return cls(pattern=np.sign(np.asarray(x, dtype=np.float64)))

    @property
    def support(self):
        return self.pattern != 0.0

    def contains(self, x):
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all((x == 0.0) | (np.sign(x) == self.pattern)))

    def project(self, trial):
        trial = np.asarray(trial, dtype=np.float64)
        return np.where(np.sign(trial) == self.pattern, trial, 0.0)


def _check_finite(grad_x, grad_bias):
    if not (np.all(np.isfinite(grad_x)) and np.all(np.isfinite(grad_bias))):
        raise FloatingPointError("non-finite gradient; iterate has diverged")


def prox_sg_step(objective, w, batch, alpha):
    """One proximal stochastic gradient step.

    Gradient step on the smooth part, then soft-thresholding of the x
    block by alpha*lam; the bias block takes a plain gradient step.
    """
    if alpha <= 0:
        raise ValueError("step size must be positive")
    grad_x, grad_bias = objective.gradient(w, batch)
    _check_finite(grad_x, grad_bias)
    new_x = prox_shrink(w.x - alpha * grad_x, alpha * objective.lam)
    return WeightVector(x=new_x, bias=w.bias - alpha * grad_bias)


def orthant_step(objective, w, batch, alpha, face):
    """One projected gradient step on the smooth rewrite within a face.

    Only coordinates on the face's support move (zero-pattern
    coordinates are left untouched); the trial point is projected back
    onto the face, so support can only shrink. The input iterate must be
    sign-consistent with the face.
    """
    if alpha <= 0:
        raise ValueError("step size must be positive")
    if not face.contains(w.x):
        raise ValueError("iterate lies outside the given orthant face")
    grad_x, grad_bias = objective.surrogate_gradient(w, batch, face.pattern)
    _check_finite(grad_x, grad_bias)
    trial = w.x - alpha * np.where(face.support, grad_x, 0.0)
    return WeightVector(x=face.project(trial), bias=w.bias - alpha * grad_bias)


def select_step(k, n_p, n_o):
    """Periodic switching rule: the first n_p of every n_p + n_o
    iterations are proximal steps, the rest orthant steps.

    Either count may be ``math.inf``: infinite n_p never switches,
    infinite n_o switches once at k = n_p and never switches back.
    """
    if n_p < 0 or n_o < 0 or n_p + n_o < 1:
        raise ValueError("need n_p, n_o >= 0 with n_p + n_o >= 1")
    if math.isinf(n_p):
        return StepKind.PROX
    if math.isinf(n_o):
        return StepKind.PROX if k < n_p else StepKind.ORTHANT
    return StepKind.PROX if k % (int(n_p) + int(n_o)) < n_p else StepKind.ORTHANT


@dataclass
class RdaState:
    """Running sum of all stochastic gradients seen, plus their count."""

    grad_sum_x: np.ndarray
    grad_sum_bias: np.ndarray
    count: int = 0

    @classmethod
    def for_loss(cls, loss):
        return cls(grad_sum_x=np.zeros(loss.dim), grad_sum_bias=np.zeros(loss.bias_dim))


def rda_step(state, objective, w, batch, gamma):
    """One regularized dual-averaging step with an sqrt(k) coefficient.

    The next x depends only on the running mean gradient: coordinates
    whose mean gradient is within lam of zero are truncated to exactly
    zero, the rest are set to -(sqrt(k)/gamma) times the lam-shrunk mean.
    The bias takes the same dual-averaging update without truncation.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    grad_x, grad_bias = objective.gradient(w, batch)
    _check_finite(grad_x, grad_bias)
    state.grad_sum_x += grad_x
    state.grad_sum_bias += grad_bias
    state.count += 1
    k = state.count
    mean_x = state.grad_sum_x / k
    mean_bias = state.grad_sum_bias / k
    scale = math.sqrt(k) / gamma
    lam = objective.lam
    new_x = np.where(
        np.abs(mean_x) > lam, -scale * (mean_x - lam * np.sign(mean_x)), 0.0
    )
    return WeightVector(x=new_x, bias=-scale * mean_bias)


@dataclass
class SvrgState:
    """Snapshot iterate and its full-dataset gradient for variance reduction."""

    snapshot: WeightVector = None
    full_grad_x: np.ndarray = None
    full_grad_bias: np.ndarray = None

    def refresh(self, objective, w):
        full = np.arange(objective.loss.num_examples)
        self.snapshot = w.copy()
        self.full_grad_x, self.full_grad_bias = objective.gradient(w, full)


def prox_svrg_step(state, objective, w, batch, alpha):
    """One proximal SVRG step using the current snapshot.

    The batch gradient is recentered by the snapshot's batch gradient
    plus its stored full gradient, then the usual prox step is applied.
    """
    if alpha <= 0:
        raise ValueError("step size must be positive")
    if state.snapshot is None:
        raise RuntimeError("SVRG snapshot has not been initialized")
    grad_x, grad_bias = objective.gradient(w, batch)
    snap_x, snap_bias = objective.gradient(state.snapshot, batch)
    _check_finite(grad_x, grad_bias)
    v_x = grad_x - snap_x + state.full_grad_x
    v_bias = grad_bias - snap_bias + state.full_grad_bias
    new_x = prox_shrink(w.x - alpha * v_x, alpha * objective.lam)
    return WeightVector(x=new_x, bias=w.bias - alpha * v_bias)


@dataclass
class SolverConfig:
    """Full hyperparameter record for one solver run.

    ``n_p``/``n_o`` only matter for the orthant-switching solver;
    ``rda_gamma`` only for dual averaging; ``svrg_inner`` (snapshot
    refresh period, default one epoch) only for SVRG. ``schedule`` picks
    the step-size rule: "epoch" multiplies alpha0 by decay_factor once
    per epoch, "inv_k" uses alpha0 / (1 + inv_k_rate * k).
    """

    lam: float
    batch_size: int
    epochs: int
    seed: int = 0
    alpha0: float = 1.0
    decay_factor: float = 0.995
    n_p: float = math.inf
    n_o: float = 0
    rda_gamma: float = None
    svrg_inner: int = None
    schedule: str = "epoch"
    inv_k_rate: float = 0.05

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        if not 0 < self.decay_factor <= 1:
            raise ValueError("decay_factor must be in (0, 1]")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.n_p < 0 or self.n_o < 0 or self.n_p + self.n_o < 1:
            raise ValueError("need n_p, n_o >= 0 with n_p + n_o >= 1")
        if self.rda_gamma is not None and self.rda_gamma <= 0:
            raise ValueError("rda_gamma must be positive")
        if self.svrg_inner is not None and self.svrg_inner < 1:
            raise ValueError("svrg_inner must be at least 1")
        if self.schedule not in ("epoch", "inv_k"):
            raise ValueError(f"unknown step-size schedule {self.schedule!r}")
        if self.inv_k_rate <= 0:
            raise ValueError("inv_k_rate must be positive")

    def step_size(self, epoch, k):
        if self.schedule == "epoch":
            return self.alpha0 * self.decay_factor**epoch
        return self.alpha0 / (1.0 + self.inv_k_rate * k)
