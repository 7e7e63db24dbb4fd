"""Optimality and sparsity measurement, plus brute-force test oracles.

The per-epoch trace CSV has a fixed column order
(epoch, k, F, f, density_percent, grad_map_norm, step_type) and contains
no timing, so identical configurations produce byte-identical files;
wall-clock time stays on the in-memory records and in the JSON summary.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .losses import WeightVector
from .solvers import prox_shrink

TRACE_COLUMNS = ("epoch", "k", "F", "f", "density_percent", "grad_map_norm", "step_type")


@dataclass
class EpochRecord:
    epoch: int
    k: int
    F: float
    f: float
    density_percent: float
    grad_map_norm: float
    step_type: str
    wall_time_seconds: float


@dataclass
class IterateTrace:
    """Per-epoch records of one solver run, in epoch order."""

    records: list = field(default_factory=list)

    def append(self, record):
        if self.records and record.epoch <= self.records[-1].epoch:
            raise ValueError("epochs must be strictly increasing")
        if not 0.0 <= record.density_percent <= 100.0:
            raise ValueError("density must lie in [0, 100]")
        if record.F < record.f:
            raise ValueError("composite value cannot fall below the smooth value")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def final(self):
        return self.records[-1]

    def column(self, name):
        return [getattr(r, name) for r in self.records]

    def to_csv_text(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in self.records:
            writer.writerow(
                [r.epoch, r.k, repr(r.F), repr(r.f), repr(r.density_percent),
                 repr(r.grad_map_norm), r.step_type]
            )
        return buffer.getvalue()

    def to_csv(self, path):
        with open(path, "w") as handle:
            handle.write(self.to_csv_text())


def density(w):
    """Percentage of exactly-nonzero entries in the x block (bias excluded)."""
    x = w.x if isinstance(w, WeightVector) else np.asarray(w)
    if x.size == 0:
        return 0.0
    return float(100.0 * np.count_nonzero(x) / x.size)


def support_delta(prev_w, next_w):
    """Index sets gained and lost between two iterates' supports."""
    prev = prev_w.x if isinstance(prev_w, WeightVector) else np.asarray(prev_w)
    nxt = next_w.x if isinstance(next_w, WeightVector) else np.asarray(next_w)
    if prev.shape != nxt.shape:
        raise ValueError("iterates have mismatched lengths")
    before = frozenset(np.flatnonzero(prev).tolist())
    after = frozenset(np.flatnonzero(nxt).tolist())
    return after - before, before - after


def gradient_mapping(objective, w, eta, batch=None):
    """Proximal gradient mapping of the composite objective at w.

    Returns the concatenated [x block, bias block] vector
    (x - prox(x - eta * grad)) / eta; on the unregularized bias block the
    prox is the identity, so that block is just the gradient. ``batch``
    of None means the full dataset.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    if batch is None:
        batch = np.arange(objective.loss.num_examples)
    grad_x, grad_bias = objective.gradient(w, batch)
    mapped = (w.x - prox_shrink(w.x - eta * grad_x, eta * objective.lam)) / eta
    return np.concatenate([mapped, grad_bias])


def brute_force_prox_oracle(trial, alpha, lam, grid_resolution=1e-4):
    """Grid argmin of the scalar prox objective; independent check of
    prox_shrink.

    Minimizes (x - trial)^2 / (2 alpha) + lam * |x| over a uniform grid
    spanning [-2|trial| - 1, 2|trial| + 1] (zero is always a candidate,
    since it is the objective's kink).
    """
    if grid_resolution <= 0:
        raise ValueError("grid_resolution must be positive")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    half_width = 2.0 * abs(trial) + 1.0
    grid = np.arange(-half_width, half_width + grid_resolution, grid_resolution)
    objective = grid - trial
    np.multiply(objective, objective, out=objective)
    objective *= 0.5 / alpha
    penalty = np.abs(grid)
    penalty *= lam
    objective += penalty
    best = int(np.argmin(objective))
    # the kink at zero is always a candidate; ties resolve to zero
    zero_value = 0.5 * trial * trial / alpha
    if zero_value <= objective[best]:
        return 0.0
    return float(grid[best])
