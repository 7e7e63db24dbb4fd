"""Synthetic problem generators used by the CLI and the test suite."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dataio import Dataset
from .losses import WeightVector
from .solvers import prox_shrink


def make_synthetic(n, num_examples, sparsity, seed, margin_floor=0.5):
    """Well-separated logistic dataset from a planted sparse weight vector.

    Plants ``sparsity`` nonzero weights with magnitudes in [1, 2], draws
    standard-normal feature rows, labels each row by the sign of its
    margin, and redraws rows whose absolute margin falls below
    ``margin_floor`` so the classes separate cleanly. Returns the
    Dataset and the planted WeightVector (zero bias).
    """
    if n < 1 or num_examples < 1:
        raise ValueError("need n >= 1 and num_examples >= 1")
    if not 0 < sparsity <= n:
        raise ValueError("sparsity must be in (0, n]")
    rng = np.random.default_rng(seed)
    truth = np.zeros(n)
    support = rng.choice(n, size=sparsity, replace=False)
    truth[support] = rng.choice((-1.0, 1.0), size=sparsity) * rng.uniform(1.0, 2.0, size=sparsity)

    features = rng.standard_normal((num_examples, n))
    margins = features @ truth
    for _ in range(200):
        weak = np.abs(margins) < margin_floor
        if not np.any(weak):
            break
        features[weak] = rng.standard_normal((int(weak.sum()), n))
        margins = features @ truth
    labels = np.sign(margins)
    dataset = Dataset(features=sp.csr_matrix(features), labels=labels)
    return dataset, WeightVector(x=truth, bias=np.zeros(1))


@dataclass
class ShrinkageLoss:
    """Strongly convex quadratic: mean of 0.5 * ||x - c_i||^2 over centers.

    The full gradient is x minus the exact center mean, so the composite
    problem's minimizer is the soft-thresholded center mean in closed
    form. No bias block.
    """

    centers: np.ndarray

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=np.float64)
        self.dim = self.centers.shape[1]
        self.bias_dim = 0
        self.center_mean = self.centers.mean(axis=0)

    @property
    def num_examples(self):
        return self.centers.shape[0]

    def value(self, w, batch):
        diffs = w.x - self.centers[np.asarray(batch)]
        return float(0.5 * np.mean(np.sum(diffs**2, axis=1)))

    def gradient(self, w, batch):
        return w.x - self.centers[np.asarray(batch)].mean(axis=0), np.zeros(0)


def make_shrinkage_instance(n, num_examples, support_size, lam, seed, noise=0.05):
    """Quadratic instance whose composite minimizer is known analytically.

    Support coordinates of the center mean sit well above the shrinkage
    threshold (magnitude lam + [1, 2]); the rest sit strictly inside it.
    Per-example centers add zero-mean noise (recentred exactly), so
    mini-batch gradients are noisy but the full gradient is exact.
    Returns (loss, x_star) with x_star = prox_shrink(center_mean, lam).
    """
    if not 0 < support_size <= n:
        raise ValueError("support_size must be in (0, n]")
    rng = np.random.default_rng(seed)
    mean = np.zeros(n)
    support = rng.choice(n, size=support_size, replace=False)
    mean[support] = rng.choice((-1.0, 1.0), size=support_size) * (
        lam + rng.uniform(1.0, 2.0, size=support_size)
    )
    off_support = np.setdiff1d(np.arange(n), support)
    mean[off_support] = rng.uniform(-0.6, 0.6, size=off_support.size) * lam

    jitter = noise * rng.standard_normal((num_examples, n))
    jitter -= jitter.mean(axis=0)
    loss = ShrinkageLoss(centers=mean + jitter)
    return loss, prox_shrink(mean, lam)
