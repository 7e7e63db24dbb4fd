"""Smooth losses, the l1-composite objective, and sign-pattern bookkeeping.

A loss exposes ``dim`` (regularized coordinates), ``bias_dim``
(unregularized coordinates), ``num_examples``, and mini-batch
``value(w, batch)`` / ``gradient(w, batch)``. The l1 penalty is applied to
the ``x`` block of a WeightVector only, never to the bias block.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit


@dataclass
class WeightVector:
    """Dense iterate: regularized coordinates ``x`` plus unregularized bias."""

    x: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)

    @classmethod
    def zeros(cls, dim, bias_dim=1):
        return cls(x=np.zeros(dim), bias=np.zeros(bias_dim))

    def copy(self):
        return WeightVector(x=self.x.copy(), bias=self.bias.copy())

    def to_json_dict(self):
        return {"x": self.x.tolist(), "bias": self.bias.tolist()}

    def save(self, path):
        np.savez(path, x=self.x, bias=self.bias)

    @classmethod
    def load(cls, path):
        with np.load(path) as archive:
            return cls(x=archive["x"], bias=archive["bias"])


@dataclass
class IndexSets:
    """Exact sign classification of the regularized coordinates."""

    zero: frozenset
    positive: frozenset
    negative: frozenset

    @property
    def nonzero(self):
        return self.positive | self.negative


def index_sets(w):
    x = w.x if isinstance(w, WeightVector) else np.asarray(w)
    return IndexSets(
        zero=frozenset(np.flatnonzero(x == 0.0).tolist()),
        positive=frozenset(np.flatnonzero(x > 0.0).tolist()),
        negative=frozenset(np.flatnonzero(x < 0.0).tolist()),
    )


def _check_batch(batch):
    batch = np.asarray(batch, dtype=np.int64)
    if batch.size == 0:
        raise ValueError("batch must be nonempty")
    return batch


def logistic_value(dataset, batch, w):
    """Mean log(1 + exp(-margin)) over the batch, computed stably."""
    batch = _check_batch(batch)
    rows = dataset.features[batch]
    margins = dataset.labels[batch] * (rows @ w.x + w.bias[0])
    return float(np.mean(np.logaddexp(0.0, -margins)))


def logistic_gradient(dataset, batch, w):
    """Mini-batch gradient of the logistic loss over (x, bias)."""
    batch = _check_batch(batch)
    rows = dataset.features[batch]
    labels = dataset.labels[batch]
    margins = labels * (rows @ w.x + w.bias[0])
    coeff = -labels * expit(-margins) / batch.size
    grad_x = np.asarray(rows.T @ coeff).ravel()
    grad_bias = np.array([coeff.sum()])
    return grad_x, grad_bias


class LogisticLoss:
    """Binary logistic regression loss over a sparse Dataset."""

    def __init__(self, dataset):
        self.dataset = dataset
        self.bias_dim = 1

    @property
    def dim(self):
        return self.dataset.num_features

    @property
    def num_examples(self):
        return self.dataset.num_examples

    def value(self, w, batch):
        return logistic_value(self.dataset, batch, w)

    def gradient(self, w, batch):
        return logistic_gradient(self.dataset, batch, w)


@dataclass
class CompositeObjective:
    """Smooth loss plus ``lam * ||x||_1`` (bias block excluded)."""

    loss: object
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("l1 weight must be nonnegative")

    def value(self, w, batch):
        """Return (regularized value, smooth value)."""
        smooth = self.loss.value(w, batch)
        return smooth + self.lam * float(np.abs(w.x).sum()), smooth

    def gradient(self, w, batch):
        return self.loss.gradient(w, batch)

    def surrogate_gradient(self, w, batch, sign_pattern):
        """Gradient of the smooth rewrite ``f + lam * pattern . x``.

        On an orthant face the l1 term is linear, so this equals the
        gradient of the composite restricted to that face. The bias block
        carries the plain loss gradient.
        """
        sign_pattern = np.asarray(sign_pattern, dtype=np.float64)
        if sign_pattern.shape != w.x.shape:
            raise ValueError("sign pattern length does not match iterate")
        grad_x, grad_bias = self.loss.gradient(w, batch)
        return grad_x + self.lam * sign_pattern, grad_bias


def tiny_net_layout(num_inputs, hidden):
    """Coordinate layout of the one-hidden-layer net inside a WeightVector.

    x block: [input-to-hidden weights (hidden*num_inputs), output weights
    (hidden)]; bias block: [hidden unit biases (hidden), output bias (1)].
    """
    return {
        "dim": hidden * num_inputs + hidden,
        "bias_dim": hidden + 1,
        "w1": (0, hidden * num_inputs),
        "w2": (hidden * num_inputs, hidden * num_inputs + hidden),
    }


def tiny_net_value_and_gradient(features, labels, batch, w, hidden):
    """Loss and exact gradient of a tanh-hidden-layer logistic classifier.

    ``features`` is a dense (N, num_inputs) array, labels are +-1. The l1
    penalty applies to both weight matrices (the x block); hidden and
    output biases live in the bias block.
    """
    batch = _check_batch(batch)
    num_inputs = features.shape[1]
    layout = tiny_net_layout(num_inputs, hidden)
    if w.x.shape[0] != layout["dim"] or w.bias.shape[0] != layout["bias_dim"]:
        raise ValueError("parameter vector does not match network dimensions")
    w1 = w.x[layout["w1"][0] : layout["w1"][1]].reshape(hidden, num_inputs)
    w2 = w.x[layout["w2"][0] : layout["w2"][1]]
    b1, b2 = w.bias[:hidden], w.bias[hidden]

    rows = features[batch]
    labs = labels[batch]
    hidden_act = np.tanh(rows @ w1.T + b1)
    scores = hidden_act @ w2 + b2
    margins = labs * scores
    value = float(np.mean(np.logaddexp(0.0, -margins)))

    dscore = -labs * expit(-margins) / batch.size
    grad_w2 = hidden_act.T @ dscore
    grad_b2 = dscore.sum()
    dhidden = np.outer(dscore, w2) * (1.0 - hidden_act**2)
    grad_w1 = dhidden.T @ rows
    grad_b1 = dhidden.sum(axis=0)

    grad_x = np.concatenate([grad_w1.ravel(), grad_w2])
    grad_bias = np.concatenate([grad_b1, [grad_b2]])
    return value, grad_x, grad_bias


class TinyNetLoss:
    """One-hidden-layer network on dense features, for non-convex smoke runs."""

    def __init__(self, features, labels, hidden=8):
        self.features = np.asarray(features, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.float64)
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature rows and labels disagree in length")
        self.hidden = hidden
        layout = tiny_net_layout(self.features.shape[1], hidden)
        self.dim = layout["dim"]
        self.bias_dim = layout["bias_dim"]

    @property
    def num_examples(self):
        return self.features.shape[0]

    def value(self, w, batch):
        value, _, _ = tiny_net_value_and_gradient(self.features, self.labels, batch, w, self.hidden)
        return value

    def gradient(self, w, batch):
        _, grad_x, grad_bias = tiny_net_value_and_gradient(
            self.features, self.labels, batch, w, self.hidden
        )
        return grad_x, grad_bias

    def init_weights(self, seed, scale=0.1):
        # small symmetric init; biases start at zero
        rng = np.random.default_rng(seed)
        return WeightVector(
            x=rng.uniform(-scale, scale, size=self.dim), bias=np.zeros(self.bias_dim)
        )
