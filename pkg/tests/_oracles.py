"""Independent numerical oracles shared by the test suite.

These deliberately avoid the library's own gradient/prox code paths so
that agreement is evidence, not tautology.
"""

import numpy as np


def central_difference_gradient(func, point, h=1e-6):
    """Dense central-difference gradient of a scalar function."""
    point = np.asarray(point, dtype=np.float64)
    grad = np.zeros_like(point)
    for i in range(point.size):
        up = point.copy()
        down = point.copy()
        up[i] += h
        down[i] -= h
        grad[i] = (func(up) - func(down)) / (2.0 * h)
    return grad


def relative_error(approx, exact):
    approx = np.asarray(approx, dtype=np.float64)
    exact = np.asarray(exact, dtype=np.float64)
    scale = max(float(np.linalg.norm(exact)), 1e-12)
    return float(np.linalg.norm(approx - exact)) / scale


def flat_loss(loss_value, template_w, batch):
    """Wrap a loss's value() as a function of one flat [x, bias] vector."""
    from obprox.losses import WeightVector

    dim = template_w.x.size

    def func(flat):
        w = WeightVector(x=flat[:dim], bias=flat[dim:])
        return loss_value(w, batch)

    return func
