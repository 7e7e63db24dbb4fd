import os

import numpy as np
import pytest

from obprox.dataio import parse_libsvm

HERE = os.path.dirname(__file__)
DATA_DIR = os.environ.get("OBPROX_DATA_DIR", os.path.join(HERE, "..", "data"))


def dataset_file(name):
    """Path to a benchmark LIBSVM file under data/, or None if absent."""
    for candidate in (name, name + ".gz"):
        path = os.path.join(DATA_DIR, candidate)
        if os.path.exists(path):
            return path
    return None


def requires_dataset(name):
    return pytest.mark.skipif(
        dataset_file(name) is None,
        reason=f"benchmark dataset {name!r} not present under data/ (URLs in README)",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_dataset():
    # 5 examples, 4 features, mixed sparsity
    text = (
        "+1 1:1.0 3:-0.5\n"
        "-1 2:2.0 4:0.25\n"
        "+1 1:-1.5 2:0.5 3:1.0\n"
        "-1 4:1.0\n"
        "+1 2:-0.75 4:-2.0\n"
    )
    return parse_libsvm(text)
