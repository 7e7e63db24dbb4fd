"""LIBSVM-format dataset loading and reproducible mini-batch plans.

The text format is one example per line, ``label index:value ...`` with
1-based, strictly ascending indices. Labels may be +1/-1 or the {0, 1}
convention; 0 is remapped to -1 at parse time. Feature rows are stored as
a CSR matrix; there is no header, so the feature count defaults to the
largest index seen unless an explicit override is given.

Batch plans are a pure function of (seed, epoch): each epoch permutes
0..N-1 with a PCG64 generator seeded from ``SeedSequence([seed, epoch])``
and slices the permutation into consecutive batches, keeping the short
final batch so each epoch is an exact partition.
"""

import gzip
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class LibsvmParseError(ValueError):
    """Malformed LIBSVM input; carries the offending 1-based line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass
class SparseExample:
    """One row: ascending 0-based feature ids, values, and a +-1 label."""

    indices: np.ndarray
    values: np.ndarray
    label: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have equal length")
        if self.indices.size and (np.any(np.diff(self.indices) <= 0) or self.indices[0] < 0):
            raise ValueError("indices must be nonnegative and strictly increasing")
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label}")


@dataclass
class Dataset:
    """Immutable design matrix (CSR) with +-1 labels.

    Safe to share across threads after construction; nothing in the
    package mutates it.
    """

    features: sp.csr_matrix
    labels: np.ndarray

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature rows and labels disagree in length")
        if self.features.shape[0] < 1:
            raise ValueError("dataset must contain at least one example")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")

    @property
    def num_examples(self):
        return self.features.shape[0]

    @property
    def num_features(self):
        return self.features.shape[1]

    def example(self, i):
        start, stop = self.features.indptr[i], self.features.indptr[i + 1]
        return SparseExample(
            indices=self.features.indices[start:stop].astype(np.int64),
            values=self.features.data[start:stop].copy(),
            label=int(self.labels[i]),
        )

    @classmethod
    def from_examples(cls, examples, num_features=None):
        if not examples:
            raise ValueError("dataset must contain at least one example")
        max_index = max((int(ex.indices[-1]) for ex in examples if ex.indices.size), default=-1)
        if num_features is None:
            num_features = max_index + 1
        elif num_features <= max_index:
            raise ValueError(
                f"feature-count override {num_features} is smaller than max index {max_index + 1}"
            )
        indptr = np.zeros(len(examples) + 1, dtype=np.int64)
        for i, ex in enumerate(examples):
            indptr[i + 1] = indptr[i] + ex.indices.size
        indices = np.concatenate([ex.indices for ex in examples]) if indptr[-1] else np.zeros(0, np.int64)
        data = np.concatenate([ex.values for ex in examples]) if indptr[-1] else np.zeros(0, np.float64)
        matrix = sp.csr_matrix((data, indices, indptr), shape=(len(examples), num_features))
        labels = np.array([ex.label for ex in examples], dtype=np.float64)
        return cls(features=matrix, labels=labels)


def _parse_label(token, line_number):
    try:
        raw = float(token)
    except ValueError:
        raise LibsvmParseError(f"non-numeric label {token!r}", line_number) from None
    if not raw.is_integer() or int(raw) not in (-1, 0, 1):
        raise LibsvmParseError(f"label must be one of -1, 0, +1, got {token!r}", line_number)
    # {0, 1} files use 0 for the negative class
    return -1 if int(raw) == 0 else int(raw)


def _parse_pair(token, line_number):
    head, sep, tail = token.partition(":")
    if not sep:
        raise LibsvmParseError(f"expected index:value, got {token!r}", line_number)
    try:
        index = int(head)
        value = float(tail)
    except ValueError:
        raise LibsvmParseError(f"non-numeric token in pair {token!r}", line_number) from None
    if index < 1:
        raise LibsvmParseError(f"feature indices are 1-based, got {index}", line_number)
    return index, value


def parse_libsvm(text_stream, num_features=None):
    """Parse LIBSVM text into a Dataset.

    ``text_stream`` is an iterable of lines (an open file works); a plain
    string is split on newlines. Blank lines are skipped. Raises
    LibsvmParseError with the line number on malformed input or if no
    examples are found.
    """
    if isinstance(text_stream, str):
        text_stream = text_stream.splitlines()
    examples = []
    for line_number, line in enumerate(text_stream, start=1):
        tokens = line.split()
        if not tokens:
            continue
        label = _parse_label(tokens[0], line_number)
        indices = np.empty(len(tokens) - 1, dtype=np.int64)
        values = np.empty(len(tokens) - 1, dtype=np.float64)
        for j, token in enumerate(tokens[1:]):
            index, value = _parse_pair(token, line_number)
            indices[j] = index - 1
            values[j] = value
        if indices.size and np.any(np.diff(indices) <= 0):
            raise LibsvmParseError("feature indices must be strictly ascending", line_number)
        examples.append(SparseExample(indices=indices, values=values, label=label))
    if not examples:
        raise LibsvmParseError("no examples found in input")
    try:
        return Dataset.from_examples(examples, num_features=num_features)
    except ValueError as exc:
        raise LibsvmParseError(str(exc)) from None


def load_dataset(path, num_features=None):
    """Read a LIBSVM file; ``.gz`` paths are decompressed transparently."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as handle:
        return parse_libsvm(handle, num_features=num_features)


def to_libsvm(dataset):
    """Serialize to canonical LIBSVM text: +1/-1 labels, 1-based indices."""
    lines = []
    for i in range(dataset.num_examples):
        ex = dataset.example(i)
        pairs = " ".join(f"{int(j) + 1}:{float(v)!r}" for j, v in zip(ex.indices, ex.values))
        lines.append(f"{ex.label:+d} {pairs}".rstrip())
    return "\n".join(lines) + "\n"


def benchmark_batch_size(num_examples):
    """Benchmark default mini-batch size: min(256, ceil(0.01 * N))."""
    if num_examples < 1:
        raise ValueError("need at least one example")
    return min(256, math.ceil(0.01 * num_examples))


@dataclass
class BatchPlan:
    """Seeded permutation of one epoch, sliced into consecutive batches."""

    num_examples: int
    batch_size: int
    seed: int
    epoch_index: int
    epoch_permutation: np.ndarray = field(init=False)

    def __post_init__(self):
        if not 1 <= self.batch_size <= self.num_examples:
            raise ValueError(
                f"batch_size must be in [1, {self.num_examples}], got {self.batch_size}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.epoch_index < 0:
            raise ValueError("epoch_index must be nonnegative")
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed, self.epoch_index]))
        )
        self.epoch_permutation = rng.permutation(self.num_examples)

    def batches(self):
        perm, size = self.epoch_permutation, self.batch_size
        return [perm[i : i + size] for i in range(0, len(perm), size)]


def make_batches(dataset, batch_size, seed, epoch_index):
    """Deterministic list of index batches partitioning one epoch.

    ``dataset`` may be a Dataset or a plain example count. Same
    (seed, epoch_index, batch_size) always yields the same batches.
    """
    num_examples = getattr(dataset, "num_examples", dataset)
    plan = BatchPlan(
        num_examples=int(num_examples),
        batch_size=batch_size,
        seed=seed,
        epoch_index=epoch_index,
    )
    return plan.batches()
