"""Strong joint typicality over tuples of symbol sequences.

A tuple of length-n sequences is strongly jointly typical with respect to a
reference joint pmf when every joint empirical frequency pi(a) satisfies
|pi(a) - p(a)| <= epsilon * p(a), and pi(a) = 0 wherever p(a) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UsageError, ValidationError


@dataclass(frozen=True)
class TypicalityParams:
    """Relative slack on empirical frequencies and the block length."""

    epsilon: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValidationError(f"epsilon must be in (0,1), got {self.epsilon}")
        if self.n < 1:
            raise ValidationError(f"block length must be >= 1, got {self.n}")


def flatten_ids(sequences, shape) -> np.ndarray:
    """Row-major flattened joint-symbol ids for aligned sequences."""
    return np.ravel_multi_index(tuple(np.asarray(s) for s in sequences), tuple(shape)).astype(
        np.uint32
    )


def is_jointly_typical(sequences, reference: np.ndarray, params: TypicalityParams) -> bool:
    """Check one tuple of sequences against a reference joint pmf tensor.

    ``sequences`` is one integer array per variable, in the same order as the
    axes of ``reference``.
    """
    reference = np.asarray(reference, dtype=np.float64)
    seqs = [np.asarray(s) for s in sequences]
    if len(seqs) != reference.ndim:
        raise UsageError(
            f"{len(seqs)} sequences for a reference with {reference.ndim} variables"
        )
    for s in seqs:
        if s.shape != (params.n,):
            raise UsageError(f"sequence of shape {s.shape} does not match n={params.n}")
    ids = flatten_ids(seqs, reference.shape)
    lo, hi = kernels.frequency_bounds(reference, params.n, params.epsilon)
    return kernels.scan_first(ids, lo, hi) == 0
