"""Backend selection for the typicality scan kernels.

The compiled extension is used when it imported cleanly; otherwise the
pure-numpy fallback takes over.  Set ``SMACLAB_PURE_PYTHON=1`` to force the
fallback (the benchmark uses this to compare both).
"""

import os

import numpy as np

from . import _typscan_py

if os.environ.get("SMACLAB_PURE_PYTHON"):
    _impl = _typscan_py
    BACKEND = "python"
else:
    try:
        from . import _typscan as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _typscan_py
        BACKEND = "python"


def available_backends() -> dict:
    """Map of backend name to implementation module (for tests/benchmarks)."""
    out = {"python": _typscan_py}
    try:
        from . import _typscan  # type: ignore[attr-defined]

        out["cython"] = _typscan
    except ImportError:
        pass
    return out


def frequency_bounds(ref_flat: np.ndarray, n: int, epsilon: float):
    """Per-cell count bands [lo, hi] for relative-epsilon strong typicality.

    A length-n sequence batch is typical iff every flattened joint symbol
    count c satisfies lo <= c <= hi.  Zero-probability cells get lo = hi = 0,
    which is exactly the support condition.
    """
    ref = np.ascontiguousarray(ref_flat, dtype=np.float64).ravel()
    lo = (1.0 - epsilon) * n * ref
    hi = (1.0 + epsilon) * n * ref
    return lo, hi


def _prep(ids: np.ndarray) -> np.ndarray:
    ids = np.ascontiguousarray(ids, dtype=np.uint32)
    if ids.ndim == 1:
        ids = ids[None, :]
    return ids


def scan_first(ids, lo, hi, impl=None) -> int:
    return int((impl or _impl).scan_first(_prep(ids), lo, hi))


def scan_flags(ids, lo, hi, impl=None) -> np.ndarray:
    return (impl or _impl).scan_flags(_prep(ids), lo, hi)


def scan_count2(ids, lo, hi, impl=None):
    count, first = (impl or _impl).scan_count2(_prep(ids), lo, hi)
    return int(count), int(first)
