"""Pure-numpy fallback for the typicality scan kernels.

Mirrors the compiled extension exactly: a row of ``ids`` is typical when
every flattened-symbol count lies in [lo, hi].  Rows are processed in
chunks with a single offset bincount per chunk.
"""

import numpy as np

# Rows per chunk are sized so the offset-bincount buffer stays modest.
_CHUNK_CELLS = 1 << 22


def _chunk_rows(k: int) -> int:
    return max(1, _CHUNK_CELLS // max(k, 1))


def _flags_chunk(ids: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    m, _ = ids.shape
    k = lo.shape[0]
    offsets = (np.arange(m, dtype=np.int64) * k)[:, None]
    counts = np.bincount(
        (ids.astype(np.int64) + offsets).ravel(), minlength=m * k
    ).reshape(m, k)
    return ((counts >= lo) & (counts <= hi)).all(axis=1)


def scan_first(ids: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> int:
    m = ids.shape[0]
    step = _chunk_rows(lo.shape[0])
    for start in range(0, m, step):
        flags = _flags_chunk(ids[start : start + step], lo, hi)
        hits = np.flatnonzero(flags)
        if hits.size:
            return start + int(hits[0])
    return -1


def scan_flags(ids: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    m = ids.shape[0]
    out = np.zeros(m, dtype=bool)
    step = _chunk_rows(lo.shape[0])
    for start in range(0, m, step):
        out[start : start + step] = _flags_chunk(ids[start : start + step], lo, hi)
    return out


def scan_count2(ids: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    m = ids.shape[0]
    step = _chunk_rows(lo.shape[0])
    count = 0
    first = -1
    for start in range(0, m, step):
        flags = _flags_chunk(ids[start : start + step], lo, hi)
        hits = np.flatnonzero(flags)
        if hits.size:
            if first < 0:
                first = start + int(hits[0])
            count += int(hits.size)
            if count >= 2:
                return 2, first
    return min(count, 2), first
