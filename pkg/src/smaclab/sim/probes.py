"""Focused covering/packing experiments around their rate thresholds.

Each probe isolates one codebook-sizing mechanism: the compression search
(candidate state descriptions against the realized state), the
Gelfand-Pinsker bin search (candidate inputs against the state), and cell
decoding (candidate x2 words against the channel output).  Success
frequencies cross their thresholds at the matching conditional information
quantities.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .. import kernels
from ..errors import ResourceLimitError
from ..probability import JointDistribution, marginalize
from .codebooks import sample_rows
from .config import ResourceLimits, TupleRef
from .montecarlo import wilson_interval


@dataclass(frozen=True)
class ProbeResult:
    trials: int
    successes: int
    candidates: int
    freq: float
    ci_low: float
    ci_high: float

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _candidate_count(n: int, rate: float) -> int:
    return max(1, ceil(2.0 ** (n * max(rate, 0.0)) - 1e-9))


def _guard(ops: float, limits: ResourceLimits):
    if ops > limits.max_probe_ops:
        raise ResourceLimitError(
            f"probe would cost ~{ops:.3g} symbol operations (limit {limits.max_probe_ops:.3g})"
        )


def _conditional(marg: np.ndarray, axis: int) -> np.ndarray:
    """p(last axis | axis) with uniform off-support rows."""
    denom = marg.sum(axis=-1, keepdims=True)
    out = np.divide(marg, denom, out=np.zeros_like(marg), where=denom > 0)
    return np.where(denom == 0, 1.0 / marg.shape[-1], out)


def covering_probe(
    joint: JointDistribution,
    n: int,
    epsilon: float,
    rate: float,
    trials: int,
    seed: int,
    limits: ResourceLimits = ResourceLimits(),
) -> ProbeResult:
    """Frequency of finding a candidate state description jointly typical
    with fresh (state, x2) draws, among 2^(n*rate) i.i.d. candidates."""
    m = _candidate_count(n, rate)
    _guard(float(m) * n * trials, limits)
    ref = TupleRef(joint, ("S", "V", "X2"), n, epsilon)
    q_s = marginalize(joint, ("S",))
    p_x2 = marginalize(joint, ("X2",))
    p_v_x2 = _conditional(marginalize(joint, ("V", "X2")).T, 0)  # (X2, V)

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(10,)))
    cum_s, cum_x2 = np.cumsum(q_s), np.cumsum(p_x2)
    succ = 0
    for _ in range(trials):
        s = np.minimum((rng.random(n)[:, None] >= cum_s).sum(axis=1), len(q_s) - 1)
        x2 = np.minimum((rng.random(n)[:, None] >= cum_x2).sum(axis=1), len(p_x2) - 1)
        v = sample_rows(rng, p_v_x2, np.broadcast_to(x2, (m, n)))
        ids = ref.ids(S=s[None, :], V=v, X2=x2[None, :])
        if kernels.scan_first(ids, ref.lo, ref.hi) >= 0:
            succ += 1
    lo, hi = wilson_interval(succ, trials)
    return ProbeResult(trials, succ, m, succ / trials, lo, hi)


def gp_binning_probe(
    joint: JointDistribution,
    n: int,
    epsilon: float,
    rate: float,
    trials: int,
    seed: int,
    limits: ResourceLimits = ResourceLimits(),
) -> ProbeResult:
    """Frequency of finding a candidate input word jointly typical with the
    state given (v, x2), among 2^(n*rate) candidates drawn from the
    input-word prior."""
    m = _candidate_count(n, rate)
    _guard(float(m) * n * trials, limits)
    ref = TupleRef(joint, ("S", "U", "V", "X2"), n, epsilon)
    p_svx2 = marginalize(joint, ("S", "V", "X2"))
    flat = p_svx2.ravel()
    shape = p_svx2.shape
    p_uvx2 = marginalize(joint, ("U", "V", "X2"))  # (U, V, X2)
    p_u_vx2 = _conditional(np.moveaxis(p_uvx2, 0, -1), 0)  # (V, X2, U)

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(11,)))
    cum = np.cumsum(flat)
    succ = 0
    for _ in range(trials):
        cells = np.minimum((rng.random(n)[:, None] >= cum).sum(axis=1), flat.size - 1)
        s, v, x2 = np.unravel_index(cells, shape)
        u = sample_rows(
            rng, p_u_vx2, (np.broadcast_to(v, (m, n)), np.broadcast_to(x2, (m, n)))
        )
        ids = ref.ids(S=s[None, :], U=u, V=v[None, :], X2=x2[None, :])
        if kernels.scan_first(ids, ref.lo, ref.hi) >= 0:
            succ += 1
    lo, hi = wilson_interval(succ, trials)
    return ProbeResult(trials, succ, m, succ / trials, lo, hi)


def packing_probe(
    joint: JointDistribution,
    n: int,
    epsilon: float,
    rate: float,
    trials: int,
    seed: int,
    limits: ResourceLimits = ResourceLimits(),
) -> ProbeResult:
    """Frequency of uniquely recognizing the true x2 word against
    2^(n*rate) - 1 impostors drawn from the x2 prior."""
    m = _candidate_count(n, rate)
    _guard(float(m) * n * trials, limits)
    ref = TupleRef(joint, ("X2", "Y"), n, epsilon)
    p_x2y = marginalize(joint, ("X2", "Y"))
    flat = p_x2y.ravel()
    shape = p_x2y.shape
    p_x2 = marginalize(joint, ("X2",))

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(12,)))
    cum_pair = np.cumsum(flat)
    cum_x2 = np.cumsum(p_x2)
    succ = 0
    for _ in range(trials):
        cells = np.minimum((rng.random(n)[:, None] >= cum_pair).sum(axis=1), flat.size - 1)
        x2, y = np.unravel_index(cells, shape)
        ids_true = ref.ids(X2=x2[None, :], Y=y[None, :])
        if kernels.scan_first(ids_true, ref.lo, ref.hi) != 0:
            continue
        if m > 1:
            imp = np.minimum(
                (rng.random((m - 1, n))[..., None] >= cum_x2).sum(axis=-1), len(p_x2) - 1
            )
            ids = ref.ids(X2=imp, Y=y[None, :])
            count, _first = kernels.scan_count2(ids, ref.lo, ref.hi)
            if count > 0:
                continue
        succ += 1
    lo, hi = wilson_interval(succ, trials)
    return ProbeResult(trials, succ, m, succ / trials, lo, hi)
