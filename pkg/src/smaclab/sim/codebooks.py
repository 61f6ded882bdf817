"""Random codebook generation for the three schemes.

Layered structure: x2 words at the top, one v word per compression index
conditioned on its parent x2 word, and a bank of u words per (message, bin)
pair conditioned on (v, x2).  Components are i.i.d. across positions given
the parent symbols, and everything is reproducible from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SchemeContext


def sample_rows(rng, prob_rows: np.ndarray, parents: np.ndarray) -> np.ndarray:
    """Draw one symbol per entry of ``parents`` from the row it selects.

    ``prob_rows`` has shape (*parent_sizes, m); ``parents`` indexes rows
    either as an integer array (single parent) or a tuple of arrays.
    """
    rows = prob_rows[parents]
    cum = np.cumsum(rows, axis=-1)
    u = rng.random(cum.shape[:-1])
    out = (u[..., None] >= cum).sum(axis=-1)
    return np.minimum(out, rows.shape[-1] - 1).astype(np.int8)


@dataclass(frozen=True)
class CodebookA:
    """Per-block codebooks: independently drawn for every block."""

    x2: tuple  # per block: (M_c, M_hat, n)
    v: tuple  # per block: (M_c, M_hat, M_hat, n)
    u: tuple  # per block: (M_c, M_hat, M_hat, M_1, J, n)
    seed_key: tuple
    sizes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CodebookB:
    """Single codebook plus the cell partition of the compression indices."""

    x2: np.ndarray  # (M_c, M_0, n)
    v: np.ndarray  # (M_c, M_0, M_hat, n)
    u: np.ndarray  # (M_c, M_0, M_hat, M_1, J, n)
    cell_of: np.ndarray  # (M_hat,) -> cell index
    cells: tuple  # per cell: sorted member indices
    seed_key: tuple
    sizes: dict = field(default_factory=dict)


def _layered_draw(ctx: SchemeContext, rng, top_shape: tuple):
    """Draw one (x2, v, u) layer family with the given top-level x2 shape."""
    cfg = ctx.cfg
    n = ctx.n
    mc, k2 = top_shape  # x2 words indexed (w_c, second index)
    x2 = sample_rows(
        rng,
        np.broadcast_to(cfg.p_x2.probs, (1, cfg.p_x2.alphabet.size)),
        np.zeros((mc, k2, n), dtype=np.int64),
    )
    # v words: (mc, k2, M_hat, n), conditioned on the parent x2 symbol
    parents_x2 = np.broadcast_to(x2[:, :, None, :], (mc, k2, ctx.m_hat, n))
    v = sample_rows(rng, ctx.p_v_given_x2, parents_x2.astype(np.int64))
    # u words: (mc, k2, M_hat, M_1, J, n), conditioned on (v, x2)
    vp = np.broadcast_to(
        v[:, :, :, None, None, :], (mc, k2, ctx.m_hat, ctx.m_1, ctx.j_size, n)
    ).astype(np.int64)
    x2p = np.broadcast_to(
        x2[:, :, None, None, None, :], (mc, k2, ctx.m_hat, ctx.m_1, ctx.j_size, n)
    ).astype(np.int64)
    u = sample_rows(rng, ctx.p_u_given_vx2, (vp, x2p))
    return x2, v, u


def generate_codebooks_A(ctx: SchemeContext, seed_key: tuple) -> CodebookA:
    """One independent layered codebook per block."""
    ctx.guard_resources()
    x2s, vs, us = [], [], []
    for b in range(ctx.blocks):
        rng = np.random.default_rng(np.random.SeedSequence(ctx.cfg.seed, spawn_key=seed_key + (b,)))
        x2, v, u = _layered_draw(ctx, rng, (ctx.m_c, ctx.m_hat))
        x2s.append(x2)
        vs.append(v)
        us.append(u)
    return CodebookA(tuple(x2s), tuple(vs), tuple(us), seed_key, ctx.sizes())


def generate_codebooks_B(ctx: SchemeContext, seed_key: tuple) -> CodebookB:
    """Single codebook; compression indices partitioned into near-equal cells.

    The default partition is deterministic round-robin (z mod M_0); a config
    flag restores a seeded random balanced partition.
    """
    ctx.guard_resources()
    rng = np.random.default_rng(np.random.SeedSequence(ctx.cfg.seed, spawn_key=seed_key + (0,)))
    x2, v, u = _layered_draw(ctx, rng, (ctx.m_c, ctx.m_0))
    z = np.arange(ctx.m_hat, dtype=np.int64)
    if ctx.cfg.random_cells:
        perm = rng.permutation(ctx.m_hat)
        cell_of = np.empty(ctx.m_hat, dtype=np.int64)
        cell_of[perm] = z % ctx.m_0
    else:
        cell_of = z % ctx.m_0
    cells = tuple(
        np.flatnonzero(cell_of == c).astype(np.int64) for c in range(ctx.m_0)
    )
    return CodebookB(x2, v, u, cell_of, cells, seed_key, ctx.sizes())
