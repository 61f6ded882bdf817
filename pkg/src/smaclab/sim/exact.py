"""Exact error probability for micro instances by full enumeration.

For a codebook fixed by the seed, every state sequence, every message
assignment, and every output sequence is enumerated and weighted by its
probability.  The informed encoder's channel-input draw never reaches the
decoder except through the channel, so it is folded analytically into a
per-position output law; everything else is enumerated literally.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import ResourceLimitError
from .codebooks import generate_codebooks_A, generate_codebooks_B
from .config import SchemeContext, SimConfig
from .montecarlo import _NS_CODEBOOK
from .schemes import decode_A, decode_B_backward, decode_C_unique, encode_A, encode_B


def _message_space(ctx: SchemeContext):
    if ctx.cfg.scheme == "A":
        return [
            (w_c, w_1) for w_c in range(ctx.m_c) for w_1 in range(ctx.m_1)
        ]
    B = ctx.blocks
    per_block = [(wc, w1) for wc in range(ctx.m_c) for w1 in range(ctx.m_1)]
    return list(itertools.product(per_block, repeat=B - 1))


def exact_error_micro(cfg: SimConfig) -> float:
    """Exact average message-error probability for the seed-fixed codebook."""
    ctx = SchemeContext(cfg)
    ctx.guard_resources()
    ns, ny = ctx.ns, ctx.ny
    B, n = ctx.blocks, ctx.n
    nB = B * n
    msgs = _message_space(ctx)
    total = (ns ** nB) * len(msgs) * (ny ** nB)
    if total > cfg.limits.max_micro_enumeration:
        raise ResourceLimitError(
            f"exact enumeration would visit {total:.3g} cases "
            f"(limit {cfg.limits.max_micro_enumeration:.3g})"
        )

    if cfg.scheme == "A":
        codebook = generate_codebooks_A(ctx, (_NS_CODEBOOK,))
    else:
        codebook = generate_codebooks_B(ctx, (_NS_CODEBOOK,))

    qs = np.asarray(cfg.q_s.probs)
    y_grid = np.array(list(itertools.product(range(ny), repeat=nB)), dtype=np.int8)
    dummy_rng = np.random.default_rng(0)  # the encoder input draw is folded out

    p_err = 0.0
    for s_flat in itertools.product(range(ns), repeat=nB):
        states = np.array(s_flat, dtype=np.int8).reshape(B, n)
        p_s = float(np.prod(qs[list(s_flat)]))
        if p_s == 0.0:
            continue
        for msg in msgs:
            if cfg.scheme == "A":
                w_c, w_1 = msg
                enc = encode_A(codebook, ctx, w_c, w_1, states, dummy_rng)
                v_words = np.zeros((B, n), dtype=np.int64)
                u_words = np.zeros((B, n), dtype=np.int64)
                t_prev = 0
                for b in range(B):
                    t_b = int(enc.t_seq[b])
                    v_words[b] = codebook.v[b][w_c, t_prev, t_b]
                    u_words[b] = codebook.u[b][w_c, t_prev, t_b, w_1, int(enc.j_seq[b])]
                    t_prev = t_b
            else:
                w_c_blocks = np.array([m[0] for m in msg] + [0], dtype=np.int64)
                w_1_blocks = np.array([m[1] for m in msg] + [0], dtype=np.int64)
                enc = encode_B(codebook, ctx, w_c_blocks, w_1_blocks, states, dummy_rng)
                v_words = np.zeros((B, n), dtype=np.int64)
                u_words = np.zeros((B, n), dtype=np.int64)
                s_prev = int(codebook.cell_of[0])
                for b in range(B):
                    z_b = int(enc.t_seq[b])
                    wc = int(w_c_blocks[b])
                    v_words[b] = codebook.v[wc, s_prev, z_b]
                    u_words[b] = codebook.u[wc, s_prev, z_b, int(w_1_blocks[b]), int(enc.j_seq[b])]
                    s_prev = int(enc.s_cells[b])

            # per-position output law, input draw folded out
            k_rows = ctx.y_given_suvx2[
                states.astype(np.int64).ravel(),
                u_words.ravel(),
                v_words.ravel(),
                enc.x2.astype(np.int64).ravel(),
            ]  # (nB, ny)
            probs = k_rows[np.arange(nB)[None, :], y_grid].prod(axis=1)

            for y_flat, p_y in zip(y_grid, probs):
                if p_y == 0.0:
                    continue
                y = y_flat.reshape(B, n)
                if cfg.scheme == "A":
                    dec = decode_A(codebook, ctx, y)
                    wrong = not dec.ok or dec.w_c != w_c or dec.w_1 != w_1
                else:
                    dec = (
                        decode_B_backward(codebook, ctx, y)
                        if cfg.scheme == "B"
                        else decode_C_unique(codebook, ctx, y)
                    )
                    wrong = not dec.ok or bool(
                        np.any(dec.w_c[: B - 1] != w_c_blocks[: B - 1])
                        or np.any(dec.w_1[: B - 1] != w_1_blocks[: B - 1])
                    )
                if wrong:
                    p_err += p_s * p_y / len(msgs)
    return p_err
