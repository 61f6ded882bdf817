"""Encoders and decoders for the three block-Markov schemes.

Index conventions are zero-based: the protocol's default index "1" is index
0 here.  Search failures follow the protocol's conventions: a failed
covering search pins the index at 0 and flags the stage; a failed binning
search pins the bin at its largest index.

Decoders perform the literal exhaustive typicality searches, organized
hierarchically: a candidate tuple can only be jointly typical if each of its
sub-tuples is, so pair and triple prefilters prune candidates before the
full four-sequence check.  The surviving-chain bookkeeping is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .codebooks import CodebookA, CodebookB, sample_rows
from .config import SchemeContext


@dataclass
class EncodeResult:
    x1: np.ndarray  # (B, n)
    x2: np.ndarray  # (B, n)
    t_seq: np.ndarray  # compression indices per block (named z in scheme B)
    j_seq: np.ndarray  # bin indices per block
    s_cells: np.ndarray | None = None  # cell indices (schemes B/C)
    covering_failed: np.ndarray = field(default_factory=lambda: np.zeros(0, bool))
    bin_failed: np.ndarray = field(default_factory=lambda: np.zeros(0, bool))


@dataclass
class DecodeResult:
    ok: bool
    w_c: object = None  # int (scheme A) or per-block array (schemes B/C)
    w_1: object = None
    failed_step: str | None = None


# ---------------------------------------------------------------------------
# Scheme A: per-block codebooks, message repeated over all blocks,
# simultaneous non-unique decoding.


def encode_A(codebook: CodebookA, ctx: SchemeContext, w_c: int, w_1: int,
             states: np.ndarray, rng) -> EncodeResult:
    B, n = ctx.blocks, ctx.n
    t_seq = np.zeros(B, dtype=np.int64)
    j_seq = np.zeros(B, dtype=np.int64)
    cov_fail = np.zeros(B, dtype=bool)
    bin_fail = np.zeros(B, dtype=bool)
    x1 = np.zeros((B, n), dtype=np.int8)
    x2 = np.zeros((B, n), dtype=np.int8)

    t_prev = 0  # default compression index for block 0
    for b in range(B):
        s = states[b]
        x2_b = codebook.x2[b][w_c, t_prev]
        x2[b] = x2_b
        # covering search: smallest index whose v word is jointly typical
        # with the state and the transmitted x2 word
        cand = codebook.v[b][w_c, t_prev]  # (M_hat, n)
        ids = ctx.ref_cover.ids(S=s[None, :], V=cand, X2=x2_b[None, :])
        hit = kernels.scan_first(ids, ctx.ref_cover.lo, ctx.ref_cover.hi)
        if hit < 0:
            t_b = 0
            cov_fail[b] = True
        else:
            t_b = hit
        t_seq[b] = t_b
        v_b = codebook.v[b][w_c, t_prev, t_b]
        # binning search over u words for (w_1, j)
        bins = codebook.u[b][w_c, t_prev, t_b, w_1]  # (J, n)
        ids = ctx.ref_bin.ids(S=s[None, :], U=bins, V=v_b[None, :], X2=x2_b[None, :])
        hit = kernels.scan_first(ids, ctx.ref_bin.lo, ctx.ref_bin.hi)
        if hit < 0:
            j_b = ctx.j_size - 1
            bin_fail[b] = True
        else:
            j_b = hit
        j_seq[b] = j_b
        u_b = codebook.u[b][w_c, t_prev, t_b, w_1, j_b]
        x1[b] = sample_rows(
            rng,
            ctx.p_x1_given_suvx2,
            (s.astype(np.int64), u_b.astype(np.int64), v_b.astype(np.int64), x2_b.astype(np.int64)),
        )
        t_prev = t_b
    return EncodeResult(x1, x2, t_seq, j_seq, None, cov_fail, bin_fail)


def _chain_tables_A(codebook: CodebookA, ctx: SchemeContext, w_c: int, y: np.ndarray):
    """Per-block typicality tables for one common-message candidate.

    Returns, for each block, a dict (t_prev, t) -> (M_1, J) bool array of
    full-tuple typicality, built behind exact pair/triple prefilters.
    """
    B = ctx.blocks
    tables = []
    for b in range(B):
        tprev_range = (0,) if b == 0 else range(ctx.m_hat)
        x2_rows = codebook.x2[b][w_c]  # (M_hat, n)
        # pair prefilter over t_prev
        pr = ctx.ref_pair
        sel = np.fromiter(tprev_range, dtype=np.int64)
        ids = pr.ids(X2=x2_rows[sel], Y=y[b][None, :])
        pair_ok = kernels.scan_flags(ids, pr.lo, pr.hi)
        block = {}
        tr = ctx.ref_triple
        fl = ctx.ref_full
        for k, tprev in enumerate(sel):
            if not pair_ok[k]:
                continue
            v_rows = codebook.v[b][w_c, tprev]  # (M_hat, n)
            ids = tr.ids(V=v_rows, X2=x2_rows[tprev][None, :], Y=y[b][None, :])
            tri_ok = kernels.scan_flags(ids, tr.lo, tr.hi)
            for t in np.flatnonzero(tri_ok):
                u_bank = codebook.u[b][w_c, tprev, t]  # (M_1, J, n)
                flat = u_bank.reshape(ctx.m_1 * ctx.j_size, ctx.n)
                ids = fl.ids(
                    U=flat,
                    V=v_rows[t][None, :],
                    X2=x2_rows[tprev][None, :],
                    Y=y[b][None, :],
                )
                ok = kernels.scan_flags(ids, fl.lo, fl.hi).reshape(ctx.m_1, ctx.j_size)
                if ok.any():
                    block[(int(tprev), int(t))] = ok
        tables.append(block)
    return tables


def _message_reach_A(tables, ctx: SchemeContext) -> np.ndarray:
    """Per-w1 existence of a full typical index chain across all blocks."""
    B = ctx.blocks
    # reach[t, w1]: some chain ends at compression index t in this block
    reach = np.zeros((ctx.m_hat, ctx.m_1), dtype=bool)
    for (tprev, t), ok in tables[0].items():
        if tprev == 0:
            reach[t] |= ok.any(axis=1)
    for b in range(1, B):
        nxt = np.zeros_like(reach)
        for (tprev, t), ok in tables[b].items():
            alive = reach[tprev] & ok.any(axis=1)
            nxt[t] |= alive
        reach = nxt
        if not reach.any():
            break
    return reach.any(axis=0)  # (M_1,)


def decode_A(codebook: CodebookA, ctx: SchemeContext, y: np.ndarray) -> DecodeResult:
    """Simultaneous decoding over all blocks without resolving the
    compression indices: first the common message, then the individual one."""
    ctx.guard_resources()
    found_wc = []
    w1_sets = {}
    for w_c in range(ctx.m_c):
        tables = _chain_tables_A(codebook, ctx, w_c, y)
        w1_ok = _message_reach_A(tables, ctx)
        if w1_ok.any():
            found_wc.append(w_c)
            w1_sets[w_c] = w1_ok
            if len(found_wc) > 1:
                return DecodeResult(False, failed_step="decode_common")
    if len(found_wc) != 1:
        return DecodeResult(False, failed_step="decode_common")
    w_c = found_wc[0]
    w1_ok = w1_sets[w_c]
    if int(w1_ok.sum()) != 1:
        return DecodeResult(False, failed_step="decode_individual")
    return DecodeResult(True, w_c, int(np.flatnonzero(w1_ok)[0]))


# ---------------------------------------------------------------------------
# Schemes B and C: single codebook, Wyner-Ziv cells, backward decoding.


def encode_B(codebook: CodebookB, ctx: SchemeContext, w_c_blocks, w_1_blocks,
             states: np.ndarray, rng) -> EncodeResult:
    """Block-Markov encoding with cell-partitioned compression indices.

    ``w_c_blocks`` / ``w_1_blocks`` carry one message index per block; the
    final block must hold the default value 0.
    """
    B, n = ctx.blocks, ctx.n
    w_c_blocks = np.asarray(w_c_blocks, dtype=np.int64)
    w_1_blocks = np.asarray(w_1_blocks, dtype=np.int64)
    z_seq = np.zeros(B, dtype=np.int64)
    s_cells = np.zeros(B, dtype=np.int64)
    j_seq = np.zeros(B, dtype=np.int64)
    cov_fail = np.zeros(B, dtype=bool)
    bin_fail = np.zeros(B, dtype=bool)
    x1 = np.zeros((B, n), dtype=np.int8)
    x2 = np.zeros((B, n), dtype=np.int8)

    z_default = 0
    s_prev = int(codebook.cell_of[z_default])  # cell of the default index
    for b in range(B):
        s = states[b]
        wc = int(w_c_blocks[b])
        x2_b = codebook.x2[wc, s_prev]
        x2[b] = x2_b
        cand = codebook.v[wc, s_prev]  # (M_hat, n)
        ids = ctx.ref_cover.ids(S=s[None, :], V=cand, X2=x2_b[None, :])
        hit = kernels.scan_first(ids, ctx.ref_cover.lo, ctx.ref_cover.hi)
        if hit < 0:
            z_b = 0
            cov_fail[b] = True
        else:
            z_b = hit
        z_seq[b] = z_b
        s_cells[b] = int(codebook.cell_of[z_b])
        v_b = codebook.v[wc, s_prev, z_b]
        bins = codebook.u[wc, s_prev, z_b, int(w_1_blocks[b])]  # (J, n)
        ids = ctx.ref_bin.ids(S=s[None, :], U=bins, V=v_b[None, :], X2=x2_b[None, :])
        hit = kernels.scan_first(ids, ctx.ref_bin.lo, ctx.ref_bin.hi)
        if hit < 0:
            j_b = ctx.j_size - 1
            bin_fail[b] = True
        else:
            j_b = hit
        j_seq[b] = j_b
        u_b = codebook.u[wc, s_prev, z_b, int(w_1_blocks[b]), j_b]
        x1[b] = sample_rows(
            rng,
            ctx.p_x1_given_suvx2,
            (s.astype(np.int64), u_b.astype(np.int64), v_b.astype(np.int64), x2_b.astype(np.int64)),
        )
        s_prev = int(s_cells[b])
    return EncodeResult(x1, x2, z_seq, j_seq, s_cells, cov_fail, bin_fail)


def _unique_pair_scan(ctx, x2_rows, y_block):
    """Index of the unique x2 row pair-typical with the block output, else None."""
    pr = ctx.ref_pair
    ids = pr.ids(X2=x2_rows, Y=y_block[None, :])
    count, first = kernels.scan_count2(ids, pr.lo, pr.hi)
    return first if count == 1 else None


def _exists_full(ctx, codebook, wc, s_prev, z_values, w1, y_block):
    """Does any (z in z_values, j) complete a typical full tuple for (wc, w1)?"""
    fl = ctx.ref_full
    tr = ctx.ref_triple
    x2_row = codebook.x2[wc, s_prev]
    v_rows = codebook.v[wc, s_prev][z_values]
    ids = tr.ids(V=v_rows, X2=x2_row[None, :], Y=y_block[None, :])
    tri_ok = kernels.scan_flags(ids, tr.lo, tr.hi)
    for k in np.flatnonzero(tri_ok):
        z = int(z_values[k])
        bank = codebook.u[wc, s_prev, z, w1]  # (J, n)
        ids = fl.ids(
            U=bank,
            V=codebook.v[wc, s_prev, z][None, :],
            X2=x2_row[None, :],
            Y=y_block[None, :],
        )
        if kernels.scan_first(ids, fl.lo, fl.hi) >= 0:
            return True
    return False


def _decode_backward(codebook: CodebookB, ctx: SchemeContext, y: np.ndarray,
                     unique_z: bool) -> DecodeResult:
    B = ctx.blocks
    w_c_hat = np.zeros(B, dtype=np.int64)
    w_1_hat = np.zeros(B, dtype=np.int64)
    s_hat = {}  # block index -> decoded cell index

    for b in range(B - 1, 0, -1):
        # (a) cell index carried by block b's x2 word
        wc_b = int(w_c_hat[b])
        first = _unique_pair_scan(ctx, codebook.x2[wc_b], y[b])
        if first is None:
            return DecodeResult(False, failed_step="decode_cell")
        s_hat[b - 1] = first
        members = codebook.cells[first]

        # (b) common message of block b-1, all nuisance indices existential
        cands = []
        for wc in range(ctx.m_c):
            pr = ctx.ref_pair
            ids = pr.ids(X2=codebook.x2[wc], Y=y[b - 1][None, :])
            pair_ok = kernels.scan_flags(ids, pr.lo, pr.hi)
            hitp = False
            for s_prev in np.flatnonzero(pair_ok):
                for w1 in range(ctx.m_1):
                    if _exists_full(ctx, codebook, wc, int(s_prev), members, w1, y[b - 1]):
                        hitp = True
                        break
                if hitp:
                    break
            if hitp:
                cands.append(wc)
                if len(cands) > 1:
                    return DecodeResult(False, failed_step="decode_common")
        if len(cands) != 1:
            return DecodeResult(False, failed_step="decode_common")
        w_c_hat[b - 1] = cands[0]

        # (c) cell index of block b-2, from block b-1's x2 word
        first = _unique_pair_scan(ctx, codebook.x2[int(w_c_hat[b - 1])], y[b - 1])
        if first is None:
            return DecodeResult(False, failed_step="decode_cell")
        s_prev_hat = first

        # (d) individual message of block b-1
        wc = int(w_c_hat[b - 1])
        if unique_z:
            tr = ctx.ref_triple
            v_rows = codebook.v[wc, s_prev_hat][members]
            ids = tr.ids(V=v_rows, X2=codebook.x2[wc, s_prev_hat][None, :], Y=y[b - 1][None, :])
            count, firstz = kernels.scan_count2(ids, tr.lo, tr.hi)
            if count != 1:
                return DecodeResult(False, failed_step="decode_z")
            z_list = members[firstz : firstz + 1]
        else:
            z_list = members
        w1_cands = []
        for w1 in range(ctx.m_1):
            if _exists_full(ctx, codebook, wc, s_prev_hat, z_list, w1, y[b - 1]):
                w1_cands.append(w1)
                if len(w1_cands) > 1:
                    return DecodeResult(False, failed_step="decode_individual")
        if len(w1_cands) != 1:
            return DecodeResult(False, failed_step="decode_individual")
        w_1_hat[b - 1] = w1_cands[0]

    return DecodeResult(True, w_c_hat, w_1_hat)


def decode_B_backward(codebook: CodebookB, ctx: SchemeContext, y: np.ndarray) -> DecodeResult:
    """Backward decoding with existential (non-unique) compression indices."""
    ctx.guard_resources()
    return _decode_backward(codebook, ctx, y, unique_z=False)


def decode_C_unique(codebook: CodebookB, ctx: SchemeContext, y: np.ndarray) -> DecodeResult:
    """Backward decoding that first pins the compression index uniquely.

    Identical to the non-unique decoder except the last step: the in-cell
    compression index is decoded (ambiguity is an error) before the
    individual message is resolved against it.
    """
    ctx.guard_resources()
    return _decode_backward(codebook, ctx, y, unique_z=True)
