"""Independent brute-force references for the production modules.

Everything here recomputes quantities from first principles with explicit
loops and its own marginal bookkeeping; no production code path is reused
beyond the shared type definitions.  These run in tests and fixture
derivation only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, log2

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .probability import ConditionalKernel, FinitePmf, JointDistribution
from .region import RatePair, RegionFrontier, channel_id, convexify


@dataclass(frozen=True)
class GridSpec:
    """Exhaustive-search resolution: simplex levels and tiny auxiliary sizes."""

    levels: int = 3
    v_size: int = 1
    u_size: int = 2
    max_points: int = 200_000

    def __post_init__(self):
        if self.levels < 2:
            raise ValidationError("levels must be >= 2")
        if self.v_size < 1 or self.u_size < 1:
            raise ValidationError("auxiliary sizes must be >= 1")


def _six_loop_marginals(joint: JointDistribution):
    """Accumulate every marginal needed below by looping over all cells."""
    t = joint.tensor
    ns, nu, nv, nx1, nx2, ny = t.shape
    acc = {
        "suvx2y": {},
        "suvx2": {},
        "uvx2y": {},
        "uvx2": {},
        "svx2": {},
        "sx2": {},
        "vx2y": {},
        "vx2": {},
        "x2y": {},
        "x2": {},
        "s": {},
        "y": {},
    }

    def add(key, idx, p):
        d = acc[key]
        d[idx] = d.get(idx, 0.0) + p

    for s in range(ns):
        for u in range(nu):
            for v in range(nv):
                for x1 in range(nx1):
                    for x2 in range(nx2):
                        for y in range(ny):
                            p = float(t[s, u, v, x1, x2, y])
                            if p == 0.0:
                                continue
                            add("suvx2y", (s, u, v, x2, y), p)
                            add("suvx2", (s, u, v, x2), p)
                            add("uvx2y", (u, v, x2, y), p)
                            add("uvx2", (u, v, x2), p)
                            add("svx2", (s, v, x2), p)
                            add("sx2", (s, x2), p)
                            add("vx2y", (v, x2, y), p)
                            add("vx2", (v, x2), p)
                            add("x2y", (x2, y), p)
                            add("x2", (x2,), p)
                            add("s", (s,), p)
                            add("y", (y,), p)
    return acc


def _h(d: dict) -> float:
    return -sum(p * log2(p) for p in d.values() if p > 0)


def direct_info_terms(joint: JointDistribution) -> dict:
    """All rate-expression atoms by direct summation, in bits."""
    acc = _six_loop_marginals(joint)
    h = {k: _h(v) for k, v in acc.items()}

    terms = {
        "I(U;Y|V,X2)": h["uvx2"] + h["vx2y"] - h["uvx2y"] - h["vx2"],
        "I(S;U|V,X2)": h["uvx2"] + h["svx2"] - h["suvx2"] - h["vx2"],
        "I(U,V,X2;Y)": h["uvx2"] + h["y"] - h["uvx2y"],
        "I(S;U,V,X2)": h["uvx2"] + h["s"] - h["suvx2"],
        "I(S;V|X2)": h["vx2"] + h["sx2"] - h["svx2"] - h["x2"],
        "I(X2;Y)": h["x2"] + h["y"] - h["x2y"],
        "I(U,V;Y|X2)": h["uvx2"] + h["x2y"] - h["uvx2y"] - h["x2"],
        "I(V,X2;Y)": h["vx2"] + h["y"] - h["vx2y"],
        "I(S;V,X2)": h["vx2"] + h["s"] - h["svx2"],
    }
    return terms


def direct_pair_bounds(joint: JointDistribution) -> tuple[float, float]:
    t = direct_info_terms(joint)
    r1 = t["I(U;Y|V,X2)"] - t["I(S;U|V,X2)"]
    sums = t["I(U,V,X2;Y)"] - t["I(S;U,V,X2)"]
    return r1, sums


def _simplex_points(m: int, levels: int):
    d = levels - 1
    for cut in itertools.combinations_with_replacement(range(m), d):
        vec = [0.0] * m
        for c in cut:
            vec[c] += 1.0 / d
        yield tuple(vec)


def _count_grid(channel, q_s, grid: GridSpec) -> int:
    nx1, nx2, ns = (a.size for a in channel.input_alphabets)
    n_px2 = comb(grid.levels - 1 + nx2 - 1, nx2 - 1)
    n_row_v = comb(grid.levels - 1 + grid.v_size - 1, grid.v_size - 1)
    n_row_u = comb(grid.levels - 1 + grid.u_size * nx1 - 1, grid.u_size * nx1 - 1)
    return n_px2 * n_row_v ** (ns * nx2) * n_row_u ** (ns * grid.v_size * nx2)


def exhaustive_region(
    channel: ConditionalKernel, q_s: FinitePmf, grid: GridSpec
) -> RegionFrontier:
    """Frontier over every factor assignment on the simplex grid.

    Bounds per candidate are evaluated with this module's own direct
    summation, written from the rate formulas.
    """
    total = _count_grid(channel, q_s, grid)
    if total > grid.max_points:
        raise ResourceLimitError(
            f"grid would enumerate {total} candidates (limit {grid.max_points})"
        )
    nx1, nx2, ns = (a.size for a in channel.input_alphabets)
    ny = channel.output_alphabets[0].size
    vs, us = grid.v_size, grid.u_size
    qs = np.asarray(q_s.probs)
    W = np.asarray(channel.table)

    px2_opts = list(_simplex_points(nx2, grid.levels))
    v_row_opts = list(_simplex_points(vs, grid.levels))
    u_row_opts = list(_simplex_points(us * nx1, grid.levels))

    points = []
    for px2 in px2_opts:
        for v_rows in itertools.product(v_row_opts, repeat=ns * nx2):
            for u_rows in itertools.product(u_row_opts, repeat=ns * vs * nx2):
                # p(s,u,v,x1,x2,y) assembled cell by cell.
                joint = np.zeros((ns, us, vs, nx1, nx2, ny))
                for s in range(ns):
                    for x2 in range(nx2):
                        pv_row = v_rows[s * nx2 + x2]
                        for v in range(vs):
                            pu_row = u_rows[(s * vs + v) * nx2 + x2]
                            for u in range(us):
                                for x1 in range(nx1):
                                    base = (
                                        qs[s]
                                        * px2[x2]
                                        * pv_row[v]
                                        * pu_row[u * nx1 + x1]
                                    )
                                    if base == 0.0:
                                        continue
                                    for y in range(ny):
                                        joint[s, u, v, x1, x2, y] = base * W[x1, x2, s, y]
                jd = JointDistribution(
                    {k: a for k, a in zip(
                        ("S", "U", "V", "X1", "X2", "Y"),
                        (q_s.alphabet,
                         _Alpha(us), _Alpha(vs), channel.input_alphabets[0],
                         channel.input_alphabets[1], channel.output_alphabets[0]),
                    )},
                    joint,
                )
                r1b, sumb = direct_pair_bounds(jd)
                a = max(min(r1b, sumb), 0.0)
                bs = max(sumb, 0.0)
                points.append(RatePair(bs, 0.0))
                points.append(RatePair(max(bs - a, 0.0), a))

    cid = channel_id(channel, q_s)
    return convexify(
        points,
        cid,
        {"oracle": "exhaustive_grid", "levels": grid.levels, "v_size": vs, "u_size": us},
    )


def _Alpha(size: int):
    from .probability import Alphabet

    return Alphabet(size)
