"""Numerical computation of the achievable-rate region over the factored
measure class, plus frontier geometry (convexification, radial distance).

The region is a union, over all admissible distribution factors, of clipped
two-constraint polygons; its convex closure is searched by stratified
sampling of the conditional simplices followed by coordinate-ascent
refinement of support-function objectives along a weight sweep.
"""

from __future__ import annotations

import hashlib
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError, UsageError, ValidationError
from .probability import (
    Alphabet,
    ConditionalKernel,
    FinitePmf,
    JointDistribution,
    build_joint,
    validate,
)

# Slack (bits) below zero at which the unique-compression feasibility
# constraint rejects a distribution.
CONSTRAINT_TOL = 1e-10
# Alphabet-product guard for the search.
MAX_ALPHABET_PRODUCT = 4096


@dataclass(frozen=True)
class RatePair:
    r_c: float
    r_1: float

    def __post_init__(self):
        if self.r_c < 0 or self.r_1 < 0:
            raise ValidationError(f"rates must be nonnegative, got {self}")

    def dominates(self, other: "RatePair", tol: float = 0.0) -> bool:
        return self.r_c >= other.r_c - tol and self.r_1 >= other.r_1 - tol


@dataclass(frozen=True)
class AchievingFactors:
    """Distribution factors behind a frontier point, as plain arrays."""

    p_x2: np.ndarray
    p_v_given_sx2: np.ndarray
    p_ux1_given_svx2: np.ndarray

    def params_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.p_x2.ravel(), self.p_v_given_sx2.ravel(), self.p_ux1_given_svx2.ravel()]
        )

    def to_json(self) -> dict:
        return {
            "p_x2": self.p_x2.tolist(),
            "p_v_given_sx2": self.p_v_given_sx2.tolist(),
            "p_ux1_given_svx2": self.p_ux1_given_svx2.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AchievingFactors":
        return cls(
            np.asarray(obj["p_x2"], dtype=np.float64),
            np.asarray(obj["p_v_given_sx2"], dtype=np.float64),
            np.asarray(obj["p_ux1_given_svx2"], dtype=np.float64),
        )


@dataclass(frozen=True)
class RegionFrontier:
    """Pareto frontier of the dominated (convexified) rate region."""

    channel_id: str
    points: tuple
    factors: tuple = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = tuple(self.points)
        for p, q in itertools.combinations(pts, 2):
            if p.dominates(q) or q.dominates(p):
                raise ValidationError(f"frontier points {p} and {q} are not incomparable")
        pts = tuple(sorted(pts, key=lambda p: (p.r_c, -p.r_1)))
        object.__setattr__(self, "points", pts)
        if self.factors:
            object.__setattr__(self, "factors", tuple(self.factors))

    def polyline(self) -> np.ndarray:
        """Boundary vertices of the dominated region, x ascending.

        Pads with the axis anchors (0, ymax) and (xmax, 0) so the polyline
        always spans the axes.
        """
        if not self.points:
            return np.array([[0.0, 0.0]])
        xs = [p.r_c for p in self.points]
        ys = [p.r_1 for p in self.points]
        if xs[0] > 0:
            xs = [0.0] + xs
            ys = [ys[0]] + ys
        if ys[-1] > 0:
            xs = xs + [xs[-1]]
            ys = ys + [0.0]
        return np.column_stack([xs, ys])

    def max_r1_at(self, r_c: float) -> float:
        """Height of the dominated region above a common-message rate."""
        line = self.polyline()
        if r_c > line[-1, 0] + 1e-15:
            return -np.inf
        return float(np.interp(r_c, line[:, 0], line[:, 1]))

    def contains(self, point: RatePair, tol: float = 1e-12) -> bool:
        return point.r_1 <= self.max_r1_at(point.r_c - min(point.r_c, tol)) + tol

    def reach(self, theta: float) -> float:
        """Radial extent of the dominated region along angle theta."""
        line = self.polyline()
        x_max = float(line[-1, 0])
        y_max = float(line[0, 1])
        c, s = np.cos(theta), np.sin(theta)
        if x_max <= 0 and y_max <= 0:
            return 0.0
        if s <= 1e-15:
            return x_max
        if c <= 1e-15:
            return y_max
        lo, hi = 0.0, (np.hypot(x_max, y_max) + 1.0) / max(c, s)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            x, y = mid * c, mid * s
            inside = x <= x_max and y <= float(np.interp(x, line[:, 0], line[:, 1]))
            if inside:
                lo = mid
            else:
                hi = mid
        return lo

    def to_json(self) -> dict:
        out = {
            "channel_id": self.channel_id,
            "points": [{"r_c": p.r_c, "r_1": p.r_1} for p in self.points],
            "metadata": dict(self.metadata),
        }
        if self.factors:
            out["factors"] = [f.to_json() if f is not None else None for f in self.factors]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "RegionFrontier":
        pts = tuple(RatePair(p["r_c"], p["r_1"]) for p in obj["points"])
        factors = tuple(
            AchievingFactors.from_json(f) if f is not None else None
            for f in obj.get("factors", [])
        )
        return cls(obj["channel_id"], pts, factors, obj.get("metadata", {}))

    def to_csv(self) -> str:
        lines = ["r_c,r_1"]
        lines += [f"{p.r_c:.12g},{p.r_1:.12g}" for p in self.points]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the stratified-sampling + ascent region search."""

    v_cap: int | None = None  # None = cardinality default for the theorem in use
    u_cap: int | None = None
    grid_levels: int = 3
    restarts: int = 4
    refine_passes: int = 3
    num_weights: int = 5
    seed: int = 0
    grid_budget: int = 20000
    func_budget: int = 2048
    threads: int = 1

    def __post_init__(self):
        if self.v_cap is not None and self.v_cap < 1:
            raise ValidationError("v_cap must be >= 1")
        if self.u_cap is not None and self.u_cap < 1:
            raise ValidationError("u_cap must be >= 1")
        if self.grid_levels < 2:
            raise ValidationError("grid_levels must be >= 2")


def default_caps(ns: int, nx1: int, nx2: int, constrained: bool) -> tuple[int, int]:
    """Auxiliary-alphabet caps that provably exhaust the region."""
    base = ns * nx1 * nx2
    bump = 2 if constrained else 1
    return base + bump, (base + bump) * base


def channel_id(channel: ConditionalKernel, q_s: FinitePmf) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(channel.table).tobytes())
    h.update(np.ascontiguousarray(q_s.probs).tobytes())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# Fast bound evaluation on raw factor arrays (the search inner loop).

_LOG2 = np.log(2.0)


def _entropy_of(p: np.ndarray) -> float:
    p = p.ravel()
    mask = p > 0
    return float(-np.sum(p[mask] * np.log(p[mask])) / _LOG2)


def _bounds_from_joint(joint6: np.ndarray) -> tuple[float, float, float]:
    """(r1_bound, sum_bound, feasibility_margin) from a (S,U,V,X1,X2,Y) tensor.

    r1_bound  = I(U;Y|V,X2) - I(U;S|V,X2)
    sum_bound = I(U,V,X2;Y) - I(U,V,X2;S)
    margin    = I(V,X2;Y) - I(V,X2;S)   (unique-compression feasibility)
    """
    p_suvx2y = joint6.sum(axis=3)  # drop X1 -> (S,U,V,X2,Y)
    p_uvx2y = p_suvx2y.sum(axis=0)
    p_suvx2 = p_suvx2y.sum(axis=4)
    p_vx2y = p_uvx2y.sum(axis=0)
    p_svx2 = p_suvx2.sum(axis=1)
    p_uvx2 = p_suvx2.sum(axis=0)
    p_vx2 = p_uvx2.sum(axis=0)
    p_y = p_vx2y.sum(axis=(0, 1))
    p_s = p_svx2.sum(axis=(1, 2))

    h_uvx2 = _entropy_of(p_uvx2)
    h_vx2 = _entropy_of(p_vx2)
    h_y = _entropy_of(p_y)
    h_s = _entropy_of(p_s)
    h_uvx2y = _entropy_of(p_uvx2y)
    h_vx2y = _entropy_of(p_vx2y)
    h_suvx2 = _entropy_of(p_suvx2)
    h_svx2 = _entropy_of(p_svx2)

    # I(U;Y|V,X2) = H(U|V,X2) + H(Y|V,X2) - H(U,Y|V,X2), all minus H(V,X2)
    i_u_y_vx2 = (h_uvx2 - h_vx2) + (h_vx2y - h_vx2) - (h_uvx2y - h_vx2)
    i_u_s_vx2 = (h_uvx2 - h_vx2) + (h_svx2 - h_vx2) - (h_suvx2 - h_vx2)
    i_uvx2_y = h_uvx2 + h_y - h_uvx2y
    i_uvx2_s = h_uvx2 + h_s - h_suvx2
    i_vx2_y = h_vx2 + h_y - h_vx2y
    i_vx2_s = h_vx2 + h_s - h_svx2

    return (
        i_u_y_vx2 - i_u_s_vx2,
        i_uvx2_y - i_uvx2_s,
        i_vx2_y - i_vx2_s,
    )


def _joint_from_factors(W, qs, px2, pv, pux1) -> np.ndarray:
    """Product-form tensor (S,U,V,X1,X2,Y) from raw factor arrays."""
    return np.einsum(
        "s,e,sev,sveua,aesy->suvaey", qs, px2, pv, pux1, W, optimize=True
    )


def pair_bounds(joint: JointDistribution) -> tuple[float, float]:
    """The two rate bounds (individual, sum) for one admissible joint, in bits.

    Values may be negative; region construction clips at zero.
    """
    report = validate(joint)
    bad = [c for c in report if not c.passed]
    if bad:
        raise ValidationError(
            "joint violates invariants: "
            + ", ".join(f"{c.name} (residual {c.residual:.3g})" for c in bad)
        )
    r1b, sumb, _ = _bounds_from_joint(joint.tensor)
    return r1b, sumb


def feasibility_margin(joint: JointDistribution) -> float:
    """I(V,X2;Y) - I(V,X2;S); nonnegative for unique-compression decoding."""
    return _bounds_from_joint(joint.tensor)[2]


# ---------------------------------------------------------------------------
# Frontier construction.


def convexify(points, channel_id: str = "", metadata: dict | None = None,
              factors=None) -> RegionFrontier:
    """Pareto frontier of the convex hull of points plus dominated orthants."""
    pts = list(points)
    if not pts:
        raise UsageError("convexify requires at least one point")
    raw = np.array([[p.r_c, p.r_1] for p in pts], dtype=np.float64)
    fac = list(factors) if factors is not None else [None] * len(pts)
    if len(fac) != len(pts):
        raise UsageError("factors, when given, must align with points")

    cand = [(0.0, 0.0, None)]
    for (x, y), f in zip(raw, fac):
        cand.append((x, y, f))
        cand.append((x, 0.0, f))
        cand.append((0.0, y, f))
    arr = np.array([(x, y) for x, y, _ in cand])

    order = np.lexsort((-arr[:, 1], arr[:, 0]))
    hull: list[int] = []
    for i in order:
        x, y = arr[i]
        if hull and x == arr[hull[-1]][0]:
            continue  # same x, lower y (sort order): dominated
        while len(hull) >= 2:
            x1, y1 = arr[hull[-2]]
            x2, y2 = arr[hull[-1]]
            # keep the chain concave (upper hull)
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) >= -1e-15:
                hull.pop()
            else:
                break
        hull.append(int(i))

    verts = []
    vfac = []
    for i in hull:
        x, y = arr[i]
        verts.append(RatePair(max(x, 0.0), max(y, 0.0)))
        vfac.append(cand[i][2])
    # Pareto-filter hull vertices (drops the axis anchors dominated by others).
    keep = []
    for k, p in enumerate(verts):
        if not any(
            other.dominates(p) and other != p for j, other in enumerate(verts) if j != k
        ):
            keep.append(k)
    # Deduplicate identical points.
    seen = set()
    final_pts, final_fac = [], []
    for k in keep:
        key = (verts[k].r_c, verts[k].r_1)
        if key in seen:
            continue
        seen.add(key)
        final_pts.append(verts[k])
        final_fac.append(vfac[k])

    meta = dict(metadata or {})
    tol = 1e-12
    # Hull "changed" when some frontier vertex is achieved only by
    # time-sharing, i.e. not dominated by any single input point.
    hull_changed = any(
        not any(x >= p.r_c - tol and y >= p.r_1 - tol for x, y in raw)
        for p in final_pts
    )
    meta.setdefault("hull_changed", bool(hull_changed))
    return RegionFrontier(channel_id, tuple(final_pts), tuple(final_fac), meta)


def region_distance(a: RegionFrontier, b: RegionFrontier, sweep: int = 721) -> float:
    """Symmetric radial distance between two dominated regions.

    Measured as the largest reach difference over a fixed angular sweep of
    the first quadrant; 0 and pi/2 are always included.
    """
    if a.channel_id != b.channel_id:
        raise UsageError(
            f"cannot compare frontiers of different channels: {a.channel_id!r} vs {b.channel_id!r}"
        )
    thetas = np.linspace(0.0, np.pi / 2, sweep)
    return float(max(abs(a.reach(t) - b.reach(t)) for t in thetas))


# ---------------------------------------------------------------------------
# Search.


def _size_grid(cap: int) -> list[int]:
    """Effective-size ladder clipped at the cap.

    The ladder is universal (never depends on the cap), so raising a cap can
    only add sizes; that makes the searched candidate set monotone in the
    caps, which the frontier-monotonicity property relies on.
    """
    ladder = [1, 2, 3, 4]
    g = 6
    while g <= cap:
        ladder.append(g)
        g = max(int(g * 1.5), g + 1)
    return [s for s in ladder if s <= cap]


def _simplex_grid(m: int, levels: int):
    """All pmfs on m symbols with entries that are multiples of 1/(levels-1)."""
    d = levels - 1
    for comp in itertools.combinations_with_replacement(range(m), d):
        vec = np.zeros(m)
        for c in comp:
            vec[c] += 1.0 / d
        yield vec


def _grid_count(m: int, levels: int) -> int:
    from math import comb

    return comb(levels - 1 + m - 1, m - 1)


def _support_value(r1b: float, sumb: float, w: float) -> float:
    """Support function of the clipped two-constraint polygon in direction
    (w, 1-w)."""
    a = max(r1b, 0.0)
    bs = max(sumb, 0.0)
    ap = min(a, bs)
    corners = ((bs, 0.0), (bs - ap, ap), (0.0, ap))
    return max(w * x + (1.0 - w) * y for x, y in corners)


class _Evaluator:
    """Bound evaluation for one channel at fixed effective sizes."""

    def __init__(self, W, qs, vs, us, constrained):
        self.W = W
        self.qs = qs
        self.ns = qs.shape[0]
        self.nx1, self.nx2 = W.shape[0], W.shape[1]
        self.vs = vs
        self.us = us
        self.constrained = constrained

    def bounds(self, px2, pv, pux1):
        joint = _joint_from_factors(self.W, self.qs, px2, pv, pux1)
        r1b, sumb, margin = _bounds_from_joint(joint)
        feasible = (not self.constrained) or margin >= -CONSTRAINT_TOL
        return r1b, sumb, feasible


def _dirichlet_rows(rng, shape_rows, m, alpha):
    return rng.dirichlet(np.full(m, alpha), size=shape_rows)


def _sample_candidate(ev: _Evaluator, rng, kind: int):
    ns, nx1, nx2, vs, us = ev.ns, ev.nx1, ev.nx2, ev.vs, ev.us
    alpha = (0.5, 1.0, 4.0)[kind % 3]
    px2 = rng.dirichlet(np.full(nx2, alpha))
    pv = _dirichlet_rows(rng, (ns, nx2), vs, alpha)
    pux1 = _dirichlet_rows(rng, (ns, vs, nx2), us * nx1, alpha).reshape(
        ns, vs, nx2, us, nx1
    )
    return px2, pv, pux1


def _functional_candidates(ev: _Evaluator, rng, budget: int):
    """Deterministic strata: quantizer V kernels and function-coupled (U, X1).

    V = g(S, X2) over a sample of functions g; U uniform with X1 = f(U, S),
    the natural family for state-aware precoding.  Always includes V constant
    and the identity-style couplings.
    """
    ns, nx1, nx2, vs, us = ev.ns, ev.nx1, ev.nx2, ev.vs, ev.us

    def pux1_from_f(fmap):
        t = np.zeros((ns, vs, nx2, us, nx1))
        for s in range(ns):
            for v in range(vs):
                for x2 in range(nx2):
                    for u in range(us):
                        t[s, v, x2, u, fmap[u, s]] = 1.0 / us
        return t

    def pv_from_g(gmap):
        t = np.zeros((ns, nx2, vs))
        for s in range(ns):
            for x2 in range(nx2):
                t[s, x2, gmap[s, x2]] = 1.0
        return t

    n_f = nx1 ** (us * ns)
    n_g = vs ** (ns * nx2)
    f_maps = []
    if n_f * min(n_g, 8) <= budget:
        f_maps = [
            np.array(c, dtype=np.int64).reshape(us, ns)
            for c in itertools.product(range(nx1), repeat=us * ns)
        ]
    else:
        count = max(4, budget // 8)
        f_maps = [rng.integers(0, nx1, (us, ns)) for _ in range(count)]
    g_maps = [np.zeros((ns, nx2), dtype=np.int64)]  # V constant
    if n_g <= max(8, budget // max(len(f_maps), 1)):
        g_maps = [
            np.array(c, dtype=np.int64).reshape(ns, nx2)
            for c in itertools.product(range(vs), repeat=ns * nx2)
        ]
    else:
        g_maps += [rng.integers(0, vs, (ns, nx2)) for _ in range(7)]

    px2_options = [np.full(nx2, 1.0 / nx2)]
    px2_options += list(np.eye(nx2))

    for g in g_maps:
        pv = pv_from_g(g)
        for f in f_maps:
            pux1 = pux1_from_f(f)
            for px2 in px2_options:
                yield px2, pv, pux1


def _grid_candidates(ev: _Evaluator, levels: int, budget: int):
    ns, nx1, nx2, vs, us = ev.ns, ev.nx1, ev.nx2, ev.vs, ev.us
    n_px2 = _grid_count(nx2, levels)
    n_pv = _grid_count(vs, levels) ** (ns * nx2)
    n_pu = _grid_count(us * nx1, levels) ** (ns * vs * nx2)
    if n_px2 * n_pv * n_pu > budget:
        return
    px2_opts = list(_simplex_grid(nx2, levels))
    pv_row_opts = list(_simplex_grid(vs, levels))
    pu_row_opts = list(_simplex_grid(us * nx1, levels))
    pv_rows = ns * nx2
    pu_rows = ns * vs * nx2
    for px2 in px2_opts:
        for pv_combo in itertools.product(pv_row_opts, repeat=pv_rows):
            pv = np.array(pv_combo).reshape(ns, nx2, vs)
            for pu_combo in itertools.product(pu_row_opts, repeat=pu_rows):
                pux1 = np.array(pu_combo).reshape(ns, vs, nx2, us, nx1)
                yield px2, pv, pux1


def _ascend(ev: _Evaluator, px2, pv, pux1, w: float, passes: int):
    """Greedy per-row simplex ascent of the support objective."""

    def objective(a, b, c):
        r1b, sumb, feasible = ev.bounds(a, b, c)
        if not feasible:
            return -np.inf, (r1b, sumb)
        return _support_value(r1b, sumb, w), (r1b, sumb)

    best, _ = objective(px2, pv, pux1)
    if best == -np.inf:
        return None
    steps = (0.5, 0.25, 0.1)
    rows = (
        [("px2", None)]
        + [("pv", idx) for idx in np.ndindex(pv.shape[:-1])]
        + [("pu", idx) for idx in np.ndindex(pux1.shape[:-2])]
    )
    for _ in range(passes):
        improved = False
        for kind, idx in rows:
            if kind == "px2":
                row = px2
            elif kind == "pv":
                row = pv[idx]
            else:
                row = pux1[idx].ravel()
            m = row.shape[0]
            if m == 1:
                continue
            for k in range(m):
                for step in steps:
                    trial = (1 - step) * row
                    trial[k] += step
                    if kind == "px2":
                        val, _ = objective(trial, pv, pux1)
                        if val > best + 1e-12:
                            px2, best, improved = trial, val, True
                            row = trial
                    elif kind == "pv":
                        pv2 = pv.copy()
                        pv2[idx] = trial
                        val, _ = objective(px2, pv2, pux1)
                        if val > best + 1e-12:
                            pv, best, improved = pv2, val, True
                            row = trial
                    else:
                        pu2 = pux1.copy()
                        pu2[idx] = trial.reshape(pux1.shape[-2:])
                        val, _ = objective(px2, pv, pu2)
                        if val > best + 1e-12:
                            pux1, best, improved = pu2, val, True
                            row = trial
        if not improved:
            break
    return px2, pv, pux1


def _search_size_pair(args):
    (W, qs, vs, us, constrained, cfg_dict) = args
    cfg = SearchConfig(**cfg_dict)
    ev = _Evaluator(W, qs, vs, us, constrained)
    ns, nx1, nx2 = ev.ns, ev.nx1, ev.nx2
    # Pareto pool over clipped (r1, sum) pairs; ties broken toward the
    # lexicographically smallest parameter vector for determinism.
    pool: list[list] = []  # [a, bs, factors]
    excluded = 0

    def consider(px2, pv, pux1):
        nonlocal excluded
        r1b, sumb, feasible = ev.bounds(px2, pv, pux1)
        if not feasible:
            excluded += 1
            return None
        a, bs = max(r1b, 0.0), max(sumb, 0.0)
        a = min(a, bs)
        fac = None
        for entry in pool:
            if entry[0] >= a and entry[1] >= bs:
                if entry[0] == a and entry[1] == bs:
                    fac = AchievingFactors(px2.copy(), pv.copy(), pux1.copy())
                    if _param_less(fac, entry[2]):
                        entry[2] = fac
                return r1b, sumb
        fac = AchievingFactors(px2.copy(), pv.copy(), pux1.copy())
        pool[:] = [e for e in pool if not (a >= e[0] and bs >= e[1])]
        pool.append([a, bs, fac])
        return r1b, sumb

    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(vs, us)))

    # Stratum 1: uniform factors.
    consider(
        np.full(nx2, 1.0 / nx2),
        np.full((ns, nx2, vs), 1.0 / vs),
        np.full((ns, vs, nx2, us, nx1), 1.0 / (us * nx1)),
    )
    # Stratum 2: functional kernels (quantizers and precoders).
    for cand in _functional_candidates(ev, rng, cfg.func_budget):
        consider(*cand)
    # Stratum 3: deterministic simplex grid, when affordable.
    for cand in _grid_candidates(ev, cfg.grid_levels, cfg.grid_budget):
        consider(*cand)
    # Stratum 4: random restarts with ascent along the weight sweep.
    weights = np.linspace(0.0, 1.0, cfg.num_weights)
    for w in weights:
        for r in range(cfg.restarts):
            cand = _sample_candidate(ev, rng, r)
            out = _ascend(ev, *cand, w=w, passes=cfg.refine_passes)
            if out is not None:
                consider(*out)

    return [(a, bs, fac) for a, bs, fac in pool], excluded


def _run_search(channel, q_s, cfg: SearchConfig, constrained: bool) -> RegionFrontier:
    ns = q_s.alphabet.size
    if len(channel.input_alphabets) != 3 or len(channel.output_alphabets) != 1:
        raise ValidationError("channel must map (X1, X2, S) to Y")
    nx1, nx2, ns_chan = (a.size for a in channel.input_alphabets)
    if ns_chan != ns:
        raise ValidationError("channel state alphabet does not match the state prior")
    if ns * nx1 * nx2 > MAX_ALPHABET_PRODUCT:
        raise ResourceLimitError(
            f"alphabet product {ns * nx1 * nx2} exceeds limit {MAX_ALPHABET_PRODUCT}"
        )

    v_cap, u_cap = default_caps(ns, nx1, nx2, constrained)
    if cfg.v_cap is not None:
        v_cap = cfg.v_cap
    if cfg.u_cap is not None:
        u_cap = cfg.u_cap

    W = np.ascontiguousarray(channel.table, dtype=np.float64)
    qs = np.ascontiguousarray(q_s.probs, dtype=np.float64)

    size_pairs = [(vs, us) for vs in _size_grid(v_cap) for us in _size_grid(u_cap)]
    cfg_dict = {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}
    jobs = [(W, qs, vs, us, constrained, cfg_dict) for vs, us in size_pairs]

    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            outs = list(pool.map(_search_size_pair, jobs))
    else:
        outs = [_search_size_pair(j) for j in jobs]

    pool_pts: list[RatePair] = []
    pool_fac: list[AchievingFactors] = []
    excluded_total = 0
    best_by_vertex: dict = {}
    for results, excluded in outs:
        excluded_total += excluded
        for a, bs, fac in results:
            for vx, vy in ((bs, 0.0), (bs - a, a), (0.0, a)):
                key = (round(vx, 12), round(vy, 12))
                prev = best_by_vertex.get(key)
                if prev is None or _param_less(fac, prev):
                    best_by_vertex[key] = fac
    for (vx, vy), fac in sorted(best_by_vertex.items()):
        pool_pts.append(RatePair(max(vx, 0.0), max(vy, 0.0)))
        pool_fac.append(fac)

    cid = channel_id(channel, q_s)
    meta = {
        "grid_levels": cfg.grid_levels,
        "restarts": cfg.restarts,
        "num_weights": cfg.num_weights,
        "seed": cfg.seed,
        "v_cap": v_cap,
        "u_cap": u_cap,
        "constrained": constrained,
        "excluded_candidates": excluded_total,
    }
    if not pool_pts:
        return RegionFrontier(cid, (RatePair(0.0, 0.0),), (None,), meta)
    return convexify(pool_pts, cid, meta, factors=pool_fac)


def _param_less(a: AchievingFactors, b: AchievingFactors) -> bool:
    """Lexicographic tie-break between achieving factor vectors."""
    va, vb = a.params_vector(), b.params_vector()
    if va.shape != vb.shape:
        return va.shape < vb.shape
    for x, y in zip(va, vb):
        if x != y:
            return x < y
    return False


def compute_region(channel: ConditionalKernel, q_s: FinitePmf, cfg: SearchConfig) -> RegionFrontier:
    """Search the full measure class and return the convexified frontier."""
    return _run_search(channel, q_s, cfg, constrained=False)


def compute_region_constrained(
    channel: ConditionalKernel, q_s: FinitePmf, cfg: SearchConfig
) -> RegionFrontier:
    """Search restricted to distributions with a decodable compression index.

    Distributions whose feasibility margin I(V,X2;Y) - I(V,X2;S) falls below
    -1e-10 are excluded; auxiliary caps default to the enlarged bounds.
    """
    return _run_search(channel, q_s, cfg, constrained=True)
