"""Simulation configuration and the precomputed per-run context."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from .. import kernels
from ..errors import ResourceLimitError, ValidationError
from ..information import cond_mutual_info
from ..probability import (
    VAR_INDEX,
    ConditionalKernel,
    FinitePmf,
    JointDistribution,
    build_joint,
    marginalize,
)
from ..typicality import TypicalityParams

SCHEMES = ("A", "B", "C")

# Index chosen when a covering search fails (the smallest index, as the
# protocol prescribes) and when a binning search fails (the largest).
COVER_FAIL_INDEX = 0


@dataclass(frozen=True)
class SchemeRates:
    """Operating rates plus the slack multipliers entering codebook sizes."""

    r_c: float
    r_1: float
    r_hat: float = 0.0
    r_0: float = 0.0
    eta_c: float = 1.0
    eta_1: float = 1.0
    eta_hat: float = 1.0
    eta_0: float = 1.0
    delta: float = 2.0

    def __post_init__(self):
        for name in ("r_c", "r_1", "r_hat", "r_0", "eta_c", "eta_1", "eta_hat", "eta_0", "delta"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be nonnegative")

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class ResourceLimits:
    max_codebook_entries: int = 50_000_000
    max_search_checks: int = 200_000_000
    max_micro_enumeration: int = 10_000_000
    max_probe_ops: int = 50_000_000_000

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class SimConfig:
    channel: ConditionalKernel
    q_s: FinitePmf
    p_x2: FinitePmf
    p_v_given_sx2: ConditionalKernel
    p_ux1_given_svx2: ConditionalKernel
    rates: SchemeRates
    scheme: str
    n: int
    blocks: int
    trials: int
    seed: int
    epsilon: float = 0.15
    reuse_codebook: bool = True
    random_cells: bool = False
    limits: ResourceLimits = field(default_factory=ResourceLimits)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.trials < 1:
            raise ValidationError("trials must be positive")
        if self.blocks < 2:
            raise ValidationError("the block-Markov structure needs at least 2 blocks")
        if self.scheme in ("B", "C") and self.rates.r_0 > self.rates.r_hat:
            raise ValidationError("cell rate r_0 cannot exceed compression rate r_hat")
        TypicalityParams(self.epsilon, self.n)  # validates epsilon and n


def _size(bits: float) -> int:
    return max(1, ceil(2.0 ** bits - 1e-9))


def _conditional_from(marg: np.ndarray, cond_axes: tuple[int, ...]) -> np.ndarray:
    """p(target | conditioners) from a joint marginal; off-support rows are
    uniform (they only arise off the typical path)."""
    denom = marg.sum(axis=tuple(i for i in range(marg.ndim) if i not in cond_axes), keepdims=True)
    out = np.divide(marg, denom, out=np.zeros_like(marg), where=denom > 0)
    # uniform rows where the conditioners have zero probability
    free_axes = tuple(i for i in range(marg.ndim) if i not in cond_axes)
    cells = int(np.prod([marg.shape[i] for i in free_axes]))
    fill = np.broadcast_to(denom == 0, marg.shape)
    out = np.where(fill, 1.0 / cells, out)
    return out


class TupleRef:
    """Typicality reference for one ordered variable tuple.

    Holds the flattened reference pmf, the count bands for the configured
    (n, epsilon), and per-variable strides for building flattened symbol ids.
    """

    def __init__(self, joint: JointDistribution, variables: tuple[str, ...], n: int, epsilon: float):
        self.variables = tuple(sorted(variables, key=VAR_INDEX.get))
        self.ref = marginalize(joint, self.variables)
        self.shape = self.ref.shape
        self.lo, self.hi = kernels.frequency_bounds(self.ref, n, epsilon)
        strides = {}
        acc = 1
        for var, size in zip(reversed(self.variables), reversed(self.shape)):
            strides[var] = acc
            acc *= size
        self.strides = strides

    def ids(self, **seqs) -> np.ndarray:
        """Flattened ids from per-variable sequences (broadcast together)."""
        missing = set(self.variables) - set(seqs)
        if missing:
            raise ValidationError(f"missing sequences for {sorted(missing)}")
        total = None
        for var in self.variables:
            part = np.asarray(seqs[var], dtype=np.int64) * self.strides[var]
            total = part if total is None else total + part
        return total.astype(np.uint32)


class SchemeContext:
    """Everything derived from a SimConfig that the schemes share."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.joint = build_joint(cfg.q_s, cfg.p_x2, cfg.p_v_given_sx2, cfg.p_ux1_given_svx2, cfg.channel)
        j = self.joint
        self.ns, self.nu, self.nv, self.nx1, self.nx2, self.ny = j.shape
        self.n = cfg.n
        self.blocks = cfg.blocks
        self.epsilon = cfg.epsilon

        # Conditional samplers (cumulative over the last axis).
        p_vx2 = marginalize(j, ("V", "X2"))  # axes (V, X2)
        self.p_v_given_x2 = _conditional_from(p_vx2.T, (0,))  # (X2, V)
        p_uvx2 = marginalize(j, ("U", "V", "X2"))  # (U, V, X2)
        self.p_u_given_vx2 = _conditional_from(np.moveaxis(p_uvx2, 0, -1), (0, 1))  # (V, X2, U)
        p_full = marginalize(j, ("S", "U", "V", "X1", "X2"))  # (S,U,V,X1,X2)
        self.p_x1_given_suvx2 = _conditional_from(
            np.moveaxis(p_full, 3, -1), (0, 1, 2, 3)
        )  # (S,U,V,X2,X1)
        self.w_y = np.moveaxis(cfg.channel.table, -1, -1)  # (X1, X2, S, Y)

        # Exact per-position output law given (S,U,V,X2), marginalizing the
        # input draw; shared by the Monte Carlo path and the exact oracle.
        self.y_given_suvx2 = np.einsum(
            "suvea,aesy->suvey", self.p_x1_given_suvx2, cfg.channel.table
        )

        # Typicality references for every check tuple.
        self.ref_cover = TupleRef(j, ("S", "V", "X2"), cfg.n, cfg.epsilon)
        self.ref_bin = TupleRef(j, ("S", "U", "V", "X2"), cfg.n, cfg.epsilon)
        self.ref_full = TupleRef(j, ("U", "V", "X2", "Y"), cfg.n, cfg.epsilon)
        self.ref_pair = TupleRef(j, ("X2", "Y"), cfg.n, cfg.epsilon)
        self.ref_triple = TupleRef(j, ("V", "X2", "Y"), cfg.n, cfg.epsilon)

        # Codebook sizes per the scheme's exponent convention.
        r, n, B = cfg.rates, cfg.n, cfg.blocks
        self.i_us_vx2 = cond_mutual_info(j, ("U",), ("S",), ("V", "X2"))
        if cfg.scheme == "A":
            self.m_c = _size(n * B * (r.r_c - r.eta_c * cfg.epsilon))
            self.m_1 = _size(n * B * (r.r_1 - r.eta_1 * cfg.epsilon))
            self.m_0 = 1
        else:
            self.m_c = _size(n * (r.r_c - r.eta_c * cfg.epsilon))
            self.m_1 = _size(n * (r.r_1 - r.eta_1 * cfg.epsilon))
            self.m_0 = _size(n * (r.r_0 + r.eta_0 * cfg.epsilon))
        self.m_hat = _size(n * (r.r_hat + r.eta_hat * cfg.epsilon))
        self.j_size = _size(n * (self.i_us_vx2 + r.delta * cfg.epsilon))
        if cfg.scheme in ("B", "C") and self.m_0 > self.m_hat:
            raise ValidationError(
                f"cell count {self.m_0} exceeds compression index count {self.m_hat}"
            )
        if cfg.scheme == "C":
            from ..region import CONSTRAINT_TOL, feasibility_margin

            margin = feasibility_margin(j)
            if margin < -CONSTRAINT_TOL:
                raise ValidationError(
                    "unique compression-index decoding requires a feasible "
                    f"distribution; margin I(V,X2;Y)-I(V,X2;S) = {margin:.3g} bits"
                )

    # --- resource estimates -------------------------------------------------

    def codebook_entries(self) -> int:
        n, B = self.n, self.blocks
        if self.cfg.scheme == "A":
            per_block = self.m_c * self.m_hat * n * (1 + self.m_hat * (1 + self.m_1 * self.j_size))
            return B * per_block
        return self.m_c * self.m_0 * n * (1 + self.m_hat * (1 + self.m_1 * self.j_size))

    def decode_check_estimate(self) -> int:
        if self.cfg.scheme == "A":
            per_wc = self.blocks * (self.m_hat + self.m_hat**2 * (1 + self.m_1 * self.j_size))
            return self.m_c * per_wc
        cell = -(-self.m_hat // self.m_0)
        per_b = self.m_c * self.m_0 * (1 + cell * (1 + self.m_1 * self.j_size)) + 2 * self.m_0
        return (self.blocks - 1) * per_b

    def guard_resources(self):
        lim = self.cfg.limits
        entries = self.codebook_entries()
        if entries > lim.max_codebook_entries:
            raise ResourceLimitError(
                f"codebook would hold {entries:.3g} symbol entries "
                f"(limit {lim.max_codebook_entries:.3g}); sizes are exponential in n*rate"
            )
        checks = self.decode_check_estimate()
        if checks > lim.max_search_checks:
            raise ResourceLimitError(
                f"decoder search would examine ~{checks:.3g} candidate tuples "
                f"(limit {lim.max_search_checks:.3g})"
            )

    def sizes(self) -> dict:
        return {
            "M_c": self.m_c,
            "M_1": self.m_1,
            "M_hat": self.m_hat,
            "M_0": self.m_0,
            "J": self.j_size,
        }
