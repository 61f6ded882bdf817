"""Finite-alphabet probability objects and the factorized six-variable joint.

The joint distribution over (S, U, V, X1, X2, Y) is always built in product
form: state prior, an input distribution for the encoder that only sees past
states, a state-description kernel, a combined auxiliary/input kernel for the
fully informed encoder, and the channel itself.  Everything is stored as
dense float64 tensors; alphabets are desk scale by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, UsageError, ValidationError

# Canonical variable tags and axis order used by every tensor in the package.
VARS = ("S", "U", "V", "X1", "X2", "Y")
VAR_INDEX = {v: i for i, v in enumerate(VARS)}

# Construction-time tolerance on "sums to one" checks.
SUM_TOL = 1e-12
# Tolerance on statistical-independence / Markov-chain residuals (in bits).
INDEP_TOL = 1e-10
# Tolerance on the state-marginal consistency check.
MARGINAL_TOL = 1e-10


@dataclass(frozen=True)
class Alphabet:
    """A finite alphabet; symbols are the indices 0..size-1, labels cosmetic."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError(f"alphabet size must be >= 1, got {self.size}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValidationError(
                    f"{len(self.labels)} labels for alphabet of size {self.size}"
                )

    def to_json(self) -> dict:
        out: dict = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Alphabet":
        return cls(size=int(obj["size"]), labels=obj.get("labels"))


def _as_prob_array(values, shape=None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if shape is not None and arr.shape != tuple(shape):
        raise DimensionMismatchError(f"expected shape {tuple(shape)}, got {arr.shape}")
    return arr


def _check_pmf(vec: np.ndarray, what: str) -> None:
    if np.any(vec < 0):
        raise ValidationError(f"{what} has negative entries (min {vec.min():.3g})")
    total = float(vec.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValidationError(f"{what} sums to {total!r}, off by more than {SUM_TOL}")


@dataclass(frozen=True)
class FinitePmf:
    """A probability vector over a finite alphabet."""

    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self):
        arr = _as_prob_array(self.probs, (self.alphabet.size,))
        _check_pmf(arr, "pmf")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @classmethod
    def uniform(cls, size: int) -> "FinitePmf":
        return cls(Alphabet(size), np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size: int, at: int) -> "FinitePmf":
        v = np.zeros(size)
        v[at] = 1.0
        return cls(Alphabet(size), v)

    def to_json(self) -> dict:
        return {"alphabet": self.alphabet.to_json(), "probs": self.probs.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePmf":
        return cls(Alphabet.from_json(obj["alphabet"]), np.asarray(obj["probs"]))


@dataclass(frozen=True)
class ConditionalKernel:
    """A stochastic map from a tuple of input symbols to joint output symbols.

    ``table`` has shape ``(*input sizes, *output sizes)``; each slice obtained
    by fixing the inputs is a pmf over the (possibly multi-variable) output.
    """

    input_alphabets: tuple[Alphabet, ...]
    output_alphabets: tuple[Alphabet, ...]
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "input_alphabets", tuple(self.input_alphabets))
        object.__setattr__(self, "output_alphabets", tuple(self.output_alphabets))
        shape = tuple(a.size for a in self.input_alphabets) + tuple(
            a.size for a in self.output_alphabets
        )
        arr = _as_prob_array(self.table, shape)
        n_in = int(np.prod([a.size for a in self.input_alphabets], dtype=np.int64)) if self.input_alphabets else 1
        n_out = int(np.prod([a.size for a in self.output_alphabets], dtype=np.int64))
        rows = arr.reshape(n_in, n_out)
        for i, row in enumerate(rows):
            _check_pmf(row, f"kernel row {i}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "table", arr)

    @property
    def rows(self) -> np.ndarray:
        """Kernel as a (num input tuples, num output tuples) row-stochastic matrix."""
        n_out = int(np.prod([a.size for a in self.output_alphabets], dtype=np.int64))
        return self.table.reshape(-1, n_out)

    def to_json(self) -> dict:
        return {
            "input_alphabets": [a.to_json() for a in self.input_alphabets],
            "output_alphabets": [a.to_json() for a in self.output_alphabets],
            "table": self.table.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConditionalKernel":
        ins = tuple(Alphabet.from_json(a) for a in obj["input_alphabets"])
        outs = tuple(Alphabet.from_json(a) for a in obj["output_alphabets"])
        shape = tuple(a.size for a in ins) + tuple(a.size for a in outs)
        return cls(ins, outs, np.asarray(obj["table"], dtype=np.float64).reshape(shape))


@dataclass(frozen=True)
class JointDistribution:
    """Dense joint pmf over (S, U, V, X1, X2, Y) in the canonical axis order."""

    alphabets: dict
    tensor: np.ndarray
    # Marginal the S axis is expected to match (set by build_joint).
    q_s: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if set(self.alphabets) != set(VARS):
            raise DimensionMismatchError(
                f"alphabets must cover exactly {VARS}, got {sorted(self.alphabets)}"
            )
        shape = tuple(self.alphabets[v].size for v in VARS)
        arr = _as_prob_array(self.tensor, shape)
        if np.any(arr < 0):
            raise ValidationError("joint tensor has negative entries")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValidationError(f"joint tensor sums to {total!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "tensor", arr)
        if self.q_s is not None:
            qs = np.asarray(self.q_s, dtype=np.float64).copy()
            qs.flags.writeable = False
            object.__setattr__(self, "q_s", qs)

    def size(self, var: str) -> int:
        return self.alphabets[var].size

    @property
    def shape(self) -> tuple[int, ...]:
        return self.tensor.shape

    def to_json(self) -> dict:
        return {
            "alphabets": {v: self.alphabets[v].to_json() for v in VARS},
            "axis_order": list(VARS),
            "tensor": self.tensor.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "JointDistribution":
        alph = {v: Alphabet.from_json(obj["alphabets"][v]) for v in VARS}
        shape = tuple(alph[v].size for v in VARS)
        tensor = np.asarray(obj["tensor"], dtype=np.float64).reshape(shape)
        return cls(alph, tensor)


def build_joint(
    q_s: FinitePmf,
    p_x2: FinitePmf,
    p_v_given_sx2: ConditionalKernel,
    p_ux1_given_svx2: ConditionalKernel,
    channel: ConditionalKernel,
) -> JointDistribution:
    """Assemble the product-form joint over (S,U,V,X1,X2,Y).

    Factor shapes: ``p_v_given_sx2`` maps (S,X2) to V, ``p_ux1_given_svx2``
    maps (S,V,X2) to (U,X1), ``channel`` maps (X1,X2,S) to Y.  All invariants
    of the result hold by construction.
    """
    ns = q_s.alphabet.size
    nx2 = p_x2.alphabet.size

    vin = tuple(a.size for a in p_v_given_sx2.input_alphabets)
    if vin != (ns, nx2):
        raise DimensionMismatchError(f"state-description kernel inputs {vin} != ({ns}, {nx2})")
    if len(p_v_given_sx2.output_alphabets) != 1:
        raise DimensionMismatchError("state-description kernel must have a single output variable")
    nv = p_v_given_sx2.output_alphabets[0].size

    uin = tuple(a.size for a in p_ux1_given_svx2.input_alphabets)
    if uin != (ns, nv, nx2):
        raise DimensionMismatchError(f"input/auxiliary kernel inputs {uin} != ({ns}, {nv}, {nx2})")
    if len(p_ux1_given_svx2.output_alphabets) != 2:
        raise DimensionMismatchError("input/auxiliary kernel must output the (U, X1) pair")
    nu, nx1 = (a.size for a in p_ux1_given_svx2.output_alphabets)

    cin = tuple(a.size for a in channel.input_alphabets)
    if cin != (nx1, nx2, ns):
        raise DimensionMismatchError(f"channel inputs {cin} != ({nx1}, {nx2}, {ns})")
    if len(channel.output_alphabets) != 1:
        raise DimensionMismatchError("channel must have a single output variable")
    ny = channel.output_alphabets[0].size

    # P(s,u,v,x1,x2) = Q_S(s) P(x2) P(v|s,x2) P(u,x1|s,v,x2); then channel.
    joint = np.einsum(
        "s,e,sev,sveua,aesy->suvaey",
        q_s.probs,
        p_x2.probs,
        p_v_given_sx2.table,
        p_ux1_given_svx2.table,
        channel.table,
        optimize=True,
    )
    alphabets = {
        "S": q_s.alphabet,
        "U": p_ux1_given_svx2.output_alphabets[0],
        "V": p_v_given_sx2.output_alphabets[0],
        "X1": p_ux1_given_svx2.output_alphabets[1],
        "X2": p_x2.alphabet,
        "Y": channel.output_alphabets[0],
    }
    tensor = joint
    # Normalize away accumulated rounding so downstream sum checks stay exact.
    tensor = tensor / tensor.sum()
    return JointDistribution(alphabets, tensor, q_s=q_s.probs)


def marginalize(joint: JointDistribution, keep: Iterable[str]) -> np.ndarray:
    """Sum the joint tensor down to the given variables (canonical axis order)."""
    keep = list(keep)
    if not keep:
        raise UsageError("marginalize requires a nonempty set of variables")
    bad = [v for v in keep if v not in VAR_INDEX]
    if bad:
        raise UsageError(f"unknown variable tags {bad}; valid tags are {VARS}")
    keep_idx = sorted({VAR_INDEX[v] for v in keep})
    drop = tuple(i for i in range(len(VARS)) if i not in keep_idx)
    return joint.tensor.sum(axis=drop) if drop else joint.tensor.copy()


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def validate(joint: JointDistribution) -> list[InvariantCheck]:
    """Measure all four joint invariants and report residuals.

    Checks: nonnegativity+normalization, the S marginal against the stored
    state prior, independence of S and X2, and the Markov chain that makes
    (U,V) act on Y only through (S,X1,X2).  Information residuals are in bits.
    """
    from .information import cond_mutual_info  # local import to avoid a cycle

    checks = []

    neg = float(max(0.0, -joint.tensor.min()))
    norm = abs(float(joint.tensor.sum()) - 1.0)
    checks.append(InvariantCheck("nonneg_and_normalized", max(neg, norm), SUM_TOL))

    marg_s = marginalize(joint, ["S"])
    q_s = joint.q_s if joint.q_s is not None else marg_s
    checks.append(
        InvariantCheck(
            "state_marginal_matches_prior",
            float(np.max(np.abs(marg_s - q_s))),
            MARGINAL_TOL,
        )
    )

    checks.append(
        InvariantCheck(
            "state_independent_of_x2",
            float(cond_mutual_info(joint, ["S"], ["X2"], clamp=False)),
            INDEP_TOL,
        )
    )
    checks.append(
        InvariantCheck(
            "aux_channel_markov_chain",
            float(
                cond_mutual_info(
                    joint, ["U", "V"], ["Y"], ["S", "X1", "X2"], clamp=False
                )
            ),
            INDEP_TOL,
        )
    )
    return checks


def deterministic_kernel(
    input_alphabets: Sequence[Alphabet],
    output_alphabet: Alphabet,
    mapping,
) -> ConditionalKernel:
    """Kernel putting all mass on ``mapping(*inputs)`` for each input tuple."""
    in_sizes = tuple(a.size for a in input_alphabets)
    table = np.zeros(in_sizes + (output_alphabet.size,))
    for idx in np.ndindex(*in_sizes):
        table[idx + (int(mapping(*idx)),)] = 1.0
    return ConditionalKernel(tuple(input_alphabets), (output_alphabet,), table)
