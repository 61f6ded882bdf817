"""Entropy and conditional mutual information over the six-variable joint.

All quantities are in bits.  Conditional mutual information is computed in a
single pass over the joint support (KL form), which keeps float noise near
the 1e-15 scale; tiny negatives are clamped, anything worse raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import AtomParseError, InternalConsistencyError, UsageError
from .probability import VAR_INDEX, VARS, JointDistribution, marginalize

# Negative values inside this band are float noise and clamp to zero.
CLAMP_TOL = 1e-12

_LOG2 = np.log(2.0)


def _check_group(group, name) -> tuple[str, ...]:
    tags = tuple(group)
    if not tags:
        raise UsageError(f"variable group '{name}' must be nonempty")
    bad = [t for t in tags if t not in VAR_INDEX]
    if bad:
        raise UsageError(f"unknown variable tags {bad} in group '{name}'")
    if len(set(tags)) != len(tags):
        raise UsageError(f"repeated tags in group '{name}': {tags}")
    return tags


def _plogp_sum(p: np.ndarray) -> float:
    """Sum of p*log2(p) with the 0*log(0)=0 convention."""
    mask = p > 0
    vals = p[mask]
    return float(np.sum(vals * np.log2(vals)))


def entropy(joint: JointDistribution, group) -> float:
    """Shannon entropy of the marginal over ``group``, in bits."""
    tags = _check_group(group, "group")
    marg = marginalize(joint, tags)
    h = -_plogp_sum(np.asarray(marg).ravel())
    return 0.0 if -CLAMP_TOL < h < 0.0 else h


def cond_mutual_info(joint: JointDistribution, a, b, c=(), *, clamp: bool = True) -> float:
    """I(A;B|C) in bits; ``c`` may be empty for plain mutual information.

    With ``clamp=False`` the raw signed value is returned (used by invariant
    reports, where the residual itself is the quantity of interest).
    """
    a = _check_group(a, "a")
    b = _check_group(b, "b")
    c = tuple(c)
    if c:
        c = _check_group(c, "c")
    groups = a + b + c
    if len(set(groups)) != len(groups):
        raise UsageError(f"groups must be pairwise disjoint, got a={a} b={b} c={c}")

    keep = sorted({VAR_INDEX[t] for t in groups})
    sub = marginalize(joint, [VARS[i] for i in keep])
    # Positions of each group's axes inside the reduced tensor.
    pos = {VARS[i]: k for k, i in enumerate(keep)}
    ax_a = tuple(pos[t] for t in a)
    ax_b = tuple(pos[t] for t in b)
    ax_c = tuple(pos[t] for t in c)

    p_abc = sub
    p_ac = sub.sum(axis=ax_b, keepdims=True)
    p_bc = sub.sum(axis=ax_a, keepdims=True)
    if c:
        p_c = sub.sum(axis=ax_a + ax_b, keepdims=True)
    else:
        p_c = np.array(1.0)

    mask = p_abc > 0
    num = p_abc * np.broadcast_to(p_c, p_abc.shape)
    den = np.broadcast_to(p_ac, p_abc.shape) * np.broadcast_to(p_bc, p_abc.shape)
    ratio = np.ones_like(p_abc)
    np.divide(num, den, out=ratio, where=mask)
    val = float(np.sum(p_abc[mask] * np.log(ratio[mask])) / _LOG2)

    if not clamp:
        return val
    if val < -CLAMP_TOL:
        raise InternalConsistencyError(
            f"I({','.join(a)};{','.join(b)}"
            + (f"|{','.join(c)}" if c else "")
            + f") = {val!r} is negative beyond float tolerance"
        )
    return max(val, 0.0)


_ATOM_RE = re.compile(
    r"^(?P<kind>[IH])\(\s*(?P<body>[^)]*)\)$"
)


@dataclass(frozen=True)
class Atom:
    """A named information term: mutual information or entropy, maybe conditioned."""

    kind: str  # "I" or "H"
    groups: tuple[tuple[str, ...], ...]  # (a, b, c) for I; (a, c) for H

    def __str__(self) -> str:
        if self.kind == "I":
            a, b, c = self.groups
            body = f"{','.join(a)};{','.join(b)}"
        else:
            a, c = self.groups
            body = ",".join(a)
        if c:
            body += f"|{','.join(c)}"
        return f"{self.kind}({body})"


def _parse_group(text: str, what: str) -> tuple[str, ...]:
    tags = tuple(t for t in (s.strip() for s in text.split(",")) if t)
    if not tags:
        raise AtomParseError(f"empty variable group in {what}")
    for t in tags:
        if t not in VAR_INDEX:
            raise AtomParseError(f"unknown variable tag {t!r} in {what}")
    if len(set(tags)) != len(tags):
        raise AtomParseError(f"repeated tag in {what}")
    return tuple(sorted(tags, key=VAR_INDEX.get))


def parse_atom(text: str) -> Atom:
    """Parse ``I(A,B;C|D)`` / ``H(A|B)`` strings; whitespace-insensitive.

    Groups are sorted into the canonical tag order and, for mutual
    information, the two sides are ordered deterministically so that
    equivalent atoms compare equal.
    """
    squeezed = "".join(text.split())
    m = _ATOM_RE.match(squeezed)
    if not m:
        raise AtomParseError(f"cannot parse information term {text!r}")
    kind = m.group("kind")
    body = m.group("body")
    if "|" in body:
        body, cond = body.split("|", 1)
        c = _parse_group(cond, text)
    else:
        c = ()
    if kind == "I":
        if body.count(";") != 1:
            raise AtomParseError(f"mutual information needs exactly one ';': {text!r}")
        left, right = body.split(";")
        a = _parse_group(left, text)
        b = _parse_group(right, text)
        if b < a:  # symmetric in (a, b); canonicalize the order
            a, b = b, a
        overlap = set(a) & set(b) | set(a) & set(c) | set(b) & set(c)
        if overlap:
            raise AtomParseError(f"groups overlap on {sorted(overlap)} in {text!r}")
        return Atom("I", (a, b, c))
    if ";" in body:
        raise AtomParseError(f"entropy term cannot contain ';': {text!r}")
    a = _parse_group(body, text)
    if set(a) & set(c):
        raise AtomParseError(f"groups overlap in {text!r}")
    return Atom("H", (a, c))


def canonical_atom(text: str) -> str:
    return str(parse_atom(text))


def eval_atom(joint: JointDistribution, atom: Atom | str) -> float:
    if isinstance(atom, str):
        atom = parse_atom(atom)
    if atom.kind == "I":
        a, b, c = atom.groups
        return cond_mutual_info(joint, a, b, c)
    a, c = atom.groups
    if c:
        return entropy(joint, a + c) - entropy(joint, c)
    return entropy(joint, a)


def eval_atoms(joint: JointDistribution, atoms) -> dict[str, float]:
    """Evaluate a list of atom strings; keys are the canonical atom names."""
    out: dict[str, float] = {}
    for text in atoms:
        atom = parse_atom(text) if isinstance(text, str) else text
        out[str(atom)] = eval_atom(joint, atom)
    return out
