"""Fourier-Motzkin elimination over rate variables with symbolic
information-term right-hand sides.

Coefficients are exact rationals; information terms are opaque atoms keyed
by their canonical string.  The five-constraint backward-decoding system and
the two-bound capacity system are provided as builders, together with the
chain-rule identities that connect their projections.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UsageError, ValidationError
from .information import canonical_atom

RATE_VARS = ("Rc", "R1", "R0", "Rhat")


def _clean(mapping) -> dict:
    return {k: Fraction(v) for k, v in mapping.items() if Fraction(v) != 0}


@dataclass(frozen=True)
class LinearInequality:
    """sum(coeffs[var] * var) <= (or <) sum(atoms[a] * a) + const."""

    coeffs: dict
    atoms: dict
    const: Fraction = Fraction(0)
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))
        object.__setattr__(self, "atoms", {canonical_atom(k): v for k, v in _clean(self.atoms).items()})
        object.__setattr__(self, "const", Fraction(self.const))
        if not self.coeffs and not self.atoms and self.const == 0 and not self.strict:
            raise ValidationError("inequality must have a nonzero side")

    def key(self):
        return (
            tuple(sorted(self.coeffs.items())),
            tuple(sorted(self.atoms.items())),
            self.const,
            self.strict,
        )

    def scaled(self, factor: Fraction) -> "LinearInequality":
        if factor <= 0:
            raise UsageError("inequalities may only be scaled by positive factors")
        return LinearInequality(
            {v: c * factor for v, c in self.coeffs.items()},
            {a: c * factor for a, c in self.atoms.items()},
            self.const * factor,
            self.strict,
        )

    def plus(self, other: "LinearInequality") -> "LinearInequality":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        atoms = dict(self.atoms)
        for a, c in other.atoms.items():
            atoms[a] = atoms.get(a, Fraction(0)) + c
        return LinearInequality(
            coeffs, atoms, self.const + other.const, self.strict or other.strict
        )

    def is_trivial(self) -> bool:
        """All-zero variable and atom sides: a pure numeric statement."""
        return not _clean(self.coeffs) and not _clean(self.atoms)

    def holds_trivially(self) -> bool:
        return self.is_trivial() and (self.const > 0 if self.strict else self.const >= 0)


@dataclass(frozen=True)
class InequalitySystem:
    variables: tuple
    inequalities: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        declared = set(self.variables)
        for ineq in self.inequalities:
            extra = set(ineq.coeffs) - declared
            if extra:
                raise ValidationError(f"inequality references undeclared variables {sorted(extra)}")

    @property
    def atom_names(self) -> tuple:
        names = set()
        for ineq in self.inequalities:
            names |= set(ineq.atoms)
        return tuple(sorted(names))


def theorem2_system() -> InequalitySystem:
    """The five backward-decoding rate constraints over {Rc, R1, R0, Rhat}.

    Senses are as printed: the compression-rate and cell-rate constraints are
    strict, the decoding constraints are non-strict.  The cell rate cancels
    out of the sum constraint, so its R0 coefficient is zero there.
    """
    f1 = Fraction(1)
    rows = (
        # Rhat > I(V;S|X2)   <=>   -Rhat < -I(V;S|X2)
        LinearInequality({"Rhat": -f1}, {"I(V;S|X2)": -f1}, strict=True),
        # R0 < I(X2;Y)
        LinearInequality({"R0": f1}, {"I(X2;Y)": f1}, strict=True),
        # R0 + (Rhat - R0) + Rc + R1 <= I(U,V,X2;Y) - I(U;S|V,X2)
        LinearInequality(
            {"Rc": f1, "R1": f1, "Rhat": f1},
            {"I(U,V,X2;Y)": f1, "I(U;S|V,X2)": -f1},
        ),
        # R1 <= I(U;Y|V,X2) - I(U;S|V,X2)
        LinearInequality({"R1": f1}, {"I(U;Y|V,X2)": f1, "I(U;S|V,X2)": -f1}),
        # (Rhat - R0) + R1 <= I(U,V;Y|X2) - I(U;S|V,X2)
        LinearInequality(
            {"Rhat": f1, "R0": -f1, "R1": f1},
            {"I(U,V;Y|X2)": f1, "I(U;S|V,X2)": -f1},
        ),
    )
    return InequalitySystem(RATE_VARS, rows)


def capacity_system() -> InequalitySystem:
    """The two projected bounds over {Rc, R1}."""
    f1 = Fraction(1)
    rows = (
        LinearInequality({"R1": f1}, {"I(U;Y|V,X2)": f1, "I(U;S|V,X2)": -f1}),
        LinearInequality(
            {"Rc": f1, "R1": f1}, {"I(U,V,X2;Y)": f1, "I(U,V,X2;S)": -f1}
        ),
    )
    return InequalitySystem(("Rc", "R1"), rows)


def sum_rate_identities() -> list[str]:
    """Chain-rule rewrites valid whenever the state is independent of the
    causal encoder's input (which the measure class guarantees)."""
    return [
        "I(U,V,X2;S) = I(V;S|X2) + I(U;S|V,X2)",
        "I(U,V,X2;Y) = I(X2;Y) + I(U,V;Y|X2)",
    ]


def eliminate(sys: InequalitySystem, var: str) -> InequalitySystem:
    """Project one variable out by pairing its lower and upper bounds."""
    if var not in sys.variables:
        raise UsageError(f"variable {var!r} is not declared in the system")
    zero, upper, lower = [], [], []
    for ineq in sys.inequalities:
        c = ineq.coeffs.get(var, Fraction(0))
        if c == 0:
            zero.append(ineq)
        elif c > 0:
            upper.append(ineq.scaled(Fraction(1) / c))
        else:
            lower.append(ineq.scaled(Fraction(-1) / c))
    out = list(zero)
    for up, low in itertools.product(upper, lower):
        combined = up.plus(low)
        if combined.is_trivial():
            if combined.holds_trivially():
                continue  # vacuous, e.g. 1 <= 3
        out.append(combined)
    # Deduplicate identical rows.
    seen, rows = set(), []
    for ineq in out:
        k = ineq.key()
        if k not in seen:
            seen.add(k)
            rows.append(ineq)
    remaining = tuple(v for v in sys.variables if v != var)
    return InequalitySystem(remaining, tuple(rows))


def eliminate_all(sys: InequalitySystem, variables) -> InequalitySystem:
    for v in variables:
        sys = eliminate(sys, v)
    return sys


# ---------------------------------------------------------------------------
# Identity canonicalization.

_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<num>\d+(?:/\d+)?)\s*\*?\s*)?(?P<body>[IH]\([^)]*\)|[A-Za-z_][A-Za-z0-9_]*)?\s*"
)


def parse_combo(text: str) -> tuple[dict, Fraction]:
    """Parse a +/- combination of atoms, variables, and rationals.

    Returns ({name: coeff}, constant); atom names are canonicalized.
    """
    terms: dict = {}
    const = Fraction(0)
    pos = 0
    sign = Fraction(1)
    text = text.strip()
    if not text:
        return terms, const
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse linear combination near {text[pos:]!r}")
        if m.group("sign"):
            sign = Fraction(1) if m.group("sign") == "+" else Fraction(-1)
        num = Fraction(m.group("num")) if m.group("num") else Fraction(1)
        body = m.group("body")
        if body is None:
            if m.group("num") is None:
                raise UsageError(f"dangling sign in {text!r}")
            const += sign * num
        elif body[0] in "IH" and "(" in body:
            name = canonical_atom(body)
            terms[name] = terms.get(name, Fraction(0)) + sign * num
        else:
            terms[body] = terms.get(body, Fraction(0)) + sign * num
        pos = m.end()
        sign = Fraction(1)
    return _clean(terms), const


def parse_identity(text: str) -> tuple[dict, Fraction]:
    """Parse ``lhs = rhs`` into a single (combo, const) with lhs - rhs = 0."""
    if text.count("=") != 1:
        raise UsageError(f"identity must contain exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    lt, lc = parse_combo(lhs)
    rt, rc = parse_combo(rhs)
    combo = dict(lt)
    for k, v in rt.items():
        combo[k] = combo.get(k, Fraction(0)) - v
    return _clean(combo), lc - rc


class _AtomBasis:
    """Row-reduced identity space used to canonicalize atom combinations."""

    def __init__(self, identities):
        parsed = [parse_identity(t) if isinstance(t, str) else t for t in identities]
        atom_names = sorted({a for combo, _ in parsed for a in combo})
        self.order = atom_names
        rows = []
        for combo, const in parsed:
            vec = {a: combo.get(a, Fraction(0)) for a in combo}
            rows.append((dict(vec), const))
        # Gaussian elimination with pivots chosen in sorted-atom order.
        self.pivots: list[tuple[str, dict, Fraction]] = []
        for combo, const in rows:
            combo, const = self._reduce(combo, const)
            pivot = next((a for a in self.order if combo.get(a)), None)
            if pivot is None:
                if const != 0:
                    raise UsageError("inconsistent identity set")
                continue
            scale = combo[pivot]
            combo = {a: c / scale for a, c in combo.items()}
            const = const / scale
            self.pivots.append((pivot, combo, const))

    def _reduce(self, combo: dict, const: Fraction):
        combo = dict(combo)
        for pivot, pcombo, pconst in self.pivots:
            c = combo.get(pivot)
            if c:
                for a, v in pcombo.items():
                    combo[a] = combo.get(a, Fraction(0)) - c * v
                const -= c * pconst
        return _clean(combo), const

    def canonicalize(self, atoms: dict, const: Fraction):
        return self._reduce(atoms, const)


def simplify_with_identities(sys: InequalitySystem, identities) -> InequalitySystem:
    """Rewrite atom sides to a canonical basis and drop redundant rows.

    Redundancy removal uses exactly two rules: duplicate rows collapse, and a
    row is dropped when another row with the same right-hand side has
    componentwise-at-least coefficients (valid because rates are
    nonnegative).
    """
    basis = _AtomBasis(identities)
    rows = []
    for ineq in sys.inequalities:
        atoms, const = basis.canonicalize(ineq.atoms, ineq.const)
        rows.append(LinearInequality(ineq.coeffs, atoms, const, ineq.strict))

    rows = [r for r in rows if not (r.is_trivial() and r.holds_trivially())]

    # Duplicates: identical rows (the stricter sense wins).
    by_body: dict = {}
    for r in rows:
        body = (tuple(sorted(r.coeffs.items())), tuple(sorted(r.atoms.items())), r.const)
        prev = by_body.get(body)
        if prev is None or (r.strict and not prev.strict):
            by_body[body] = r
    rows = list(by_body.values())

    def implied(weak: LinearInequality, strong: LinearInequality) -> bool:
        if weak is strong:
            return False
        if (sorted(weak.atoms.items()), weak.const) != (
            sorted(strong.atoms.items()),
            strong.const,
        ):
            return False
        if weak.strict and not strong.strict:
            return False
        vars_all = set(weak.coeffs) | set(strong.coeffs)
        return all(
            strong.coeffs.get(v, Fraction(0)) >= weak.coeffs.get(v, Fraction(0))
            for v in vars_all
        )

    kept = [r for r in rows if not any(implied(r, other) for other in rows)]
    return InequalitySystem(sys.variables, tuple(kept))


def systems_equal(a: InequalitySystem, b: InequalitySystem, identities=()) -> bool:
    """Canonical-form equality of two systems (senses ignored: regions are
    compared as closures)."""
    basis = _AtomBasis(identities) if identities else None

    def canon(sys):
        rows = set()
        for ineq in sys.inequalities:
            atoms, const = (
                basis.canonicalize(ineq.atoms, ineq.const)
                if basis
                else (ineq.atoms, ineq.const)
            )
            rows.add(
                (
                    tuple(sorted(ineq.coeffs.items())),
                    tuple(sorted(atoms.items())),
                    const,
                )
            )
        return rows

    return set(a.variables) == set(b.variables) and canon(a) == canon(b)


# ---------------------------------------------------------------------------
# Numeric instantiation and 2-D polytope comparison.


@dataclass(frozen=True)
class NumericInequality:
    coeffs: dict
    rhs: float
    was_strict: bool = False


@dataclass(frozen=True)
class NumericPolytope:
    variables: tuple
    inequalities: tuple

    def feasible(self, point: dict, tol: float = 1e-9) -> bool:
        if any(point.get(v, 0.0) < -tol for v in self.variables):
            return False
        for ineq in self.inequalities:
            lhs = sum(float(c) * point.get(v, 0.0) for v, c in ineq.coeffs.items())
            if lhs > ineq.rhs + tol:
                return False
        return True


def instantiate(sys: InequalitySystem, atom_values) -> NumericPolytope:
    """Plug numeric atom values in; strict rows are relaxed to closures and
    flagged."""
    values = {canonical_atom(k): float(v) for k, v in atom_values.items()}
    rows = []
    for ineq in sys.inequalities:
        missing = [a for a in ineq.atoms if a not in values]
        if missing:
            raise UsageError(f"no value supplied for atoms {missing}")
        rhs = float(ineq.const) + sum(
            float(c) * values[a] for a, c in ineq.atoms.items()
        )
        rows.append(
            NumericInequality({v: float(c) for v, c in ineq.coeffs.items()}, rhs, ineq.strict)
        )
    return NumericPolytope(sys.variables, tuple(rows))


_BIG = 1e6


def polytope_vertices(poly: NumericPolytope) -> list[tuple[float, float]]:
    """Vertices of a 2-D polytope intersected with the nonnegative orthant.

    A bounding box at 1e6 is added; if it binds, the region is effectively
    unbounded in that direction and the box vertex stands in for the ray.
    """
    if len(poly.variables) != 2:
        raise UsageError("vertex enumeration implemented for 2 variables only")
    vx, vy = poly.variables
    lines = [(ineq.coeffs.get(vx, 0.0), ineq.coeffs.get(vy, 0.0), ineq.rhs) for ineq in poly.inequalities]
    lines += [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (1.0, 0.0, _BIG), (0.0, 1.0, _BIG)]
    verts = []
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-12:
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        point = {vx: x, vy: y}
        if x >= -1e-9 and y >= -1e-9 and poly.feasible(point, tol=1e-7):
            verts.append((max(x, 0.0), max(y, 0.0)))
    uniq = []
    for v in verts:
        if not any(abs(v[0] - u[0]) < 1e-9 and abs(v[1] - u[1]) < 1e-9 for u in uniq):
            uniq.append(v)
    return uniq


def polytope_equal(a: NumericPolytope, b: NumericPolytope, tol: float = 1e-9):
    """(equal, witness): set equality in the nonnegative orthant via mutual
    vertex containment; the witness is a vertex of one set outside the other."""
    if set(a.variables) != set(b.variables):
        raise UsageError("polytopes must share a variable set")
    for first, second in ((a, b), (b, a)):
        for v in polytope_vertices(first):
            point = dict(zip(first.variables, v))
            if not second.feasible(point, tol=tol):
                return False, point
    return True, None


# ---------------------------------------------------------------------------
# Text round-trip.


def _format_combo(terms: dict, const: Fraction) -> str:
    parts = []
    for name in sorted(terms):
        c = terms[name]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        parts.append(f"{sign} {mag}*{name}")
    if const != 0 or not parts:
        sign = "-" if const < 0 else "+"
        parts.append(f"{sign} {abs(const)}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else ("-" + text[2:] if text.startswith("- ") else text)


def format_inequality(ineq: LinearInequality) -> str:
    lhs = _format_combo(ineq.coeffs, Fraction(0)) if ineq.coeffs else "0"
    rhs = _format_combo(ineq.atoms, ineq.const)
    op = "<" if ineq.strict else "<="
    return f"{lhs} {op} {rhs}"


def format_system(sys: InequalitySystem) -> str:
    head = "# vars: " + " ".join(sys.variables)
    return "\n".join([head] + [format_inequality(i) for i in sys.inequalities]) + "\n"


def parse_system(text: str) -> InequalitySystem:
    variables: tuple = ()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "vars:" in line:
                variables = tuple(line.split("vars:")[1].split())
            continue
        strict = False
        if "<=" in line:
            lhs, rhs = line.split("<=")
        elif "<" in line:
            lhs, rhs = line.split("<")
            strict = True
        else:
            raise UsageError(f"no inequality operator in {line!r}")
        lterms, lconst = parse_combo(lhs)
        rterms, rconst = parse_combo(rhs)
        coeffs = {k: v for k, v in lterms.items() if "(" not in k}
        latoms = {k: v for k, v in lterms.items() if "(" in k}
        atoms = dict(rterms)
        for k, v in latoms.items():
            atoms[k] = atoms.get(k, Fraction(0)) - v
        rows.append(LinearInequality(coeffs, atoms, rconst - lconst, strict))
    if not variables:
        variables = tuple(sorted({v for r in rows for v in r.coeffs}))
    return InequalitySystem(variables, tuple(rows))
