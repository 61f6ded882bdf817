"""Fourier-Motzkin tests: the five-constraint system, projection, identity
rewriting, numeric instantiation, and 2-D polytope comparison."""

from fractions import Fraction

import numpy as np
import pytest

from conftest import random_channel, random_factors
from smaclab.errors import UsageError
from smaclab.fme import (
    InequalitySystem,
    LinearInequality,
    capacity_system,
    eliminate,
    eliminate_all,
    format_system,
    instantiate,
    parse_system,
    polytope_equal,
    polytope_vertices,
    simplify_with_identities,
    sum_rate_identities,
    systems_equal,
    theorem2_system,
)
from smaclab.information import eval_atoms
from smaclab.probability import build_joint
from smaclab.region import pair_bounds

F = Fraction

CAPACITY_ATOMS = [
    "I(U;Y|V,X2)",
    "I(U;S|V,X2)",
    "I(U,V,X2;Y)",
    "I(U,V,X2;S)",
    "I(V;S|X2)",
    "I(X2;Y)",
    "I(U,V;Y|X2)",
]


def random_atom_values(rng):
    joint = build_joint(*random_factors(rng, nv=2), random_channel(rng, ny=3))
    return eval_atoms(joint, CAPACITY_ATOMS), joint


class TestTheorem2System:
    def test_shape(self):
        sys0 = theorem2_system()
        assert len(sys0.inequalities) == 5
        assert set(sys0.variables) == {"Rc", "R1", "R0", "Rhat"}

    def test_sum_row_coefficients(self):
        sys0 = theorem2_system()
        sum_row = [
            r for r in sys0.inequalities if r.coeffs.get("Rc") == 1 and "Rhat" in r.coeffs
        ]
        assert len(sum_row) == 1
        row = sum_row[0]
        assert row.coeffs["Rhat"] == 1
        assert row.coeffs.get("R0", F(0)) == 0

    def test_atom_inventory(self):
        expected = {
            "I(S;V|X2)",
            "I(X2;Y)",
            "I(U,V,X2;Y)",
            "I(S;U|V,X2)",
            "I(U;Y|V,X2)",
            "I(U,V;Y|X2)",
        }
        assert set(theorem2_system().atom_names) == expected

    def test_strictness_as_printed(self):
        senses = sorted(r.strict for r in theorem2_system().inequalities)
        assert senses == [False, False, False, True, True]


class TestEliminate:
    def test_hand_example(self):
        # {x >= 1, y <= 5 - x, x <= 3} --eliminate x--> {y <= 4}
        sys0 = InequalitySystem(
            ("x", "y"),
            (
                LinearInequality({"x": -1}, {}, F(-1)),  # x >= 1
                LinearInequality({"x": 1, "y": 1}, {}, F(5)),  # x + y <= 5
                LinearInequality({"x": 1}, {}, F(3)),  # x <= 3
            ),
        )
        out = eliminate(sys0, "x")
        assert len(out.inequalities) == 1
        row = out.inequalities[0]
        assert row.coeffs == {"y": F(1)} and row.const == F(4)

    def test_absent_variable_is_noop(self):
        sys0 = theorem2_system()
        out = eliminate(
            InequalitySystem(sys0.variables + ("Rx",), sys0.inequalities), "Rx"
        )
        assert systems_equal(
            InequalitySystem(sys0.variables, out.inequalities), sys0
        )

    def test_undeclared_variable_raises(self):
        with pytest.raises(UsageError):
            eliminate(theorem2_system(), "Rz")

    def test_eliminating_cell_rate_pairs_bounds(self):
        out = eliminate(theorem2_system(), "R0")
        assert len(out.inequalities) == 4
        # one combined row must bound Rhat + R1 by the sum of the cell and
        # joint-decoding budgets
        combos = [
            r
            for r in out.inequalities
            if r.coeffs.get("Rhat") == 1 and r.coeffs.get("R1") == 1 and "Rc" not in r.coeffs
        ]
        assert len(combos) == 1
        atoms = combos[0].atoms
        assert atoms["I(X2;Y)"] == 1 and atoms["I(U,V;Y|X2)"] == 1
        assert atoms["I(S;U|V,X2)"] == -1

    def test_elimination_soundness_numeric(self):
        # a point is feasible after elimination iff some value of the
        # eliminated variable was feasible before
        rng = np.random.default_rng(4)
        sys0 = theorem2_system()
        values, _ = random_atom_values(rng)
        before = instantiate(sys0, values)
        after = instantiate(eliminate(sys0, "Rhat"), values)
        grid = np.linspace(0, 3, 61)
        for _ in range(200):
            pt = {
                "Rc": rng.uniform(0, 2),
                "R1": rng.uniform(0, 2),
                "R0": rng.uniform(0, 2),
            }
            feas_after = after.feasible(pt, tol=1e-9)
            feas_before = any(
                before.feasible({**pt, "Rhat": v}, tol=1e-9) for v in grid
            )
            assert feas_after == feas_before


class TestSimplify:
    def test_empty_identities_change_nothing(self):
        sys0 = theorem2_system()
        out = simplify_with_identities(sys0, [])
        assert systems_equal(out, sys0)

    def test_projection_reaches_capacity_form(self):
        projected = eliminate_all(theorem2_system(), ["R0", "Rhat"])
        simplified = simplify_with_identities(projected, sum_rate_identities())
        assert len(simplified.inequalities) == 2
        assert systems_equal(simplified, capacity_system(), sum_rate_identities())

    def test_projection_order_does_not_matter(self):
        a = eliminate_all(theorem2_system(), ["R0", "Rhat"])
        b = eliminate_all(theorem2_system(), ["Rhat", "R0"])
        rng = np.random.default_rng(12)
        for _ in range(5):
            values, _ = random_atom_values(rng)
            equal, witness = polytope_equal(
                instantiate(a, values), instantiate(b, values), tol=1e-9
            )
            assert equal, witness

    def test_duplicates_collapse(self):
        row = LinearInequality({"R1": 1}, {"I(X2;Y)": 1})
        sys0 = InequalitySystem(("Rc", "R1"), (row, row))
        out = simplify_with_identities(sys0, [])
        assert len(out.inequalities) == 1

    def test_inconsistent_identities_raise(self):
        with pytest.raises(UsageError):
            simplify_with_identities(
                theorem2_system(), ["I(X2;Y) = I(X2;Y) + 1"]
            )


class TestInstantiate:
    def test_all_zero_atoms(self):
        poly = instantiate(capacity_system(), {a: 0.0 for a in CAPACITY_ATOMS})
        assert all(ineq.rhs == 0.0 for ineq in poly.inequalities)
        assert poly.feasible({"Rc": 0, "R1": 0})
        assert not poly.feasible({"Rc": 0.1, "R1": 0})

    def test_missing_atom_raises(self):
        with pytest.raises(UsageError):
            instantiate(capacity_system(), {"I(X2;Y)": 0.5})

    def test_strict_rows_are_flagged(self):
        rng = np.random.default_rng(3)
        values, _ = random_atom_values(rng)
        poly = instantiate(theorem2_system(), values)
        assert any(ineq.was_strict for ineq in poly.inequalities)

    def test_matches_pair_bounds_polytope(self, xor_joint):
        values = eval_atoms(xor_joint, CAPACITY_ATOMS)
        poly = instantiate(capacity_system(), values)
        r1b, sumb = pair_bounds(xor_joint)
        direct = instantiate(
            capacity_system(),
            {  # feed the two bounds through equivalent atom values
                "I(U;Y|V,X2)": max(r1b, 0.0),
                "I(U;S|V,X2)": 0.0,
                "I(U,V,X2;Y)": max(sumb, 0.0),
                "I(U,V,X2;S)": 0.0,
            },
        )
        equal, witness = polytope_equal(poly, direct, tol=1e-9)
        assert equal, witness


class TestPolytopeEqual:
    def test_identical_systems(self):
        rng = np.random.default_rng(8)
        values, _ = random_atom_values(rng)
        poly = instantiate(capacity_system(), values)
        equal, witness = polytope_equal(poly, poly)
        assert equal and witness is None

    def test_loosened_sum_bound_detected(self):
        vals = {
            "I(U;Y|V,X2)": 0.8,
            "I(U;S|V,X2)": 0.1,
            "I(U,V,X2;Y)": 1.0,
            "I(U,V,X2;S)": 0.2,
        }
        a = instantiate(capacity_system(), vals)
        loose = dict(vals, **{"I(U,V,X2;Y)": 1.2})
        b = instantiate(capacity_system(), loose)
        equal, witness = polytope_equal(a, b, tol=1e-9)
        assert not equal
        # witness sits on the loosened sum-rate face
        assert witness["Rc"] + witness["R1"] == pytest.approx(1.0, abs=1e-6)

    def test_variable_mismatch_raises(self):
        a = instantiate(capacity_system(), {a: 0.0 for a in CAPACITY_ATOMS})
        b = instantiate(theorem2_system(), {a: 0.0 for a in CAPACITY_ATOMS})
        with pytest.raises(UsageError):
            polytope_equal(a, b)

    def test_projected_system_equals_capacity_numerically(self):
        rng = np.random.default_rng(21)
        pipeline = simplify_with_identities(
            eliminate_all(theorem2_system(), ["R0", "Rhat"]), sum_rate_identities()
        )
        for _ in range(10):
            values, _ = random_atom_values(rng)
            equal, witness = polytope_equal(
                instantiate(pipeline, values),
                instantiate(capacity_system(), values),
                tol=1e-9,
            )
            assert equal, witness


class TestTextFormat:
    def test_round_trip(self):
        sys0 = theorem2_system()
        text = format_system(sys0)
        back = parse_system(text)
        assert systems_equal(back, sys0)
        assert sorted(r.strict for r in back.inequalities) == sorted(
            r.strict for r in sys0.inequalities
        )

    def test_rational_coefficients_survive(self):
        row = LinearInequality({"Rc": F(3, 2)}, {"I(X2;Y)": F(-1, 3)}, F(1, 4))
        sys0 = InequalitySystem(("Rc",), (row,))
        back = parse_system(format_system(sys0))
        got = back.inequalities[0]
        assert got.coeffs["Rc"] == F(3, 2)
        assert got.atoms["I(X2;Y)"] == F(-1, 3)
        assert got.const == F(1, 4)
