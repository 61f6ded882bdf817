"""Information-measure tests: entropies, conditional MI, the atom grammar."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    B2,
    const_v_kernel,
    identity_coupling,
    random_channel,
    random_factors,
    random_joint,
)
from smaclab.errors import AtomParseError, UsageError
from smaclab.information import (
    canonical_atom,
    cond_mutual_info,
    entropy,
    eval_atoms,
    parse_atom,
)
from smaclab.oracle import direct_info_terms
from smaclab.probability import (
    Alphabet,
    ConditionalKernel,
    FinitePmf,
    build_joint,
    deterministic_kernel,
)


def h2(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bsc_like_joint(flip: float):
    """Y = X1 xor N with N ~ Bernoulli(flip); S and X2 are dummies."""
    a1 = Alphabet(1)
    table = np.zeros((2, 1, 1, 2))
    for x1 in range(2):
        table[x1, 0, 0, x1] = 1 - flip
        table[x1, 0, 0, 1 - x1] = flip
    ch = ConditionalKernel((B2, a1, a1), (B2,), table)
    return build_joint(
        FinitePmf.uniform(1),
        FinitePmf.uniform(1),
        const_v_kernel(ns=1, nx2=1),
        identity_coupling(ns=1, nx2=1),
        ch,
    )


class TestEntropy:
    def test_uniform_binary_is_one_bit(self, xor_joint):
        assert entropy(xor_joint, ["S"]) == pytest.approx(1.0, abs=1e-12)

    def test_point_mass_is_zero(self, xor_joint):
        assert entropy(xor_joint, ["V"]) == 0.0  # V is constant in this joint

    def test_bernoulli_011_closed_form(self):
        j = bsc_like_joint(0.11)
        # noise entropy shows up as H(Y|X1)
        h = entropy(j, ["X1", "Y"]) - entropy(j, ["X1"])
        assert h == pytest.approx(h2(0.11), abs=1e-12)
        assert h == pytest.approx(0.49992, abs=1e-4)

    def test_empty_group_rejected(self, xor_joint):
        with pytest.raises(UsageError):
            entropy(xor_joint, [])


class TestCondMutualInfo:
    def test_state_x2_independence(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            j = random_joint(rng, nv=2)
            assert abs(cond_mutual_info(j, ["S"], ["X2"])) <= 1e-10

    def test_markov_chain_residual(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            j = random_joint(rng, nv=3, ny=3)
            assert cond_mutual_info(j, ["U", "V"], ["Y"], ["S", "X1", "X2"]) <= 1e-10

    def test_bsc_mutual_information(self):
        j = bsc_like_joint(0.11)
        assert cond_mutual_info(j, ["X1"], ["Y"]) == pytest.approx(1 - h2(0.11), abs=1e-12)
        assert cond_mutual_info(j, ["X1"], ["Y"]) == pytest.approx(0.50008, abs=1e-4)

    def test_symmetry_and_overlap_rejection(self, xor_joint):
        a = cond_mutual_info(xor_joint, ["U"], ["Y"], ["X2"])
        b = cond_mutual_info(xor_joint, ["Y"], ["U"], ["X2"])
        assert a == pytest.approx(b, abs=1e-12)
        with pytest.raises(UsageError):
            cond_mutual_info(xor_joint, ["U"], ["U"])
        with pytest.raises(UsageError):
            cond_mutual_info(xor_joint, ["U"], ["Y"], ["U"])


class TestChainRule:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10_000))
    def test_chain_rule_identity(self, seed):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, nv=2)
        lhs = cond_mutual_info(j, ["U", "V", "X2"], ["S"])
        rhs = cond_mutual_info(j, ["V", "X2"], ["S"]) + cond_mutual_info(
            j, ["U"], ["S"], ["V", "X2"]
        )
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_sum_rate_identity_under_independence(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            j = random_joint(rng, nv=2, ny=3)
            lhs = cond_mutual_info(j, ["U", "V", "X2"], ["Y"]) - cond_mutual_info(
                j, ["U", "V", "X2"], ["S"]
            )
            rhs = (
                cond_mutual_info(j, ["U", "V", "X2"], ["Y"])
                - cond_mutual_info(j, ["V"], ["S"], ["X2"])
                - cond_mutual_info(j, ["U"], ["S"], ["V", "X2"])
            )
            assert lhs == pytest.approx(rhs, abs=1e-10)


class TestEvalAtoms:
    def test_degenerate_state_atoms_vanish(self):
        ch = deterministic_kernel(
            [B2, B2, Alphabet(1)], Alphabet(4), lambda x1, x2, s: 2 * x1 + x2
        )
        j = build_joint(
            FinitePmf.uniform(1),
            FinitePmf.uniform(2),
            const_v_kernel(ns=1),
            identity_coupling(ns=1),
            ch,
        )
        vals = eval_atoms(j, ["I(V;S|X2)", "I(U;S|V,X2)", "I(U,V,X2;S)", "I(V,X2;S)"])
        assert all(abs(v) <= 1e-10 for v in vals.values())

    def test_chain_rule_triple(self):
        rng = np.random.default_rng(9)
        j = random_joint(rng, nv=2)
        vals = eval_atoms(j, ["I(U,V,X2;S)", "I(V,X2;S)", "I(U;S|V,X2)"])
        assert vals["I(S;U,V,X2)"] == pytest.approx(
            vals["I(S;V,X2)"] + vals["I(S;U|V,X2)"], abs=1e-10
        )

    def test_backward_decoding_atoms_match_oracle(self, xor_joint):
        atoms = [
            "I(V;S|X2)",
            "I(X2;Y)",
            "I(U,V,X2;Y)",
            "I(U;S|V,X2)",
            "I(U;Y|V,X2)",
            "I(U,V;Y|X2)",
        ]
        prod = eval_atoms(xor_joint, atoms)
        ref = direct_info_terms(xor_joint)
        for name, value in prod.items():
            assert value == pytest.approx(ref[name], abs=1e-10)

    def test_values_match_individual_calls(self, xor_joint):
        vals = eval_atoms(xor_joint, ["I(U;Y|V,X2)", "H(Y|X2)"])
        assert vals["I(U;Y|V,X2)"] == pytest.approx(
            cond_mutual_info(xor_joint, ["U"], ["Y"], ["V", "X2"]), abs=1e-12
        )
        assert vals["H(Y|X2)"] == pytest.approx(
            entropy(xor_joint, ["Y", "X2"]) - entropy(xor_joint, ["X2"]), abs=1e-12
        )


class TestAtomGrammar:
    def test_canonicalization(self):
        assert canonical_atom("I(Y;X2)") == "I(X2;Y)"
        assert canonical_atom(" I( U , V , X2 ; Y ) ") == "I(U,V,X2;Y)"
        assert canonical_atom("I(X2,V;S)") == "I(S;V,X2)"
        assert canonical_atom("H( Y | X2 )") == "H(Y|X2)"

    def test_parse_errors(self):
        for bad in ("I(U;V;Y)", "I(U)", "I(U;Q)", "I(U;U)", "H(U;V)", "J(U;V)", "I(U;S|U)"):
            with pytest.raises(AtomParseError):
                parse_atom(bad)
