"""Probability-core tests: construction, marginalization, validation."""

import numpy as np
import pytest

from conftest import (
    B2,
    const_v_kernel,
    identity_coupling,
    precoder_coupling,
    random_channel,
    random_factors,
    xor_channel,
)
from smaclab.errors import DimensionMismatchError, UsageError, ValidationError
from smaclab.information import cond_mutual_info
from smaclab.probability import (
    VARS,
    Alphabet,
    ConditionalKernel,
    FinitePmf,
    JointDistribution,
    build_joint,
    deterministic_kernel,
    marginalize,
    validate,
)


def brute_force_joint(q_s, p_x2, pv, pu, channel):
    """Independent six-loop product, written straight from the factorization."""
    ns, nx2 = q_s.probs.shape[0], p_x2.probs.shape[0]
    nv = pv.output_alphabets[0].size
    nu, nx1 = (a.size for a in pu.output_alphabets)
    ny = channel.output_alphabets[0].size
    out = np.zeros((ns, nu, nv, nx1, nx2, ny))
    for s in range(ns):
        for u in range(nu):
            for v in range(nv):
                for x1 in range(nx1):
                    for x2 in range(nx2):
                        for y in range(ny):
                            out[s, u, v, x1, x2, y] = (
                                q_s.probs[s]
                                * p_x2.probs[x2]
                                * pv.table[s, x2, v]
                                * pu.table[s, v, x2, u, x1]
                                * channel.table[x1, x2, s, y]
                            )
    return out


class TestBuildJoint:
    def test_uniform_factors_deterministic_channel(self):
        ch = deterministic_kernel([B2, B2, B2], B2, lambda x1, x2, s: x1)
        j = build_joint(
            FinitePmf.uniform(2),
            FinitePmf.uniform(2),
            const_v_kernel(),
            identity_coupling(),
            ch,
        )
        assert cond_mutual_info(j, ["S"], ["X2"]) <= 1e-10
        np.testing.assert_allclose(marginalize(j, ["S"]), [0.5, 0.5], atol=1e-12)

    def test_singleton_state_conditioning_is_vacuous(self):
        ch = deterministic_kernel([B2, B2, Alphabet(1)], Alphabet(4), lambda a, b, s: 2 * a + b)
        j = build_joint(
            FinitePmf.uniform(1),
            FinitePmf.uniform(2),
            const_v_kernel(ns=1),
            identity_coupling(ns=1),
            ch,
        )
        # conditioning on a singleton S changes nothing
        for a, b in ((["U"], ["Y"]), (["X1"], ["X2"]), (["X2"], ["Y"])):
            assert cond_mutual_info(j, a, b, ["S"]) == pytest.approx(
                cond_mutual_info(j, a, b), abs=1e-12
            )

    def test_xor_channel_joint_matches_brute_force(self):
        rng = np.random.default_rng(11)
        q_s = FinitePmf.uniform(2)
        p_x2 = FinitePmf.uniform(2)
        pv = ConditionalKernel(
            (B2, B2), (B2,), rng.dirichlet([2, 2], size=(2, 2))
        )
        pu = ConditionalKernel(
            (B2, B2, B2), (B2, B2), rng.dirichlet([1] * 4, size=(2, 2, 2)).reshape(2, 2, 2, 2, 2)
        )
        ch = xor_channel()
        j = build_joint(q_s, p_x2, pv, pu, ch)
        expected = brute_force_joint(q_s, p_x2, pv, pu, ch)
        np.testing.assert_allclose(j.tensor, expected, atol=1e-14)

    def test_alphabet_mismatch_raises(self):
        with pytest.raises(DimensionMismatchError):
            build_joint(
                FinitePmf.uniform(3),  # |S|=3 vs kernels built for |S|=2
                FinitePmf.uniform(2),
                const_v_kernel(),
                identity_coupling(),
                xor_channel(),
            )

    def test_invalid_pmf_raises(self):
        with pytest.raises(ValidationError):
            FinitePmf(B2, np.array([0.7, 0.7]))
        with pytest.raises(ValidationError):
            FinitePmf(B2, np.array([-0.1, 1.1]))


class TestMarginalize:
    def test_keep_all_is_identity(self, xor_joint):
        np.testing.assert_allclose(marginalize(xor_joint, VARS), xor_joint.tensor)

    def test_keep_state_recovers_prior(self, xor_joint):
        np.testing.assert_allclose(marginalize(xor_joint, ["S"]), [0.5, 0.5], atol=1e-12)

    def test_x2y_uniform_on_xor(self, xor_identity_joint):
        # X2 and Y are uniform and independent on the XOR channel
        np.testing.assert_allclose(
            marginalize(xor_identity_joint, ["X2", "Y"]), np.full((2, 2), 0.25), atol=1e-12
        )

    def test_commutes_with_nesting(self):
        rng = np.random.default_rng(5)
        q_s, p_x2, pv, pu = random_factors(rng, nv=3)
        j = build_joint(q_s, p_x2, pv, pu, random_channel(rng))
        big = marginalize(j, ["S", "V", "X2", "Y"])  # canonical order S,V,X2,Y
        direct = marginalize(j, ["V", "Y"])
        nested = big.sum(axis=(0, 2))
        assert np.max(np.abs(direct - nested)) <= 1e-12

    def test_empty_keep_raises(self, xor_joint):
        with pytest.raises(UsageError):
            marginalize(xor_joint, [])


class TestMixingLinearity:
    def test_mixture_of_state_kernels(self):
        rng = np.random.default_rng(7)
        q_s = FinitePmf.uniform(2)
        p_x2 = FinitePmf.uniform(2)
        pu = identity_coupling(nv=2)
        ch = xor_channel()
        rows_a = rng.dirichlet([1, 1], size=(2, 2))
        rows_b = rng.dirichlet([1, 1], size=(2, 2))
        lam = 0.3
        mk = lambda rows: ConditionalKernel((B2, B2), (B2,), rows)
        j_a = build_joint(q_s, p_x2, mk(rows_a), pu, ch)
        j_b = build_joint(q_s, p_x2, mk(rows_b), pu, ch)
        j_mix = build_joint(q_s, p_x2, mk(lam * rows_a + (1 - lam) * rows_b), pu, ch)
        np.testing.assert_allclose(
            j_mix.tensor, lam * j_a.tensor + (1 - lam) * j_b.tensor, atol=1e-12
        )


class TestValidate:
    def test_constructed_joints_pass(self, xor_joint):
        assert all(c.passed for c in validate(xor_joint))

    def test_x2_equal_state_fails_independence(self):
        # hand-built joint with X2 = S: one bit of shared information
        t = np.zeros((2, 1, 1, 1, 2, 1))
        t[0, 0, 0, 0, 0, 0] = 0.5
        t[1, 0, 0, 0, 1, 0] = 0.5
        alph = {
            "S": B2, "U": Alphabet(1), "V": Alphabet(1),
            "X1": Alphabet(1), "X2": B2, "Y": Alphabet(1),
        }
        j = JointDistribution(alph, t)
        report = {c.name: c for c in validate(j)}
        indep = report["state_independent_of_x2"]
        assert not indep.passed
        assert indep.residual == pytest.approx(1.0, abs=1e-9)

    def test_perturbed_marginal_residual_is_reported(self, xor_joint):
        eps = 1e-6
        t = xor_joint.tensor.copy()
        idx = np.unravel_index(np.argmax(t), t.shape)
        t[idx] += eps
        t /= t.sum()
        j = JointDistribution(xor_joint.alphabets, t, q_s=np.array([0.5, 0.5]))
        report = {c.name: c for c in validate(j)}
        res = report["state_marginal_matches_prior"].residual
        # exact residual for one perturbed cell after renormalization:
        # the touched state gains eps*(1 - q_s)/(1 + eps)
        expected = eps * 0.5 / (1 + eps)
        assert res == pytest.approx(expected, rel=1e-6)


class TestSerialization:
    def test_round_trips(self, xor_joint):
        a = Alphabet(3, labels=("a", "b", "c"))
        assert Alphabet.from_json(a.to_json()) == a
        p = FinitePmf(B2, np.array([0.25, 0.75]))
        q = FinitePmf.from_json(p.to_json())
        np.testing.assert_allclose(q.probs, p.probs)
        k = const_v_kernel()
        k2 = ConditionalKernel.from_json(k.to_json())
        np.testing.assert_allclose(k2.table, k.table)
        j2 = JointDistribution.from_json(xor_joint.to_json())
        np.testing.assert_allclose(j2.tensor, xor_joint.tensor)

    def test_labels_length_checked(self):
        with pytest.raises(ValidationError):
            Alphabet(2, labels=("only-one",))
