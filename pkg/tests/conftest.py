"""Shared fixtures: canonical channels and achieving-factor builders."""

import numpy as np
import pytest

from smaclab.probability import (
    Alphabet,
    ConditionalKernel,
    FinitePmf,
    build_joint,
    deterministic_kernel,
)

B2 = Alphabet(2)
A1 = Alphabet(1)


def xor_channel():
    """Y = X1 xor X2 xor S, all binary."""
    return deterministic_kernel([B2, B2, B2], B2, lambda x1, x2, s: x1 ^ x2 ^ s)


def clean_mac_channel():
    """|S| = 1 and Y = (X1, X2) observed perfectly."""
    return deterministic_kernel([B2, B2, A1], Alphabet(4), lambda x1, x2, s: 2 * x1 + x2)


def useless_channel(ns=2):
    """Output carries nothing: Y uniform regardless of inputs."""
    table = np.full((2, 2, ns, 2), 0.5)
    return ConditionalKernel((B2, B2, Alphabet(ns)), (B2,), table)


def identity_coupling(ns=2, nv=1, nx2=2):
    """P(U, X1 | S, V, X2) with U uniform and X1 = U."""
    t = np.zeros((ns, nv, nx2, 2, 2))
    for s in range(ns):
        for v in range(nv):
            for x2 in range(nx2):
                for u in range(2):
                    t[s, v, x2, u, u] = 0.5
    return ConditionalKernel(
        (Alphabet(ns), Alphabet(nv), Alphabet(nx2)), (B2, B2), t
    )


def precoder_coupling(ns=2, nv=1, nx2=2):
    """P(U, X1 | S, V, X2) with U uniform and X1 = U xor S."""
    t = np.zeros((ns, nv, nx2, 2, 2))
    for s in range(ns):
        for v in range(nv):
            for x2 in range(nx2):
                for u in range(2):
                    t[s, v, x2, u, u ^ s] = 0.5
    return ConditionalKernel(
        (Alphabet(ns), Alphabet(nv), Alphabet(nx2)), (B2, B2), t
    )


def const_v_kernel(ns=2, nx2=2):
    return ConditionalKernel(
        (Alphabet(ns), Alphabet(nx2)), (A1,), np.ones((ns, nx2, 1))
    )


def noisy_v_kernel(flip: float, ns=2, nx2=2):
    """Binary V = S xor Bernoulli(flip), independent of X2."""
    t = np.zeros((ns, nx2, 2))
    for s in range(ns):
        for x2 in range(nx2):
            t[s, x2, s % 2] = 1.0 - flip
            t[s, x2, 1 - (s % 2)] = flip
    return ConditionalKernel((Alphabet(ns), Alphabet(nx2)), (B2,), t)


@pytest.fixture(scope="session")
def xor_joint():
    """The canonical test joint: XOR channel, uniform X2, V constant,
    input precoded against the state."""
    return build_joint(
        FinitePmf.uniform(2),
        FinitePmf.uniform(2),
        const_v_kernel(),
        precoder_coupling(),
        xor_channel(),
    )


@pytest.fixture(scope="session")
def xor_identity_joint():
    """XOR channel with the naive (uncoded) input coupling U = X1."""
    return build_joint(
        FinitePmf.uniform(2),
        FinitePmf.uniform(2),
        const_v_kernel(),
        identity_coupling(),
        xor_channel(),
    )


def random_factors(rng, ns=2, nv=2, nu=2, nx1=2, nx2=2, alpha=1.0):
    """Random admissible factors at the given auxiliary sizes."""
    q_s = FinitePmf(Alphabet(ns), rng.dirichlet([alpha] * ns))
    p_x2 = FinitePmf(Alphabet(nx2), rng.dirichlet([alpha] * nx2))
    pv = ConditionalKernel(
        (Alphabet(ns), Alphabet(nx2)),
        (Alphabet(nv),),
        rng.dirichlet([alpha] * nv, size=(ns, nx2)),
    )
    pu = ConditionalKernel(
        (Alphabet(ns), Alphabet(nv), Alphabet(nx2)),
        (Alphabet(nu), Alphabet(nx1)),
        rng.dirichlet([alpha] * (nu * nx1), size=(ns, nv, nx2)).reshape(
            ns, nv, nx2, nu, nx1
        ),
    )
    return q_s, p_x2, pv, pu


def random_channel(rng, ns=2, nx1=2, nx2=2, ny=2, alpha=1.0):
    table = rng.dirichlet([alpha] * ny, size=(nx1, nx2, ns))
    return ConditionalKernel(
        (Alphabet(nx1), Alphabet(nx2), Alphabet(ns)), (Alphabet(ny),), table
    )


def random_joint(rng, **kwargs):
    q_s, p_x2, pv, pu = random_factors(rng, **{k: v for k, v in kwargs.items() if k != "ny"})
    ch = random_channel(
        rng,
        ns=kwargs.get("ns", 2),
        nx1=kwargs.get("nx1", 2),
        nx2=kwargs.get("nx2", 2),
        ny=kwargs.get("ny", 2),
    )
    return build_joint(q_s, p_x2, pv, pu, ch)
