"""Random and structured test objects: states, channels and reversible block fixtures."""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import unitary_group

from .channels import Channel


def random_unitary(d, rng):
    return unitary_group.rvs(d, random_state=rng)


def random_psd(d, rng, rank=None):
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return G @ G.conj().T


def random_density(d, rng, rank=None):
    R = random_psd(d, rng, rank)
    return R / np.trace(R).real


def random_channel(d_in, d_out, rng, n_kraus=None):
    """CPTP map from a random isometry C^{d_in} -> C^{d_out} (x) C^{n_kraus}."""
    n_kraus = n_kraus or d_in * d_out
    n_kraus = max(n_kraus, -(-d_in // d_out))  # an isometry needs d_out * n_kraus >= d_in
    G = rng.standard_normal((d_out * n_kraus, d_in)) + 1j * rng.standard_normal((d_out * n_kraus, d_in))
    Q, _ = np.linalg.qr(G)
    ks = [Q[k * d_out:(k + 1) * d_out, :] for k in range(n_kraus)]
    return Channel(d_in, d_out, kraus=ks, check=False)


def merge_example():
    """rho, sigma on C^3 and the channel merging e1, e2 into e1 while keeping e3."""
    rho = np.diag([2 / 3, 1 / 3, 0.0]).astype(complex)
    sigma = np.diag([1 / 6, 1 / 3, 1 / 2]).astype(complex)
    e = np.eye(3)
    ks = [np.outer(e[0], e[0]), np.outer(e[0], e[1]), np.outer(e[2], e[2])]
    return rho, sigma, Channel(3, 3, kraus=ks)


def trace_norm_pair():
    """|e1><e1| and |psi><psi| with psi = (e1 + e2)/sqrt 2."""
    rho = np.diag([1.0, 0.0]).astype(complex)
    psi = np.array([1.0, 1.0]) / np.sqrt(2)
    return rho, np.outer(psi, psi).astype(complex)


@dataclass
class BlockFixture:
    channel: Channel
    B: np.ndarray
    states: list       # PSD operators with support inside supp B
    blocks: list       # (n_left, n_right_in, n_right_out) per block


def block_fixture(rng, n_blocks=None, max_left=2, max_right=2, n_states=3):
    """Channel reversible on a family of block-structured states.

    Every operator has the form sum_k X_k (x) omega_k on (+)_k C^{n_k} (x) C^{m_k}
    with fixed omega_k. The channel acts blockwise as
    X (x) Y -> U_k X U_k* (x) Tr(Y) omega~_k after pinching onto the blocks,
    so the Petz map of B inverts it on the whole family.
    """
    n_blocks = n_blocks or int(rng.integers(1, 3))
    layout = [(int(rng.integers(1, max_left + 1)), int(rng.integers(1, max_right + 1)),
             int(rng.integers(1, max_right + 1))) for _ in range(n_blocks)]
    d_in = sum(n * m for n, m, _ in layout)
    d_out = sum(n * m2 for n, _, m2 in layout)
    omegas = [random_density(m, rng) for _, m, _ in layout]
    omegas_out = [random_density(m2, rng) for _, _, m2 in layout]
    unitaries = [random_unitary(n, rng) if n > 1 else np.array([[np.exp(2j * np.pi * rng.random())]])
                 for n, _, _ in layout]

    ks = []
    off_in = off_out = 0
    for (n, m, m2), U, wout in zip(layout, unitaries, omegas_out):
        lam, vec = np.linalg.eigh(wout)
        for l, v in zip(lam, vec.T):
            for j in range(m):
                local = np.kron(U, np.sqrt(max(l, 0.0)) * np.outer(v, np.eye(m)[j]))
                K = np.zeros((d_out, d_in), dtype=complex)
                K[off_out:off_out + n * m2, off_in:off_in + n * m] = local
                ks.append(K)
        off_in += n * m
        off_out += n * m2
    phi = Channel(d_in, d_out, kraus=ks, check=False)

    def draw():
        weights = rng.dirichlet(np.ones(n_blocks))
        return block_diag(*[w * np.kron(random_density(n, rng), om)
                            for w, (n, _, _), om in zip(weights, layout, omegas)])

    B = draw()
    states = [draw() for _ in range(n_states)]
    return BlockFixture(phi, B, states, layout)


def nonreversible_fixture(rng, max_left=2, max_right=2):
    """A block fixture with a traced-out factor of dimension >= 2, plus a generic state A.

    A is not of the block form, so the channel loses information about it and
    the Petz map of B cannot recover it.
    """
    while True:
        fx = block_fixture(rng, max_left=max_left, max_right=max(max_right, 2))
        if any(m >= 2 for _, m, _ in fx.blocks):
            break
    d = fx.B.shape[0]
    return fx.channel, random_density(d, rng), fx.B
