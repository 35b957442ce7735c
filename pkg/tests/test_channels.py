import math

import numpy as np
import pytest

from qfdiv.channels import (Channel, adjoint, apply, channel_tensor_power, complete_to_stochastic,
                            compose, construct, contraction_V, depolarizing_channel,
                            identity_channel, k_positivity_witness, partial_trace_channel,
                            petz_maps, pinching_channel, properties, schwarz_violation,
                            tomiyama_map, trace_preservation_report, transpose_channel,
                            unitary_channel)
from qfdiv.errors import ResourceError, ShapeError
from qfdiv.fixtures import merge_example, random_channel, random_density, random_psd, random_unitary
from qfdiv.matcore import as_psd, partial_trace, support_projection


def _hs(X, Y):
    return np.trace(X.conj().T @ Y)


def test_identity_channel():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    idc = identity_channel(3)
    assert np.abs(apply(idc, X) - X).max() == 0
    assert np.abs(adjoint(idc)(X) - X).max() == 0


def test_depolarizing_adjoint_by_inner_product():
    rng = np.random.default_rng(1)
    phi = depolarizing_channel(3)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert abs(_hs(Y, phi(X)) - _hs(phi.adjoint()(Y), X)) < 1e-12
    assert np.abs(phi.adjoint()(Y) - np.trace(Y) * np.eye(3) / 3).max() < 1e-12


def test_adjoint_inner_product_random():
    rng = np.random.default_rng(2)
    phi = random_channel(2, 3, rng, 3)
    X = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert abs(_hs(Y, phi(X)) - _hs(phi.adjoint()(Y), X)) < 1e-12


def test_partial_trace_channel_on_products():
    rng = np.random.default_rng(3)
    X, Y = random_psd(2, rng), random_psd(3, rng)
    pt = partial_trace_channel(2, 3)
    assert np.abs(pt(np.kron(X, Y)) - X * np.trace(Y)).max() < 1e-12
    Z = random_psd(6, rng)
    assert np.abs(pt(Z) - partial_trace(Z, [2, 3], [0])).max() < 1e-12


def test_representations_agree():
    rng = np.random.default_rng(4)
    phi = random_channel(2, 2, rng, 3)
    by_choi = Channel(2, 2, choi=phi.choi)
    X = random_psd(2, rng)
    assert np.abs(by_choi(X) - phi(X)).max() < 1e-12
    assert np.abs(construct(kraus=phi.kraus)(X) - phi(X)).max() < 1e-12
    with pytest.raises(ShapeError):
        Channel(2, 3, kraus=[np.eye(2)])


def test_compose_and_tensor():
    rng = np.random.default_rng(5)
    a, b = random_channel(2, 3, rng, 2), random_channel(3, 2, rng, 2)
    X = random_psd(2, rng)
    assert np.abs(compose(b, a)(X) - b(a(X))).max() < 1e-12
    Y = random_psd(2, rng)
    t2 = channel_tensor_power(a, 2)
    assert np.abs(t2(np.kron(X, Y)) - np.kron(a(X), a(Y))).max() < 1e-12
    with pytest.raises(ResourceError):
        channel_tensor_power(a, 12)


def test_unitary_channel_properties():
    rep = properties(unitary_channel(random_unitary(3, np.random.default_rng(6))), samples=100)
    assert rep.trace_preserving and rep.completely_positive and rep.unital
    assert rep.schwarz_violation <= 1e-10


def test_transpose_schwarz_witness():
    lam0 = tomiyama_map("lambda", 0.0, 2)
    assert np.abs(lam0(np.array([[1, 2], [3, 4]])) - transpose_channel(2)(np.array([[1, 2], [3, 4]]))).max() == 0
    rep = properties(lam0, samples=50)
    assert rep.schwarz_violation >= 1 - 1e-12
    E12 = np.array([[0, 1], [0, 0]], dtype=complex)
    M = lam0(E12).conj().T @ lam0(E12) - lam0(E12.conj().T @ E12)
    assert M[0, 0].real >= 1 - 1e-12


def test_two_positivity_falsified_below_threshold():
    d = 2
    below = tomiyama_map("phi", 1 - 1 / (d + 1) - 0.02, d)
    assert k_positivity_witness(below, 2, samples=200) is not None
    above = tomiyama_map("phi", 1 - 1 / (d + 1) + 0.02, d)
    assert above.is_cp() and k_positivity_witness(above, 2, samples=200) is None


def test_tomiyama_endpoints():
    assert np.abs(tomiyama_map("psi", 1.0, 3)(np.diag([1.0, 0, 0])) - np.eye(3) / 3).max() < 1e-14
    assert tomiyama_map("psi", 1.0, 3).is_cp()
    step = 1e-3
    for d in (2, 3):
        lo, hi = 1 - 1 / (d + 1), 1 + 1 / (d - 1)
        assert tomiyama_map("phi", lo + step, d).is_cp() and not tomiyama_map("phi", lo - step, d).is_cp()
        assert tomiyama_map("phi", hi - step, d).is_cp() and not tomiyama_map("phi", hi + step, d).is_cp()
    top = 1 + 1 / 3
    assert tomiyama_map("psi", top - step, 2).is_cp() and not tomiyama_map("psi", top + step, 2).is_cp()
    assert not tomiyama_map("psi", -step, 2).is_cp()


def test_schwarz_falsifier_quiet_on_channels():
    rng = np.random.default_rng(7)
    for ch in (depolarizing_channel(2, 0.3), random_channel(3, 3, rng, 2)):
        # duals of channels are unital 2-positive maps, hence Schwarz
        assert schwarz_violation(ch.adjoint(), samples=200)[0] <= 1e-10


def test_pinching():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.abs(pinching_channel(2.5 * np.eye(3))(X) - X).max() < 1e-14
    B = np.diag([1.0, 1.0, 2.0])
    E = pinching_channel(B)
    assert np.abs(E(E(X)) - E(X)).max() < 1e-14
    assert abs(E(X)[0, 2]) == 0 and abs(E(X)[0, 1] - X[0, 1]) < 1e-14
    U = random_unitary(3, rng)
    Bc = U @ np.diag([0.2, 0.3, 0.5]) @ U.conj().T
    Ac = U @ np.diag([0.6, 0.1, 0.3]) @ U.conj().T
    assert np.abs(pinching_channel(Bc)(Ac) - Ac).max() < 1e-12


def test_petz_identity_and_unitary():
    rng = np.random.default_rng(9)
    B = random_psd(3, rng, rank=2)
    P = support_projection(B)
    A = P @ random_psd(3, rng) @ P
    _, back = petz_maps(identity_channel(3), B)
    assert np.abs(back(A) - A).max() < 1e-12
    phi = unitary_channel(random_unitary(3, rng))
    _, back = petz_maps(phi, B)
    assert np.abs(back(phi(A)) - A).max() < 1e-12


def test_petz_worked_example():
    rho, sigma, phi = merge_example()
    _, back = petz_maps(phi, sigma)
    got = back(phi(rho))
    assert np.abs(got - np.diag([1 / 3, 2 / 3, 0])).max() < 1e-12
    assert np.abs(got - rho).max() > 0.3
    fwd, _ = petz_maps(phi, sigma)
    assert np.abs(fwd.adjoint()(phi(rho)) - got).max() < 1e-12


def test_completion_full_rank_is_petz():
    rng = np.random.default_rng(10)
    phi, B = random_channel(2, 2, rng, 2), random_density(2, rng)
    _, back = petz_maps(phi, B)
    psi = complete_to_stochastic(back)
    Y = random_psd(2, rng)
    assert np.abs(psi(Y) - back(Y)).max() < 1e-12


def test_completion_rank_deficient_is_trace_preserving():
    rng = np.random.default_rng(11)
    phi = random_channel(3, 3, rng, 1)
    B = random_density(3, rng, rank=2)
    _, back = petz_maps(phi, B)
    psi = complete_to_stochastic(back)
    for _ in range(5):
        Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert abs(np.trace(psi(Y)) - np.trace(Y)) < 1e-10
    P = support_projection(B)
    A = P @ random_psd(3, rng) @ P
    assert np.abs(psi(phi(A)) - back(phi(A))).max() < 1e-12
    assert psi.is_cp()


def test_contraction_V():
    rng = np.random.default_rng(12)
    B = random_density(3, rng)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.abs(contraction_V(identity_channel(3), B)(X) - X).max() < 1e-12
    for _ in range(20):
        d = int(rng.integers(2, 4))
        phi, Bk = random_channel(d, int(rng.integers(2, 4)), rng, int(rng.integers(1, 4))), random_psd(d, rng)
        V = contraction_V(phi, Bk)
        assert V.operator_norm() <= 1 + 1e-10
        sq = as_psd(phi(Bk)).power(0.5)
        assert np.abs(V(sq) - as_psd(Bk).power(0.5)).max() < 1e-10
    # trace-decreasing: V no longer fixes the square root
    half = identity_channel(3).scale(0.5)
    V = contraction_V(half, B)
    assert np.abs(V(as_psd(half(B)).power(0.5)) - as_psd(B).power(0.5)).max() > 1e-3


def test_trace_preservation_items():
    rng = np.random.default_rng(13)
    phi, B = random_channel(3, 2, rng, 2), random_psd(3, rng, rank=2)
    rep = trace_preservation_report(phi, B)
    assert all(rep.items.values()) and rep.consistent
    rep = trace_preservation_report(identity_channel(3).scale(0.5), B)
    assert not any(rep.items.values()) and rep.consistent


def test_renyi_zero_and_two_monotonicity():
    rng = np.random.default_rng(14)
    for _ in range(20):
        d = int(rng.integers(2, 4))
        phi = random_channel(d, int(rng.integers(2, 4)), rng, int(rng.integers(1, 3)))
        A = random_psd(d, rng, rank=int(rng.integers(1, d + 1)))
        B = random_psd(d, rng)
        PA, PB = phi(A), phi(B)
        assert np.trace(PB @ support_projection(PA)).real >= np.trace(B @ support_projection(A)).real - 1e-10
        lhs = np.trace(PA @ PA @ as_psd(PB).power(-1)).real
        rhs = np.trace(A @ A @ as_psd(B).power(-1)).real
        assert lhs <= rhs + 1e-8 * max(1.0, rhs)


def test_kraus_recovered_from_choi_is_minimal():
    rng = np.random.default_rng(15)
    phi = random_channel(2, 2, rng, 2)
    ks = Channel(2, 2, choi=phi.choi).to_kraus()
    assert len(ks) == 2
    S = sum(K.conj().T @ K for K in ks)
    assert np.abs(S - np.eye(2)).max() < 1e-10
    assert math.isclose(np.trace(phi(np.eye(2))).real, 2.0)
