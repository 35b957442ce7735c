import math

import numpy as np
import pytest

from qfdiv.channels import (identity_channel, partial_trace_channel, pinching_channel,
                            tomiyama_map, unitary_channel)
from qfdiv.errors import SupportError, TracePreservationError
from qfdiv.fdiv import build_function, f_divergence
from qfdiv.fixtures import (block_fixture, nonreversible_fixture, merge_example, random_density,
                            random_psd, random_unitary)
from qfdiv.matcore import support_projection
from qfdiv.reversibility import (chebyshev_nodes, chernoff_hoeffding_recovery, cocycle_residual,
                                 default_primitive_set, distinct, equality_report,
                                 error_correction_check, fixed_point_structure,
                                 holder_equality_check, inverse_holder_check,
                                 joint_convexity_check, log_cocycle_residual, pinching_chain_check,
                                 ratio_spectrum, recover)


def test_ratio_spectrum_and_nodes():
    r = ratio_spectrum(np.diag([0.2, 0.8]), np.diag([0.4, 0.4]))
    assert np.abs(np.sort(r) - [0.5, 2.0]).max() < 1e-12
    assert len(distinct([1.0, 1.0 + 1e-12, 2.0])) == 2
    nodes = chebyshev_nodes(0.1, 10.0, 5)
    assert len(nodes) == 5 and nodes.min() > 0.1 - 1e-12 and nodes.max() < 10.0 + 1e-12
    assert len(default_primitive_set([0.5, 2.0], 4)) == 4


def test_identity_is_reversible():
    rng = np.random.default_rng(0)
    A, B = random_density(3, rng), random_density(3, rng)
    rep = equality_report(identity_channel(3), A, B)
    assert max(rep.residuals().values()) < 1e-12
    assert rep.verdict == "reversible"


def test_worked_example_not_reversible():
    rho, sigma, phi = merge_example()
    rep = equality_report(phi, rho, sigma)
    assert rep.verdict == "not reversible"
    assert rep.max_primitive_gap > 1e-3
    assert abs(rep.recovery_residual - math.sqrt(2) / 3) < 1e-12
    assert rep.to_dict()["verdict"] == "not reversible"


def test_block_fixture_is_reversible():
    for seed in range(5):
        fx = block_fixture(np.random.default_rng(seed))
        rep = equality_report(fx.channel, fx.states[1], fx.B)
        assert max(rep.residuals().values()) < 1e-9 and rep.verdict == "reversible"


def test_nonreversible_fixture():
    phi, A, B = nonreversible_fixture(np.random.default_rng(1))
    rep = equality_report(phi, A, B)
    assert rep.verdict == "not reversible" and rep.recovery_residual > 1e-4


def test_cocycle_residual():
    rng = np.random.default_rng(2)
    A, B = random_density(3, rng), random_density(3, rng)
    assert cocycle_residual(identity_channel(3), A, B, 0.9) < 1e-12
    U = unitary_channel(random_unitary(3, rng))
    for t in (0.3, 1.7):
        assert cocycle_residual(U, A, B, t) < 1e-10
    assert log_cocycle_residual(U, A, B) < 1e-10
    rho, sigma, phi = merge_example()
    assert cocycle_residual(phi, rho, sigma, 1.0) > 1e-2


def test_hypothesis_violations():
    rho, sigma, phi = merge_example()
    with pytest.raises(SupportError):
        equality_report(phi, sigma, rho)
    half = identity_channel(3).scale(0.5)
    with pytest.raises(TracePreservationError):
        equality_report(half, rho, sigma)


def test_non_cp_map_is_inconclusive():
    lam = tomiyama_map("lambda", 0.0, 2)
    rng = np.random.default_rng(3)
    A, B = random_density(2, rng), random_density(2, rng)
    rep = equality_report(lam, A, B)
    assert rep.verdict == "inconclusive" and rep.caveats


def test_recover_identity_and_pinching():
    rng = np.random.default_rng(4)
    B = random_psd(3, rng, rank=2)
    psi = recover(identity_channel(3), B)
    P = support_projection(B)
    X = P @ random_psd(3, rng) @ P
    assert np.abs(psi(X) - X).max() < 1e-12
    U = random_unitary(3, rng)
    Bc = U @ np.diag([0.2, 0.3, 0.5]) @ U.conj().T
    Ac = U @ np.diag([0.5, 0.1, 0.4]) @ U.conj().T
    E = pinching_channel(Bc)
    assert np.abs(recover(E, Bc)(E(Ac)) - Ac).max() < 1e-12


def test_recover_block_fixture_states():
    fx = block_fixture(np.random.default_rng(5))
    psi = recover(fx.channel, fx.B)
    for A in fx.states:
        assert np.abs(psi(fx.channel(A)) - A).max() < 1e-9
    Y = random_psd(fx.channel.d_out, np.random.default_rng(6))
    assert abs(np.trace(psi(Y)) - np.trace(Y)) < 1e-10


def test_recover_warns_without_cp():
    with pytest.warns(RuntimeWarning):
        recover(tomiyama_map("lambda", 0.0, 2), np.eye(2) / 2)


def test_fixed_points_of_pinching():
    B = np.diag([1.0, 1.0, 2.0])
    E = pinching_channel(B)
    s = fixed_point_structure(E)
    assert s.status == "ok" and s.is_algebra
    assert s.dimension == 5
    assert np.abs(s.projector - E.superop).max() < 1e-9
    X = np.arange(9.0).reshape(3, 3)
    assert np.abs(s.conditional_expectation(X) - E(X)).max() < 1e-9


def test_fixed_points_of_generic_unitary():
    U = np.diag(np.exp(1j * np.array([0.3, math.sqrt(2), math.pi / 1.7])))
    V = random_unitary(3, np.random.default_rng(7))
    s = fixed_point_structure(unitary_channel(V @ U @ V.conj().T))
    assert s.dimension == 3 and len(s.center_projections) == 3
    D = V @ np.diag([1.0, 2.0, 3.0]) @ V.conj().T
    assert np.abs(s.conditional_expectation(D) - D).max() < 1e-8


def test_fixed_points_of_identity():
    s = fixed_point_structure(identity_channel(2))
    assert s.dimension == 4 and s.blocks == [(2, 2, 1)]
    assert np.abs(s.projector - np.eye(4)).max() < 1e-12


def test_fixed_points_of_trace_preserving_dual_is_multiplicative():
    # E(X) Y products: fix is closed under multiplication on the fixture
    fx = block_fixture(np.random.default_rng(8), n_blocks=2)
    E = pinching_channel(fx.B)
    s = fixed_point_structure(E)
    assert s.product_residual < 1e-8 and s.star_residual < 1e-8


def test_error_correction_examples():
    fx = block_fixture(np.random.default_rng(9))
    rep = error_correction_check(fx.channel, [fx.states[0]], fx.B)
    assert rep.verdict == "correctable"
    rho, sigma, phi = merge_example()
    rep = error_correction_check(phi, [rho, sigma], sigma)
    assert rep.verdict == "not correctable"
    assert rep.hoeffding_gaps[(0, 0.01)] > 1e-3
    assert abs(rep.chernoff_gaps[0]) < 1e-12
    B = np.diag([0.2, 0.3, 0.5])
    C = [np.diag([0.5, 0.25, 0.25]), np.diag([0.1, 0.6, 0.3])]
    assert error_correction_check(pinching_channel(B), C, B).verdict == "correctable"


def test_error_correction_support_violation():
    rho, sigma, phi = merge_example()
    with pytest.raises(SupportError, match="support hypothesis violated"):
        error_correction_check(phi, [sigma], rho)


def test_chernoff_hoeffding_recovery():
    rho, sigma, phi = merge_example()
    rep = chernoff_hoeffding_recovery(phi, rho, sigma, "chernoff")
    assert abs(rep.gap) < 1e-12 and not rep.hypotheses_met
    assert rep.verdict == "inconclusive" and rep.recovery_residual > 0.1
    rep = chernoff_hoeffding_recovery(phi, rho, sigma, "hoeffding", r=0.1)
    assert rep.verdict == "not reversible"
    assert chernoff_hoeffding_recovery(phi, rho, rho).verdict == "reversible"
    P = np.eye(3)[[1, 2, 0]]
    rep = chernoff_hoeffding_recovery(unitary_channel(P), np.diag([0.5, 0.3, 0.2]), np.diag([0.2, 0.3, 0.5]))
    assert rep.verdict == "reversible" and rep.recovery_residual < 1e-9


def test_holder_examples():
    rng = np.random.default_rng(10)
    B = random_psd(3, rng)
    c = holder_equality_check(3 * B, B, 0.4)
    assert c.equality and c.proportional and abs(c.ratio - 3) < 1e-12
    c = holder_equality_check(np.diag([1.0, 0]), np.diag([0.5, 0.5]), 0.5)
    assert abs(c.lhs - 1 / math.sqrt(2)) < 1e-12 and c.rhs == 1.0 and c.holds and not c.equality
    with pytest.raises(SupportError):
        holder_equality_check(np.diag([0.5, 0.5]), np.diag([1.0, 0]), 1.5)


def test_inverse_holder():
    rng = np.random.default_rng(11)
    p = 0.5
    A = random_psd(3, rng) @ random_unitary(3, rng)
    B = random_psd(3, rng)
    c = inverse_holder_check(A, B, p)
    assert c.holds and not c.equality
    V, w = random_unitary(3, rng), rng.uniform(0.5, 2.0, 3)
    X12 = (V * w ** 2) @ V.conj().T          # |A| with |A|^(1/2) = X
    Xm1 = (V * w ** -1) @ V.conj().T         # |B*| with |B*|^(-1) = X
    c = inverse_holder_check(random_unitary(3, rng) @ X12, Xm1 @ random_unitary(3, rng), p)
    assert c.holds and c.equality and c.proportional
    with pytest.raises(SupportError):
        inverse_holder_check(np.eye(2), np.diag([1.0, 0.0]), p)


def test_pinching_chain():
    B = np.diag([0.2, 0.3, 0.5])
    rep = pinching_chain_check(np.diag([0.5, 0.2, 0.3]), B)
    assert rep.first_tight and not rep.second_tight and rep.consistent
    rep = pinching_chain_check(2 * B, B)
    assert rep.first_tight and rep.second_tight
    rng = np.random.default_rng(12)
    A, B = random_density(2, rng), random_density(2, rng)
    rep = pinching_chain_check(A, B)
    assert rep.s_full - rep.s_pinched > 1e-6 and rep.s_pinched - rep.s_scalar > 1e-6


def test_joint_convexity():
    rng = np.random.default_rng(13)
    ps = np.array([0.3, 0.7])
    As = [random_psd(2, rng) for _ in range(2)]
    Bs = [random_psd(2, rng) for _ in range(2)]
    rep = joint_convexity_check(ps, As, Bs)
    assert rep.lhs <= rep.rhs + 1e-12 and not rep.equality and not rep.condition
    # the same pair twice is an equality case
    rep = joint_convexity_check(ps, [As[0], As[0]], [Bs[0], Bs[0]])
    assert rep.equality and rep.condition
    # orthogonal blocks: the mixture is a direct sum, also equality
    A1, B1 = np.diag([0.4, 0.0]), np.diag([0.7, 0.0])
    A2, B2 = np.diag([0.0, 0.9]), np.diag([0.0, 0.2])
    rep = joint_convexity_check(ps, [A1, A2], [B1, B2])
    assert rep.equality and rep.condition


def test_monotonicity_partial_trace():
    rng = np.random.default_rng(14)
    A, B = random_density(4, rng), random_density(4, rng)
    pt = partial_trace_channel(2, 2)
    for f in (build_function("x_log_x"), build_function("phi_t", t=0.7)):
        assert f_divergence(pt(A), pt(B), f) <= f_divergence(A, B, f) + 1e-10
