"""Acceptance criteria. Each test carries a ``criterion`` marker; the summary hook
in conftest prints one PASS/FAIL line per criterion."""
import math

import numpy as np
import pytest

from qfdiv.channels import depolarizing_channel, schwarz_violation, tomiyama_map, unitary_channel
from qfdiv.discrimination import chernoff_distance, exponent_trend, hoeffding_distance, psi
from qfdiv.fdiv import (build_function, classical_f_divergence, f_divergence, fidelity, nsz_reduce,
                        relative_entropy, renyi)
from qfdiv.fixtures import (block_fixture, nonreversible_fixture, merge_example, random_channel,
                            random_density, random_psd, random_unitary, trace_norm_pair)
from qfdiv.matcore import as_psd, trace_norm
from qfdiv.opconvex import (canonical_representation, closed_form, divergence_via_representation,
                            eval_representation, quadratic_coefficient_probe)
from qfdiv.channels import petz_maps
from qfdiv.reversibility import (equality_report, holder_equality_check, inverse_holder_check,
                                 joint_convexity_check, pinching_chain_check, recover)

OPCONVEX = [build_function("x_log_x")] \
    + [build_function("power", alpha=a) for a in (1.5, 2.0)] \
    + [build_function("neg_power", alpha=a) for a in (0.3, 0.5)] \
    + [build_function("phi_t", t=t) for t in (0.5, 1.0, 3.0)] \
    + [build_function("indicator_zero")]

# the listed family for the spectral-formula check, including the non-convex x^0.3, x^0.5
SPECTRAL = [build_function("x_log_x")] \
    + [build_function("power", alpha=a) for a in (0.3, 0.5, 1.5, 2.0)] \
    + [build_function("phi_t", t=t) for t in (0.5, 1.0, 3.0)] \
    + [build_function("indicator_zero")]


def _close(x, y, tol):
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) < tol


@pytest.mark.criterion(1, "spectral double sum equals the classical reduction")
def test_spectral_formula_matches_classical_reduction():
    rng = np.random.default_rng(101)
    for k in range(100):
        d = 2 + k % 2
        # mix full-rank and rank-deficient operators so the omega and f(0) terms are exercised
        A = random_psd(d, rng, rank=int(rng.integers(1, d + 1)))
        B = random_psd(d, rng, rank=int(rng.integers(1, d + 1)))
        pair = nsz_reduce(A, B)
        for f in SPECTRAL:
            q = f_divergence(A, B, f)
            c = classical_f_divergence(pair, f)
            assert _close(q, c, 1e-10 * max(1.0, abs(c) if math.isfinite(c) else 1.0)), (k, f.name, q, c)


@pytest.mark.criterion(2, "monotonicity under CPTP maps and joint convexity")
def test_monotonicity_suite():
    rng = np.random.default_rng(202)
    alphas = (0.0, 0.25, 0.5, 0.75, 1.25, 1.5, 2.0)
    for k in range(200):
        d_in, d_out = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        A = random_density(d_in, rng, rank=int(rng.integers(1, d_in + 1)))
        B = random_density(d_in, rng)
        phi = random_channel(d_in, d_out, rng, int(rng.integers(1, 4)))
        PA, PB = phi(A), phi(B)
        for f in OPCONVEX:
            assert f_divergence(PA, PB, f) <= f_divergence(A, B, f) + 1e-8, (k, f.name)
        for a in alphas:
            assert renyi(PA, PB, a) <= renyi(A, B, a) + 1e-8, (k, a)
        assert relative_entropy(PA, PB) <= relative_entropy(A, B) + 1e-8
        assert chernoff_distance(PA, PB).value <= chernoff_distance(A, B).value + 1e-8
        for r in (0.05, 0.3, 1.0):
            assert hoeffding_distance(PA, PB, r).value <= hoeffding_distance(A, B, r).value + 1e-8

    for k in range(50):
        d, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        ps = rng.dirichlet(np.ones(n))
        As = [random_psd(d, rng) for _ in range(n)]
        Bs = [random_psd(d, rng) for _ in range(n)]
        for f in (OPCONVEX[0], OPCONVEX[2], OPCONVEX[4]):
            rep = joint_convexity_check(ps, As, Bs, f)
            assert rep.lhs <= rep.rhs + 1e-8


@pytest.mark.criterion(3, "worked example: psi curve, Chernoff distance, Petz recovery")
def test_worked_example_values():
    rho, sigma, phi = merge_example()
    for a in np.linspace(0.0, 1.0, 11):
        assert abs(psi(rho, sigma, a) - math.log((2 + 4 ** a) / 6)) < 1e-12
    assert abs(chernoff_distance(rho, sigma).value - math.log(2)) < 1e-10
    assert abs(chernoff_distance(phi(rho), phi(sigma)).value - math.log(2)) < 1e-10
    _, back = petz_maps(phi, sigma)
    assert np.abs(back(phi(rho)) - np.diag([1 / 3, 2 / 3, 0])).max() < 1e-12
    assert equality_report(phi, rho, sigma).verdict == "not reversible"


@pytest.mark.criterion(4, "trace-norm pair values and fidelity non-representability")
def test_trace_norm_pair_and_fidelity():
    rho, sigma = trace_norm_pair()
    assert abs(trace_norm(rho - sigma) - math.sqrt(2)) < 1e-12
    f = build_function("phi_t", t=1.0)
    assert abs(f_divergence(rho, sigma, f) - 0.5 * (f.omega + f.f0 + f(1.0))) < 1e-12
    assert abs(f_divergence(rho, sigma, f) + 0.25) < 1e-12
    # Tr rho^1/2 sigma^1/2 is -S_f for f = -x^1/2; fidelity differs on non-commuting inputs
    r = np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex)
    s = np.array([[0.4, -0.3j], [0.3j, 0.6]], dtype=complex)
    tr_half = -f_divergence(r, s, build_function("neg_power", alpha=0.5))
    assert abs(fidelity(r, s) - tr_half) > 1e-3


@pytest.mark.criterion(5, "equality conditions on reversible and non-reversible fixtures")
def test_equality_round_trip():
    for k in range(20):
        fx = block_fixture(np.random.default_rng(500 + k))
        for A in fx.states:
            rep = equality_report(fx.channel, A, fx.B)
            assert max(rep.residuals().values()) < 1e-9, (k, rep.residuals())
            assert rep.verdict == "reversible"
        psi_map = recover(fx.channel, fx.B)
        for A in fx.states + [fx.B]:
            assert np.abs(psi_map(fx.channel(A)) - A).max() < 1e-9
    for k in range(20):
        phi, A, B = nonreversible_fixture(np.random.default_rng(600 + k))
        rep = equality_report(phi, A, B)
        assert rep.recovery_residual > 1e-4
        assert rep.max_primitive_gap > 1e-6
        assert rep.verdict == "not reversible"


@pytest.mark.criterion(6, "integral representation against closed forms and the direct evaluator")
def test_integral_representation():
    cases = [("x_log_x", None, build_function("x_log_x")),
             ("neg_power", 0.5, build_function("neg_power", alpha=0.5)),
             ("power", 1.5, build_function("power", alpha=1.5))]
    xs = np.logspace(-3, 3, 61)
    for name, a, _ in cases:
        rep = canonical_representation(name, a)
        exact = closed_form(name, a)
        for x in xs:
            e = float(exact(x))
            if e == 0.0:
                assert abs(eval_representation(rep, x)) < 1e-12
            else:
                assert abs(eval_representation(rep, x) - e) / abs(e) < 1e-7, (name, x)
        assert abs(quadratic_coefficient_probe(rep)) < 1e-4
    rng = np.random.default_rng(606)
    for k in range(50):
        d = 2 + k % 2
        A, B = random_psd(d, rng), random_psd(d, rng)
        for name, a, f in cases:
            assert abs(divergence_via_representation(A, B, canonical_representation(name, a))
                       - f_divergence(A, B, f)) < 1e-6


def _flips(kind, d):
    eps = np.round(np.arange(-0.25, 2.0 + 5e-4, 1e-3), 12)
    cp = np.array([tomiyama_map(kind, e, d).choi_min_eigenvalue() >= -1e-12 for e in eps])
    return [(eps[i], eps[i + 1]) for i in np.flatnonzero(np.diff(cp.astype(int)))]


@pytest.mark.criterion(7, "Tomiyama CP boundaries and the Schwarz falsifier")
def test_tomiyama_thresholds():
    for d in (2, 3):
        for kind, edge in (("phi", 1 - 1 / (d + 1)), ("psi", 1 + 1 / (d * d - 1))):
            flips = _flips(kind, d)
            assert any(lo - 1e-9 <= edge <= hi + 1e-9 for lo, hi in flips), (kind, d, flips)
    for e in (0.0, 0.5):
        viol, _ = schwarz_violation(tomiyama_map("lambda", e, 2).adjoint())
        assert viol > 1e-6
    rng = np.random.default_rng(7)
    for ch in (unitary_channel(random_unitary(2, rng)), unitary_channel(random_unitary(3, rng)),
               depolarizing_channel(2, 0.4), depolarizing_channel(3, 1.0)):
        viol, _ = schwarz_violation(ch.adjoint(), samples=500)
        assert viol <= 1e-10


@pytest.mark.criterion(8, "(1/n) T_1/2 moves toward the Chernoff distance")
def test_chernoff_trend():
    pairs = [(np.diag([0.8, 0.2]), np.diag([0.3, 0.7])),
             (np.diag([0.6, 0.4]), np.diag([0.1, 0.9]))]
    for rho, sigma in pairs:
        rows = exponent_trend(rho, sigma, p=0.5, n_max=10, method="classical")
        assert abs(rows[9][2]) < abs(rows[0][2])


def _holder_fixture(rng, k):
    d = int(rng.integers(2, 5))
    if k % 2 == 0:
        B = random_psd(d, rng, rank=int(rng.integers(1, d + 1)))
        return B * rng.uniform(0.2, 3.0), B, True
    # generic A inside supp B; rank B >= 2, since on a line everything is proportional
    B = random_psd(d, rng, rank=int(rng.integers(2, d + 1)))
    P = as_psd(B).support
    return P @ random_psd(d, rng) @ P, B, False


@pytest.mark.criterion(9, "Hoelder, inverse Hoelder and pinching chain")
def test_appendix_suite():
    rng = np.random.default_rng(909)
    for k in range(50):
        A, B, prop = _holder_fixture(rng, k)
        for a in (0.3, 0.5, 1.5):
            c = holder_equality_check(A, B, a, tol=1e-8)
            assert c.holds
            assert c.equality == prop and c.proportional == prop

    for k in range(50):
        d = int(rng.integers(2, 4))
        p = float(rng.uniform(0.2, 0.8))
        q = p / (p - 1)
        X = random_psd(d, rng)
        if k % 2 == 0:
            # |A|^p = X = |B*|^q gives equality; a bounded spectrum keeps X^(1/q) well conditioned
            V = random_unitary(d, rng)
            w = rng.uniform(0.5, 2.0, d)
            A = random_unitary(d, rng) @ (V * w ** (1 / p)) @ V.conj().T
            B = (V * w ** (1 / q)) @ V.conj().T @ random_unitary(d, rng)
            c = inverse_holder_check(A, B, p, tol=1e-8)
            assert c.holds and c.equality and c.proportional
        else:
            A = random_psd(d, rng) @ random_unitary(d, rng)
            c = inverse_holder_check(A, X, p, tol=1e-8)
            assert c.holds and not c.equality and not c.proportional

    for k in range(50):
        d = int(rng.integers(2, 4))
        A, B = random_density(d, rng), random_density(d, rng)
        rep = pinching_chain_check(A, B, tol=1e-8)
        assert rep.first_holds and rep.second_holds
        assert not rep.first_tight
        assert rep.consistent


@pytest.mark.criterion(10, "continuity in the second argument")
def test_continuity_second_argument():
    A = np.diag([0.5, 0.5]).astype(complex)
    B = np.diag([1.0, 0.0]).astype(complex)
    f = build_function("phi_t", t=1.0)
    direct = f_divergence(A, B, f)
    eps = 10.0 ** -np.arange(2, 8)
    S = np.array([f_divergence(A, B + e * np.eye(2), f) for e in eps])
    S_half = np.array([f_divergence(A, B + 0.5 * e * np.eye(2), f) for e in eps])
    steps = np.abs(S - S_half)
    assert np.all(np.diff(steps) < 0)
    assert abs(S[-1] - direct) < 1e-6
