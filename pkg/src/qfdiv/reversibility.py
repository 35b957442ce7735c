"""Reversibility diagnostics for a channel on a pair or a set of states.

The central object is the Petz dual Phi*_B. A channel is reversible on
{A, B} exactly when Phi*_B(Phi(A)) = A; the other conditions evaluated here
(preservation of f-divergences, of the primitive divergences S_{phi_t}, the
cocycle identities) are equivalent to it under the usual hypotheses, and
are reported as residuals so that a failure of any of them is visible.
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from . import config
from .channels import complete_to_stochastic, petz_maps, pinching_channel
from .discrimination import PsiCurve, chernoff_distance, hoeffding_distance
from .errors import InvalidInputError, SupportError, TracePreservationError
from .fdiv import build_function, f_divergence
from .matcore import as_matrix, as_psd, hs_norm, schatten_p, support_contained, trace_norm
from .xreal import INF

VERDICTS = ("reversible", "not reversible", "inconclusive")


def _gap(x, y):
    """x - y for extended reals; equal infinities give 0."""
    if math.isinf(x) or math.isinf(y):
        return 0.0 if x == y else (INF if x > y else -INF)
    return x - y


def ratio_spectrum(A, B, rtol=config.RATIO_TOL):
    """Distinct values of a * b^{-1} (with 0^{-1} = 0): the spectrum of L_A R_{B^{-1}}."""
    a = as_psd(A).spectral.values
    b = as_psd(B).spectral.values
    binv = np.where(b > 0, 1.0 / np.where(b > 0, b, 1.0), 0.0)
    return np.unique((a[:, None] * binv[None, :]).ravel())


def distinct(values, rtol=config.RATIO_TOL):
    vals = np.sort(np.asarray(values, dtype=float))
    out = []
    for v in vals:
        if not out or abs(v - out[-1]) > rtol * max(abs(v), abs(out[-1]), 1e-300):
            out.append(v)
    return np.array(out)


def chebyshev_nodes(lo, hi, n):
    k = np.arange(1, n + 1)
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos((2 * k - 1) * np.pi / (2 * n)))


def default_primitive_set(ratios, n):
    ratios = np.asarray(ratios, dtype=float)
    pos = ratios[ratios > 0]
    if len(pos) == 0:
        pos = np.array([1.0])
    return chebyshev_nodes(pos.min() / 2, 2 * pos.max(), max(int(n), 1))


def _check_pair(phi, A, B, tol):
    A = as_psd(A)
    B = as_psd(B)
    if not support_contained(A, B):
        raise SupportError("support hypothesis violated: supp A is not inside supp B")
    PB = phi.apply(B.matrix)
    trPB = float(np.real(np.trace(PB)))
    if abs(trPB - B.trace) > tol * max(1.0, B.trace):
        raise TracePreservationError(f"Tr Phi(B) = {trPB:.12g} differs from Tr B = {B.trace:.12g}")
    return A, B


def cocycle_term(phi, A, B, z, PA=None, PB=None):
    """B^0 Phi*(Phi(B)^{-z} Phi(A)^z) - B^{-z} A^z."""
    A = as_psd(A)
    B = as_psd(B)
    if PA is None:
        PA = as_psd(phi.apply(A.matrix))
    if PB is None:
        PB = as_psd(phi.apply(B.matrix))
    left = B.support @ phi.adjoint().apply(PB.power(-z) @ PA.power(z))
    return left - B.power(-z) @ A.power(z)


def cocycle_residual(phi, A, B, t):
    """||B^0 Phi*(Phi(B)^{-it} Phi(A)^{it}) - B^{-it} A^{it}||_HS."""
    if not support_contained(A, B):
        raise SupportError("support hypothesis violated: supp A is not inside supp B")
    return hs_norm(cocycle_term(phi, A, B, 1j * float(t)))


def log_cocycle_residual(phi, A, B):
    A = as_psd(A)
    B = as_psd(B)
    PA = as_psd(phi.apply(A.matrix))
    PB = as_psd(phi.apply(B.matrix))
    left = B.support @ phi.adjoint().apply(PA.log_star() - PB.log_star() @ PA.support)
    return hs_norm(left - (A.log_star() - B.log_star() @ A.support))


def recovery_residual(phi, A, B):
    A = as_psd(A)
    _, back = petz_maps(phi, B)
    return hs_norm(back.apply(phi.apply(A.matrix)) - A.matrix)


@dataclass
class EqualityReport:
    fdiv_name: str
    fdiv_gap: float
    primitive_gaps: dict
    cocycle_residual_curve: dict
    alpha: float
    alpha_cocycle_residual: float
    log_cocycle_residual: float
    recovery_residual: float
    spectrum_size: int
    support_condition_met: bool
    completely_positive: bool
    tol: float
    verdict: str
    caveats: list = field(default_factory=list)

    @property
    def max_primitive_gap(self):
        return max((abs(g) for g in self.primitive_gaps.values()), default=0.0)

    @property
    def max_cocycle_residual(self):
        return max(self.cocycle_residual_curve.values(), default=0.0)

    def residuals(self):
        return {
            "fdiv_gap": abs(self.fdiv_gap),
            "primitive_gap": self.max_primitive_gap,
            "alpha_cocycle": self.alpha_cocycle_residual,
            "it_cocycle": self.max_cocycle_residual,
            "log_cocycle": self.log_cocycle_residual,
            "recovery": self.recovery_residual,
        }

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "tol": self.tol,
            "fdiv": {"function": self.fdiv_name, "gap": self.fdiv_gap},
            "primitive_gaps": [[t, g] for t, g in sorted(self.primitive_gaps.items())],
            "cocycle_residual_curve": [[t, r] for t, r in sorted(self.cocycle_residual_curve.items())],
            "alpha": self.alpha,
            "alpha_cocycle_residual": self.alpha_cocycle_residual,
            "log_cocycle_residual": self.log_cocycle_residual,
            "recovery_residual": self.recovery_residual,
            "spectrum_size": self.spectrum_size,
            "support_condition_met": self.support_condition_met,
            "completely_positive": self.completely_positive,
            "caveats": list(self.caveats),
        }


def equality_report(phi, A, B, f=None, T=None, alpha=0.5, tol=config.VERDICT_TOL, t_grid=None):
    """Evaluate the equality conditions for Phi on the pair (A, B).

    Parameters
    ----------
    phi : Channel
    A, B : PSD matrices with supp A <= supp B and Tr Phi(B) = Tr B
    f : DivergenceFunction, default x log x
    T : primitive parameters t; by default |spect(Delta) u spect(Delta~)|
        Chebyshev points spanning the observed ratio range
    alpha : parameter in (0, 2), alpha != 1, for the real-power cocycle
    """
    A, B = _check_pair(phi, A, B, tol)
    if not (0 < alpha < 2) or alpha == 1:
        raise InvalidInputError("alpha must lie in (0, 2) and differ from 1")
    f = f or build_function("x_log_x")
    PA = as_psd(phi.apply(A.matrix))
    PB = as_psd(phi.apply(B.matrix))
    r1 = ratio_spectrum(A, B)
    r2 = ratio_spectrum(PA, PB)
    spect = distinct(np.concatenate([r1, r2]))
    if T is None:
        T = default_primitive_set(spect, len(spect))
    T = [float(t) for t in T]
    fgap = _gap(f_divergence(A, B, f), f_divergence(PA, PB, f))
    pgaps = {}
    for t in T:
        g = build_function("phi_t", t=t)
        pgaps[t] = _gap(f_divergence(A, B, g), f_divergence(PA, PB, g))
    grid = np.linspace(-2, 2, config.COCYCLE_GRID) if t_grid is None else t_grid
    curve = {float(t): hs_norm(cocycle_term(phi, A, B, 1j * float(t), PA, PB)) for t in grid}
    acoc = hs_norm(cocycle_term(phi, A, B, float(alpha), PA, PB))
    lcoc = log_cocycle_residual(phi, A, B)
    rec = recovery_residual(phi, A, B)
    cp = phi.is_cp()
    caveats = []
    if len(T) < len(spect):
        caveats.append("fewer primitive points than |spect(Delta) u spect(Delta~)|")
    if rec < tol:
        if cp:
            verdict = "reversible"
        else:
            verdict = "inconclusive"
            caveats.append("2-positivity not witnessed (Choi matrix not PSD)")
    else:
        verdict = "not reversible" if cp else "inconclusive"
        if not cp:
            caveats.append("2-positivity not witnessed (Choi matrix not PSD)")
    return EqualityReport(f.name, fgap, pgaps, curve, float(alpha), acoc, lcoc, rec, len(spect),
                          len(T) >= len(spect), cp, tol, verdict, caveats)


def recover(phi, B, rho_fill=None):
    """The trace-preserving completion Psi of Phi*_B."""
    if not phi.is_cp():
        warnings.warn("2-positivity not witnessed; Psi may fail to be a Schwarz map", RuntimeWarning,
                      stacklevel=2)
    B = as_psd(B)
    _, back = petz_maps(phi, B)
    support = as_psd(phi.apply(B.matrix)).support
    return complete_to_stochastic(back, rho_fill, support)


# --- fixed points -----------------------------------------------------------

@dataclass
class AlgebraStructure:
    fixed_point_basis: list
    projector: np.ndarray          # superoperator of gamma_infinity
    faithful_invariant: bool
    is_algebra: bool
    star_residual: float
    product_residual: float
    idempotence_residual: float
    invariance_residual: float
    cesaro_residual: float
    center_projections: list
    blocks: list                   # (rank of central projection, n_k, m_k)
    status: str                    # "ok" | "inconclusive"

    @property
    def dimension(self):
        return len(self.fixed_point_basis)

    def conditional_expectation(self, X):
        X = as_matrix(X)
        d = X.shape[0]
        return (self.projector @ X.ravel()).reshape(d, d)


def _null_space(M, tol):
    U, s, Vh = np.linalg.svd(M)
    rank = int((s > tol).sum())
    return Vh[rank:].conj().T


def fixed_point_structure(gamma, iterations=2000, tol=1e-9, seed=0):
    """Fixed-point space of gamma, its mean-ergodic projection and block structure."""
    if gamma.d_in != gamma.d_out:
        raise InvalidInputError("gamma must map an algebra into itself")
    d = gamma.d_in
    S = gamma.superop
    I = np.eye(d * d)
    R = _null_space(S - I, tol * max(1.0, np.abs(S).max()) * d)
    L = _null_space((S - I).conj().T, tol * max(1.0, np.abs(S).max()) * d)
    status = "ok"
    if R.shape[1] != L.shape[1] or R.shape[1] == 0:
        raise InvalidInputError("eigenvalue 1 is not semisimple; no mean-ergodic projection")
    P = R @ np.linalg.solve(L.conj().T @ R, L.conj().T)
    # validate against Cesaro averages
    acc = np.zeros_like(S)
    Sk = np.eye(d * d, dtype=complex)
    for _ in range(iterations):
        acc += Sk
        Sk = Sk @ S
    cesaro = float(np.abs(acc / iterations - P).max())
    idem = float(np.abs(P @ P - P).max())
    inv = float(np.abs(S @ P - P).max())
    omega = (P.conj().T @ np.eye(d).ravel()).reshape(d, d)
    w = np.linalg.eigvalsh(0.5 * (omega + omega.conj().T))
    faithful = bool(w.min() > 1e-8 * max(1.0, w.max()))
    basis = [R[:, k].reshape(d, d) for k in range(R.shape[1])]
    Q = R @ R.conj().T
    out = lambda X: float(np.linalg.norm(X.ravel() - Q @ X.ravel()))
    star = max(out(X.conj().T) for X in basis)
    prod = max(out(X @ Y) for X in basis for Y in basis)
    is_alg = star <= 1e-8 and prod <= 1e-8
    if not faithful or not is_alg:
        status = "inconclusive"
    center, blocks = [], []
    if is_alg:
        m = len(basis)
        M = np.stack([np.concatenate([(X @ Y - Y @ X).ravel() for Y in basis]) for X in basis], axis=1)
        N = _null_space(M, 1e-8 * max(1.0, np.abs(M).max())) if M.size else np.eye(m)
        rng = np.random.default_rng(seed)
        Z = np.zeros((d, d), dtype=complex)
        for col in N.T:
            C = sum(c * X for c, X in zip(col, basis))
            Z += rng.standard_normal() * (C + C.conj().T)
        ev, V = np.linalg.eigh(0.5 * (Z + Z.conj().T))
        groups = []
        for i, e in enumerate(ev):
            if groups and abs(e - ev[groups[-1][-1]]) <= 1e-6 * max(1.0, np.abs(ev).max()):
                groups[-1].append(i)
            else:
                groups.append([i])
        for g in groups:
            Pk = V[:, g] @ V[:, g].conj().T
            center.append(Pk)
            comp = np.stack([(Pk @ X @ Pk).ravel() for X in basis], axis=1)
            dim = int((np.linalg.svd(comp, compute_uv=False) > 1e-8).sum())
            n = int(round(math.sqrt(dim)))
            rank = len(g)
            blocks.append((rank, n, rank // n if n else 0))
    return AlgebraStructure(basis, P, faithful, is_alg, star, prod, idem, inv, cesaro,
                            center, blocks, status)


# --- error correction -------------------------------------------------------

@dataclass
class ErrorCorrectionReport:
    fdiv_gaps: dict
    primitive_gaps: dict
    hoeffding_gaps: dict
    chernoff_gaps: dict
    recovery_residuals: list
    mixture_residuals: list
    n_primitive: int
    tol: float
    verdict: str     # "correctable" | "not correctable"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "tol": self.tol,
            "fdiv_gaps": [[i, j, g] for (i, j), g in sorted(self.fdiv_gaps.items())],
            "primitive_gaps": [[i, t, g] for (i, t), g in sorted(self.primitive_gaps.items())],
            "hoeffding_gaps": [[i, r, g] for (i, r), g in sorted(self.hoeffding_gaps.items())],
            "chernoff_gaps": [[i, g] for i, g in sorted(self.chernoff_gaps.items())],
            "recovery_residuals": self.recovery_residuals,
            "mixture_residuals": self.mixture_residuals,
            "n_primitive": self.n_primitive,
        }


def error_correction_check(phi, C, sigma, f=None, T=None, r_grid=(0.01, 0.05, 0.1, 0.2),
                           tol=config.VERDICT_TOL, n_mixtures=10, seed=0):
    """Check whether the set C is correctable for Phi relative to the reference state sigma."""
    T_in = phi.adjoint().apply(np.eye(phi.d_out))
    if np.abs(T_in - np.eye(phi.d_in)).max() > 1e-9:
        raise TracePreservationError("Phi is not trace-preserving")
    sigma = as_psd(sigma)
    states = [as_psd(r) for r in C]
    for i, r in enumerate(states):
        if not support_contained(r, sigma):
            raise SupportError(f"support hypothesis violated: state {i} is not inside supp sigma")
    f = f or build_function("x_log_x")
    Psig = as_psd(phi.apply(sigma.matrix))
    Pst = [as_psd(phi.apply(r.matrix)) for r in states]
    family = states + [sigma]
    Pfam = Pst + [Psig]
    fg = {}
    for i, X in enumerate(family):
        for j, Y in enumerate(family):
            if i == j:
                continue
            s1 = f_divergence(X, Y, f)
            if math.isfinite(s1):
                fg[(i, j)] = s1 - f_divergence(Pfam[i], Pfam[j], f)
    n_t = phi.d_in ** 2 + phi.d_out ** 2
    ratios = np.concatenate([ratio_spectrum(X, sigma) for X in states] +
                            [ratio_spectrum(X, Psig) for X in Pst])
    if T is None:
        T = default_primitive_set(ratios, n_t)
    pg = {}
    for i, (X, PX) in enumerate(zip(states, Pst)):
        for t in T:
            g = build_function("phi_t", t=float(t))
            pg[(i, float(t))] = f_divergence(X, sigma, g) - f_divergence(PX, Psig, g)
    hg, cg = {}, {}
    for i, (X, PX) in enumerate(zip(states, Pst)):
        for r in r_grid:
            hg[(i, float(r))] = _gap(hoeffding_distance(X, sigma, r).value,
                                     hoeffding_distance(PX, Psig, r).value)
        cg[i] = _gap(chernoff_distance(X, sigma).value, chernoff_distance(PX, Psig).value)
    _, back = petz_maps(phi, sigma)
    rec = [hs_norm(back.apply(PX.matrix) - X.matrix) for X, PX in zip(states, Pst)]
    rng = np.random.default_rng(seed)
    mix = []
    if len(states) > 1:
        for _ in range(n_mixtures):
            w = rng.dirichlet(np.ones(len(states)))
            M = sum(wi * X.matrix for wi, X in zip(w, states))
            mix.append(hs_norm(back.apply(phi.apply(M)) - M))
    ok = all(r < tol for r in rec + mix)
    return ErrorCorrectionReport(fg, pg, hg, cg, rec, mix, len(T), tol,
                                 "correctable" if ok else "not correctable")


# --- Chernoff / Hoeffding equality ------------------------------------------

@dataclass
class RecoveryReport:
    mode: str
    before: float
    after: float
    gap: float
    hypotheses_met: bool
    reason: str
    recovery_residual: float
    verdict: str


def chernoff_hoeffding_recovery(phi, A, B, mode="chernoff", r=None, tol=config.VERDICT_TOL):
    """Decide recovery from preservation of the Chernoff or Hoeffding distance."""
    A, B = _check_pair(phi, A, B, tol)
    PA = as_psd(phi.apply(A.matrix))
    PB = as_psd(phi.apply(B.matrix))
    c = PsiCurve(PA, PB)
    if mode == "chernoff":
        before = chernoff_distance(A, B)
        after = chernoff_distance(PA, PB)
        s0_ab, s0_ba = -c(0.0), -c(1.0)
        interior = (after.location == "interior" and abs(after.value - s0_ab) > tol
                    and abs(after.value - s0_ba) > tol)
        same_support = np.abs(A.support - B.support).max() <= 1e-8 and abs(A.trace - B.trace) <= tol
        hyp = interior or same_support
        reason = "" if hyp else "Chernoff minimizer is not interior and supports or traces differ"
        b, a = before.value, after.value
    elif mode == "hoeffding":
        if r is None:
            raise InvalidInputError("hoeffding mode needs r")
        lo, hi = -c(1.0), -c(0.0) - c.derivative(0.0)
        hyp = lo < r < hi
        reason = "" if hyp else f"r outside ({lo + 0.0:.6g}, {hi + 0.0:.6g})"
        b = hoeffding_distance(A, B, r).value
        a = hoeffding_distance(PA, PB, r).value
    else:
        raise InvalidInputError(f"unknown mode {mode!r}")
    gap = _gap(b, a)
    rec = recovery_residual(phi, A, B)
    if not phi.is_cp():
        hyp = False
        reason = "2-positivity not witnessed"
    if abs(gap) >= tol:
        verdict = "not reversible"
    elif not hyp:
        verdict = "inconclusive"
    elif rec < tol:
        verdict = "reversible"
    else:
        verdict = "inconclusive"
        reason = "measure preserved but recovery residual above tolerance"
    return RecoveryReport(mode, b, a, gap, hyp, reason, rec, verdict)


# --- Appendix inequalities ----------------------------------------------------

@dataclass
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool
    equality: bool
    proportional: bool
    ratio: float


def holder_equality_check(A, B, alpha, tol=config.VERDICT_TOL):
    """Tr A^a B^(1-a) versus (Tr A)^a (Tr B)^(1-a).

    The inequality is <= for a in (0, 1) and >= for a > 1 (which needs
    supp A <= supp B); equality holds iff A is a multiple of B.
    """
    A = as_psd(A)
    B = as_psd(B)
    alpha = float(alpha)
    if alpha <= 0 or alpha == 1:
        raise InvalidInputError("alpha must be positive and differ from 1")
    if alpha > 1 and not support_contained(A, B):
        raise SupportError("support hypothesis violated: alpha > 1 needs supp A <= supp B")
    lhs = PsiCurve(A, B).trace(alpha)
    rhs = A.trace ** alpha * B.trace ** (1 - alpha)
    slack = tol * max(1.0, abs(rhs))
    holds = lhs <= rhs + slack if alpha < 1 else lhs >= rhs - slack
    ratio = A.trace / B.trace if B.trace > 0 else INF
    # the gap is second order in the deviation from proportionality
    prop = hs_norm(A.matrix / max(A.trace, 1e-300) - B.matrix / max(B.trace, 1e-300)) <= math.sqrt(tol)
    return InequalityCheck(lhs, rhs, bool(holds), abs(lhs - rhs) <= slack, bool(prop), ratio)


def _abs(X):
    X = as_matrix(X)
    return as_psd(X.conj().T @ X).power(0.5)


def inverse_holder_check(A, B, p, tol=config.VERDICT_TOL):
    """||AB||_1 >= ||A||_p ||B||_q for p in (0,1), 1/p + 1/q = 1 (so q < 0).

    Needs supp|A| <= supp|B*|; equality iff |A|^p is a multiple of |B*|^q.
    """
    if not 0 < p < 1:
        raise InvalidInputError("p must lie in (0, 1)")
    q = p / (p - 1)
    A = as_matrix(A)
    B = as_matrix(B)
    absA = as_psd(_abs(A))
    absBs = as_psd(_abs(B.conj().T))
    if not support_contained(absA, absBs):
        raise SupportError("support hypothesis violated: supp|A| is not inside supp|B*|")
    lhs = trace_norm(A @ B)
    rhs = schatten_p(A, p) * schatten_p(B, q)
    slack = tol * max(1.0, abs(rhs))
    X = absA.power(p)
    Y = absBs.power(q)
    nx, ny = np.linalg.norm(X), np.linalg.norm(Y)
    prop = nx > 0 and ny > 0 and hs_norm(X / nx - Y / ny) <= math.sqrt(tol)
    return InequalityCheck(lhs, rhs, lhs >= rhs - slack, abs(lhs - rhs) <= slack, bool(prop),
                           float(nx / ny) if ny > 0 else INF)


@dataclass
class PinchingChainReport:
    s_full: float
    s_pinched: float
    s_scalar: float
    first_holds: bool
    second_holds: bool
    first_tight: bool
    second_tight: bool
    commutator_residual: float
    proportionality_residual: float
    consistent: bool


def pinching_chain_check(A, B, f=None, strictly_convex=True, tol=config.VERDICT_TOL):
    """S_f(A||B) >= S_f(E_B(A)||B) >= (Tr B) f(Tr A / Tr B).

    For strictly convex f, tightness of the first step means [A, B] = 0 and
    tightness of the second means E_B(A) is a multiple of B; ``consistent``
    records whether the observed tightness agrees with those residuals.
    """
    A = as_psd(A)
    B = as_psd(B)
    f = f or build_function("x_log_x")
    E = pinching_channel(B)
    EA = as_psd(E.apply(A.matrix))
    s1 = f_divergence(A, B, f)
    s2 = f_divergence(EA, B, f)
    s3 = B.trace * float(f(np.array([A.trace / B.trace]))[0])
    g1, g2 = _gap(s1, s2), _gap(s2, s3)
    comm = hs_norm(A.matrix @ B.matrix - B.matrix @ A.matrix)
    propres = hs_norm(EA.matrix - (A.trace / B.trace) * B.matrix)
    t1, t2 = abs(g1) <= tol, abs(g2) <= tol
    consistent = True
    if strictly_convex:
        thr = math.sqrt(tol) * max(1.0, hs_norm(A.matrix) * hs_norm(B.matrix))
        consistent = (t1 == (comm <= thr)) and (t2 == (propres <= math.sqrt(tol) * max(1.0, A.trace)))
    return PinchingChainReport(s1, s2, s3, g1 >= -tol, g2 >= -tol, t1, t2, comm, propres, consistent)


@dataclass
class JointConvexityReport:
    lhs: float
    rhs: float
    gap: float
    residuals: list
    equality: bool
    condition: bool


def joint_convexity_check(ps, As, Bs, f=None, tol=config.VERDICT_TOL):
    """Joint convexity S_f(sum p A || sum p B) <= sum p S_f(A_i||B_i) and its equality case.

    Equality holds iff p_i A_i = p_i B_i^{1/2} Bbar^{-1/2} Abar Bbar^{-1/2} B_i^{1/2}
    for every i, with Abar = sum p A, Bbar = sum p B.
    """
    f = f or build_function("x_log_x")
    As = [as_psd(A) for A in As]
    Bs = [as_psd(B) for B in Bs]
    Abar = as_psd(sum(p * A.matrix for p, A in zip(ps, As)))
    Bbar = as_psd(sum(p * B.matrix for p, B in zip(ps, Bs)))
    lhs = f_divergence(Abar, Bbar, f)
    rhs = float(sum(p * f_divergence(A, B, f) for p, A, B in zip(ps, As, Bs)))
    G = Bbar.power(-0.5) @ Abar.matrix @ Bbar.power(-0.5)
    res = [hs_norm(p * A.matrix - p * B.power(0.5) @ G @ B.power(0.5)) for p, A, B in zip(ps, As, Bs)]
    gap = _gap(rhs, lhs)
    return JointConvexityReport(lhs, rhs, gap, res, abs(gap) <= tol, max(res) <= math.sqrt(tol))
