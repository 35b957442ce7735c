"""Binary discrimination quantities built on psi(alpha) = log Tr A^alpha B^(1-alpha).

On the joint spectral data, Tr A^alpha B^(1-alpha) = sum_{a,b>0} W_ab a^alpha b^(1-alpha),
a finite sum of exponentials in alpha. psi is therefore convex and analytic,
and its derivative is available in closed form; Chernoff and Hoeffding
optimizations reduce to monotone root finding.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize

from . import config
from .errors import InvalidInputError
from .fdiv import overlaps, renyi
from .matcore import as_psd, tensor_power, trace_norm
from .xreal import INF


class PsiCurve:
    """alpha -> psi(alpha) for a fixed pair, with exact derivatives."""

    def __init__(self, A, B):
        a, b, W = overlaps(A, B)
        pos = (a[:, None] > 0) & (b[None, :] > 0) & (W > 0)
        ii, jj = np.nonzero(pos)
        self.w = W[ii, jj]
        self.la = np.log(a[ii])
        self.lb = np.log(b[jj])
        self.empty = len(self.w) == 0

    def trace(self, alpha):
        """Tr A^alpha B^(1-alpha) with powers on the supports."""
        if self.empty:
            return 0.0
        return float(np.sum(self.w * np.exp(alpha * self.la + (1 - alpha) * self.lb)))

    def __call__(self, alpha):
        if self.empty:
            return -INF
        # log-sum-exp for stability at large |alpha|
        e = alpha * self.la + (1 - alpha) * self.lb + np.log(self.w)
        m = e.max()
        return float(m + np.log(np.sum(np.exp(e - m))))

    def derivative(self, alpha, order=1):
        """psi'(alpha) or psi''(alpha)."""
        if self.empty:
            return 0.0
        e = alpha * self.la + (1 - alpha) * self.lb + np.log(self.w)
        p = np.exp(e - e.max())
        p /= p.sum()
        d = self.la - self.lb
        m1 = float(np.sum(p * d))
        if order == 1:
            return m1
        return float(np.sum(p * d * d) - m1 * m1)

    @property
    def is_constant(self):
        """psi constant in alpha: every contributing ratio a/b is the same."""
        if self.empty:
            return True
        d = self.la - self.lb
        return float(d.max() - d.min()) <= config.RATIO_TOL


def psi(A, B, alpha):
    return PsiCurve(A, B)(alpha)


@dataclass(frozen=True)
class ChernoffResult:
    value: float
    alpha_star: float
    location: str   # "interior" | "endpoint" | "constant"

    def __float__(self):
        return self.value


def chernoff_distance(A, B, tol=1e-12):
    """-min_{0<=alpha<=1} psi(alpha) with its minimizer.

    Since psi is convex, the minimum sits at 0 if psi'(0) >= 0, at 1 if
    psi'(1) <= 0, and otherwise at the root of psi'. Ties go to the endpoint.
    """
    c = PsiCurve(A, B)
    if c.empty:
        return ChernoffResult(INF, 0.0, "endpoint")
    if c.is_constant:
        return ChernoffResult(-c(0.0), 0.0, "constant")
    d0, d1 = c.derivative(0.0), c.derivative(1.0)
    if d0 >= -tol:
        return ChernoffResult(-c(0.0), 0.0, "endpoint")
    if d1 <= tol:
        return ChernoffResult(-c(1.0), 1.0, "endpoint")
    a = optimize.brentq(c.derivative, 0.0, 1.0, xtol=1e-14, rtol=1e-15, maxiter=200)
    return ChernoffResult(-c(a), float(a), "interior")


@dataclass(frozen=True)
class HoeffdingResult:
    value: float
    alpha_star: float
    regime: str   # "zero" (alpha*=0), "interior", "boundary" (alpha*->1), "infinite"

    def __float__(self):
        return self.value


def hoeffding_distance(A, B, r):
    """H_r = sup_{0<=alpha<1} (-alpha r - psi(alpha)) / (1 - alpha).

    With s = alpha/(1-alpha) the objective -s r - (1+s) psi(s/(1+s)) is
    concave in s, and its stationarity condition in alpha reads
    psi(alpha) + (1-alpha) psi'(alpha) = -r, whose left side increases from
    psi(0)+psi'(0) to psi(1).
    """
    r = float(r)
    c = PsiCurve(A, B)
    if c.empty:
        return HoeffdingResult(INF, 1.0, "infinite")
    p0, p1 = c(0.0), c(1.0)
    lhs = lambda a: c(a) + (1 - a) * c.derivative(a)
    lo = p0 + c.derivative(0.0)
    if -r > p1 + 1e-14 * max(1.0, abs(p1)):
        return HoeffdingResult(INF, 1.0, "infinite")
    if -r <= lo:
        return HoeffdingResult(-p0, 0.0, "zero")
    if -r >= p1 - 1e-14 * max(1.0, abs(p1)):
        # supremum approached as alpha -> 1
        return HoeffdingResult(c.derivative(1.0) - p1, 1.0, "boundary")
    a = optimize.brentq(lambda x: lhs(x) + r, 0.0, 1.0, xtol=1e-14, rtol=1e-15, maxiter=200)
    return HoeffdingResult((-a * r - c(a)) / (1 - a), float(a), "interior")


def renyi_zero(A, B):
    return renyi(A, B, 0.0)


def _check_density(rho, name):
    rho = as_psd(rho)
    if abs(rho.trace - 1) > 1e-8:
        raise InvalidInputError(f"{name} is not a density (trace {rho.trace:.6g})")
    return rho


def error_probability(rho, sigma, p):
    """(1 - ||p rho - (1-p) sigma||_1) / 2, the optimal Bayes error."""
    X = p * as_psd(rho).matrix - (1 - p) * as_psd(sigma).matrix
    return max(0.0, 0.5 * (1.0 - trace_norm(X)))


def _tp_from_error(P, p):
    if P <= 1e-15:
        return INF
    # (1/(2p)) (1 - ||.||_1) = P/p for p <= 1/2, and P/(1-p) otherwise
    return -math.log(P / p) if p <= 0.5 else -math.log(P / (1 - p))


def bayes_measure_tp(rho, sigma, p):
    """T_p(rho, sigma) for priors (p, 1-p), +inf when the error probability is 0."""
    if not 0 < p < 1:
        raise InvalidInputError("p must lie in (0, 1)")
    rho = _check_density(rho, "rho")
    sigma = _check_density(sigma, "sigma")
    return _tp_from_error(error_probability(rho, sigma, p), p)


def _joint_diagonal(rho, sigma, tol=1e-12):
    """Common eigenbasis weights of commuting rho, sigma, else None."""
    R, S = rho.matrix, sigma.matrix
    if np.abs(R @ S - S @ R).max() > tol:
        return None
    rng = np.random.default_rng(12345)
    _, V = np.linalg.eigh(R + (1 + rng.random()) * S)
    return (np.real(np.einsum("ij,jk,ki->i", V.conj().T, R, V)),
            np.real(np.einsum("ij,jk,ki->i", V.conj().T, S, V)))


def exponent_trend(rho, sigma, p=0.5, n_max=5, method="auto", cap=config.DIM_CAP):
    """Rows (n, (1/n) T_p(rho^n, sigma^n), gap to the Chernoff distance).

    The classical path is used for commuting pairs: there the error
    probability is sum_x min(p P_n(x), (1-p) Q_n(x)) on product distributions.
    """
    rho = _check_density(rho, "rho")
    sigma = _check_density(sigma, "sigma")
    C = chernoff_distance(rho, sigma).value
    if rho.dim ** n_max > cap:
        from .errors import ResourceError
        raise ResourceError(f"dimension {rho.dim}**{n_max} exceeds cap {cap}")
    diag = _joint_diagonal(rho, sigma) if method in ("auto", "classical") else None
    if method == "classical" and diag is None:
        raise InvalidInputError("classical path needs commuting inputs")
    rows = []
    for n in range(1, n_max + 1):
        if diag is not None:
            pn, qn = diag[0], diag[1]
            for _ in range(n - 1):
                pn = np.kron(pn, diag[0])
                qn = np.kron(qn, diag[1])
            P = float(np.sum(np.minimum(p * np.clip(pn, 0, None), (1 - p) * np.clip(qn, 0, None))))
        else:
            P = error_probability(tensor_power(rho.matrix, n, cap), tensor_power(sigma.matrix, n, cap), p)
        T = _tp_from_error(P, p)
        rate = T / n
        gap = rate - C if (math.isfinite(rate) and math.isfinite(C)) else (0.0 if rate == C else INF)
        rows.append((n, rate, gap))
    return rows


def legendre_renyi(A, B, alpha, n_grid=None):
    """Reconstruct -S_alpha(A||B) = sup_r { -r alpha/(1-alpha) - H_r } for 0 < alpha < 1.

    The supremum is taken over r in [-psi(1), -psi(0) - psi'(0)], where H_r
    is finite and varies.
    """
    c = PsiCurve(A, B)
    lo = -c(1.0)
    hi = -c(0.0) - c.derivative(0.0)
    k = alpha / (1 - alpha)
    obj = lambda r: -(-r * k - hoeffding_distance(A, B, r).value)
    if hi <= lo:
        return -obj(lo)
    res = optimize.minimize_scalar(obj, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12, "maxiter": 500})
    return max(-res.fun, -obj(lo), -obj(hi))
