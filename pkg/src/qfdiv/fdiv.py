"""Quantum f-divergences through the spectral double sum.

For A = sum a P_a and B = sum b Q_b,

    S_f(A||B) = sum_a [ sum_{b>0} b f(a/b) Tr P_a Q_b + a omega(f) Tr P_a Q_0 ]

where omega(f) = lim f(x)/x. f is only ever evaluated at the finitely many
ratios a/b, so no superoperator functional calculus is needed.
"""
from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np

from . import config
from .errors import EvaluationError, InvalidInputError, ShapeError
from .matcore import as_psd
from .xreal import INF, xlog, xmul, xsum


@dataclass(frozen=True)
class DivergenceFunction:
    """Scalar function f on [0, inf) together with its boundary data.

    Attributes
    ----------
    name : str
    evaluator : callable
        Vectorized f on (0, inf).
    f0 : float
        Value at 0 (may differ from the right limit, e.g. for 1_{0}).
    f0_plus : float
        Right limit at 0.
    omega : float
        lim f(x)/x as x -> inf, possibly +-inf.
    operator_convex : bool
        Declared flag; checked only numerically in the tests.
    """
    name: str
    evaluator: Callable
    f0: float
    f0_plus: float
    omega: float
    operator_convex: bool = False
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    representation: Optional[object] = None

    def __post_init__(self):
        if self.operator_convex and self.f0 < self.f0_plus - 1e-12:
            raise InvalidInputError("operator convex f needs f(0) >= f(0+)")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, float(self.f0))
        pos = x > 0
        if np.any(pos):
            out[pos] = self.evaluator(x[pos])
        return out

    def omega_probe(self, x=1e8):
        """Numerical f(x)/x at large x, for consistency checks."""
        return float(self.evaluator(np.array([x]))[0] / x)

    def to_dict(self):
        return {"kind": self.kind, "params": dict(self.params)}


def _xlogx(x):
    return x * np.log(x)


def build_function(kind, params=None, **kw):
    """Construct a DivergenceFunction from a kind name and parameters.

    Kinds: x_log_x, power(alpha), neg_power(alpha), phi_t(t), indicator_zero,
    affine(c0, c1), abs_minus_one, custom(evaluator, f0, omega).
    """
    p = dict(params or {})
    p.update(kw)
    if kind == "x_log_x":
        return DivergenceFunction("x log x", _xlogx, 0.0, 0.0, INF, True, kind, {})
    if kind == "power":
        a = float(p["alpha"])
        if a < 0:
            raise InvalidInputError("power needs alpha >= 0")
        if a == 0:
            # f_0 = 1 on (0, inf) and 0 at 0
            return DivergenceFunction("f_0", np.ones_like, 0.0, 1.0, 0.0, False, kind, {"alpha": 0.0})
        omega = INF if a > 1 else (1.0 if a == 1 else 0.0)
        return DivergenceFunction(f"x^{a:g}", lambda x, a=a: x ** a, 0.0, 0.0, omega,
                                  1.0 <= a <= 2.0, kind, {"alpha": a})
    if kind == "neg_power":
        a = float(p["alpha"])
        if not 0 < a < 1:
            raise InvalidInputError("neg_power needs 0 < alpha < 1")
        return DivergenceFunction(f"-x^{a:g}", lambda x, a=a: -(x ** a), 0.0, 0.0, 0.0,
                                  True, kind, {"alpha": a})
    if kind == "phi_t":
        t = float(p["t"])
        if t <= 0:
            raise InvalidInputError("phi_t needs t > 0")
        return DivergenceFunction(f"phi_{t:g}", lambda x, t=t: -x / (x + t), 0.0, 0.0, 0.0,
                                  True, kind, {"t": t})
    if kind == "indicator_zero":
        return DivergenceFunction("1_{0}", np.zeros_like, 1.0, 0.0, 0.0, True, kind, {})
    if kind == "affine":
        c0 = float(p.get("c0", 0.0))
        c1 = float(p.get("c1", 0.0))
        return DivergenceFunction(f"{c0:g}+{c1:g}x", lambda x, c0=c0, c1=c1: c0 + c1 * x,
                                  c0, c0, c1, True, kind, {"c0": c0, "c1": c1})
    if kind == "abs_minus_one":
        return DivergenceFunction("|x-1|", lambda x: np.abs(x - 1.0), 1.0, 1.0, 1.0, False, kind, {})
    if kind == "custom":
        ev = p["evaluator"]
        f0 = float(p["f0"])
        return DivergenceFunction(p.get("name", "custom"), ev, f0, float(p.get("f0_plus", f0)),
                                  float(p["omega"]), bool(p.get("operator_convex", False)), kind, {})
    raise InvalidInputError(f"unknown function kind {kind!r}")


def function_from_dict(d):
    return build_function(d["kind"], d.get("params", {}))


# ---------------------------------------------------------------------------

def overlaps(A, B):
    """Cluster eigenvalues of A and B and the matrix W[i, j] = Tr P_i Q_j."""
    A = as_psd(A)
    B = as_psd(B)
    if A.dim != B.dim:
        raise ShapeError("A and B act on different spaces")
    sa, sb = A.spectral, B.spectral
    M = np.abs(sa.vectors.conj().T @ sb.vectors) ** 2
    W = sa.indicator().T @ M @ sb.indicator()
    return sa.values, sb.values, W


def _omega_term(omega, mass, total, supp_tol=config.SUPP_TOL):
    """omega * mass, where mass = Tr A(I - B^0).

    With infinite omega a numerically negligible leak must not produce inf,
    so a relative threshold decides whether supp A <= supp B.
    """
    if math.isinf(omega) and mass <= supp_tol * max(total, 1e-300):
        return 0.0
    return xmul(omega, mass)


def _eval(f, x):
    vals = f(x)
    if np.any(np.isnan(vals)):
        raise EvaluationError(f"{f.name} returned NaN")
    return vals


def f_divergence(A, B, f):
    """S_f(A||B) as an extended real."""
    a, b, W = overlaps(A, B)
    pos = b > 0
    finite = 0.0
    if pos.any():
        bp = b[pos]
        R = a[:, None] / bp[None, :]
        F = _eval(f, R)
        Wp = W[:, pos]
        mask = Wp > 0
        finite = float(np.sum((bp[None, :] * F * Wp)[mask]))
    mass = float(np.sum(a[:, None] * W[:, ~pos]))
    total = float(np.sum(a[:, None] * W))
    return xsum([finite, _omega_term(f.omega, mass, total)])


def renyi(A, B, alpha):
    """Renyi divergence (1/(alpha-1)) log S_{f_alpha}(A||B), alpha >= 0, alpha != 1."""
    alpha = float(alpha)
    if alpha < 0 or alpha == 1:
        raise InvalidInputError("alpha must be >= 0 and != 1")
    Q = f_divergence(A, B, build_function("power", alpha=alpha))
    L = xlog(max(Q, 0.0))
    return L / (alpha - 1.0)


def relative_entropy(A, B):
    """Tr A (log* A - log* B), or +inf unless supp A <= supp B."""
    a, b, W = overlaps(A, B)
    pos_b = b > 0
    total = float(np.sum(a[:, None] * W))
    mass = float(np.sum(a[:, None] * W[:, ~pos_b]))
    if _omega_term(INF, mass, total) == INF:
        return INF
    la = np.where(a > 0, np.log(np.where(a > 0, a, 1.0)), 0.0)
    lb = np.where(pos_b, np.log(np.where(pos_b, b, 1.0)), 0.0)
    return float(np.sum(a * la * W.sum(axis=1)) - np.sum(a[:, None] * lb[None, :] * W))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalPair:
    """Two nonnegative weight vectors on a common finite index set."""
    support: tuple
    p: np.ndarray
    q: np.ndarray


def nsz_reduce(rho, sigma):
    """Classical pair p(a,b) = a Tr P_a Q_b, q(a,b) = b Tr P_a Q_b."""
    a, b, W = overlaps(rho, sigma)
    support = tuple((float(x), float(y)) for x in a for y in b)
    p = (a[:, None] * W).ravel()
    q = (b[None, :] * W).ravel()
    return ClassicalPair(support, p, q)


def classical_f_divergence(pair, f):
    """sum_{q>0} q f(p/q) + omega(f) sum_{q=0} p."""
    p = np.asarray(pair.p, dtype=float)
    q = np.asarray(pair.q, dtype=float)
    pos = q > 0
    finite = 0.0
    if pos.any():
        finite = float(np.sum(q[pos] * _eval(f, p[pos] / q[pos])))
    mass = float(p[~pos].sum())
    return xsum([finite, _omega_term(f.omega, mass, float(p.sum()))])


def fidelity(rho, sigma):
    """Tr sqrt(rho^{1/2} sigma rho^{1/2})."""
    rho = as_psd(rho)
    sigma = as_psd(sigma)
    r = rho.power(0.5)
    M = r @ sigma.matrix @ r
    w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())
