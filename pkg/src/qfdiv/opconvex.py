"""Integral representation of operator convex functions on [0, inf).

    f(x) = f(0) + a x + b x**2 + int_(0,inf) ( x/(1+t) - x/(x+t) ) dmu(t)

with b >= 0 and a positive measure mu satisfying int dmu/(1+t)**2 < inf.
Two further forms are supported: the finite-omega form
f(x) = f(0) + alpha x - int x/(x+t) dmu, available when int dmu/(1+t) < inf
(then omega(f) = alpha), and the psi form
f(x) = f(0) + b x**2 + int ( psi(t) x - x/(x+t) ) dmu with
psi(t) = 1/(1+t) + kappa/(1+t)**2.

Quadrature is QUADPACK (scipy.integrate.quad). For power-law densities
c t**e the singular factor is handled by the algebraic weight on (0, 1] and,
after u = 1/t, on the tail; the integrands we need are rational in t, so
both pieces are smooth apart from the weight.
"""
from dataclasses import dataclass, replace
import math
import warnings

import numpy as np
from scipy import integrate

from . import config
from .errors import IntegrationError, InvalidInputError
from .fdiv import overlaps, DivergenceFunction, _omega_term
from .matcore import as_psd
from .xreal import INF, xsum


@dataclass(frozen=True)
class DiscreteMeasure:
    ts: tuple
    ws: tuple

    def __post_init__(self):
        if any(t <= 0 for t in self.ts) or any(w < 0 for w in self.ws):
            raise InvalidInputError("atoms need t > 0 and w >= 0")
        if len(self.ts) != len(self.ws):
            raise InvalidInputError("ts and ws differ in length")

    def to_dict(self):
        return {"type": "discrete", "ts": list(self.ts), "ws": list(self.ws)}


@dataclass(frozen=True)
class PowerDensity:
    """dmu = coef * t**expo dt on (0, inf); expo > -1 for local integrability."""
    coef: float
    expo: float
    name: str = "power-density"

    def density(self, t):
        return self.coef * np.asarray(t, dtype=float) ** self.expo

    def to_dict(self):
        return {"type": self.name, "coef": self.coef, "expo": self.expo}


@dataclass(frozen=True)
class CallableDensity:
    """A general density integrated by plain adaptive quadrature on (0, inf)."""
    fn: object
    name: str = "custom-density"

    def density(self, t):
        return self.fn(t)

    def to_dict(self):
        return {"type": self.name}


@dataclass(frozen=True)
class RepresentingMeasure:
    f0: float
    a: float
    b: float
    mu: object
    variant: str = "standard"
    alpha: float = 0.0      # linear coefficient of the finite_omega form
    kappa: float = 0.0      # psi(t) = 1/(1+t) + kappa/(1+t)**2 in the psi form
    name: str = ""

    def __post_init__(self):
        if self.b < 0:
            raise InvalidInputError("b must be >= 0")
        if self.variant not in ("standard", "finite_omega", "psi_form"):
            raise InvalidInputError(f"unknown variant {self.variant!r}")

    @property
    def omega(self):
        """lim f(x)/x, read from the structure rather than from numerics."""
        if self.b > 0:
            return INF
        if self.variant == "finite_omega":
            return self.alpha
        if _is_zero_measure(self.mu):
            return self.a
        if integral_inv_1pt(self.mu) == INF:
            return INF
        return self.a + integral_inv_1pt(self.mu)

    def psi(self, t):
        t = np.asarray(t, dtype=float)
        return 1.0 / (1 + t) + self.kappa / (1 + t) ** 2

    def to_dict(self):
        d = {"f0": self.f0, "a": self.a, "b": self.b, "mu": self.mu.to_dict(), "variant": self.variant}
        if self.variant == "finite_omega":
            d["alpha"] = self.alpha
        if self.variant == "psi_form":
            d["kappa"] = self.kappa
        return d


def _is_zero_measure(mu):
    return isinstance(mu, DiscreteMeasure) and (len(mu.ts) == 0 or max(mu.ws) == 0)


# --- quadrature engine ------------------------------------------------------

def _quad(fn, lo, hi, weight=None, wvar=None, rtol=config.QUAD_RTOL):
    kw = dict(epsabs=0.0, epsrel=min(rtol, 1e-10), limit=config.QUAD_LIMIT, full_output=1)
    if weight is not None:
        kw.update(weight=weight, wvar=wvar)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(fn, lo, hi, **kw)
    val, err = out[0], out[1]
    if not np.isfinite(val) or err > max(rtol * abs(val), 1e-14):
        if len(out) > 3:
            raise IntegrationError(f"quadrature did not converge: {out[3]}")
        raise IntegrationError("quadrature did not converge")
    return val


def _pieces(lo, hi):
    """Split [lo, hi] (lo > 0) into pieces spanning at most one decade each."""
    n = max(1, int(math.ceil(math.log10(hi / lo))))
    return list(zip(np.geomspace(lo, hi, n + 1)[:-1], np.geomspace(lo, hi, n + 1)[1:]))


def integrate_measure(mu, g_t, g_u=None, k=2, breaks=(), rtol=config.QUAD_RTOL):
    """int g(t) dmu(t) over (0, inf).

    For densities the tail [1, inf) is mapped by u = 1/t; ``g_u(u)`` must
    equal g(1/u) * u**(-k), bounded near u = 0 (k = 2 for integrands decaying
    like 1/t**2). ``breaks`` are interior scales where the integrand bends.
    """
    if isinstance(mu, DiscreteMeasure):
        return float(sum(w * g_t(t) for t, w in zip(mu.ts, mu.ws)))
    if isinstance(mu, CallableDensity):
        f = lambda t: g_t(t) * mu.density(t)
        pts = sorted(b for b in breaks if 0 < b)
        edges = [0.0] + pts + [np.inf]
        return float(sum(_quad(f, lo, hi, rtol=rtol) for lo, hi in zip(edges[:-1], edges[1:])))
    if not isinstance(mu, PowerDensity):
        raise InvalidInputError("unsupported measure type")
    c, e = mu.coef, mu.expo
    if c == 0:
        return 0.0
    total = 0.0
    # (0, 1] in t
    lows = sorted(b for b in breaks if 0 < b < 1)
    edges = [0.0] + lows + [1.0]
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        if i == 0:
            total += _quad(g_t, lo, hi, "alg", (e, 0.0), rtol)
        else:
            total += sum(_quad(lambda t: g_t(t) * t ** e, a, b, rtol=rtol) for a, b in _pieces(lo, hi))
    # [1, inf) in u = 1/t: dt = du/u**2, t**e = u**-e
    if g_u is not None:
        w = -e - 2 + k
        highs = sorted(1.0 / b for b in breaks if b > 1)
        edges = [0.0] + highs + [1.0]
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            if i == 0:
                total += _quad(g_u, lo, hi, "alg", (w, 0.0), rtol)
            else:
                total += sum(_quad(lambda u: g_u(u) * u ** w, a, b, rtol=rtol) for a, b in _pieces(lo, hi))
    else:
        total += _quad(lambda t: g_t(t) * t ** e, 1.0, np.inf, rtol=rtol)
    return c * total


def _kernel(rs, cs):
    """sum_i c_i r_i (r_i - 1) / ((1+t)(r_i+t)) in t and in the u = 1/t form."""
    rs = np.asarray(rs, dtype=float)
    cs = np.asarray(cs, dtype=float)
    keep = (rs > 0) & (rs != 1) & (cs != 0)
    rs, cs = rs[keep], cs[keep]
    num = cs * rs * (rs - 1)

    def g_t(t):
        return float(np.sum(num / ((1 + t) * (rs + t))))

    def g_u(u):
        return float(np.sum(num / ((1 + u) * (1 + rs * u))))

    return g_t, g_u, rs


def integral_inv_1pt(mu):
    """int dmu/(1+t); may be +inf for densities with expo >= 0."""
    if isinstance(mu, PowerDensity) and mu.expo >= 0:
        return INF
    return integrate_measure(mu, lambda t: 1 / (1 + t), lambda u: 1 / (1 + u), k=1)


def integral_inv_1pt2(mu):
    """int dmu/(1+t)**2."""
    return integrate_measure(mu, lambda t: 1 / (1 + t) ** 2, lambda u: 1 / (1 + u) ** 2, k=2)


def integral_part(rep, x):
    """int (x/(1+t) - x/(x+t)) dmu(t) for the standard form."""
    g_t, g_u, rs = _kernel([x], [1.0])
    if len(rs) == 0:
        return 0.0
    return integrate_measure(rep.mu, g_t, g_u, k=2, breaks=(x,))


# --- canonical data -----------------------------------------------------------

def canonical_representation(name, alpha=None, variant="standard"):
    """Representing data for x log x, -x**alpha (0<alpha<1) and x**alpha (1<alpha<2)."""
    if name == "x_log_x":
        rep = RepresentingMeasure(0.0, 0.0, 0.0, PowerDensity(1.0, 0.0, "lebesgue"), name=name)
    elif name == "neg_power":
        alpha = float(alpha)
        if not 0 < alpha < 1:
            raise InvalidInputError("neg_power needs 0 < alpha < 1")
        mu = PowerDensity(math.sin(alpha * math.pi) / math.pi, alpha - 1.0, "sin-power")
        rep = RepresentingMeasure(0.0, -1.0, 0.0, mu, name=name)
    elif name == "power":
        alpha = float(alpha)
        if not 1 < alpha < 2:
            raise InvalidInputError("power needs 1 < alpha < 2")
        mu = PowerDensity(math.sin((alpha - 1.0) * math.pi) / math.pi, alpha - 1.0, "sin-power")
        rep = RepresentingMeasure(0.0, 1.0, 0.0, mu, name=name)
    else:
        raise InvalidInputError(f"no canonical representation for {name!r}")
    if variant == "standard":
        return rep
    if variant == "finite_omega":
        return to_finite_omega(rep)
    if variant == "psi_form":
        return to_psi_form(rep)
    raise InvalidInputError(f"unknown variant {variant!r}")


def closed_form(name, alpha=None):
    """Pointwise closed form matching canonical_representation."""
    if name == "x_log_x":
        return lambda x: np.where(np.asarray(x) > 0, x * np.log(np.where(np.asarray(x) > 0, x, 1.0)), 0.0)
    if name == "neg_power":
        return lambda x: -np.asarray(x, dtype=float) ** alpha
    if name == "power":
        return lambda x: np.asarray(x, dtype=float) ** alpha
    raise InvalidInputError(name)


def to_finite_omega(rep):
    """Rewrite a standard representation with int dmu/(1+t) < inf and b = 0."""
    if rep.variant == "finite_omega":
        return rep
    if rep.b != 0:
        raise InvalidInputError("finite-omega form needs b = 0")
    m1 = integral_inv_1pt(rep.mu)
    if m1 == INF:
        raise InvalidInputError("int dmu/(1+t) diverges; omega is infinite")
    return replace(rep, variant="finite_omega", alpha=rep.a + m1)


def to_psi_form(rep):
    """psi(t) = 1/(1+t) + kappa/(1+t)**2 with kappa = a / int dmu/(1+t)**2.

    Only int psi dmu is determined by f; this is one specific choice of psi.
    """
    if rep.variant == "psi_form":
        return rep
    std = to_standard(rep)
    m2 = integral_inv_1pt2(std.mu)
    if m2 == 0:
        raise InvalidInputError("psi form needs a nonzero measure")
    return replace(std, variant="psi_form", kappa=std.a / m2)


def to_standard(rep):
    if rep.variant == "standard":
        return rep
    if rep.variant == "finite_omega":
        return replace(rep, variant="standard", a=rep.alpha - integral_inv_1pt(rep.mu), alpha=0.0)
    # psi form: int (psi x - x/(x+t)) dmu = int (x/(1+t) - x/(x+t)) dmu + kappa m2 x
    return replace(rep, variant="standard", a=rep.kappa * integral_inv_1pt2(rep.mu), kappa=0.0)


def eval_representation(rep, x):
    """f(x) computed from the representing data."""
    x = float(x)
    if x < 0:
        raise InvalidInputError("x must be >= 0")
    if x == 0:
        return rep.f0
    if rep.variant == "finite_omega":
        # f0 + alpha x - int x/(x+t) dmu ; tail in u: x/(x+1/u) = x u/(x u+1), k = 1
        val = integrate_measure(rep.mu, lambda t: x / (x + t), lambda u: x / (x * u + 1), k=1, breaks=(x,))
        return rep.f0 + rep.alpha * x - val
    if rep.variant == "psi_form":
        std = to_standard(rep)
        return std.f0 + std.a * x + std.b * x * x + integral_part(std, x)
    return rep.f0 + rep.a * x + rep.b * x * x + integral_part(rep, x)


def quadratic_coefficient_probe(rep, x=1e10):
    """f(x)/x**2 at large x, which tends to b."""
    return eval_representation(rep, x) / x ** 2


def representation_function(rep, name=None):
    """DivergenceFunction whose evaluator runs the quadrature."""
    std = to_standard(rep)
    ev = lambda xs: np.array([eval_representation(std, float(v)) for v in np.ravel(xs)]).reshape(np.shape(xs))
    return DivergenceFunction(name or rep.name or "rep", ev, rep.f0, rep.f0, rep.omega, True,
                              "representation", {}, rep)


def divergence_via_representation(A, B, rep):
    """S_f(A||B) assembled term by term from (f0, a, b, mu).

    f0 Tr B + a Tr A B^0 + b Tr A^2 B^{-1}
      + int [ Tr A B^0 / (1+t) + S_{phi_t}(A||B) ] dmu(t) + omega Tr A (I - B^0)
    """
    std = to_standard(rep)
    a, bv, W = overlaps(A, B)
    pos = bv > 0
    Wp = W[:, pos]
    bp = bv[pos]
    trB = float(np.sum(bp[None, :] * Wp))
    trAB0 = float(np.sum(a[:, None] * Wp))
    quad2 = float(np.sum((a[:, None] ** 2 / bp[None, :]) * Wp)) if pos.any() else 0.0
    # the t-integrand equals sum_{a,b>0} W b r(r-1)/((1+t)(r+t)) with r = a/b
    R = (a[:, None] / bp[None, :]).ravel() if pos.any() else np.zeros(0)
    C = (bp[None, :] * Wp).ravel() if pos.any() else np.zeros(0)
    g_t, g_u, rs = _kernel(R, C)
    integral = integrate_measure(std.mu, g_t, g_u, k=2, breaks=tuple(rs)) if len(rs) else 0.0
    mass = float(np.sum(a[:, None] * W[:, ~pos]))
    total = float(np.sum(a[:, None] * W))
    omega_term = _omega_term(rep.omega, mass, total)
    return xsum([std.f0 * trB, std.a * trAB0, std.b * quad2, integral, omega_term])


def discrete_weights_from_values(xs, values, ts, f0, a, b):
    """Recover atom weights w_j at known ts from f values on a grid.

    With c_j = w_j/(1+t_j),
    ((f(x) - f0)/x - a - b x) / (x - 1) = sum_j c_j / (x + t_j),
    a Cauchy system; grid points must avoid 0 and 1.
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(values, dtype=float)
    if np.any(xs <= 0) or np.any(xs == 1):
        raise InvalidInputError("grid must avoid 0 and 1")
    from .matcore import cauchy_solve
    y = ((vals - f0) / xs - a - b * xs) / (xs - 1)
    c = cauchy_solve(xs, ts, y)
    return c * (1 + ts)


def matrix_function(rep, A):
    """Apply the represented f to a PSD matrix via its eigenvalues."""
    A = as_psd(A)
    vals = np.array([eval_representation(rep, float(v)) for v in A.eigenvalues])
    return (A.eigenvectors * vals) @ A.eigenvectors.conj().T
