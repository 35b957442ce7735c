"""Linear maps between matrix algebras.

A Channel stores its superoperator matrix S (d_out**2 x d_in**2) acting on
row-major vectorized matrices, so vec(L X R) = kron(L, R.T) vec(X). A Kraus
list is kept when one is known; it is used for application and for building
compositions, and is absent for maps that are not completely positive.

The Choi matrix uses the convention J = sum_ij |i><j| (x) Phi(|i><j|),
input factor first.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import config
from .errors import InvalidInputError, ResourceError, ShapeError
from .matcore import as_matrix, as_psd, check_hermitian, hs_norm

SUPEROP_CAP = 1024  # largest d for which a d**2 x d**2 superoperator is formed


def _kraus_superop(kraus):
    return sum(np.kron(K, K.conj()) for K in kraus)


def _superop_to_choi(S, d_in, d_out):
    # S[(a,b),(i,j)] -> J[(i,a),(j,b)]
    return S.reshape(d_out, d_out, d_in, d_in).transpose(2, 0, 3, 1).reshape(d_in * d_out, d_in * d_out)


def _choi_to_superop(J, d_in, d_out):
    return J.reshape(d_in, d_out, d_in, d_out).transpose(1, 3, 0, 2).reshape(d_out * d_out, d_in * d_in)


class Channel:
    """Linear map M_{d_in} -> M_{d_out} in Kraus and/or superoperator form."""

    def __init__(self, d_in, d_out, kraus=None, choi=None, superop=None, check=True):
        self.d_in = int(d_in)
        self.d_out = int(d_out)
        if self.d_in < 1 or self.d_out < 1:
            raise ShapeError("dimensions must be positive")
        self.kraus = None
        if kraus is not None:
            ks = tuple(as_matrix(K) for K in kraus)
            for K in ks:
                if K.shape != (self.d_out, self.d_in):
                    raise ShapeError(f"Kraus operator has shape {K.shape}, expected {(self.d_out, self.d_in)}")
            self.kraus = ks
        S = None
        if superop is not None:
            S = as_matrix(superop)
        if choi is not None:
            J = as_matrix(choi)
            n = self.d_in * self.d_out
            if J.shape != (n, n):
                raise ShapeError(f"Choi matrix has shape {J.shape}, expected {(n, n)}")
            S2 = _choi_to_superop(J, self.d_in, self.d_out)
            if S is not None and np.abs(S - S2).max() > 1e-10:
                raise InvalidInputError("Choi and superoperator forms disagree")
            S = S2
        if S is None and self.kraus is None:
            raise InvalidInputError("a channel needs Kraus, Choi or superoperator data")
        if S is not None:
            if S.shape != (self.d_out ** 2, self.d_in ** 2):
                raise ShapeError(f"superoperator has shape {S.shape}")
            if check and self.kraus is not None:
                if np.abs(_kraus_superop(self.kraus) - S).max() > 1e-10:
                    raise InvalidInputError("Kraus and Choi forms disagree")
            self.__dict__["superop"] = S

    def __repr__(self):
        form = "kraus" if self.kraus is not None else "choi"
        return f"Channel(d_in={self.d_in}, d_out={self.d_out}, form={form})"

    @cached_property
    def superop(self):
        if max(self.d_in, self.d_out) > SUPEROP_CAP:
            raise ResourceError("superoperator too large")
        return _kraus_superop(self.kraus)

    @property
    def choi(self):
        return _superop_to_choi(self.superop, self.d_in, self.d_out)

    def apply(self, X):
        X = as_matrix(X)
        if X.shape != (self.d_in, self.d_in):
            raise ShapeError(f"input has shape {X.shape}, expected {(self.d_in, self.d_in)}")
        if self.kraus is not None:
            return sum(K @ X @ K.conj().T for K in self.kraus)
        return (self.superop @ X.ravel()).reshape(self.d_out, self.d_out)

    __call__ = apply

    def adjoint(self):
        if self.kraus is not None:
            return Channel(self.d_out, self.d_in, kraus=[K.conj().T for K in self.kraus], check=False)
        return Channel(self.d_out, self.d_in, superop=self.superop.conj().T)

    def compose(self, other):
        """self o other."""
        if other.d_out != self.d_in:
            raise ShapeError("composition dimension mismatch")
        if self.kraus is not None and other.kraus is not None and \
                len(self.kraus) * len(other.kraus) <= 4096:
            ks = [K2 @ K1 for K2 in self.kraus for K1 in other.kraus]
            return Channel(other.d_in, self.d_out, kraus=ks, check=False)
        return Channel(other.d_in, self.d_out, superop=self.superop @ other.superop)

    def __add__(self, other):
        if (self.d_in, self.d_out) != (other.d_in, other.d_out):
            raise ShapeError("sum of maps with different dimensions")
        if self.kraus is not None and other.kraus is not None:
            return Channel(self.d_in, self.d_out, kraus=self.kraus + other.kraus, check=False)
        return Channel(self.d_in, self.d_out, superop=self.superop + other.superop)

    def scale(self, c):
        c = float(c)
        if self.kraus is not None and c >= 0:
            return Channel(self.d_in, self.d_out, kraus=[np.sqrt(c) * K for K in self.kraus], check=False)
        return Channel(self.d_in, self.d_out, superop=c * self.superop)

    def tensor(self, other, cap=config.DIM_CAP):
        d_in, d_out = self.d_in * other.d_in, self.d_out * other.d_out
        if max(d_in, d_out) > cap:
            raise ResourceError("tensor product exceeds dimension cap")
        if self.kraus is not None and other.kraus is not None and \
                len(self.kraus) * len(other.kraus) <= cap:
            ks = [np.kron(K1, K2) for K1 in self.kraus for K2 in other.kraus]
            return Channel(d_in, d_out, kraus=ks, check=False)
        if max(d_in, d_out) > SUPEROP_CAP:
            raise ResourceError("superoperator too large")
        S1 = self.superop.reshape(self.d_out, self.d_out, self.d_in, self.d_in)
        S2 = other.superop.reshape(other.d_out, other.d_out, other.d_in, other.d_in)
        S = np.einsum("abij,cdkl->acbdikjl", S1, S2).reshape(d_out ** 2, d_in ** 2)
        return Channel(d_in, d_out, superop=S)

    def tensor_power(self, n, cap=config.DIM_CAP):
        if n < 1:
            raise InvalidInputError("n must be >= 1")
        if max(self.d_in, self.d_out) ** n > cap:
            raise ResourceError("tensor power exceeds dimension cap")
        out = self
        for _ in range(n - 1):
            out = out.tensor(self, cap=cap)
        return out

    def choi_min_eigenvalue(self):
        J = self.choi
        return float(np.linalg.eigvalsh(0.5 * (J + J.conj().T)).min())

    def is_cp(self, tol=1e-10):
        J = self.choi
        scale = max(1.0, float(np.abs(J).max()))
        if np.abs(J - J.conj().T).max() > tol * scale:
            return False
        return self.choi_min_eigenvalue() >= -tol * scale

    def to_kraus(self, tol=1e-12):
        """Kraus operators from the Choi eigendecomposition (CP maps only)."""
        J = check_hermitian(self.choi, 1e-9)
        w, V = np.linalg.eigh(J)
        if w.min() < -1e-9 * max(1.0, abs(w).max()):
            raise InvalidInputError("map is not completely positive")
        ks = []
        for lam, v in zip(w, V.T):
            if lam > tol * max(1.0, w.max()):
                ks.append(np.sqrt(lam) * v.reshape(self.d_in, self.d_out).T)
        if not ks:
            ks = [np.zeros((self.d_out, self.d_in))]
        return ks

    def with_kraus(self):
        if self.kraus is not None:
            return self
        return Channel(self.d_in, self.d_out, kraus=self.to_kraus(), check=False)

    def operator_norm(self):
        """Norm as a map between Hilbert-Schmidt spaces."""
        return float(np.linalg.norm(self.superop, 2))


# --- constructors -----------------------------------------------------------

def construct(kraus=None, choi=None, d_in=None, d_out=None):
    if kraus is not None:
        kraus = [as_matrix(K) for K in kraus]
        d_out, d_in = kraus[0].shape if d_in is None else (d_out, d_in)
    return Channel(d_in, d_out, kraus=kraus, choi=choi)


def apply(phi, X):
    return phi.apply(X)


def adjoint(phi):
    return phi.adjoint()


def compose(phi2, phi1):
    """phi2 o phi1."""
    return phi2.compose(phi1)


def channel_tensor_power(phi, n, cap=config.DIM_CAP):
    return phi.tensor_power(n, cap=cap)


def from_function(fn, d_in, d_out):
    """Build a map from its action on matrix units."""
    S = np.zeros((d_out * d_out, d_in * d_in), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            E = np.zeros((d_in, d_in), dtype=complex)
            E[i, j] = 1.0
            S[:, i * d_in + j] = as_matrix(fn(E)).ravel()
    return Channel(d_in, d_out, superop=S)


def identity_channel(d):
    return Channel(d, d, kraus=[np.eye(d)])


def unitary_channel(U):
    U = as_matrix(U)
    return Channel(U.shape[1], U.shape[0], kraus=[U])


def sandwich(L, R=None):
    """X -> L X R (R defaults to L*)."""
    L = as_matrix(L)
    if R is None:
        return Channel(L.shape[1], L.shape[0], kraus=[L], check=False)
    R = as_matrix(R)
    return Channel(L.shape[1], L.shape[0], superop=np.kron(L, R.T))


def right_multiplication(M):
    """X -> X M."""
    M = as_matrix(M)
    return Channel(M.shape[0], M.shape[1], superop=np.kron(np.eye(M.shape[0]), M.T))


def depolarizing_channel(d, p=1.0):
    """X -> (1-p) X + p Tr(X) I/d."""
    units = [np.outer(np.eye(d)[a], np.eye(d)[b]) for a in range(d) for b in range(d)]
    ks = [np.sqrt(p / d) * E for E in units]
    if p < 1:
        ks.append(np.sqrt(1 - p) * np.eye(d))
    return Channel(d, d, kraus=ks, check=False)


def partial_trace_channel(d1, d2):
    """X (x) Y -> X Tr Y on C^{d1} (x) C^{d2}."""
    ks = [np.kron(np.eye(d1), np.eye(d2)[k][None, :]) for k in range(d2)]
    return Channel(d1 * d2, d1, kraus=ks, check=False)


def replacement_channel(d_in, omega):
    """Y -> Tr(Y) omega."""
    w, V = np.linalg.eigh(check_hermitian(omega))
    ks = []
    for lam, v in zip(w, V.T):
        if lam > 1e-14:
            for j in range(d_in):
                ks.append(np.sqrt(lam) * np.outer(v, np.eye(d_in)[j]))
    return Channel(d_in, len(w), kraus=ks, check=False)


def transpose_channel(d):
    return from_function(lambda X: X.T, d, d)


def tomiyama_map(kind, eps, d):
    """The three one-parameter families mixing transpose, identity and depolarization.

    phi:    X -> (1-eps) X^T + eps Tr(X) I/d
    psi:    X -> (1-eps) X   + eps Tr(X) I/d
    lambda: X -> (1-eps) X^T + eps X
    """
    d = int(d)
    if d < 2:
        raise InvalidInputError("d must be >= 2")
    eps = float(eps)
    I = np.eye(d)
    if kind == "phi":
        fn = lambda X: (1 - eps) * X.T + eps * np.trace(X) * I / d
    elif kind == "psi":
        fn = lambda X: (1 - eps) * X + eps * np.trace(X) * I / d
    elif kind == "lambda":
        fn = lambda X: (1 - eps) * X.T + eps * X
    else:
        raise InvalidInputError(f"unknown Tomiyama family {kind!r}")
    ch = from_function(fn, d, d)
    if ch.is_cp(1e-12):
        return Channel(d, d, kraus=ch.to_kraus(), superop=ch.superop, check=False)
    return ch


def pinching_channel(B):
    """E_B(X) = sum_b Q_b X Q_b over all spectral projections of B, kernel included."""
    B = as_psd(B)
    if B.lambda_max == 0:
        raise InvalidInputError("B must be nonzero")
    return Channel(B.dim, B.dim, kraus=list(B.spectral.projections), check=False)


# --- Petz maps --------------------------------------------------------------

def petz_maps(phi, B):
    """Return (Phi_B, Phi*_B).

    Phi_B(X)   = Phi(B)^{-1/2} Phi(B^{1/2} X B^{1/2}) Phi(B)^{-1/2}
    Phi*_B(Y)  = B^{1/2} Phi*(Phi(B)^{-1/2} Y Phi(B)^{-1/2}) B^{1/2}
    """
    B = as_psd(B)
    PB = as_psd(phi.apply(B.matrix))
    inv_half = PB.power(-0.5)
    half = B.power(0.5)
    fwd = sandwich(inv_half).compose(phi).compose(sandwich(half))
    back = sandwich(half).compose(phi.adjoint()).compose(sandwich(inv_half))
    return fwd, back


def complete_to_stochastic(petz_dual, rho_fill=None, support=None):
    """Psi(Y) = Phi*_B(Y) + Tr((I - Phi(B)^0) Y) rho_fill.

    ``support`` is Phi(B)^0; when omitted it is read off as Phi_B(I), the
    adjoint of ``petz_dual`` applied to the identity.
    """
    d_in, d_out = petz_dual.d_in, petz_dual.d_out
    if rho_fill is None:
        rho_fill = np.eye(d_out) / d_out
    rho = as_psd(rho_fill)
    if rho.dim != d_out or abs(rho.trace - 1) > 1e-10:
        raise InvalidInputError("rho_fill must be a density on the output algebra")
    if support is None:
        support = as_psd(petz_dual.adjoint().apply(np.eye(d_in))).support
    Q = np.eye(d_in) - as_matrix(support)
    w, V = np.linalg.eigh(0.5 * (Q + Q.conj().T))
    basis = V[:, w > 0.5]
    if basis.shape[1] == 0:
        return petz_dual
    ks = []
    for lam, r in zip(rho.eigenvalues, rho.eigenvectors.T):
        if lam > 0:
            for e in basis.T:
                ks.append(np.sqrt(lam) * np.outer(r, e.conj()))
    return petz_dual + Channel(d_in, d_out, kraus=ks, check=False)


def contraction_V(phi, B):
    """V(X) = Phi*(X Phi(B)^{-1/2}) B^{1/2}, a linear map M_{d_out} -> M_{d_in}."""
    B = as_psd(B)
    PB = as_psd(phi.apply(B.matrix))
    return right_multiplication(B.power(0.5)).compose(phi.adjoint()).compose(
        right_multiplication(PB.power(-0.5)))


# --- diagnostics ------------------------------------------------------------

@dataclass
class PropertyReport:
    trace_preserving: bool
    trace_preserving_residual: float
    trace_nonincreasing: bool
    trace_nonincreasing_residual: float
    unital_dual: bool
    unital_dual_residual: float
    unital: bool
    unital_residual: float
    completely_positive: bool
    choi_min_eigenvalue: float
    k_positive_falsified: dict = field(default_factory=dict)
    schwarz_violation: float = 0.0
    schwarz_witness: Optional[np.ndarray] = None

    def to_dict(self):
        return {
            "trace_preserving": [self.trace_preserving, self.trace_preserving_residual],
            "trace_nonincreasing": [self.trace_nonincreasing, self.trace_nonincreasing_residual],
            "unital_dual": [self.unital_dual, self.unital_dual_residual],
            "unital": [self.unital, self.unital_residual],
            "completely_positive": [self.completely_positive, self.choi_min_eigenvalue],
            "k_positive_falsified": {str(k): (None if w is None else w[1])
                                     for k, w in self.k_positive_falsified.items()},
            "schwarz_violation": self.schwarz_violation,
        }


def _random_matrix(rng, d):
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)


def _matrix_units(d):
    for a in range(d):
        for b in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[a, b] = 1.0
            yield E


def ampliation_min_eigenvalue(phi, v, k):
    """Min eigenvalue of (id_k (x) Phi)(|v><v|) for v in C^k (x) C^{d_in}."""
    Vm = np.asarray(v, dtype=complex).reshape(k, phi.d_in)
    X = np.einsum("ia,jb->ijab", Vm, Vm.conj()).reshape(k * k, phi.d_in ** 2)
    Y = (X @ phi.superop.T).reshape(k, k, phi.d_out, phi.d_out)
    M = Y.transpose(0, 2, 1, 3).reshape(k * phi.d_out, k * phi.d_out)
    return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T)).min())


def _structured_vectors(k, d):
    m = min(k, d)
    v = np.zeros((k, d), dtype=complex)
    for i in range(m):
        v[i, i] = 1.0
    yield v.ravel() / np.sqrt(m)
    if k == 1:
        for i in range(d):
            yield np.eye(d)[i].astype(complex)
            for j in range(i + 1, d):
                yield (np.eye(d)[i] + np.eye(d)[j]) / np.sqrt(2)
                yield (np.eye(d)[i] + 1j * np.eye(d)[j]) / np.sqrt(2)


def k_positivity_witness(phi, k, samples=config.FALSIFIER_SAMPLES, seed=0, tol=1e-10):
    """Search for v with (id_k (x) Phi)(|v><v|) not PSD; returns (v, min eig) or None."""
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.abs(phi.superop).max()))
    best = None
    cands = list(_structured_vectors(k, phi.d_in))
    for _ in range(samples):
        v = rng.standard_normal(k * phi.d_in) + 1j * rng.standard_normal(k * phi.d_in)
        cands.append(v / np.linalg.norm(v))
    for v in cands:
        m = ampliation_min_eigenvalue(phi, v, k)
        if m < -tol * scale and (best is None or m < best[1]):
            best = (v, m)
    return best


def schwarz_violation(gamma, samples=config.FALSIFIER_SAMPLES, seed=0, c=1.0):
    """max over sampled Y of lambda_max(gamma(Y)* gamma(Y) - c gamma(Y* Y)).

    Samples all matrix units plus ``samples`` Gaussian matrices. Returns the
    largest value found (<= 0 means no violation seen) and its witness.
    """
    rng = np.random.default_rng(seed)
    d = gamma.d_in
    best, witness = -np.inf, None
    cands = list(_matrix_units(d)) + [_random_matrix(rng, d) for _ in range(samples)]
    for Y in cands:
        G = gamma.apply(Y)
        M = G.conj().T @ G - c * gamma.apply(Y.conj().T @ Y)
        val = float(np.linalg.eigvalsh(0.5 * (M + M.conj().T)).max())
        if val > best:
            best, witness = val, Y
    return best, witness


def properties(phi, samples=config.FALSIFIER_SAMPLES, seed=0, tol=1e-10):
    """Diagnose trace behaviour, complete positivity, k-positivity and the Schwarz property."""
    dual = phi.adjoint()
    T = dual.apply(np.eye(phi.d_out))
    tp_res = float(np.abs(T - np.eye(phi.d_in)).max())
    tni_res = max(0.0, float(np.linalg.eigvalsh(0.5 * (T + T.conj().T)).max()) - 1.0)
    if phi.d_in == phi.d_out:
        un_res = float(np.abs(phi.apply(np.eye(phi.d_in)) - np.eye(phi.d_out)).max())
    else:
        un_res = float("inf")
    cmin = phi.choi_min_eigenvalue()
    cp = phi.is_cp(tol)
    kpos = {}
    for k in range(1, phi.d_in + 1):
        kpos[k] = None if cp else k_positivity_witness(phi, k, samples, seed + k, tol)
    sv, sw = schwarz_violation(dual, samples, seed)
    return PropertyReport(tp_res <= tol, tp_res, tni_res <= tol, tni_res, tp_res <= tol, tp_res,
                          un_res <= tol, un_res, cp, cmin, kpos, sv, sw)


@dataclass
class TracePreservationReport:
    trace_nonincreasing: bool
    trace_residual: float
    dominance_residual: float
    petz_residual: float
    corner_residual: float
    V_residual: float
    tol: float

    @property
    def items(self):
        return {
            "trace_equal": self.trace_residual <= self.tol,
            "projection_dominance": self.dominance_residual <= self.tol,
            "petz_fixes_B": self.petz_residual <= self.tol,
            "trace_preserving_on_corner": self.corner_residual <= self.tol,
            "V_fixes_sqrt": self.V_residual <= self.tol,
        }

    @property
    def consistent(self):
        return len(set(self.items.values())) == 1


def trace_preservation_report(phi, B, tol=1e-9):
    """Evaluate the equivalent forms of Tr Phi(B) = Tr B for a positive trace non-increasing Phi."""
    B = as_psd(B)
    dual = phi.adjoint()
    T = dual.apply(np.eye(phi.d_out))
    tni = float(np.linalg.eigvalsh(0.5 * (T + T.conj().T)).max()) <= 1 + tol
    PB = as_psd(phi.apply(B.matrix))
    trace_res = abs(PB.trace - B.trace)
    M = dual.apply(PB.support)
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    P1 = V[:, np.abs(w - 1) <= 1e-8] @ V[:, np.abs(w - 1) <= 1e-8].conj().T
    B0 = B.support
    dom = hs_norm(B0 - P1 @ B0)
    _, back = petz_maps(phi, B)
    petz = hs_norm(back.apply(PB.matrix) - B.matrix)
    corner = hs_norm(B0 @ (T - np.eye(phi.d_in)) @ B0)
    V = contraction_V(phi, B)
    vres = hs_norm(V.apply(PB.power(0.5)) - B.power(0.5))
    return TracePreservationReport(tni, trace_res, dom, petz, corner, vres, tol)
