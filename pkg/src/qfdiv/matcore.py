"""Hermitian matrix calculus with the support conventions used throughout.

Powers of a positive semidefinite operator are taken on its support only, so
``0**z = 0`` for every z (in particular ``0**-1 = 0``) and ``log* 0 = 0``.
"""
from dataclasses import dataclass, field
from functools import cached_property
import warnings

import numpy as np

from . import config
from .errors import (InvalidInputError, NotPsdError, ResourceError, ShapeError,
                     SymmetryError)


def as_matrix(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    return A


def _square(A):
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    return A


def hermitian_residual(A):
    A = _square(A)
    return float(np.abs(A - A.conj().T).max()) if A.size else 0.0


def check_hermitian(A, tol=config.HERM_TOL):
    """Return the Hermitian part of A after checking ||A - A*|| is small."""
    A = _square(A)
    scale = max(1.0, float(np.abs(A).max()))
    if hermitian_residual(A) > tol * scale:
        raise SymmetryError("matrix is not Hermitian within tolerance")
    return 0.5 * (A + A.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalue clusters with their spectral projections.

    ``values`` is strictly increasing. ``vectors`` holds an orthonormal
    eigenbasis (columns) and ``labels[i]`` is the cluster of column i, which
    lets callers compute traces like Tr P_a Q_b without forming projections.
    """
    values: np.ndarray
    vectors: np.ndarray
    labels: np.ndarray
    multiplicities: tuple = field(default=())

    @cached_property
    def projections(self):
        out = []
        for k in range(len(self.values)):
            V = self.vectors[:, self.labels == k]
            out.append(V @ V.conj().T)
        return out

    @property
    def clusters(self):
        return [(float(v), P, int(m)) for v, P, m in
                zip(self.values, self.projections, self.multiplicities)]

    def indicator(self):
        """d x n_clusters 0/1 matrix mapping eigenvectors to clusters."""
        M = np.zeros((len(self.labels), len(self.values)))
        M[np.arange(len(self.labels)), self.labels] = 1.0
        return M

    def reconstruct(self):
        return sum(v * P for v, P in zip(self.values, self.projections))


def _cluster(w, delta, scale):
    """Chain-cluster sorted eigenvalues; returns labels and cluster means."""
    labels = np.zeros(len(w), dtype=int)
    k = 0
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > delta * scale:
            k += 1
        labels[i] = k
    means = np.array([w[labels == j].mean() for j in range(k + 1)]) if len(w) else np.zeros(0)
    return labels, means


def _decomposition(w, V, delta, zero_mask=None):
    """Cluster eigenpairs; eigenvalues flagged in zero_mask form their own cluster."""
    if zero_mask is None:
        zero_mask = np.zeros(len(w), dtype=bool)
    span = (w.max() - w.min()) if len(w) else 0.0
    scale = span if span > 0 else 1.0
    labels = np.empty(len(w), dtype=int)
    values = []
    offset = 0
    if zero_mask.any():
        labels[zero_mask] = 0
        values.append(0.0)
        offset = 1
    rest = ~zero_mask
    if rest.any():
        lab, means = _cluster(w[rest], delta, scale)
        labels[rest] = lab + offset
        values.extend(means.tolist())
    values = np.array(values, dtype=float)
    mult = tuple(int((labels == k).sum()) for k in range(len(values)))
    return SpectralDecomposition(values, V, labels, mult)


def spectral_decompose(A, delta=config.CLUSTER_TOL, herm_tol=config.HERM_TOL):
    """Spectral decomposition of a Hermitian matrix with eigenvalue clustering.

    Eigenvalues closer than ``delta * (lambda_max - lambda_min)`` (or ``delta``
    when the spectrum is a single point) are merged into one cluster whose
    eigenvalue is the cluster mean.
    """
    H = check_hermitian(A, herm_tol)
    w, V = np.linalg.eigh(H)
    return _decomposition(w, V, delta)


class PsdOperator:
    """A positive semidefinite matrix with cached spectral data.

    Eigenvalues below ``supp_tol * lambda_max`` are set to exactly zero, which
    fixes the support once and for all. Instances are treated as immutable.
    """

    def __init__(self, matrix, *, herm_tol=config.HERM_TOL, psd_tol=config.PSD_TOL,
                 supp_tol=config.SUPP_TOL, cluster_tol=config.CLUSTER_TOL):
        H = check_hermitian(matrix, herm_tol)
        w, V = np.linalg.eigh(H)
        lmax = max(float(w.max()), 0.0) if len(w) else 0.0
        # small absolute floor so a numerically zero matrix is accepted
        if len(w) and -w.min() > max(psd_tol * lmax, 1e-14):
            raise NotPsdError(f"minimum eigenvalue {w.min():.3e} is negative")
        zero = w <= supp_tol * lmax
        w = np.where(zero, 0.0, w)
        self._w = w
        self._V = V
        self._zero = zero
        self._cluster_tol = cluster_tol
        H = H.copy()
        H.setflags(write=False)
        self.matrix = H

    def __repr__(self):
        return f"PsdOperator(dim={self.dim}, rank={self.rank})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def eigenvalues(self):
        """Per-eigenvector eigenvalues with the kernel set to exactly zero."""
        return self._w

    @property
    def eigenvectors(self):
        return self._V

    @cached_property
    def spectral(self):
        return _decomposition(self._w, self._V, self._cluster_tol, self._zero)

    @property
    def rank(self):
        return int((~self._zero).sum())

    @property
    def trace(self):
        return float(self._w.sum())

    @property
    def lambda_max(self):
        return float(self._w.max()) if len(self._w) else 0.0

    def apply_function(self, fn, at_zero=0.0):
        """Sum of fn(a) P_a over positive eigenvalues plus at_zero times the kernel."""
        pos = ~self._zero
        vals = np.full(len(self._w), at_zero, dtype=complex)
        if pos.any():
            vals[pos] = fn(self._w[pos])
        return (self._V * vals) @ self._V.conj().T

    @cached_property
    def support(self):
        return self.apply_function(lambda a: np.ones_like(a))

    def power(self, z):
        if z == 0:
            return self.support
        return self.apply_function(lambda a: np.exp(z * np.log(a)))

    def log_star(self):
        return self.apply_function(np.log)


def as_psd(A, **kw):
    """Wrap an array as a PsdOperator (identity on PsdOperator input)."""
    if isinstance(A, PsdOperator):
        return A
    return PsdOperator(A, **kw)


def support_projection(A):
    """The projection A^0 onto the support of A."""
    return as_psd(A).support


def power_on_support(A, z):
    """sum_{a>0} a**z P_a; z = 0 gives A^0 and z = -1 the generalized inverse."""
    return as_psd(A).power(z)


def log_star(A):
    """sum_{a>0} (log a) P_a."""
    return as_psd(A).log_star()


def sqrt_psd(A):
    return as_psd(A).power(0.5)


def is_subspace(P, Q, tol=1e-8):
    """True when the range of projection P lies inside the range of projection Q."""
    d = P.shape[0]
    return float(np.linalg.norm((np.eye(d) - Q) @ P)) <= tol * max(1.0, np.sqrt(d))


def support_contained(A, B, tol=config.SUPP_TOL):
    """supp A <= supp B, judged by Tr A(I - B^0) <= tol * max(Tr A, tiny)."""
    A = as_psd(A)
    B = as_psd(B)
    leak = float(np.real(np.trace(A.matrix @ (np.eye(A.dim) - B.support))))
    return leak <= tol * max(A.trace, 1e-300) or A.trace == 0.0


def _check_cap(dim, cap):
    if dim > cap:
        raise ResourceError(f"dimension {dim} exceeds cap {cap}")


def kron(*mats, cap=config.DIM_CAP):
    """Kronecker product of any number of matrices."""
    mats = [as_matrix(m) for m in mats]
    rows = int(np.prod([m.shape[0] for m in mats]))
    cols = int(np.prod([m.shape[1] for m in mats]))
    _check_cap(max(rows, cols), cap)
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def tensor_power(A, n, cap=config.DIM_CAP):
    if n < 1:
        raise InvalidInputError("tensor power needs n >= 1")
    A = as_matrix(A)
    _check_cap(max(A.shape) ** n, cap)
    out = A
    for _ in range(n - 1):
        out = np.kron(out, A)
    return out


def partial_trace(A, dims, keep):
    """Trace out every tensor factor whose index is not in ``keep``."""
    A = _square(A)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != A.shape[0]:
        raise ShapeError(f"dims {dims} do not multiply to {A.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    T = A.reshape(dims + dims)
    for i in reversed(range(n)):
        if i in keep:
            continue
        m = T.ndim // 2
        T = np.trace(T, axis1=i, axis2=i + m)
    kd = [dims[i] for i in keep]
    D = int(np.prod(kd)) if kd else 1
    return T.reshape(D, D) if kd else np.array([[T]]).reshape(1, 1)


def singular_values(A):
    A = as_matrix(A)
    if A.shape[0] == A.shape[1] and hermitian_residual(A) <= 1e-14 * max(1.0, np.abs(A).max()):
        return np.sort(np.abs(np.linalg.eigvalsh(0.5 * (A + A.conj().T))))[::-1]
    return np.linalg.svd(A, compute_uv=False)


def trace_norm(A):
    return float(singular_values(A).sum())


def schatten_p(A, p, supp_tol=config.SUPP_TOL):
    """(Tr |A|^p)^(1/p); for p <= 0 powers are taken on the support of |A|."""
    if p == 0:
        raise InvalidInputError("p must be nonzero")
    s = singular_values(A)
    if s.size == 0 or s.max() == 0.0:
        return 0.0
    s = s[s > supp_tol * s.max()]
    return float(np.sum(s ** p) ** (1.0 / p))


def hs_norm(A):
    return float(np.linalg.norm(A))


def cauchy_matrix(xs, ts):
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    return 1.0 / (xs[:, None] + ts[None, :])


def _solve_full_pivot(M, v):
    """Gaussian elimination with complete pivoting."""
    M = np.array(M, dtype=complex)
    v = np.array(v, dtype=complex)
    n = M.shape[0]
    perm = np.arange(n)
    for k in range(n):
        sub = np.abs(M[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        if sub.max() == 0.0:
            raise InvalidInputError("singular system")
        M[[k, i]] = M[[i, k]]
        v[[k, i]] = v[[i, k]]
        M[:, [k, j]] = M[:, [j, k]]
        perm[[k, j]] = perm[[j, k]]
        f = M[k + 1:, k] / M[k, k]
        M[k + 1:, k:] -= np.outer(f, M[k, k:])
        v[k + 1:] -= f * v[k]
    y = np.zeros(n, dtype=complex)
    for k in reversed(range(n)):
        y[k] = (v[k] - M[k, k + 1:] @ y[k + 1:]) / M[k, k]
    out = np.zeros(n, dtype=complex)
    out[perm] = y
    return out


def cauchy_solve(xs, ts, values, cond_warn=1e12):
    """Solve sum_j c_j / (x_i + t_j) = values_i for c.

    Parameters
    ----------
    xs : distinct reals >= 0
    ts : distinct reals > 0
    values : right-hand side (real or complex)
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values)
    if not (len(xs) == len(ts) == len(values)):
        raise InvalidInputError("xs, ts and values must have equal length")
    if len(np.unique(xs)) != len(xs) or len(np.unique(ts)) != len(ts):
        raise InvalidInputError("nodes must be pairwise distinct")
    if np.any(xs < 0) or np.any(ts <= 0):
        raise InvalidInputError("need xs >= 0 and ts > 0")
    C = cauchy_matrix(xs, ts)
    if np.linalg.cond(C) > cond_warn:
        warnings.warn("ill-conditioned Cauchy system", RuntimeWarning, stacklevel=2)
    c = _solve_full_pivot(C, values)
    if np.isrealobj(values):
        c = c.real
    return c
