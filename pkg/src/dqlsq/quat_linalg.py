"""Quaternion matrix decompositions via the complex adjoint embedding.

For ``A = C1 + C2 j`` the complex adjoint is

    chi(A) = [[C1, C2], [-conj(C2), conj(C1)]]

which is a multiplicative homomorphism with ``chi(A*) = chi(A)^H``. Every
singular value of ``A`` appears twice in ``chi(A)``, so the QSVD, pseudo-
inverse, singular value thresholding and Hermitian solves below are all
computed on the embedding and mapped back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, FactorizationError, InputError, PreconditionError
from .quat_core import QMatrix, conj_transpose, frobenius_norm

__all__ = [
    "complex_adjoint",
    "from_complex_adjoint",
    "QSVDResult",
    "qsvd",
    "singular_values",
    "pinv",
    "nuclear_norm",
    "svt",
    "HPDFactor",
    "hpd_factor",
    "hpd_factor_solve",
]

# singular values closer than this (relative to sigma_1) share a cluster
_CLUSTER_REL = 1e-12


def complex_adjoint(A: QMatrix) -> np.ndarray:
    """Return the ``2m x 2n`` complex adjoint of ``A``."""
    c1, c2 = A.complex_pair()
    return np.block([[c1, c2], [-c2.conj(), c1.conj()]])


def from_complex_adjoint(M: np.ndarray) -> QMatrix:
    """Map a (near) adjoint-structured complex matrix back to a quaternion matrix.

    The two copies of each block are averaged, which is the orthogonal
    projection onto structured matrices.
    """
    if M.shape[0] % 2 or M.shape[1] % 2:
        raise DimensionError(f"complex adjoint must have even dimensions, got {M.shape}")
    m, n = M.shape[0] // 2, M.shape[1] // 2
    c1 = 0.5 * (M[:m, :n] + M[m:, n:].conj())
    c2 = 0.5 * (M[:m, n:] - M[m:, :n].conj())
    return QMatrix.from_complex_pair(c1, c2)


def _first_column_rep(X: QMatrix) -> np.ndarray:
    # columns of X as the first block column of chi(X): [C1; -conj(C2)]
    c1, c2 = X.complex_pair()
    return np.vstack([c1, -c2.conj()])


def _from_first_column_rep(c: np.ndarray) -> QMatrix:
    d = c.shape[0] // 2
    return QMatrix.from_complex_pair(c[:d], -c[d:].conj())


def _j_partner(c: np.ndarray) -> np.ndarray:
    # second block column of chi(x) for x whose first block column is c
    d = c.shape[0] // 2
    return np.vstack([-c[d:].conj(), c[:d].conj()])


class _StructuredBasis:
    """Grows an orthonormal set of quaternion vectors in embedded form.

    The complex span kept in ``_span`` always contains each accepted vector
    together with its j-partner, so projecting onto its complement is exactly
    quaternion Gram-Schmidt.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._span = np.zeros((2 * dim, 0), dtype=complex)
        self.vectors: list[np.ndarray] = []

    @property
    def full(self) -> bool:
        return len(self.vectors) >= self.dim

    def residual(self, C: np.ndarray) -> np.ndarray:
        for _ in range(2):
            C = C - self._span @ (self._span.conj().T @ C)
        return C

    def accept(self, c: np.ndarray) -> None:
        c = self.residual(c[:, None])[:, 0]
        c = c / np.linalg.norm(c)
        self.vectors.append(c)
        self._span = np.hstack([self._span, c[:, None], _j_partner(c[:, None])])

    def add_pivoted(self, C: np.ndarray, count: int, min_residual: float = 1e-3) -> None:
        """Accept up to ``count`` vectors from the columns of ``C``, largest residual first."""
        for _ in range(count):
            if self.full or C.shape[1] == 0:
                return
            R = self.residual(C)
            norms = np.linalg.norm(R, axis=0)
            best = int(np.argmax(norms))
            if norms[best] < min_residual:
                return
            self.accept(R[:, best])

    def add_in_order(self, C: np.ndarray, min_residual: float = 0.5) -> None:
        for col in C.T:
            if self.full:
                return
            r = self.residual(col[:, None])[:, 0]
            if np.linalg.norm(r) >= min_residual * np.linalg.norm(col):
                self.accept(r)

    def complete(self) -> None:
        """Fill up to ``dim`` vectors from the standard basis."""
        if self.full:
            return
        E = np.vstack([np.eye(self.dim), np.zeros((self.dim, self.dim))]).astype(complex)
        self.add_pivoted(E, self.dim - len(self.vectors), min_residual=0.0)

    def matrix(self) -> QMatrix:
        if not self.vectors:
            return QMatrix.zeros(self.dim, 0)
        return _from_first_column_rep(np.column_stack(self.vectors))


@dataclass(frozen=True)
class QSVDResult:
    """Full QSVD ``A = U diag(sigma) V*``.

    ``U`` is ``m x m``, ``V`` is ``n x n``, both unitary; ``sigma`` has
    ``min(m, n)`` nonnegative entries in descending order.
    """

    U: QMatrix
    sigma: np.ndarray
    V: QMatrix
    rank: int
    tol_used: float

    @property
    def Ur(self) -> QMatrix:
        return self.U[:, : self.rank]

    @property
    def Vr(self) -> QMatrix:
        return self.V[:, : self.rank]

    @property
    def sigma_r(self) -> np.ndarray:
        return self.sigma[: self.rank]

    def compose(self) -> QMatrix:
        """Rebuild ``U Sigma V*`` from all singular triplets."""
        k = len(self.sigma)
        US = _scale_columns(self.U[:, :k], self.sigma)
        return US @ self.V[:, :k].H


def _scale_columns(A: QMatrix, s: np.ndarray) -> QMatrix:
    return QMatrix._wrap(A.data * np.asarray(s, dtype=float)[None, :, None])


def _check_finite(A: QMatrix) -> None:
    if not np.all(np.isfinite(A.data)):
        raise InputError("matrix has non-finite entries")


def singular_values(A: QMatrix) -> np.ndarray:
    """Descending singular values of ``A`` (length ``min(m, n)``)."""
    _check_finite(A)
    if min(A.shape) == 0:
        return np.zeros(0)
    s = np.linalg.svd(complex_adjoint(A), compute_uv=False)
    return s[0::2].copy()


def qsvd(A: QMatrix, rank_tol_rel: float = 1e-10) -> QSVDResult:
    """Quaternion SVD computed through the complex adjoint.

    The duplicated complex singular values are collapsed by keeping indices
    0, 2, 4, ... of the descending list. Right singular vectors are rebuilt
    cluster by cluster with a structure-preserving Gram-Schmidt, then each
    left vector is ``A v_i / sigma_i`` re-orthonormalised and completed to
    a unitary ``U``.

    Parameters
    ----------
    A : QMatrix
    rank_tol_rel : float
        Singular values above ``rank_tol_rel * sigma_1`` count towards the rank.
    """
    if not rank_tol_rel > 0:
        raise PreconditionError("rank_tol_rel must be positive")
    _check_finite(A)
    m, n = A.shape
    k = min(m, n)
    if k == 0:
        return QSVDResult(QMatrix.eye(m), np.zeros(0), QMatrix.eye(n), 0, 0.0)

    Uc, s, Vh = np.linalg.svd(complex_adjoint(A), full_matrices=True)
    sigma = s[0::2].copy()
    s1 = float(sigma[0])

    # right vectors: one quaternion vector per complex pair, grouped by value
    s_full = np.zeros(2 * n)
    s_full[: 2 * k] = s
    Vc = Vh.conj().T
    ctol = _CLUSTER_REL * max(s1, np.finfo(float).tiny)
    vb = _StructuredBasis(n)
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and s_full[stop - 1] - s_full[stop] <= ctol:
            stop += 1
        target = (stop + 1) // 2 - len(vb.vectors)
        vb.add_pivoted(Vc[:, start:stop], target)
        start = stop
    vb.complete()
    V = vb.matrix()

    # left vectors from A v_i / sigma_i where sigma_i is usable
    AV = A @ V[:, :k]
    nz = sigma > np.finfo(float).tiny
    ub = _StructuredBasis(m)
    if np.any(nz):
        cand = _first_column_rep(_scale_columns(AV, np.where(nz, 1.0 / np.where(nz, sigma, 1.0), 0.0)))
        # keep slot order: a rejected candidate is replaced by completion later
        for i in range(k):
            if not nz[i]:
                break
            before = len(ub.vectors)
            ub.add_in_order(cand[:, i : i + 1])
            if len(ub.vectors) == before:
                break
    ub.complete()
    U = ub.matrix()

    tol_used = rank_tol_rel * s1
    rank = int(np.count_nonzero(sigma > tol_used)) if s1 > 0 else 0
    return QSVDResult(U, sigma, V, rank, tol_used)


def pinv(A: QMatrix, rank_tol_rel: float = 1e-10) -> QMatrix:
    """Moore-Penrose inverse ``V_r Sigma_r^{-1} U_r*``."""
    m, n = A.shape
    if min(m, n) == 0 or A.is_zero():
        _check_finite(A)
        return QMatrix.zeros(n, m)
    res = qsvd(A, rank_tol_rel)
    if res.rank == 0:
        return QMatrix.zeros(n, m)
    return _scale_columns(res.Vr, 1.0 / res.sigma_r) @ res.Ur.H


def nuclear_norm(A: QMatrix) -> float:
    """Sum of the singular values of ``A``."""
    return float(np.sum(singular_values(A)))


def svt(A: QMatrix, delta: float) -> QMatrix:
    """Singular value thresholding ``U_r diag(max(sigma - delta, 0)) V_r*``.

    This is the proximal map of ``delta * ||.||_*``. The shrinkage is a
    spectral function, so applying it to the complex adjoint (whose singular
    subspaces come in j-paired copies) yields exactly the adjoint of the
    quaternion result, independent of how degenerate subspaces are split.
    """
    if delta < 0:
        raise PreconditionError("svt threshold must be nonnegative")
    _check_finite(A)
    if min(A.shape) == 0:
        return A
    Uc, s, Vh = np.linalg.svd(complex_adjoint(A), full_matrices=False)
    keep = s > delta
    if not np.any(keep):
        return QMatrix.zeros(*A.shape)
    Uk = Uc[:, keep] * (s[keep] - delta)
    return from_complex_adjoint(Uk @ Vh[keep])


@dataclass(frozen=True)
class HPDFactor:
    """Cached Cholesky factor of the complex adjoint of an HPD quaternion matrix."""

    n: int
    chol: np.ndarray
    lower: bool


def hpd_factor(M: QMatrix) -> HPDFactor:
    """Factor a Hermitian positive definite quaternion matrix once for reuse."""
    if M.rows != M.cols:
        raise DimensionError(f"matrix must be square, got {M.shape}")
    _check_finite(M)
    if frobenius_norm(M - conj_transpose(M)) > 1e-10 * max(1.0, frobenius_norm(M)):
        raise PreconditionError("matrix is not Hermitian")
    try:
        c, lower = scipy.linalg.cho_factor(complex_adjoint(M), lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"matrix is not positive definite: {exc}") from exc
    c = np.array(c)
    c.setflags(write=False)
    return HPDFactor(M.rows, c, lower)


def hpd_factor_solve(M: QMatrix | None, RHS: QMatrix, handle: HPDFactor | None = None) -> QMatrix:
    """Solve ``M X = RHS``; pass ``handle`` to reuse a factorization of ``M``."""
    if handle is None:
        if M is None:
            raise PreconditionError("either M or a factorization handle is required")
        handle = hpd_factor(M)
    if RHS.rows != handle.n:
        raise DimensionError(f"right-hand side has {RHS.rows} rows, matrix is {handle.n}x{handle.n}")
    if RHS.cols == 0:
        return QMatrix.zeros(handle.n, 0)
    y = scipy.linalg.cho_solve((handle.chol, handle.lower), _first_column_rep(RHS), check_finite=False)
    return _from_first_column_rep(y)
