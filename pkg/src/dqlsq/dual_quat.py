"""Dual numbers, dual quaternions and dual quaternion matrices.

Dual numbers ``st + inf * eps`` (``eps**2 == 0``) are totally ordered
lexicographically: standard part first, infinitesimal part as tie-breaker.
All "norms" on dual quaternion matrices return dual numbers compared under
that order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, FormatError
from .quat_core import (
    QMatrix,
    Quaternion,
    _fmt,
    _parse_header,
    _to_floats,
    frobenius_norm,
    inner_real,
    mat_mul,
)

__all__ = [
    "DualNumber",
    "DualQuaternion",
    "DualQMatrix",
    "dual_mul",
    "dual_cmp",
    "dual_abs",
    "dq_mat_mul",
    "dqm_frobenius",
    "metric_rho",
    "v_value",
    "format_dqmat",
    "parse_dqmat",
    "read_dqmat",
    "write_dqmat",
]


@dataclass(frozen=True, order=True)
class DualNumber:
    """Dual real ``st + inf * eps``; ``order=True`` gives the lexicographic total order."""

    st: float = 0.0
    inf: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "st", float(self.st))
        object.__setattr__(self, "inf", float(self.inf))

    def __add__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualNumber(self.st + other.st, self.inf + other.inf)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualNumber(self.st - other.st, self.inf - other.inf)

    def __neg__(self):
        return DualNumber(-self.st, -self.inf)

    def __mul__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return dual_mul(self, other)

    __rmul__ = __mul__

    def __abs__(self):
        return dual_abs(self)

    def is_appreciable(self) -> bool:
        return self.st != 0.0

    def __str__(self) -> str:
        return f"{self.st!r} + {self.inf!r}eps"


def _as_dual(v):
    if isinstance(v, DualNumber):
        return v
    if isinstance(v, (int, float, np.floating, np.integer)):
        return DualNumber(float(v), 0.0)
    return None


def dual_mul(p: DualNumber, q: DualNumber) -> DualNumber:
    return DualNumber(p.st * q.st, p.st * q.inf + p.inf * q.st)


def dual_cmp(p: DualNumber, q: DualNumber) -> int:
    """Three-way lexicographic comparison: -1, 0 or 1."""
    a, b = (p.st, p.inf), (q.st, q.inf)
    return (a > b) - (a < b)


def dual_abs(q: DualNumber) -> DualNumber:
    if q.st != 0.0:
        return DualNumber(abs(q.st), math.copysign(1.0, q.st) * q.inf)
    return DualNumber(0.0, abs(q.inf))


@dataclass(frozen=True)
class DualQuaternion:
    st: Quaternion = Quaternion()
    inf: Quaternion = Quaternion()

    def magnitude(self) -> DualNumber:
        """``|q_st| + Re(q_st conj(q_in)) / |q_st| eps``, or ``|q_in| eps`` when infinitesimal."""
        a = abs(self.st)
        if a != 0.0:
            # (q_st conj(q_in) + q_in conj(q_st)) / 2 is the real part of q_st conj(q_in)
            re = float(self.st.to_array() @ self.inf.to_array())
            return DualNumber(a, re / a)
        return DualNumber(0.0, abs(self.inf))

    def abs_d(self) -> DualNumber:
        """Componentwise magnitude ``|q_st| + |q_in| eps``."""
        return DualNumber(abs(self.st), abs(self.inf))

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return DualQuaternion(self.st * other.st, self.inf * other.st + self.st * other.inf)
        if isinstance(other, DualQMatrix):
            return DualQMatrix(
                other.st.left_scale(self.st),
                other.st.left_scale(self.inf) + other.inf.left_scale(self.st),
            )
        return NotImplemented


@dataclass(frozen=True)
class DualQMatrix:
    """Dual quaternion matrix ``st + inf * eps`` with equal-shape parts."""

    st: QMatrix
    inf: QMatrix

    def __post_init__(self):
        if self.st.shape != self.inf.shape:
            raise DimensionError(f"standard part {self.st.shape} and infinitesimal part {self.inf.shape} differ")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "DualQMatrix":
        return cls(QMatrix.zeros(rows, cols), QMatrix.zeros(rows, cols))

    @classmethod
    def eye(cls, n: int) -> "DualQMatrix":
        return cls(QMatrix.eye(n), QMatrix.zeros(n, n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.st.shape

    def is_appreciable(self) -> bool:
        return not self.st.is_zero()

    def __add__(self, other):
        if not isinstance(other, DualQMatrix):
            return NotImplemented
        return DualQMatrix(self.st + other.st, self.inf + other.inf)

    def __sub__(self, other):
        if not isinstance(other, DualQMatrix):
            return NotImplemented
        return DualQMatrix(self.st - other.st, self.inf - other.inf)

    def __matmul__(self, other):
        if not isinstance(other, DualQMatrix):
            return NotImplemented
        return dq_mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, DualQMatrix):
            return NotImplemented
        return self.st == other.st and self.inf == other.inf

    __hash__ = None


def dq_mat_mul(A: DualQMatrix, X: DualQMatrix) -> DualQMatrix:
    if A.shape[1] != X.shape[0]:
        raise DimensionError(f"dq_mat_mul: inner dimensions {A.shape} x {X.shape} disagree")
    return DualQMatrix(mat_mul(A.st, X.st), mat_mul(A.st, X.inf) + mat_mul(A.inf, X.st))


def dqm_frobenius(A: DualQMatrix) -> DualNumber:
    """Dual Frobenius norm; standard part ``||A_st||_F`` unless ``A`` is infinitesimal."""
    nst = frobenius_norm(A.st)
    if nst != 0.0:
        return DualNumber(nst, inner_real(A.st, A.inf) / nst)
    return DualNumber(0.0, frobenius_norm(A.inf))


def metric_rho(X: DualQMatrix, Y: DualQMatrix) -> DualNumber:
    """Dual metric ``||X_st - Y_st||_F + ||X_in - Y_in||_F eps``."""
    if X.shape != Y.shape:
        raise DimensionError(f"metric_rho: shapes {X.shape} and {Y.shape} differ")
    return DualNumber(frobenius_norm(X.st - Y.st), frobenius_norm(X.inf - Y.inf))


def v_value(X: DualQMatrix) -> DualNumber:
    """``||X_st||_F + ||X_in||_F eps`` (positive and subadditive, not homogeneous)."""
    return DualNumber(frobenius_norm(X.st), frobenius_norm(X.inf))


# -- DQMAT text format -----------------------------------------------------------

def format_dqmat(A: DualQMatrix) -> str:
    rows, cols = A.shape
    lines = [f"DQMAT {rows} {cols}"]
    for s, e in zip(A.st.data.reshape(-1, 4), A.inf.data.reshape(-1, 4)):
        lines.append(" ".join(_fmt(v) for v in s) + " | " + " ".join(_fmt(v) for v in e))
    return "\n".join(lines) + "\n"


def parse_dqmat(text: str) -> DualQMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty DQMAT input")
    rows, cols = _parse_header(lines[0].split(), "DQMAT")
    body = lines[1:]
    if len(body) != rows * cols:
        raise FormatError(f"DQMAT {rows}x{cols} needs {rows * cols} entry lines, found {len(body)}")
    st = np.empty((rows * cols, 4))
    inf = np.empty((rows * cols, 4))
    for idx, ln in enumerate(body):
        parts = ln.split("|")
        if len(parts) != 2:
            raise FormatError(f"DQMAT line {idx + 2}: expected 'w x y z | w x y z'")
        a, b = parts[0].split(), parts[1].split()
        if len(a) != 4 or len(b) != 4:
            raise FormatError(f"DQMAT line {idx + 2}: expected four values on each side of '|'")
        st[idx] = _to_floats(a)
        inf[idx] = _to_floats(b)
    return DualQMatrix(QMatrix(st.reshape(rows, cols, 4)), QMatrix(inf.reshape(rows, cols, 4)))


def read_dqmat(path: str | os.PathLike) -> DualQMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_dqmat(fh.read())


def write_dqmat(path: str | os.PathLike, A: DualQMatrix) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_dqmat(A))
