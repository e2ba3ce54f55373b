"""Quaternion scalars and dense quaternion matrices.

A quaternion matrix is stored as a C-contiguous float64 array of shape
``(rows, cols, 4)`` holding the ``w, x, y, z`` components of each entry,
i.e. row-major with four reals per scalar. Values are read-only once built.

Products never commute factors: entry ``(i, j)`` of ``A @ B`` is
``sum_k A[i, k] * B[k, j]`` with the left factor first.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, FormatError, PreconditionError

__all__ = [
    "Quaternion",
    "QMatrix",
    "mul_qq",
    "mat_mul",
    "conj_transpose",
    "frobenius_norm",
    "inner_real",
    "weighted_norm_Q",
    "hstack",
    "vstack",
    "format_qmat",
    "parse_qmat",
    "read_qmat",
    "write_qmat",
]


def _hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product over the trailing axis of length 4."""
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


@dataclass(frozen=True)
class Quaternion:
    """Hamilton quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(v) for v in np.asarray(arr, dtype=float).reshape(4))
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm_sq())

    def __add__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul_qq(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented


def mul_qq(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


class QMatrix:
    """Dense ``rows x cols`` quaternion matrix.

    Parameters
    ----------
    data : array_like
        Real array of shape ``(rows, cols, 4)``. It is copied and frozen.
    """

    __slots__ = ("_data",)
    __array_priority__ = 1000  # keep ``ndarray @ QMatrix`` from hijacking

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise DimensionError(f"expected array of shape (rows, cols, 4), got {arr.shape}")
        arr.setflags(write=False)
        self._data = arr

    # -- construction -----------------------------------------------------

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QMatrix":
        # trusted internal path: skip the defensive copy when we own ``arr``
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        arr.setflags(write=False)
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._wrap(np.zeros((rows, cols, 4)))

    @classmethod
    def eye(cls, n: int) -> "QMatrix":
        arr = np.zeros((n, n, 4))
        arr[np.arange(n), np.arange(n), 0] = 1.0
        return cls._wrap(arr)

    @classmethod
    def from_components(cls, w, x=None, y=None, z=None) -> "QMatrix":
        w = np.atleast_2d(np.asarray(w, dtype=float))
        parts = [w] + [
            np.zeros_like(w) if c is None else np.atleast_2d(np.asarray(c, dtype=float))
            for c in (x, y, z)
        ]
        shapes = {p.shape for p in parts}
        if len(shapes) != 1:
            raise DimensionError(f"component shapes differ: {sorted(shapes)}")
        return cls._wrap(np.stack(parts, axis=-1))

    @classmethod
    def from_real(cls, a) -> "QMatrix":
        return cls.from_components(a)

    @classmethod
    def from_quaternions(cls, rows: Sequence[Sequence[Quaternion]]) -> "QMatrix":
        arr = np.array([[q.to_array() for q in row] for row in rows], dtype=float)
        return cls(arr.reshape(len(rows), -1, 4))

    @classmethod
    def diag(cls, values: Iterable[float], rows: int | None = None, cols: int | None = None) -> "QMatrix":
        """Real diagonal matrix, optionally padded to ``rows x cols``."""
        v = np.asarray(list(values), dtype=float)
        rows = len(v) if rows is None else rows
        cols = len(v) if cols is None else cols
        arr = np.zeros((rows, cols, 4))
        k = min(len(v), rows, cols)
        arr[np.arange(k), np.arange(k), 0] = v[:k]
        return cls._wrap(arr)

    @classmethod
    def from_complex_pair(cls, c1: np.ndarray, c2: np.ndarray) -> "QMatrix":
        """Build ``C1 + C2 j`` with ``C1 = A0 + A1 i`` and ``C2 = A2 + A3 i``."""
        return cls._wrap(np.stack([c1.real, c1.imag, c2.real, c2.imag], axis=-1))

    # -- views --------------------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape[0], self._data.shape[1]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def w(self) -> np.ndarray:
        return self._data[..., 0]

    @property
    def x(self) -> np.ndarray:
        return self._data[..., 1]

    @property
    def y(self) -> np.ndarray:
        return self._data[..., 2]

    @property
    def z(self) -> np.ndarray:
        return self._data[..., 3]

    def complex_pair(self) -> tuple[np.ndarray, np.ndarray]:
        d = self._data
        return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]

    def entry(self, i: int, j: int) -> Quaternion:
        return Quaternion.from_array(self._data[i, j])

    def __getitem__(self, key) -> "QMatrix":
        if not isinstance(key, tuple):
            key = (key, slice(None))
        if len(key) != 2:
            raise IndexError("QMatrix takes at most two indices")
        norm = tuple(slice(k, k + 1) if isinstance(k, (int, np.integer)) else k for k in key)
        return QMatrix._wrap(self._data[norm].copy())

    def is_zero(self) -> bool:
        return not np.any(self._data)

    # -- algebra -------------------------------------------------------------

    @property
    def H(self) -> "QMatrix":
        return conj_transpose(self)

    @property
    def T(self) -> "QMatrix":
        return QMatrix._wrap(self._data.transpose(1, 0, 2).copy())

    def conj(self) -> "QMatrix":
        arr = self._data.copy()
        arr[..., 1:] *= -1.0
        return QMatrix._wrap(arr)

    def _check_same(self, other: "QMatrix", op: str) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"{op}: shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other, "add")
        return QMatrix._wrap(self._data + other._data)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other, "sub")
        return QMatrix._wrap(self._data - other._data)

    def __neg__(self):
        return QMatrix._wrap(-self._data)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix._wrap(self._data * float(other))
        if isinstance(other, Quaternion):
            return self.right_scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix._wrap(self._data * float(other))
        if isinstance(other, Quaternion):
            return self.left_scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return QMatrix._wrap(self._data / float(other))
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def left_scale(self, q: Quaternion) -> "QMatrix":
        """``q * A`` entrywise, quaternion on the left."""
        return QMatrix._wrap(_hamilton(q.to_array(), self._data))

    def right_scale(self, q: Quaternion) -> "QMatrix":
        """``A * q`` entrywise, quaternion on the right."""
        return QMatrix._wrap(_hamilton(self._data, q.to_array()))

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape})"


def mat_mul(A: QMatrix, B: QMatrix) -> QMatrix:
    """Quaternion matrix product ``A B``.

    Uses the split ``A = C1 + C2 j``; since ``j z = conj(z) j`` for complex
    ``z``, the product is ``(C1 D1 - C2 conj(D2)) + (C1 D2 + C2 conj(D1)) j``.
    """
    if A.cols != B.rows:
        raise DimensionError(f"mat_mul: inner dimensions {A.shape} x {B.shape} disagree")
    c1, c2 = A.complex_pair()
    d1, d2 = B.complex_pair()
    p1 = c1 @ d1 - c2 @ d2.conj()
    p2 = c1 @ d2 + c2 @ d1.conj()
    return QMatrix.from_complex_pair(p1, p2)


def conj_transpose(A: QMatrix) -> QMatrix:
    arr = A.data.transpose(1, 0, 2).copy()
    arr[..., 1:] *= -1.0
    return QMatrix._wrap(arr)


def frobenius_norm(A: QMatrix) -> float:
    d = A.data.ravel()
    return math.sqrt(float(d @ d))


def inner_real(A: QMatrix, B: QMatrix) -> float:
    """Real inner product ``(<A,B> + <B,A>) / 2``, i.e. the sum over the four
    real component matrices of their Euclidean inner products."""
    if A.shape != B.shape:
        raise DimensionError(f"inner_real: shapes {A.shape} and {B.shape} differ")
    return float(A.data.ravel() @ B.data.ravel())


def _check_hermitian_pd(Q: QMatrix, name: str = "Q") -> None:
    from .quat_linalg import complex_adjoint

    if Q.rows != Q.cols:
        raise DimensionError(f"{name} must be square, got {Q.shape}")
    scale = max(1.0, frobenius_norm(Q))
    if frobenius_norm(Q - Q.H) > 1e-10 * scale:
        raise PreconditionError(f"{name} is not Hermitian")
    lam_min = float(np.linalg.eigvalsh(complex_adjoint(Q))[0])
    if lam_min <= 1e-12 * scale:
        raise PreconditionError(f"{name} is not positive definite (min eigenvalue {lam_min:.3e})")


def weighted_norm_Q(A: QMatrix, Q: QMatrix) -> float:
    """``sqrt(trace(A* Q A))`` for Hermitian positive definite ``Q``."""
    if Q.cols != A.rows:
        raise DimensionError(f"weighted_norm_Q: weight {Q.shape} does not act on {A.shape}")
    _check_hermitian_pd(Q)
    return math.sqrt(max(inner_real(Q @ A, A), 0.0))


def hstack(blocks: Sequence[QMatrix]) -> QMatrix:
    rows = {b.rows for b in blocks}
    if len(rows) != 1:
        raise DimensionError(f"hstack: row counts differ {sorted(rows)}")
    return QMatrix._wrap(np.concatenate([b.data for b in blocks], axis=1))


def vstack(blocks: Sequence[QMatrix]) -> QMatrix:
    cols = {b.cols for b in blocks}
    if len(cols) != 1:
        raise DimensionError(f"vstack: column counts differ {sorted(cols)}")
    return QMatrix._wrap(np.concatenate([b.data for b in blocks], axis=0))


# -- QMAT text format ----------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def format_qmat(A: QMatrix) -> str:
    lines = [f"QMAT {A.rows} {A.cols}"]
    for q in A.data.reshape(-1, 4):
        lines.append(" ".join(_fmt(v) for v in q))
    return "\n".join(lines) + "\n"


def _parse_header(tokens: list[str], magic: str) -> tuple[int, int]:
    if len(tokens) < 3 or tokens[0] != magic:
        raise FormatError(f"missing '{magic} <rows> <cols>' header")
    try:
        rows, cols = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise FormatError(f"bad {magic} dimensions: {tokens[1:3]}") from exc
    if rows < 0 or cols < 0:
        raise FormatError(f"negative {magic} dimensions")
    return rows, cols


def _to_floats(tokens: list[str]) -> np.ndarray:
    try:
        return np.array([float(t) for t in tokens], dtype=float)
    except ValueError as exc:
        raise FormatError(f"non-numeric entry: {exc}") from exc


def parse_qmat(text: str) -> QMatrix:
    tokens = text.split()
    rows, cols = _parse_header(tokens, "QMAT")
    body = tokens[3:]
    if len(body) != 4 * rows * cols:
        raise FormatError(f"QMAT {rows}x{cols} needs {4 * rows * cols} values, found {len(body)}")
    return QMatrix._wrap(_to_floats(body).reshape(rows, cols, 4))


def read_qmat(path: str | os.PathLike) -> QMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_qmat(fh.read())


def write_qmat(path: str | os.PathLike | io.TextIOBase, A: QMatrix) -> None:
    text = format_qmat(A)
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
