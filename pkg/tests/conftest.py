import numpy as np
import pytest

from dqlsq.dual_quat import DualNumber
from dqlsq.quat_core import QMatrix

ACCEPTANCE_LINES = []


def rand_q(rng, m, n, scale=1.0):
    return QMatrix(scale * rng.standard_normal((m, n, 4)))


def rand_low_rank(rng, m, n, r):
    return rand_q(rng, m, r) @ rand_q(rng, r, n)


def rand_hpd(rng, n):
    B = rand_q(rng, n, n)
    return B.H @ B + QMatrix.eye(n)


def left_mult_block(q):
    """4x4 real matrix of v -> q * v (independent of the complex adjoint)."""
    w, x, y, z = q
    return np.array([
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ])


_BASIS = np.stack([left_mult_block(e) for e in np.eye(4)])


def real_embedding(A):
    """Real 4m x 4n block matrix of left multiplications; accepts a QMatrix or
    a stacked ``(..., m, n, 4)`` array."""
    data = A.data if hasattr(A, "data") and not isinstance(A, np.ndarray) else np.asarray(A)
    *lead, m, n, _ = data.shape
    R = np.einsum("...ijc,cab->...iajb", data, _BASIS)
    return R.reshape(*lead, 4 * m, 4 * n)


def real_singular_values(A):
    """Quaternion singular values via the real embedding (each appears 4 times)."""
    s = np.linalg.svd(real_embedding(A), compute_uv=False)
    return s[..., 0::4]


def dual_le(a: DualNumber, b: DualNumber, tol=1e-12) -> bool:
    """``a <= b`` in the lexicographic order, treating standard parts within
    ``tol`` (relative) as tied."""
    scale = max(1.0, abs(a.st), abs(b.st))
    if a.st < b.st - tol * scale:
        return True
    if abs(a.st - b.st) <= tol * scale:
        return a.inf <= b.inf + tol * max(1.0, abs(a.inf), abs(b.inf))
    return False


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
