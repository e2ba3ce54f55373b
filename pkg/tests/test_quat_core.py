import io

import numpy as np
import pytest

from dqlsq.exceptions import DimensionError, FormatError, PreconditionError
from dqlsq.quat_core import (
    QMatrix,
    Quaternion,
    conj_transpose,
    format_qmat,
    frobenius_norm,
    hstack,
    inner_real,
    mat_mul,
    mul_qq,
    parse_qmat,
    read_qmat,
    vstack,
    weighted_norm_Q,
    write_qmat,
)

from conftest import rand_hpd, rand_q, real_embedding

ONE = Quaternion(1.0, 0, 0, 0)
I = Quaternion(0, 1.0, 0, 0)
J = Quaternion(0, 0, 1.0, 0)
K = Quaternion(0, 0, 0, 1.0)


def test_hamilton_table_exact():
    assert mul_qq(I, I) == -ONE
    assert mul_qq(J, J) == -ONE
    assert mul_qq(K, K) == -ONE
    assert mul_qq(I, J) == K
    assert mul_qq(J, K) == I
    assert mul_qq(K, I) == J
    assert mul_qq(J, I) == -K
    assert mul_qq(K, J) == -I
    assert mul_qq(I, K) == -J
    assert mul_qq(mul_qq(I, J), K) == -ONE


def test_mul_examples():
    q = Quaternion(2, 3, -1, 0.5)
    assert mul_qq(q, ONE) == q
    assert mul_qq(ONE, q) == q
    assert mul_qq(ONE + I, ONE + J) == Quaternion(1, 1, 1, 1)


def test_mul_distributes_and_conj_reverses(rng):
    for _ in range(50):
        a, b, c = (Quaternion.from_array(rng.standard_normal(4)) for _ in range(3))
        lhs = mul_qq(a, b + c).to_array()
        rhs = (mul_qq(a, b) + mul_qq(a, c)).to_array()
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)
        np.testing.assert_allclose(mul_qq(a, b).conj().to_array(),
                                   mul_qq(b.conj(), a.conj()).to_array(), atol=1e-12)
        assert a.conj().conj() == a
        assert abs(a) ** 2 == pytest.approx(a.norm_sq())


def test_mat_mul_identity_and_units(rng):
    B = rand_q(rng, 3, 4)
    assert np.allclose((QMatrix.eye(3) @ B).data, B.data, atol=0)
    Ai = QMatrix(np.array([[[0, 1.0, 0, 0]]]))
    Aj = QMatrix(np.array([[[0, 0, 1.0, 0]]]))
    assert mat_mul(Ai, Aj).entry(0, 0) == K
    assert mat_mul(Aj, Ai).entry(0, 0) == -K


def test_mat_mul_entrywise_oracle(rng):
    for _ in range(10):
        A, B = rand_q(rng, 4, 3), rand_q(rng, 3, 2)
        got = mat_mul(A, B)
        for i in range(4):
            for j in range(2):
                acc = Quaternion()
                for k in range(3):
                    acc = acc + mul_qq(A.entry(i, k), B.entry(k, j))
                np.testing.assert_allclose(got.entry(i, j).to_array(), acc.to_array(), atol=1e-12)


def test_mat_mul_real_block_oracle(rng):
    A, B = rand_q(rng, 4, 3), rand_q(rng, 3, 2)
    np.testing.assert_allclose(real_embedding(A @ B), real_embedding(A) @ real_embedding(B), atol=1e-12)


def test_mat_mul_dimension_error(rng):
    with pytest.raises(DimensionError):
        mat_mul(rand_q(rng, 2, 3), rand_q(rng, 2, 3))


def test_conj_transpose(rng):
    R = QMatrix.diag([1.0, -2.0, 5.0])
    assert conj_transpose(R) == R
    Ai = QMatrix(np.array([[[0, 1.0, 0, 0]]]))
    assert conj_transpose(Ai).entry(0, 0) == -I
    A, B = rand_q(rng, 3, 2), rand_q(rng, 2, 4)
    np.testing.assert_allclose((A @ B).H.data, (B.H @ A.H).data, atol=1e-14)
    assert A.H.H == A
    assert A.H.shape == (2, 3)
    assert A.H.entry(1, 2) == A.entry(2, 1).conj()


def test_frobenius_examples(rng):
    assert frobenius_norm(QMatrix.zeros(3, 2)) == 0.0
    assert frobenius_norm(QMatrix(np.ones((1, 1, 4)))) == pytest.approx(2.0, abs=1e-15)
    A = rand_q(rng, 5, 3)
    comps = sum(np.linalg.norm(c) ** 2 for c in (A.w, A.x, A.y, A.z))
    assert frobenius_norm(A) == pytest.approx(np.sqrt(comps), rel=1e-14)
    assert frobenius_norm(A) ** 2 == pytest.approx(
        sum(abs(A.entry(i, j)) ** 2 for i in range(5) for j in range(3)), rel=1e-13)


def test_inner_real_examples(rng):
    A = rand_q(rng, 3, 3)
    assert inner_real(A, A) == pytest.approx(frobenius_norm(A) ** 2, rel=1e-14)
    Qi = QMatrix(np.array([[[0, 1.0, 0, 0]]]))
    Qj = QMatrix(np.array([[[0, 0, 1.0, 0]]]))
    assert inner_real(Qi, Qj) == 0.0
    a = QMatrix(np.array([[[1.0, 2.0, 0, 0]]]))
    b = QMatrix(np.array([[[3.0, -1.0, 0, 0]]]))
    assert inner_real(a, b) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DimensionError):
        inner_real(A, rand_q(rng, 3, 2))


def test_inner_real_is_half_symmetrised_trace(rng):
    # <U,V>_R = Re trace(V* U)
    for _ in range(20):
        U, V = rand_q(rng, 4, 3), rand_q(rng, 4, 3)
        tr = sum((V.H @ U).entry(i, i).w for i in range(3))
        assert inner_real(U, V) == pytest.approx(tr, rel=1e-12, abs=1e-12)
        assert inner_real(U, V) == pytest.approx(inner_real(V, U), rel=1e-14)


def test_cauchy_schwarz_and_submultiplicativity(rng):
    for _ in range(100):
        m, n, p = rng.integers(1, 6, size=3)
        A, B = rand_q(rng, m, n), rand_q(rng, m, n)
        assert abs(inner_real(A, B)) <= frobenius_norm(A) * frobenius_norm(B) + 1e-12
        C = rand_q(rng, n, p)
        assert frobenius_norm(A @ C) <= frobenius_norm(A) * frobenius_norm(C) + 1e-10


def test_weighted_norm_examples(rng):
    A = rand_q(rng, 4, 2)
    assert weighted_norm_Q(A, QMatrix.eye(4)) == pytest.approx(frobenius_norm(A), rel=1e-13)
    assert weighted_norm_Q(QMatrix.eye(1), QMatrix.eye(1) * 4.0) == pytest.approx(2.0, abs=1e-14)


def test_weighted_norm_is_norm(rng):
    Q = rand_hpd(rng, 4)
    for _ in range(20):
        A, B = rand_q(rng, 4, 3), rand_q(rng, 4, 3)
        a = float(rng.standard_normal())
        assert weighted_norm_Q(A * a, Q) == pytest.approx(abs(a) * weighted_norm_Q(A, Q), rel=1e-12)
        assert weighted_norm_Q(A + B, Q) <= weighted_norm_Q(A, Q) + weighted_norm_Q(B, Q) + 1e-12
        assert weighted_norm_Q(A, Q) > 0
    assert weighted_norm_Q(QMatrix.zeros(4, 3), Q) == 0.0


def test_pythagoras_identity(rng):
    for trial in range(100):
        m, n = rng.integers(1, 6, size=2)
        U, V, W = (rand_q(rng, m, n) for _ in range(3))
        if trial % 2:
            Q = QMatrix.diag(rng.uniform(0.5, 3.0, size=m))
        else:
            Q = rand_hpd(rng, m)
        lhs = weighted_norm_Q(U - V, Q) ** 2 - weighted_norm_Q(W - V, Q) ** 2 - weighted_norm_Q(U - W, Q) ** 2
        rhs = 2 * inner_real(U - W, Q @ (W - V))
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_weighted_norm_rejects_bad_weights(rng):
    A = rand_q(rng, 2, 2)
    with pytest.raises(PreconditionError):
        weighted_norm_Q(A, QMatrix.diag([1.0, -1.0]))
    with pytest.raises(PreconditionError):
        weighted_norm_Q(A, rand_q(rng, 2, 2))
    with pytest.raises(DimensionError):
        weighted_norm_Q(A, QMatrix.eye(3))


def test_stack_and_slicing(rng):
    A, B = rand_q(rng, 2, 3), rand_q(rng, 2, 1)
    H = hstack([A, B])
    assert H.shape == (2, 4)
    assert H[:, :3] == A
    V = vstack([A, rand_q(rng, 1, 3)])
    assert V.shape == (3, 3) and V[:2] == A
    with pytest.raises(DimensionError):
        hstack([A, rand_q(rng, 3, 1)])


def test_qmatrix_immutable(rng):
    A = rand_q(rng, 2, 2)
    with pytest.raises(ValueError):
        A.data[0, 0, 0] = 1.0


def test_qmat_round_trip(rng, tmp_path):
    A = rand_q(rng, 3, 4)
    assert parse_qmat(format_qmat(A)) == A
    write_qmat(tmp_path / "a.qmat", A)
    assert read_qmat(tmp_path / "a.qmat") == A
    buf = io.StringIO()
    write_qmat(buf, A)
    assert buf.getvalue().startswith("QMAT 3 4\n")


def test_qmat_parser_whitespace_and_errors():
    A = parse_qmat("QMAT 1 2\n 1  2\t3 4\n\n5 6 7 8  \n")
    assert A.entry(0, 1) == Quaternion(5, 6, 7, 8)
    assert parse_qmat("QMAT 1 1 1 0 0 0").entry(0, 0) == ONE
    for bad in ("", "QMAT 1 1\n1 2 3\n", "DQMAT 1 1\n1 2 3 4\n", "QMAT 1 1\n1 2 x 4\n", "QMAT a 1\n"):
        with pytest.raises(FormatError):
            parse_qmat(bad)
