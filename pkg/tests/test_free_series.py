import numpy as np
import pytest

from qhol.errors import ArityMismatch, DimensionMismatch, GeneratorCountMismatch
from qhol.free_series import FreeSeries, abelianize, eval_commutative, eval_matrices, fmul, superpose
from qhol.qcalculus import QSeries
from qhol.qmatrix import QMatrix


def z(n, *w, c=1):
    return FreeSeries.word(n, w, c)


def test_fmul_examples():
    assert fmul(z(2, 1), z(2, 2)).terms == {(1, 2): 1}
    one = FreeSeries.one(1)
    assert ((one + z(1, 1)) * (one - z(1, 1))).terms == {(): 1, (1, 1): -1}
    assert (z(2, 1, 2) * z(2, 2, 1)).terms == {(1, 2, 2, 1): 1}
    with pytest.raises(GeneratorCountMismatch):
        fmul(z(2, 1), z(3, 1))


def test_abelianize_examples():
    assert abelianize(z(2, 1, 2) + z(2, 2, 1)).terms == {(1, 1): 2}
    assert not abelianize(z(2, 1, 2) - z(2, 2, 1))
    assert abelianize(FreeSeries(2, {(): 4j})).terms == {(0, 0): 4j}


def test_eval_matrices_examples(rng):
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [1, 0]], dtype=complex)
    assert np.allclose(eval_matrices(z(2, 1, 2), [a, b]), a @ b)
    assert np.allclose(eval_matrices(FreeSeries.one(2), [a, b]), np.eye(2))
    s = np.array([[2, 1], [1, 1]], dtype=complex)
    s_inv = np.linalg.inv(s)
    f = z(2, 1, 2, 2, c=3) + z(2, 2, 1) + FreeSeries(2, {(): 1 - 1j})
    lhs = eval_matrices(f, [s @ a @ s_inv, s @ b @ s_inv])
    assert np.allclose(lhs, s @ eval_matrices(f, [a, b]) @ s_inv)
    with pytest.raises(DimensionMismatch):
        eval_matrices(f, [a, np.eye(3)])


def test_superpose_examples():
    h = z(2, 2, 1) + FreeSeries(2, {(): 2})
    assert superpose(z(1, 1), [h]) == h
    assert superpose(z(1, 1, 1), [z(2, 1, 2)]).terms == {(1, 2, 1, 2): 1}
    with pytest.raises(ArityMismatch):
        superpose(z(2, 1), [h])


def test_superpose_is_associative(rng):
    from qhol.suites import random_free

    for _ in range(20):
        h = random_free(rng, 2, 2, 3)
        g = [random_free(rng, 2, 2, 2) for _ in range(2)]
        f = [random_free(rng, 2, 2, 2) for _ in range(2)]
        left = superpose(superpose(h, g), f)
        right = superpose(h, [superpose(gi, f) for gi in g])
        assert left == right


def test_eval_commutative():
    one = QMatrix.ones(2)
    assert eval_commutative(QSeries.monomial(one, (1, 1)), (2, 3)) == 6
    assert eval_commutative(QSeries(one, {(0, 0): 5}), (7, -1)) == 5


def test_calc_compat_on_diagonal_matrices():
    f = z(2, 1, 2, 1) + z(2, 2, c=2j) + FreeSeries(2, {(): -1})
    pts = [(0.5, 1j), (-1, 2), (0.1, 0.2)]
    mats = [np.diag([p[i] for p in pts]) for i in range(2)]
    expected = np.diag([eval_commutative(abelianize(f), p) for p in pts])
    assert np.allclose(eval_matrices(f, mats), expected)
