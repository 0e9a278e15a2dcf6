import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhol.errors import CapExceeded, NegativeExponentInPolydiskMode, QMatrixMismatch
from qhol.free_series import FreeSeries
from qhol.projection import project_pi, section_kappa
from qhol.qcalculus import QSeries, bicharacter, normal_form_word, qmul, weight_wq, weight_wq_method
from qhol.qmatrix import QMatrix, validate_qmatrix
from qhol.words import delta, minimizing_words


def test_validate_qmatrix():
    assert validate_qmatrix(QMatrix.ones(3), "general")
    assert validate_qmatrix(QMatrix.ones(3), "unimodular")
    q = QMatrix.from_rows([[1, 2], [0.5, 1]])
    assert validate_qmatrix(q, "general")
    assert not validate_qmatrix(q, "unimodular")
    bad = validate_qmatrix(QMatrix.from_rows([[1, 2], [2, 1]]))
    assert not bad and bad.problems


def test_qmatrix_from_upper_sets_inverses():
    q = QMatrix.from_upper(3, {(1, 2): 2j, (2, 3): 0.25})
    assert q[2, 1] == pytest.approx(1 / 2j)
    assert q[3, 2] == 4
    assert q[1, 3] == 1


def test_weight_examples():
    for qv in (1, 2, 3j, -1.5):
        q = QMatrix.single(3, qv)
        for k in [(0, 0, 0), (2, 1, 3), (4, 0, 1)]:
            assert weight_wq(q, k) == 1
    q = QMatrix.single(2, 0.5)
    value, method = weight_wq_method(q, (2, 3))
    assert value == pytest.approx(1 / 64, rel=1e-15)
    assert method.startswith("closed-form")


def test_mixed_weight_uses_brute_force():
    q = QMatrix.from_upper(3, {(1, 2): 0.5, (1, 3): 2.0, (2, 3): 0.3j})
    for k in itertools.product(range(3), repeat=3):
        value, method = weight_wq_method(q, k)
        assert method == "brute-force"
        assert value == pytest.approx(minimizing_words(q, k).weight, rel=1e-12)
    with pytest.raises(CapExceeded):
        weight_wq(q, (6, 6, 6), cap=100)


def test_normal_form_word(q_half):
    q = QMatrix.single(2, 0.3 - 0.2j)
    c, k = normal_form_word(q, (2, 1))
    assert k == (1, 1) and c == pytest.approx(1 / q[1, 2])
    assert normal_form_word(q, (1, 1, 2)) == (1, (2, 1))
    c, k = normal_form_word(q, (2, 1, 1))
    assert k == (2, 1) and c == pytest.approx(q[1, 2] ** -2)


def test_qmul_examples():
    q = QMatrix.single(2, 0.5 + 0.5j)
    x1, x2 = QSeries.generator(q, 1), QSeries.generator(q, 2)
    assert (x1 * x2).terms == {(1, 1): 1}
    assert (x2 * x1).terms == pytest.approx({(1, 1): q[2, 1]})
    assert x1 * x2 == q[1, 2] * (x2 * x1)
    one = QSeries.one(q)
    assert ((one + x1) * (one + x1)).terms == {(0, 0): 1, (1, 0): 2, (2, 0): 1}
    uq = QMatrix.single(2, 1j)
    a = QSeries.monomial(uq, (1, 0), laurent=True)
    b = QSeries.monomial(uq, (0, -1), laurent=True)
    (k, c), = (a * b).terms.items()
    assert k == (1, -1) and abs(c) == pytest.approx(1)


def test_qmul_errors():
    a = QSeries.generator(QMatrix.single(2, 2), 1)
    b = QSeries.generator(QMatrix.single(2, 3), 1)
    with pytest.raises(QMatrixMismatch):
        qmul(a, b)
    with pytest.raises(NegativeExponentInPolydiskMode):
        QSeries(QMatrix.ones(2), {(-1, 0): 1})


def test_bicharacter_matches_word_oracle():
    q = QMatrix.from_upper(3, {(1, 2): 0.5j, (1, 3): 3.0, (2, 3): -0.25 + 1j})
    exps = [k for k in itertools.product(range(3), repeat=3)]
    for k, l in itertools.product(exps, repeat=2):
        c, key = normal_form_word(q, delta(k) + delta(l))
        assert key == tuple(a + b for a, b in zip(k, l))
        assert bicharacter(q, k, l) == pytest.approx(c, rel=1e-12)


exps = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=150, deadline=None)
@given(exps, exps, exps)
def test_laurent_associativity(k, l, m):
    q = QMatrix.from_upper(3, {(1, 2): 1j, (1, 3): -1, (2, 3): complex(0.6, 0.8)})
    a, b, c = (QSeries.monomial(q, e, laurent=True) for e in (k, l, m))
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == QSeries.one(q, True)


def test_project_pi_examples():
    q = QMatrix.from_upper(2, {(1, 2): 0.7 + 0.1j})
    rel = FreeSeries(2, {(1, 2): 1, (2, 1): -q[1, 2]})
    assert not project_pi(rel, q)
    assert project_pi(FreeSeries(2, {(2, 2, 2): 1}), q).terms == {(0, 3): 1}


def test_section_kappa_examples(q_half):
    a = QSeries.monomial(q_half, (1, 1))
    assert section_kappa(a).terms == pytest.approx({(2, 1): 0.5})
    one = QMatrix.ones(3)
    assert section_kappa(QSeries.monomial(one, (2, 0, 1))).terms == {(1, 1, 3): 1}
    assert section_kappa(QSeries(q_half, {(0, 0): 3 - 1j})).terms == {(): 3 - 1j}
    with pytest.raises(NegativeExponentInPolydiskMode):
        section_kappa(QSeries.monomial(QMatrix.single(2, 1j), (-1, 0), laurent=True))


def test_pi_kappa_identity_on_monomials():
    q = QMatrix.from_upper(3, {(1, 2): 0.5, (1, 3): 2.0j, (2, 3): 0.8})
    for k in itertools.product(range(4), repeat=3):
        a = QSeries.monomial(q, k, 2 - 1j)
        assert project_pi(section_kappa(a), q) == a
