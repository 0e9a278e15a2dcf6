import math

import pytest

from qhol.constructions import ug_from_xy
from qhol.errors import BadParams, NonpositiveRho
from qhol.free_series import FreeSeries
from qhol.qcalculus import QSeries
from qhol.qmatrix import QMatrix
from qhol.seminorms import (
    NormParams,
    annulus_monomial,
    check_equicontinuity,
    check_kappa_bound,
    check_submultiplicative,
    check_taylor_comparison,
    kappa_bound_sides,
    norm_free_entire,
    norm_free_polydisk,
    norm_q_polyannulus,
    norm_q_polydisk,
    norm_ug,
    taylor_sides,
)


def test_free_entire():
    assert norm_free_entire(FreeSeries.word(2, (1, 2)), 2) == 4
    assert norm_free_entire(FreeSeries.one(3), 0.1) == 1
    with pytest.raises(NonpositiveRho):
        norm_free_entire(FreeSeries.one(1), 0)


def test_free_polydisk():
    f = FreeSeries.word(2, (1, 2, 1))
    assert norm_free_polydisk(f, (1 / 2, 1 / 3), 2) == pytest.approx(2 / 3)
    assert norm_free_polydisk(FreeSeries.one(2), (0.3, 0.3), 5) == 1
    with pytest.raises(BadParams):
        norm_free_polydisk(f, (1, 1), 0.5)
    with pytest.raises(BadParams):
        norm_free_polydisk(f, (1, 1), 2, R=(0.5, math.inf))


def test_q_polydisk(q_half):
    assert norm_q_polydisk(QSeries.monomial(q_half, (1, 1)), (1, 1)) == pytest.approx(0.5)
    one = QMatrix.ones(2)
    a = QSeries(one, {(1, 0): 2, (2, 3): -1j})
    assert norm_q_polydisk(a, (0.5, 2)) == pytest.approx(2 * 0.5 + 0.25 * 8)


def test_q_polyannulus():
    uq = QMatrix.single(2, 1j)
    a = QSeries.monomial(uq, (1, -2), laurent=True)
    assert norm_q_polyannulus(a, (0.5, 0.5), (2, 2)) == pytest.approx(8)
    assert norm_q_polyannulus(QSeries.one(uq, True), (0.5, 0.5), (2, 2)) == 1
    assert annulus_monomial((1, -2), (0.5, 0.5), (2, 2)) == 8
    with pytest.raises(BadParams):
        norm_q_polyannulus(QSeries.monomial(QMatrix.single(2, 2), (1, 0), laurent=True), (0.5, 0.5), (2, 2))


def test_ug_norm():
    a = {(2, 3): 1, (1, 1): 2}
    for t in (0.5, 1, 3):
        assert norm_ug(a, 2, t) == pytest.approx(2 * t)
        assert norm_ug(a, 3, t) == pytest.approx(t * t + 2 * t)
        assert norm_ug(ug_from_xy(a), 3, t) == pytest.approx(t * t + 2 * t)
    assert norm_ug({}, 4, 2) == 0


def test_submultiplicative_examples():
    for params, one in [
        (NormParams("free_entire", rho=0.7), FreeSeries.one(2)),
        (NormParams("free_polydisk", rho=(0.7, 2), tau=3), FreeSeries.one(2)),
        (NormParams("q_polydisk", rho=(0.7, 2)), QSeries.one(QMatrix.single(2, 0.5))),
        (NormParams("q_polyannulus", rho=(0.5, 0.5), tau=(2, 3)), QSeries.one(QMatrix.single(2, 1j), True)),
    ]:
        assert check_submultiplicative(params.variant, params, one, one) == (True, 1.0)
    tau = 3.0
    params = NormParams("free_polydisk", rho=(0.7, 2), tau=tau)
    holds, ratio = check_submultiplicative("free_polydisk", params, FreeSeries.word(2, (1, 2)), FreeSeries.word(2, (2, 1)))
    assert holds and ratio == pytest.approx(1 / tau)


def test_kappa_bound(q_half):
    lhs, rhs = kappa_bound_sides(QSeries.monomial(q_half, (1, 1)), q_half, (1, 1), 2)
    assert lhs == pytest.approx(2) and rhs == pytest.approx(2)
    for tau in (1, 2.5):
        lhs, rhs = kappa_bound_sides(QSeries(q_half, {(0, 0): 3}), q_half, (0.4, 2), tau)
        assert lhs == 3 and rhs == pytest.approx(3 * tau**2)
    uq = QMatrix.single(3, 1j)
    for k in [(1, 2, 0), (2, 2, 2), (0, 1, 4)]:
        assert check_kappa_bound(QSeries.monomial(uq, k), uq, (0.5, 1, 2), 1.7)


def test_taylor_comparison():
    rho, tau = (0.3, 0.9), 2.0
    lhs, rhs = taylor_sides((1, 1, 1), rho, tau)
    assert lhs == pytest.approx(tau * 0.3**3) and rhs == pytest.approx(lhs)
    lhs, rhs = taylor_sides((), rho, tau)
    assert (lhs, rhs) == (1, tau)
    assert check_taylor_comparison((2, 1, 2, 1), rho, tau, R=(1.0, math.inf))
    with pytest.raises(BadParams):
        check_taylor_comparison((1,), rho, tau, R=(1.0, 5.0))


def test_equicontinuity_modes():
    rep = check_equicontinuity([2, 1j], 5)
    assert rep.holds and not rep.isometric and rep.max_ratio == 1
    rep = check_equicontinuity([1j, -1], 5, mode="group")
    assert rep.holds and rep.isometric
    rep = check_equicontinuity([0.5], 40, rho=0.99, r=0.995)
    assert not rep.holds
    k = rep.first_exceeding(1e6)
    assert k is not None and k <= 40
    assert rep.growth[k - 1] == pytest.approx((0.99 / (0.5 * 0.995)) ** k)
    assert rep.growth[k - 2] <= 1e6
