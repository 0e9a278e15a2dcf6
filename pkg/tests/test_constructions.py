import itertools

import pytest

from qhol.constructions import (
    FreeProductElement,
    OreExtension,
    OrePoly,
    SmashAlgebra,
    SmashElement,
    freeprod_flatten,
    freeprod_mul,
    freeprod_norm,
    freeprod_unflatten,
    ore_vs_smash_check,
    qprod_algebra,
    qprod_block_qmatrix,
    qprod_domains_mul,
    qprod_to_qseries,
    sigma_derivation_failures,
    ug_derivation_extension,
    ug_extension,
    ug_from_xy,
    validate_sigma_derivation,
)
from qhol.errors import FactorMismatch, NonUnimodularGroupMode, NonUnivariateFactor
from qhol.free_series import FreeSeries
from qhol.qcalculus import QSeries
from qhol.qmatrix import QMatrix


def fp(dims, *blocks, c=1):
    return FreeProductElement(dims, {tuple(blocks): c})


def test_freeprod_mul_examples():
    d = (1, 1)
    assert freeprod_mul(fp(d, (1, 1)), fp(d, (2, 1))).terms == {((1, (1,)), (2, (1,))): 1}
    u = freeprod_mul(fp(d, (1, 1), (2, 1)), fp(d, (2, 1), (1, 1)))
    assert u.terms == {((1, (1,)), (2, (2,)), (1, (1,))): 1}
    v = fp(d, (1, 3), (2, 1), c=2j)
    assert FreeProductElement.one(d) * v == v and v * FreeProductElement.one(d) == v
    with pytest.raises(FactorMismatch):
        fp(d, (1, 1), (1, 2))


def test_freeprod_norm_examples():
    u = fp((1, 1), (1, 1), (2, 1))
    assert freeprod_norm(u, (0.5, 3), 2) == pytest.approx(0.5 * 3 * 4)
    assert freeprod_norm(FreeProductElement.one((1, 2)), (0.5, (1, 2)), 3) == 1
    w = fp((2, 1), (1, (1, 2)), (2, 1))
    assert freeprod_norm(w, ((0.5, 2), 3), 2) == pytest.approx(0.5 * 4 * 3 * 4)


def test_flatten_examples():
    d = (1, 1)
    assert freeprod_flatten(fp(d, (1, 2), (2, 1))).terms == {(1, 1, 2): 1}
    assert freeprod_flatten(FreeProductElement.one(d)) == FreeSeries.one(2)
    f = FreeSeries(3, {(1, 1, 3, 2, 2): 1, (): 2})
    assert freeprod_flatten(freeprod_unflatten(f)) == f
    with pytest.raises(NonUnivariateFactor):
        freeprod_flatten(fp((2,), (1, (1, 0))))


def test_ore_ug_relation():
    ext = ug_derivation_extension()
    x = OrePoly.z(ext)
    y = OrePoly.coefficient(ext, QSeries.generator(ext.q, 1))
    assert x * y == y * x + y
    ext = ug_extension()
    xs = ug_from_xy({(1, 0): 1})
    ys = ug_from_xy({(0, 1): 1})
    assert (ys * xs).xy_terms() == {(1, 1): 1, (0, 1): -1}


def test_ore_trivial_is_commutative():
    q = QMatrix.ones(1)
    ext = OreExtension.diagonal(q, [1])
    p = OrePoly.from_terms(ext, {(1, (2,)): 3, (0, (1,)): 1})
    r = OrePoly.from_terms(ext, {(2, (1,)): -1, (0, (0,)): 2j})
    assert p * r == r * p


def test_ore_matches_qmul():
    qv = 0.6 + 0.3j
    one = QMatrix.ones(1)
    ext = OreExtension.diagonal(one, [qv])
    q2 = QMatrix.single(2, 1 / qv)  # y z = q^{-1} z y, i.e. z y = q y z
    for a, b, c, d in itertools.product(range(4), repeat=4):
        ore = OrePoly.from_terms(ext, {(b, (a,)): 1}) * OrePoly.from_terms(ext, {(d, (c,)): 1})
        qs = QSeries.monomial(q2, (a, b)) * QSeries.monomial(q2, (c, d))
        expected = {(k[1], (k[0],)): v for k, v in qs.terms.items()}
        assert ore.terms() == pytest.approx(expected)


def test_validate_sigma_derivation():
    q = QMatrix.ones(1)
    y = QSeries.generator(q, 1)
    assert validate_sigma_derivation(OreExtension.diagonal(q, [3]), 4)
    assert validate_sigma_derivation(OreExtension(q, (y,), (y,)), 5)
    qv = 2.5
    ext = OreExtension(q, (y.scale(qv),), (QSeries.one(q),))
    assert validate_sigma_derivation(ext, 4)
    assert ext.delta_monomial((2,)) == QSeries(q, {(1,): 1 + qv})
    # a sigma that ignores the q-relation is caught
    q2 = QMatrix.single(2, 2)
    x1, x2 = QSeries.generator(q2, 1), QSeries.generator(q2, 2)
    assert sigma_derivation_failures(OreExtension(q2, (x2, x1)), 2)


def test_smash_examples():
    one = QMatrix.ones(1)
    alg = SmashAlgebra(one, one, ((2,),), "total")
    w = SmashElement.b_generator(alg, 1)
    u = SmashElement.a_generator(alg, 1)
    assert (w * u).terms == {((1,), (1,)): 2}
    a = SmashElement(alg, {((2,), (0,)): 3})
    b = SmashElement(alg, {((1,), (2,)): 1j})
    assert (a * b).terms == {((3,), (2,)): 3j}
    triv = SmashAlgebra(one, one, ((1,),), "total")
    p = SmashElement(triv, {((1,), (2,)): 1, ((0,), (1,)): 2})
    r = SmashElement(triv, {((2,), (1,)): -1})
    assert p * r == r * p


def test_ore_vs_smash():
    assert ore_vs_smash_check([1], 4)
    assert ore_vs_smash_check([2], 5)
    one = QMatrix.ones(1)
    ext = OreExtension.diagonal(one, [2])
    for a, b, c, d in itertools.product(range(3), repeat=4):
        prod = OrePoly.from_terms(ext, {(b, (a,)): 1}) * OrePoly.from_terms(ext, {(d, (c,)): 1})
        assert prod.terms() == {(b + d, (a + c,)): 2 ** (b * c)}


def test_qprod():
    qm = [[0.5, 2j], [1.5, -1]]
    alg = qprod_algebra(qm)
    for i, j in itertools.product((1, 2), repeat=2):
        z, w = SmashElement.a_generator(alg, i), SmashElement.b_generator(alg, j)
        assert not (qprod_domains_mul(z, w) - qm[i - 1][j - 1] * qprod_domains_mul(w, z))
    comm = qprod_algebra([[1, 1]])
    z, w1, w2 = (SmashElement.a_generator(comm, 1), SmashElement.b_generator(comm, 1), SmashElement.b_generator(comm, 2))
    assert z * w1 * w2 == w2 * z * w1
    qv = 0.7
    block = qprod_block_qmatrix([[qv, qv]])
    alg = qprod_algebra([[qv, qv]])
    for ka, kb, la, lb in itertools.product(range(3), [(0, 1), (2, 1)], range(3), [(1, 0), (1, 2)]):
        u = SmashElement(alg, {((ka,), kb): 1})
        v = SmashElement(alg, {((la,), lb): 1})
        lhs = qprod_to_qseries(u * v, block)
        rhs = qprod_to_qseries(u, block) * qprod_to_qseries(v, block)
        assert lhs == rhs
    with pytest.raises(NonUnimodularGroupMode):
        qprod_algebra([[2]], mode="group")
    g = qprod_algebra([[1j]], mode="group")
    w = SmashElement.b_generator(g, 1)
    assert w * w ** -1 == SmashElement.one(g)
