"""Smash products ``A #_S B`` for diagonal semigroup actions, and q-products of domains."""
from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass
from typing import Mapping, Sequence

from .._sparse import Sparse, prune
from ..errors import GradingUndefined, IncompatibleSpecs, NonUnimodularGroupMode
from ..qcalculus import QSeries, bicharacter
from ..qmatrix import QMatrix
from .ore import OreExtension, OrePoly

Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class SmashAlgebra:
    """Data fixing ``A #_S B``.

    ``A`` and ``B`` are q-polynomial (or Laurent) algebras given by their q
    matrices. ``grading`` maps a B-exponent to its degree in ``S``:
    ``"multidegree"`` (``S = Z_+^p`` or ``Z^p``, the exponent itself) or
    ``"total"`` (``S = Z_+`` or ``Z``, the exponent sum). Generator ``e_j`` of
    ``S`` acts on ``A`` by ``x_i -> action[j][i] * x_i``.
    """

    a_q: QMatrix
    b_q: QMatrix
    action: tuple[tuple[complex, ...], ...]
    grading: str = "multidegree"
    a_laurent: bool = False
    b_laurent: bool = False

    def __post_init__(self):
        action = tuple(tuple(complex(x) for x in row) for row in self.action)
        object.__setattr__(self, "action", action)
        if self.grading not in ("multidegree", "total"):
            raise GradingUndefined(f"unknown grading {self.grading!r}")
        rank = self.b_q.n if self.grading == "multidegree" else 1
        if len(action) != rank or any(len(row) != self.a_q.n for row in action):
            raise GradingUndefined(f"action must be a {rank}x{self.a_q.n} table of scalings")
        if self.b_laurent and any(x == 0 for row in action for x in row):
            raise GradingUndefined("negative degrees need invertible scalings")

    def degree(self, kb: Sequence[int]) -> tuple[int, ...]:
        if len(kb) != self.b_q.n:
            raise GradingUndefined(f"B exponent {tuple(kb)} has the wrong length")
        return tuple(kb) if self.grading == "multidegree" else (sum(kb),)

    def act(self, s: Sequence[int], ka: Sequence[int]) -> complex:
        """Scalar by which ``s`` multiplies the monomial ``x^ka`` of ``A``."""
        c = complex(1)
        for j, sj in enumerate(s):
            if not sj:
                continue
            for i, e in enumerate(ka):
                if e:
                    c *= self.action[j][i] ** (sj * e)
        return c


class SmashElement(Sparse):
    """``sum c (x^ka (x) y^kb)`` with the A-part written on the left."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: SmashAlgebra, terms: Mapping | None = None):
        self.alg = alg
        clean: dict[Key, complex] = {}
        for (ka, kb), c in (terms or {}).items():
            ka, kb = tuple(int(x) for x in ka), tuple(int(x) for x in kb)
            if len(ka) != alg.a_q.n or len(kb) != alg.b_q.n:
                raise GradingUndefined(f"term ({ka}, {kb}) does not match the algebra shape")
            if (not alg.a_laurent and min(ka, default=0) < 0) or (not alg.b_laurent and min(kb, default=0) < 0):
                raise GradingUndefined(f"negative exponent in ({ka}, {kb}) outside Laurent mode")
            clean[(ka, kb)] = clean.get((ka, kb), 0) + complex(c)
        self.terms = prune(clean)

    @classmethod
    def one(cls, alg: SmashAlgebra) -> "SmashElement":
        return cls(alg, {((0,) * alg.a_q.n, (0,) * alg.b_q.n): 1})

    @classmethod
    def from_a(cls, alg: SmashAlgebra, a: QSeries) -> "SmashElement":
        zero = (0,) * alg.b_q.n
        return cls(alg, {(k, zero): c for k, c in a.terms.items()})

    @classmethod
    def from_b(cls, alg: SmashAlgebra, b: QSeries) -> "SmashElement":
        zero = (0,) * alg.a_q.n
        return cls(alg, {(zero, k): c for k, c in b.terms.items()})

    @classmethod
    def a_generator(cls, alg: SmashAlgebra, i: int) -> "SmashElement":
        return cls.from_a(alg, QSeries.generator(alg.a_q, i, alg.a_laurent))

    @classmethod
    def b_generator(cls, alg: SmashAlgebra, j: int) -> "SmashElement":
        return cls.from_b(alg, QSeries.generator(alg.b_q, j, alg.b_laurent))

    def _unit_key(self):
        return ((0,) * self.alg.a_q.n, (0,) * self.alg.b_q.n)

    def _with(self, terms):
        return SmashElement(self.alg, terms)

    def _same_space(self, other):
        if not isinstance(other, SmashElement):
            raise TypeError(f"expected SmashElement, got {type(other).__name__}")
        if other.alg != self.alg:
            raise IncompatibleSpecs("smash elements over different algebras")

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return smash_mul(self, other)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (ka, kb), c = next(iter(self.terms.items()))
            inv = SmashElement(self.alg, {(tuple(-x for x in ka), tuple(-x for x in kb)): 1})
            # rescale so that inv * self == 1
            prod = smash_mul(inv, SmashElement(self.alg, {(ka, kb): c}))
            return inv.scale(1 / next(iter(prod.terms.values()))) ** (-e)
        out = SmashElement.one(self.alg)
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        return f"SmashElement({self.terms!r})"


def smash_mul(u: SmashElement, v: SmashElement) -> SmashElement:
    """``(a (x) b)(a' (x) b') = a (s . a') (x) b b'`` with ``s`` the degree of ``b``."""
    u._same_space(v)
    alg = u.alg
    out: dict[Key, complex] = {}
    for (ka, kb), c in u.terms.items():
        s = alg.degree(kb)
        for (la, lb), d in v.terms.items():
            coef = c * d * alg.act(s, la) * bicharacter(alg.a_q, ka, la) * bicharacter(alg.b_q, kb, lb)
            key = (tuple(x + y for x, y in zip(ka, la)), tuple(x + y for x, y in zip(kb, lb)))
            out[key] = out.get(key, 0) + coef
    return SmashElement(alg, out)


def ore_vs_smash_check(sigma_diag: Sequence[complex], degree_bound: int, rtol: float = 1e-9) -> bool:
    """Compare ``A[z; sigma]`` with ``A #_{Z_+} C[z]`` on every monomial pair up to ``degree_bound``.

    ``A = C[u_1..u_m]`` with ``sigma(u_i) = sigma_diag[i-1] u_i``; ``a z^k`` is
    matched with ``a (x) z^k``.
    """
    return not ore_vs_smash_mismatches(sigma_diag, degree_bound, rtol)


def ore_vs_smash_mismatches(sigma_diag: Sequence[complex], degree_bound: int, rtol: float = 1e-9) -> list:
    m = len(sigma_diag)
    aq = QMatrix.ones(m)
    ext = OreExtension.diagonal(aq, sigma_diag)
    alg = SmashAlgebra(aq, QMatrix.ones(1), (tuple(sigma_diag),), grading="total")
    monos = [
        (ka, b)
        for ka in itertools.product(range(degree_bound + 1), repeat=m)
        for b in range(degree_bound + 1)
        if sum(ka) + b <= degree_bound
    ]
    bad = []
    for (ka, b), (la, d) in itertools.product(monos, repeat=2):
        ore = OrePoly.from_terms(ext, {(b, ka): 1}) * OrePoly.from_terms(ext, {(d, la): 1})
        sm = SmashElement(alg, {(ka, (b,)): 1}) * SmashElement(alg, {(la, (d,)): 1})
        mapped = {(kb[0], k): c for (k, kb), c in sm.terms.items()}
        ore_terms = ore.terms()
        for key in mapped.keys() | ore_terms.keys():
            x, y = mapped.get(key, 0), ore_terms.get(key, 0)
            if abs(x - y) > rtol * max(abs(x), abs(y), 1e-300):
                bad.append(((ka, b), (la, d), key, x, y))
    return bad


def qprod_algebra(qm: Sequence[Sequence[complex]], mode: str = "semigroup") -> SmashAlgebra:
    """``O(D_1 x_q D_2)`` at polynomial level: ``z_i w_j = q[i][j] w_j z_i``.

    ``qm`` is the ``m x n`` table of constants. ``S = Z_+^n`` acts on
    ``C[z]`` with ``e_j . z_i = z_i / q[i][j]``. In ``group`` mode ``S = Z^n``,
    both sides are Laurent and every ``|q_ij|`` must be 1.
    """
    qm = [[complex(x) for x in row] for row in qm]
    m, n = len(qm), len(qm[0]) if qm else 0
    if any(len(row) != n for row in qm):
        raise IncompatibleSpecs("q table must be rectangular")
    if mode not in ("semigroup", "group"):
        raise IncompatibleSpecs(f"unknown mode {mode!r}")
    if any(x == 0 for row in qm for x in row):
        raise IncompatibleSpecs("q entries must be nonzero")
    if mode == "group" and any(abs(abs(x) - 1) > 1e-9 for row in qm for x in row):
        raise NonUnimodularGroupMode("group mode needs |q_ij| = 1 for all i, j")
    action = tuple(tuple(1 / qm[i][j] for i in range(m)) for j in range(n))
    laurent = mode == "group"
    return SmashAlgebra(QMatrix.ones(m), QMatrix.ones(n), action, "multidegree", laurent, laurent)


def qprod_domains_mul(a: SmashElement, b: SmashElement) -> SmashElement:
    alg = a.alg
    if not (alg.a_q.is_commutative(0) and alg.b_q.is_commutative(0) and alg.grading == "multidegree"):
        raise IncompatibleSpecs("not a q-product algebra; build it with qprod_algebra")
    return smash_mul(a, b)


def qprod_block_qmatrix(qm: Sequence[Sequence[complex]]) -> QMatrix:
    """The ``(m+n)``-variable q matrix with ``q[z_i, w_j] = qm[i][j]`` and commuting blocks."""
    m, n = len(qm), len(qm[0])
    return QMatrix.from_upper(m + n, {(i + 1, m + j + 1): qm[i][j] for i in range(m) for j in range(n)})


def qprod_to_qseries(u: SmashElement, q: QMatrix | None = None) -> QSeries:
    """Read ``z^ka (x) w^kb`` as the ordered monomial ``x^(ka, kb)``."""
    alg = u.alg
    if q is None:
        q = QMatrix.ones(alg.a_q.n + alg.b_q.n)
    return QSeries(q, {ka + kb: c for (ka, kb), c in u.terms.items()}, alg.a_laurent or alg.b_laurent)
