"""q-commuting polynomial and Laurent algebras, weights and normal forms."""
from __future__ import annotations

import numbers
from functools import lru_cache
from typing import Mapping, Sequence

from ._sparse import Sparse, prune
from .errors import (
    BadParams,
    NegativeExponent,
    NegativeExponentInPolydiskMode,
    QMatrixMismatch,
)
from .qmatrix import QMatrix, QValidation, validate_qmatrix
from .words import (
    DEFAULT_CAP,
    closed_form_weight,
    minimizing_words,
)

__all__ = [
    "QMatrix",
    "QSeries",
    "QValidation",
    "bicharacter",
    "normal_form_word",
    "qmul",
    "validate_qmatrix",
    "weight_wq",
    "weight_wq_method",
]

Exponent = tuple[int, ...]


class QSeries(Sparse):
    """Finite sum of ordered monomials ``c_k x^k = c_k x_1^{k_1} ... x_n^{k_n}``.

    With ``laurent=True`` exponents range over all integers; otherwise they
    must be nonnegative.
    """

    __slots__ = ("q", "terms", "laurent")

    def __init__(self, q: QMatrix, terms: Mapping[Sequence[int], complex] | None = None, laurent: bool = False):
        self.q = q
        self.laurent = bool(laurent)
        clean = {}
        for k, c in (terms or {}).items():
            k = tuple(int(x) for x in k)
            if len(k) != q.n:
                raise ValueError(f"exponent {k} does not have length {q.n}")
            if not self.laurent and any(x < 0 for x in k):
                raise NegativeExponentInPolydiskMode(f"exponent {k} is negative outside Laurent mode")
            clean[k] = clean.get(k, 0) + complex(c)
        self.terms = prune(clean)

    @property
    def n(self) -> int:
        return self.q.n

    @classmethod
    def monomial(cls, q: QMatrix, k: Sequence[int], c: complex = 1, laurent: bool = False) -> "QSeries":
        return cls(q, {tuple(k): c}, laurent)

    @classmethod
    def generator(cls, q: QMatrix, i: int, laurent: bool = False) -> "QSeries":
        k = [0] * q.n
        k[i - 1] = 1
        return cls(q, {tuple(k): 1}, laurent)

    @classmethod
    def one(cls, q: QMatrix, laurent: bool = False) -> "QSeries":
        return cls(q, {(0,) * q.n: 1}, laurent)

    def _unit_key(self):
        return (0,) * self.q.n

    def _with(self, terms):
        return QSeries(self.q, terms, self.laurent)

    def _same_space(self, other):
        if not isinstance(other, QSeries):
            raise TypeError(f"expected QSeries, got {type(other).__name__}")
        if other.q != self.q:
            raise QMatrixMismatch("q-series over different q matrices")
        if other.laurent != self.laurent:
            raise QMatrixMismatch("cannot mix Laurent and polynomial support")

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return qmul(self, other)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = QSeries.one(self.q, self.laurent), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "QSeries":
        """Inverse of a single Laurent monomial."""
        if not self.laurent:
            raise NegativeExponentInPolydiskMode("only Laurent monomials are invertible")
        if len(self.terms) != 1:
            raise BadParams("only single monomials are invertible")
        (k, c), = self.terms.items()
        neg = tuple(-x for x in k)
        return QSeries(self.q, {neg: 1 / (c * bicharacter(self.q, neg, k))}, True)

    def degree(self) -> int:
        return max((sum(abs(x) for x in k) for k in self.terms), default=-1)

    def __repr__(self):
        mode = ", laurent=True" if self.laurent else ""
        return f"QSeries({self.q!r}, {self.terms!r}{mode})"


def bicharacter(q: QMatrix, k: Sequence[int], l: Sequence[int]) -> complex:
    """Scalar ``c`` with ``x^k x^l = c x^{k+l}``: the product of ``q_ij^{k_i l_j}`` over ``i > j``."""
    c = complex(1)
    n = q.n
    for i in range(1, n):
        ki = k[i]
        if not ki:
            continue
        for j in range(i):
            if l[j]:
                c *= q[i + 1, j + 1] ** (ki * l[j])
    return c


def qmul(a: QSeries, b: QSeries) -> QSeries:
    a._same_space(b)
    out: dict[Exponent, complex] = {}
    q = a.q
    for k, ca in a.terms.items():
        for l, cb in b.terms.items():
            key = tuple(x + y for x, y in zip(k, l))
            out[key] = out.get(key, 0) + ca * cb * bicharacter(q, k, l)
    return QSeries(q, out, a.laurent)


def normal_form_word(q: QMatrix, w: Sequence[int]) -> tuple[complex, Exponent]:
    """Return ``(c, k)`` with ``x_w = c x^k``, by stable insertion sort with adjacent swaps."""
    letters = list(w)
    c = complex(1)
    for i in range(1, len(letters)):
        p = i
        while p > 0 and letters[p - 1] > letters[p]:
            a, b = letters[p - 1], letters[p]
            # x_a x_b = q_ab x_b x_a
            c *= q[a, b]
            letters[p - 1], letters[p] = b, a
            p -= 1
    k = [0] * q.n
    for a in letters:
        k[a - 1] += 1
    return c, tuple(k)


@lru_cache(maxsize=65536)
def _weight_cached(q: QMatrix, k: Exponent, cap: int) -> tuple[float, str]:
    closed = closed_form_weight(q, k)
    if closed is not None:
        return closed
    return minimizing_words(q, k, cap).weight, "brute-force"


def weight_wq_method(q: QMatrix, k: Sequence[int], cap: int = DEFAULT_CAP) -> tuple[float, str]:
    """Weight ``w_q(k)`` together with the name of the evaluation route taken."""
    k = tuple(int(x) for x in k)
    if len(k) != q.n:
        raise ValueError(f"exponent {k} does not have length {q.n}")
    if any(x < 0 for x in k):
        raise NegativeExponent(f"exponent vector {k} has a negative entry")
    return _weight_cached(q, k, cap)


def weight_wq(q: QMatrix, k: Sequence[int], cap: int = DEFAULT_CAP) -> float:
    return weight_wq_method(q, k, cap)[0]
