"""Noncommutative polynomials in free generators, their calculus and substitution."""
from __future__ import annotations

import numbers
from typing import Mapping, Sequence

import numpy as np

from ._sparse import Sparse, prune
from .errors import ArityMismatch, DimensionMismatch, GeneratorCountMismatch, IndexOutOfRange
from .qcalculus import QSeries
from .qmatrix import QMatrix
from .words import Word, word_content


class FreeSeries(Sparse):
    """Finite sum ``sum c_w zeta_w`` over words ``w`` in ``n`` free generators."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Sequence[int], complex] | None = None):
        self.n = int(n)
        clean: dict[Word, complex] = {}
        for w, c in (terms or {}).items():
            w = tuple(int(a) for a in w)
            if any(not 1 <= a <= self.n for a in w):
                raise IndexOutOfRange(f"word {w} uses a letter outside 1..{self.n}")
            clean[w] = clean.get(w, 0) + complex(c)
        self.terms = prune(clean)

    @classmethod
    def word(cls, n: int, w: Sequence[int], c: complex = 1) -> "FreeSeries":
        return cls(n, {tuple(w): c})

    @classmethod
    def generator(cls, n: int, i: int) -> "FreeSeries":
        return cls(n, {(i,): 1})

    @classmethod
    def one(cls, n: int) -> "FreeSeries":
        return cls(n, {(): 1})

    def _unit_key(self):
        return ()

    def _with(self, terms):
        return FreeSeries(self.n, terms)

    def _same_space(self, other):
        if not isinstance(other, FreeSeries):
            raise TypeError(f"expected FreeSeries, got {type(other).__name__}")
        if other.n != self.n:
            raise GeneratorCountMismatch(f"{self.n} vs {other.n} generators")

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return fmul(self, other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = FreeSeries.one(self.n)
        for _ in range(e):
            out = out * self
        return out

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def __repr__(self):
        return f"FreeSeries({self.n}, {self.terms!r})"


def fmul(f: FreeSeries, g: FreeSeries) -> FreeSeries:
    f._same_space(g)
    out: dict[Word, complex] = {}
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            w = u + v
            out[w] = out.get(w, 0) + a * b
    return FreeSeries(f.n, out)


def abelianize(f: FreeSeries) -> QSeries:
    """Commutative image: every word collapses to the monomial of its letter content."""
    out: dict[tuple[int, ...], complex] = {}
    for w, c in f.terms.items():
        k = word_content(w, f.n)
        out[k] = out.get(k, 0) + c
    return QSeries(QMatrix.ones(f.n), out)


def _check_tuple(a: Sequence, n: int) -> list[np.ndarray]:
    mats = [np.asarray(x, dtype=complex) for x in a]
    if len(mats) != n:
        raise DimensionMismatch(f"expected {n} matrices, got {len(mats)}")
    if not mats:
        raise DimensionMismatch("empty matrix tuple")
    m = mats[0].shape[0]
    for x in mats:
        if x.ndim != 2 or x.shape != (m, m):
            raise DimensionMismatch(f"all matrices must be {m}x{m}, got shape {x.shape}")
    return mats


def eval_matrices(f: FreeSeries, a: Sequence) -> np.ndarray:
    """Substitute the matrix ``a[i-1]`` for ``zeta_i``; the empty word becomes the identity."""
    mats = _check_tuple(a, f.n)
    m = mats[0].shape[0]
    cache: dict[Word, np.ndarray] = {(): np.eye(m, dtype=complex)}

    def word_value(w: Word) -> np.ndarray:
        if w not in cache:
            cache[w] = word_value(w[:-1]) @ mats[w[-1] - 1]
        return cache[w]

    out = np.zeros((m, m), dtype=complex)
    for w, c in sorted(f.terms.items(), key=lambda t: len(t[0])):
        out += c * word_value(w)
    return out


def superpose(g: FreeSeries, fs: Sequence[FreeSeries]) -> FreeSeries:
    """Free superposition ``g(f_1, ..., f_m)``, expanded word by word."""
    fs = list(fs)
    if len(fs) != g.n:
        raise ArityMismatch(f"g has {g.n} generators but {len(fs)} substitutions were given")
    if not fs:
        return FreeSeries(0, g.terms)
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise ArityMismatch("substituted series must share one generator count")
    cache: dict[Word, FreeSeries] = {(): FreeSeries.one(n)}

    def word_value(w: Word) -> FreeSeries:
        if w not in cache:
            cache[w] = fmul(word_value(w[:-1]), fs[w[-1] - 1])
        return cache[w]

    out: dict[Word, complex] = {}
    for w, c in g.terms.items():
        for u, b in word_value(w).terms.items():
            out[u] = out.get(u, 0) + c * b
    return FreeSeries(n, prune(out))


def eval_commutative(p: QSeries, point: Sequence[complex]) -> complex:
    if not p.q.is_commutative():
        raise ValueError("numeric evaluation needs a commutative q matrix")
    point = [complex(z) for z in point]
    if len(point) != p.n:
        raise ArityMismatch(f"expected a point in C^{p.n}, got {len(point)} coordinates")
    total = 0j
    for k, c in p.terms.items():
        term = c
        for z, e in zip(point, k):
            term *= z ** e
        total += term
    return total
