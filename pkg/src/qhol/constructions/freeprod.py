"""Free products of augmented commutative polynomial algebras.

A basis element is an alternating word ``((i_1, e_1), ..., (i_d, e_d))``:
``i`` names a factor, ``e`` is a nonzero exponent vector of that factor's
variables, and neighbouring factor indices differ. The empty word is the unit.
"""
from __future__ import annotations

import math
import numbers
from typing import Mapping, Sequence

from .._sparse import Sparse, prune
from ..errors import BadParams, FactorMismatch, NonUnivariateFactor
from ..free_series import FreeSeries
from ..words import runs

Block = tuple[int, tuple[int, ...]]
AltWord = tuple[Block, ...]


class FreeProductElement(Sparse):
    __slots__ = ("dims", "terms")

    def __init__(self, dims: Sequence[int], terms: Mapping | None = None):
        self.dims = tuple(int(d) for d in dims)
        clean: dict[AltWord, complex] = {}
        for word, c in (terms or {}).items():
            word = tuple(self._block(b) for b in word)
            for (i, _), (j, _) in zip(word, word[1:]):
                if i == j:
                    raise FactorMismatch(f"adjacent blocks from the same factor {i} in {word}")
            clean[word] = clean.get(word, 0) + complex(c)
        self.terms = prune(clean)

    def _block(self, block) -> Block:
        i, e = block
        i = int(i)
        if not 1 <= i <= len(self.dims):
            raise FactorMismatch(f"factor index {i} outside 1..{len(self.dims)}")
        e = (int(e),) if isinstance(e, numbers.Integral) else tuple(int(x) for x in e)
        if len(e) != self.dims[i - 1]:
            raise FactorMismatch(f"factor {i} has {self.dims[i - 1]} variables, block has {len(e)}")
        if any(x < 0 for x in e) or not any(e):
            raise FactorMismatch(f"block exponent {e} must be nonnegative and nonzero")
        return i, e

    @classmethod
    def univariate(cls, count: int, terms: Mapping | None = None) -> "FreeProductElement":
        return cls((1,) * count, terms)

    @classmethod
    def one(cls, dims: Sequence[int]) -> "FreeProductElement":
        return cls(dims, {(): 1})

    @classmethod
    def generator(cls, dims: Sequence[int], i: int, var: int = 1) -> "FreeProductElement":
        e = [0] * dims[i - 1]
        e[var - 1] = 1
        return cls(dims, {((i, tuple(e)),): 1})

    def _unit_key(self):
        return ()

    def _with(self, terms):
        return FreeProductElement(self.dims, terms)

    def _same_space(self, other):
        if not isinstance(other, FreeProductElement):
            raise TypeError(f"expected FreeProductElement, got {type(other).__name__}")
        if other.dims != self.dims:
            raise FactorMismatch(f"factor layouts differ: {self.dims} vs {other.dims}")

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return freeprod_mul(self, other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = FreeProductElement.one(self.dims)
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        return f"FreeProductElement({self.dims}, {self.terms!r})"


def _concat(u: AltWord, v: AltWord) -> AltWord:
    if u and v and u[-1][0] == v[0][0]:
        i = u[-1][0]
        merged = tuple(a + b for a, b in zip(u[-1][1], v[0][1]))
        return u[:-1] + ((i, merged),) + v[1:]
    return u + v


def freeprod_mul(u: FreeProductElement, v: FreeProductElement) -> FreeProductElement:
    u._same_space(v)
    out: dict[AltWord, complex] = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            w = _concat(a, b)
            out[w] = out.get(w, 0) + ca * cb
    return FreeProductElement(u.dims, out)


def freeprod_norm(u: FreeProductElement, factor_rho, tau: float) -> float:
    """``sum |c| prod_blocks rho_i^e tau^(number of blocks)``.

    ``factor_rho[i-1]`` is the polyradius for factor ``i`` (a scalar is
    accepted for a univariate factor, and a flat list of scalars for an
    all-univariate layout).
    """
    if not tau >= 1:
        raise BadParams(f"tau must be >= 1, got {tau}")
    radii = []
    for i, d in enumerate(u.dims, start=1):
        r = factor_rho[i - 1]
        r = (float(r),) if isinstance(r, numbers.Real) else tuple(float(x) for x in r)
        if len(r) != d or any(not x > 0 for x in r):
            raise BadParams(f"factor {i} needs {d} positive radii, got {r}")
        radii.append(r)
    total = []
    for word, c in u.terms.items():
        weight = tau ** len(word)
        for i, e in word:
            for x, m in zip(radii[i - 1], e):
                weight *= x ** m
        total.append(abs(c) * weight)
    return math.fsum(total)


def freeprod_flatten(u: FreeProductElement) -> FreeSeries:
    """Spell each block ``(i, zeta^m)`` as ``m`` copies of the letter ``i``."""
    if any(d != 1 for d in u.dims):
        raise NonUnivariateFactor(f"flattening needs univariate factors, layout is {u.dims}")
    out = {}
    for word, c in u.terms.items():
        out[tuple(i for i, (m,) in word for _ in range(m))] = c
    return FreeSeries(len(u.dims), out)


def freeprod_unflatten(f: FreeSeries) -> FreeProductElement:
    """Inverse of :func:`freeprod_flatten`: maximal runs of a letter become blocks."""
    out = {}
    for w, c in f.terms.items():
        out[tuple((a, (hi - lo + 1,)) for a, lo, hi in runs(w))] = c
    return FreeProductElement.univariate(f.n, out)
