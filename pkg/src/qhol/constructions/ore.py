"""Skew polynomials ``sum a_d z^d`` over a q-polynomial algebra with ``z a = sigma(a) z + delta(a)``."""
from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from .._sparse import prune, terms_close
from ..errors import IncompatibleSpecs
from ..qcalculus import QSeries, bicharacter
from ..qmatrix import QMatrix
from ..words import delta as delta_word


@dataclass(frozen=True, eq=False)
class OreExtension:
    """Coefficient algebra (given by ``q``) plus generator images of sigma and delta.

    ``sigma[i-1]`` and ``delta[i-1]`` are the images of ``x_i``. ``delta=None``
    means the zero derivation. Both maps are extended to monomials by
    multiplicativity and the twisted Leibniz rule along the ordered word of
    the monomial; :func:`validate_sigma_derivation` checks that this is
    consistent with the q-relations.
    """

    q: QMatrix
    sigma: tuple[QSeries, ...]
    delta: tuple[QSeries, ...] | None = None
    _sigma_cache: dict = field(default_factory=dict, repr=False)
    _delta_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.sigma) != self.q.n:
            raise IncompatibleSpecs(f"sigma needs {self.q.n} generator images, got {len(self.sigma)}")
        if self.delta is not None and len(self.delta) != self.q.n:
            raise IncompatibleSpecs(f"delta needs {self.q.n} generator images, got {len(self.delta)}")
        for img in tuple(self.sigma) + tuple(self.delta or ()):
            if img.q != self.q or img.laurent:
                raise IncompatibleSpecs("generator images must live in the coefficient algebra")

    @classmethod
    def diagonal(cls, q: QMatrix, scalings: Sequence[complex]) -> "OreExtension":
        """``sigma(x_i) = scalings[i-1] * x_i`` and ``delta = 0``."""
        sig = tuple(QSeries.generator(q, i + 1).scale(s) for i, s in enumerate(scalings))
        return cls(q, sig)

    def zero(self) -> QSeries:
        return QSeries(self.q)

    def sigma_monomial(self, k: tuple[int, ...]) -> QSeries:
        if k not in self._sigma_cache:
            out = QSeries.one(self.q)
            for i, e in enumerate(k):
                for _ in range(e):
                    out = out * self.sigma[i]
            self._sigma_cache[k] = out
        return self._sigma_cache[k]

    def delta_monomial(self, k: tuple[int, ...]) -> QSeries:
        if self.delta is None:
            return self.zero()
        if k not in self._delta_cache:
            # delta(g_1 ... g_d) = sum_m sigma(g_1 ... g_{m-1}) delta(g_m) g_{m+1} ... g_d
            word = delta_word(k)
            out = self.zero()
            prefix = [0] * self.q.n
            for m, g in enumerate(word):
                suffix = [0] * self.q.n
                for h in word[m + 1:]:
                    suffix[h - 1] += 1
                term = self.sigma_monomial(tuple(prefix)) * self.delta[g - 1]
                out = out + term * QSeries.monomial(self.q, suffix)
                prefix[g - 1] += 1
            self._delta_cache[k] = out
        return self._delta_cache[k]

    def apply_sigma(self, a: QSeries) -> QSeries:
        out = self.zero()
        for k, c in a.terms.items():
            out = out + self.sigma_monomial(k).scale(c)
        return out

    def apply_delta(self, a: QSeries) -> QSeries:
        out = self.zero()
        for k, c in a.terms.items():
            out = out + self.delta_monomial(k).scale(c)
        return out


class OrePoly:
    """``sum_d coeffs[d] * z^d`` with every power of ``z`` on the right."""

    __slots__ = ("ext", "coeffs")

    def __init__(self, ext: OreExtension, coeffs: Mapping[int, QSeries] | None = None):
        self.ext = ext
        clean = {}
        for d, a in (coeffs or {}).items():
            if int(d) < 0:
                raise ValueError("z-degrees must be nonnegative")
            if a.q != ext.q or a.laurent:
                raise IncompatibleSpecs("coefficients must live in the coefficient algebra")
            if a:
                clean[int(d)] = a
        self.coeffs = clean

    @classmethod
    def from_terms(cls, ext: OreExtension, terms: Mapping[tuple[int, tuple[int, ...]], complex]) -> "OrePoly":
        """Build from ``{(z-degree, exponent of A): coefficient}``."""
        grouped: dict[int, dict] = {}
        for (d, k), c in terms.items():
            grouped.setdefault(d, {})[tuple(k)] = c
        return cls(ext, {d: QSeries(ext.q, t) for d, t in grouped.items()})

    @classmethod
    def coefficient(cls, ext: OreExtension, a: QSeries) -> "OrePoly":
        return cls(ext, {0: a})

    @classmethod
    def z(cls, ext: OreExtension, power: int = 1) -> "OrePoly":
        return cls(ext, {power: QSeries.one(ext.q)})

    @classmethod
    def one(cls, ext: OreExtension) -> "OrePoly":
        return cls.z(ext, 0)

    def terms(self) -> dict[tuple[int, tuple[int, ...]], complex]:
        return {(d, k): c for d, a in self.coeffs.items() for k, c in a.terms.items()}

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def _check(self, other):
        if not isinstance(other, OrePoly):
            raise TypeError(f"expected OrePoly, got {type(other).__name__}")
        if other.ext is not self.ext:
            raise IncompatibleSpecs("Ore polynomials over different extensions")

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = OrePoly.one(self.ext).scale(other)
        self._check(other)
        out = dict(self.coeffs)
        for d, a in other.coeffs.items():
            out[d] = out[d] + a if d in out else a
        return OrePoly(self.ext, out)

    __radd__ = __add__

    def scale(self, s: complex) -> "OrePoly":
        return OrePoly(self.ext, {d: a.scale(s) for d, a in self.coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return ore_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = OrePoly.one(self.ext)
        for _ in range(e):
            out = out * self
        return out

    def isclose(self, other, rtol: float = 1e-9) -> bool:
        return isinstance(other, OrePoly) and other.ext is self.ext and terms_close(self.terms(), other.terms(), rtol)

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = OrePoly.one(self.ext).scale(other)
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def xy_terms(self) -> dict:
        """``{(deg of the coefficient variable, z-degree): c}`` for univariate coefficient algebras.

        For the ``ug_extension`` presentation this is the ``x^i y^j`` basis.
        """
        if self.ext.q.n != 1:
            raise IncompatibleSpecs("xy_terms needs a univariate coefficient algebra")
        return {(k[0], d): c for (d, k), c in self.terms().items()}

    def __repr__(self):
        return f"OrePoly({self.terms()!r})"


def _z_left(p: OrePoly) -> OrePoly:
    """``z * p`` rewritten with ``z a = sigma(a) z + delta(a)``."""
    ext = p.ext
    out: dict[int, QSeries] = {}
    for d, a in p.coeffs.items():
        s = ext.apply_sigma(a)
        out[d + 1] = out[d + 1] + s if d + 1 in out else s
        if ext.delta is not None:
            dl = ext.apply_delta(a)
            out[d] = out[d] + dl if d in out else dl
    return OrePoly(ext, out)


def ore_mul(p: OrePoly, r: OrePoly) -> OrePoly:
    p._check(r)
    ext = p.ext
    out = OrePoly(ext)
    if not p.coeffs:
        return out
    # z^d * r for every d needed, built incrementally
    shifted = {0: r}
    for d in range(1, max(p.coeffs) + 1):
        shifted[d] = _z_left(shifted[d - 1])
    for d, a in p.coeffs.items():
        left = OrePoly(ext, {e: a * b for e, b in shifted[d].coeffs.items()})
        out = out + left
    return out


def validate_sigma_derivation(ext: OreExtension, sample_degree: int, rtol: float = 1e-9) -> bool:
    """Check multiplicativity of sigma and the twisted Leibniz rule on all monomial pairs up to a degree."""
    return not sigma_derivation_failures(ext, sample_degree, rtol)


def sigma_derivation_failures(ext: OreExtension, sample_degree: int, rtol: float = 1e-9) -> list[str]:
    q = ext.q
    exps = [k for k in itertools.product(range(sample_degree + 1), repeat=q.n) if sum(k) <= sample_degree]
    problems = []
    for a, b in itertools.product(exps, repeat=2):
        c = bicharacter(q, a, b)
        ab = tuple(x + y for x, y in zip(a, b))
        lhs = ext.sigma_monomial(ab).scale(c)
        rhs = ext.sigma_monomial(a) * ext.sigma_monomial(b)
        if not terms_close(lhs.terms, rhs.terms, rtol):
            problems.append(f"sigma(x^{a} x^{b}) != sigma(x^{a}) sigma(x^{b})")
        if ext.delta is None:
            continue
        lhs = ext.delta_monomial(ab).scale(c)
        xb = QSeries.monomial(q, b)
        rhs = ext.delta_monomial(a) * xb + ext.sigma_monomial(a) * ext.delta_monomial(b)
        if not terms_close(lhs.terms, rhs.terms, rtol):
            problems.append(f"delta(x^{a} x^{b}) violates the twisted Leibniz rule")
    return problems


# --- the enveloping algebra of the 2-dimensional Lie algebra [x, y] = y -----------------


@lru_cache(maxsize=None)
def ug_extension() -> OreExtension:
    """``C[x][y; sigma]`` with ``sigma(x) = x - 1``, so ``y x = (x - 1) y``.

    Normal forms ``a(x) y^j`` are exactly the ``x^i y^j`` basis.
    """
    q = QMatrix.ones(1)
    return OreExtension(q, (QSeries(q, {(1,): 1, (0,): -1}),))


@lru_cache(maxsize=None)
def ug_derivation_extension() -> OreExtension:
    """``C[y][x; id, delta]`` with ``delta(y) = y``, so ``x y = y x + y``; normal forms are ``y^j x^i``."""
    q = QMatrix.ones(1)
    y = QSeries.generator(q, 1)
    return OreExtension(q, (y,), (y,))


def ug_from_xy(terms: Mapping[tuple[int, int], complex]) -> OrePoly:
    """Element of :func:`ug_extension` from ``{(i, j): c}`` meaning ``c x^i y^j``."""
    return OrePoly.from_terms(ug_extension(), {(j, (i,)): c for (i, j), c in terms.items()})


def ug_yx_to_xy(p: OrePoly) -> dict[tuple[int, int], complex]:
    """Rewrite a :func:`ug_derivation_extension` element (``y^j x^i`` basis) into the ``x^i y^j`` basis.

    Uses ``y^j x^i = (x - j)^i y^j``.
    """
    out: dict[tuple[int, int], complex] = {}
    for (i, (j,)), c in p.terms().items():
        for m in range(i + 1):
            key = (m, j)
            out[key] = out.get(key, 0) + c * comb(i, m) * (-j) ** (i - m)
    return prune(out)
