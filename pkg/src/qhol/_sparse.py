"""Shared machinery for finitely supported elements stored as ``{monomial: coefficient}``."""
from __future__ import annotations

import numbers
from typing import Any, Iterator

PRUNE = 1e-12
EQ_RTOL = 1e-9


def prune(terms: dict) -> dict:
    return {k: c for k, c in terms.items() if abs(c) >= PRUNE}


def terms_close(a: dict, b: dict, rtol: float = EQ_RTOL, atol: float = PRUNE) -> bool:
    for key in a.keys() | b.keys():
        x, y = a.get(key, 0), b.get(key, 0)
        if abs(x - y) > max(rtol * max(abs(x), abs(y)), atol):
            return False
    return True


class Sparse:
    """Linear structure common to every element type; subclasses supply ``_same_space`` and ``_with``."""

    terms: dict

    def _with(self, terms: dict) -> Any:
        raise NotImplementedError

    def _same_space(self, other) -> None:
        raise NotImplementedError

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, key) -> complex:
        return self.terms.get(key, 0j)

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = self._with({self._unit_key(): complex(other)})
        self._same_space(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return self._with(prune(out))

    __radd__ = __add__

    def __neg__(self):
        return self._with({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: complex):
        s = complex(s)
        return self._with(prune({k: s * c for k, c in self.terms.items()}))

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def isclose(self, other, rtol: float = EQ_RTOL) -> bool:
        try:
            self._same_space(other)
        except Exception:
            return False
        return terms_close(self.terms, other.terms, rtol)

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = self._with({self._unit_key(): complex(other)} if other else {})
        if type(other) is not type(self):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def _unit_key(self):
        raise NotImplementedError
