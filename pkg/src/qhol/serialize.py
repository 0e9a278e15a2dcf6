"""Canonical text form for every element type, and a strict reader for it.

A term is ``COEF`` or ``COEF*g1*g2^e...`` with ``COEF`` written as
``{re:.17g}{im:+.17g}i``; terms are sorted by total degree, then by key, and
joined with ``" + "``. The zero element is ``"0"``. Because every float is
printed with 17 significant digits, reading the text back reproduces each
coefficient bit for bit.
"""
from __future__ import annotations

import re
from typing import Iterable

from .constructions.freeprod import FreeProductElement
from .constructions.ore import OreExtension, OrePoly
from .constructions.smash import SmashAlgebra, SmashElement
from .errors import FormatError, QholError
from .expr import freeprod_generator_index
from .free_series import FreeSeries
from .qcalculus import QSeries

_UREAL = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
_COEF = re.compile(rf"([+-]?{_UREAL})([+-]{_UREAL})i")
_FACTOR = re.compile(r"\*([a-z]+)([0-9]*)(?:\^(-?[0-9]+))?")


def format_coefficient(c: complex) -> str:
    c = complex(c)
    return f"{c.real:.17g}{c.imag:+.17g}i"


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _exponent_factors(prefix: str, k) -> list[str]:
    return [_power(f"{prefix}{i}", e) for i, e in enumerate(k, start=1) if e]


def _join(items: Iterable[tuple[tuple, complex, list[str]]]) -> str:
    parts = []
    for _, c, factors in sorted(items, key=lambda t: t[0]):
        parts.append("*".join([format_coefficient(c)] + factors))
    return " + ".join(parts) if parts else "0"


def serialize(x) -> str:
    """Canonical text for a FreeSeries, QSeries, OrePoly, SmashElement or FreeProductElement."""
    if isinstance(x, FreeSeries):
        return _join(((len(w), w), c, [f"f{a}" for a in w]) for w, c in x.terms.items())
    if isinstance(x, QSeries):
        return _join(((sum(k), k), c, _exponent_factors("z", k)) for k, c in x.terms.items())
    if isinstance(x, OrePoly):
        return _join(
            ((d + sum(k), k, d), c, _exponent_factors("z", k) + ([_power("t", d)] if d else []))
            for (d, k), c in x.terms().items()
        )
    if isinstance(x, SmashElement):
        return _join(
            ((sum(ka) + sum(kb), ka, kb), c, _exponent_factors("z", ka) + _exponent_factors("w", kb))
            for (ka, kb), c in x.terms.items()
        )
    if isinstance(x, FreeProductElement):
        offsets = [0]
        for d in x.dims:
            offsets.append(offsets[-1] + d)
        items = []
        for word, c in x.terms.items():
            factors = []
            for i, e in word:
                factors += [_power(f"f{offsets[i - 1] + v}", m) for v, m in enumerate(e, start=1) if m]
            items.append(((sum(sum(e) for _, e in word), word), c, factors))
        return _join(items)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _read_terms(text: str, names: dict) -> list[tuple[complex, list[tuple[str, int | None, int]]]]:
    """Split canonical text into ``(coefficient, [(name, index, exponent), ...])``."""
    if not isinstance(text, str):
        raise FormatError(f"expected text, got {type(text).__name__}", 0)
    if text == "0":
        return []
    out = []
    pos = 0
    pieces = text.split(" + ")
    for n, piece in enumerate(pieces):
        m = _COEF.match(piece)
        if not m:
            raise FormatError("expected a coefficient like 1.5-2i", pos)
        c = complex(float(m.group(1)), float(m.group(2)))
        factors = []
        j = m.end()
        while j < len(piece):
            f = _FACTOR.match(piece, j)
            if not f:
                raise FormatError("expected '*generator' or '*generator^e'", pos + j)
            name, digits, exp = f.group(1), f.group(2), f.group(3)
            if name not in names:
                raise FormatError(f"unknown generator {name}{digits}", pos + j)
            count = names[name]
            index = int(digits) if digits else None
            if count is None:
                if index is not None:
                    raise FormatError(f"generator {name} takes no index", pos + j)
            elif index is None or not 1 <= index <= count:
                raise FormatError(f"generator {name}{digits} out of range", pos + j)
            e = int(exp) if exp is not None else 1
            if e == 0 or exp is not None and e == 1:
                raise FormatError("exponents 0 and 1 are not written in canonical form", pos + j)
            factors.append((name, index, e))
            j = f.end()
        out.append((c, factors))
        pos += len(piece.encode()) + 3
    return out


def _store(terms: dict, key, c: complex):
    if key in terms:
        raise FormatError(f"monomial {key} appears twice")
    terms[key] = c


def _exponent(factors, name: str, n: int, allow_negative: bool) -> tuple[int, ...]:
    k = [0] * n
    last = 0
    for fname, i, e in factors:
        if fname != name:
            continue
        if i <= last:
            raise FormatError(f"{name}-generators must appear once each, in increasing order")
        if e < 0 and not allow_negative:
            raise FormatError("negative exponent outside Laurent mode")
        k[i - 1] = e
        last = i
    return tuple(k)


def deserialize(text: str, config=None, kind: str | None = None, space=None):
    """Read canonical text back into an element.

    ``config`` selects a FreeSeries (free modes) or QSeries (q modes). For the
    constructions pass ``space`` instead: an :class:`OreExtension`, a
    :class:`SmashAlgebra`, or a tuple of factor dimensions for a free product.
    Anything that is not canonical raises :class:`FormatError`.
    """
    try:
        return _deserialize(text, config, kind, space)
    except FormatError:
        raise
    except (QholError, ValueError, OverflowError) as exc:
        raise FormatError(str(exc)) from None


def _deserialize(text, config, kind, space):
    if space is None and config is None:
        raise FormatError("deserialize needs a config or a space")
    if isinstance(space, OreExtension):
        n = space.q.n
        terms = {}
        for c, fs in _read_terms(text, {"z": n, "t": None}):
            names = [f[0] for f in fs]
            if names != sorted(names, key=lambda s: s == "t"):
                raise FormatError("t must come after the z-generators")
            if names.count("t") > 1:
                raise FormatError("t appears twice")
            d = next((e for name, _, e in fs if name == "t"), 0)
            if d < 0:
                raise FormatError("negative power of t")
            _store(terms, (d, _exponent(fs, "z", n, False)), c)
        return OrePoly.from_terms(space, terms)
    if isinstance(space, SmashAlgebra):
        na, nb = space.a_q.n, space.b_q.n
        terms = {}
        for c, fs in _read_terms(text, {"z": na, "w": nb}):
            names = [f[0] for f in fs]
            if names != sorted(names, key=lambda s: s != "z"):
                raise FormatError("z-generators must precede w-generators")
            key = (_exponent(fs, "z", na, space.a_laurent), _exponent(fs, "w", nb, space.b_laurent))
            _store(terms, key, c)
        return SmashElement(space, terms)
    if space is not None or kind == "freeprod":
        dims = tuple(space)
        index = freeprod_generator_index(dims)
        terms = {}
        for c, fs in _read_terms(text, {"f": len(index)}):
            word: list = []
            for _, j, e in fs:
                if e < 0:
                    raise FormatError("negative exponent in a free product")
                i, v = index[j - 1]
                if word and word[-1][0] == i:
                    prev = word[-1][1]
                    if prev[v - 1] or any(prev[v:]):
                        raise FormatError("variables inside a block must be increasing")
                    prev[v - 1] = e
                else:
                    block = [0] * dims[i - 1]
                    block[v - 1] = e
                    word.append((i, block))
            _store(terms, tuple((i, tuple(b)) for i, b in word), c)
        return FreeProductElement(dims, terms)
    kind = kind or ("free" if config.is_free else "q")
    if kind == "free":
        n = config.n
        terms = {}
        for c, fs in _read_terms(text, {"f": n}):
            word = []
            for _, i, e in fs:
                if e != 1:
                    raise FormatError("free words are written letter by letter")
                word.append(i)
            _store(terms, tuple(word), c)
        return FreeSeries(n, terms)
    if kind == "q":
        n = config.n
        terms = {}
        for c, fs in _read_terms(text, {"z": n}):
            _store(terms, _exponent(fs, "z", n, config.laurent), c)
        return QSeries(config.q, terms, config.laurent)
    raise FormatError(f"unknown element kind {kind!r}")


def to_jsonable(x):
    """Plain JSON data: ``{"kind": ..., "terms": [[key, [re, im]], ...], "text": canonical}``."""

    def pair(c):
        return [complex(c).real, complex(c).imag]

    if isinstance(x, FreeSeries):
        kind, items = "free", [[list(w), pair(c)] for w, c in x.terms.items()]
    elif isinstance(x, QSeries):
        kind, items = "q", [[list(k), pair(c)] for k, c in x.terms.items()]
    elif isinstance(x, OrePoly):
        kind, items = "ore", [[[list(k), d], pair(c)] for (d, k), c in x.terms().items()]
    elif isinstance(x, SmashElement):
        kind, items = "smash", [[[list(ka), list(kb)], pair(c)] for (ka, kb), c in x.terms.items()]
    elif isinstance(x, FreeProductElement):
        kind, items = "freeprod", [[[[i, list(e)] for i, e in w], pair(c)] for w, c in x.terms.items()]
    else:
        raise TypeError(f"cannot convert {type(x).__name__}")
    items.sort(key=lambda t: repr(t[0]))
    return {"kind": kind, "terms": items, "text": serialize(x)}
