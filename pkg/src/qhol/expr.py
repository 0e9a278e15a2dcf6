"""Expression language for elements: lexer, Pratt parser, AST and lowering.

Grammar, loosest to tightest binding::

    expr    := term (('+' | '-') term)*
    term    := prefix ('*' prefix)*            # explicit '*', no juxtaposition
    prefix  := ('-' | '+') prefix | power
    power   := atom ('^' exponent)?            # right-assoc through exponent
    atom    := literal | generator | '(' expr ')'

Literals are ``1.5``, ``2i``, ``i`` and the two-part form ``1.5-2i``, which
is read as one complex number (with its sign, where an operand is expected).
Generators are a lowercase name plus an index, ``f3`` or ``z12``; a few
contexts add an unindexed name such as ``t``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Union

from .errors import (
    ExprError,
    ExprSyntaxError,
    ModeMismatch,
    NegativePowerNotAllowed,
    UnknownGenerator,
)

MAX_DEPTH = 200

_UREAL = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
_COMPLEX = re.compile(rf"([+-]?{_UREAL})([+-]{_UREAL})i(?![A-Za-z0-9_])")
_NUMBER = re.compile(rf"({_UREAL})(i?)(?![A-Za-z0-9_.])")
_IDENT = re.compile(r"([A-Za-z_]+)([0-9]*)")
_SPACE = re.compile(r"[ \t\r\n]+")


# --- AST -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: complex
    offset: int = 0


@dataclass(frozen=True)
class Gen:
    name: str
    index: int | None
    offset: int = 0


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Paren:
    inner: "Node"


@dataclass(frozen=True)
class Sum:
    """``terms[0] +/- terms[1] ...``; ``signs[i]`` is +1 or -1."""

    terms: tuple["Node", ...]
    signs: tuple[int, ...]


@dataclass(frozen=True)
class Product:
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    offset: int = 0


Node = Union[Num, Gen, Neg, Paren, Sum, Product, Power]


@dataclass(frozen=True)
class ExprAst:
    root: Node
    text: str = field(repr=False, default="")

    def generators(self) -> set[tuple[str, int | None]]:
        out = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Gen):
                out.add((node.name, node.index))
            elif isinstance(node, (Neg,)):
                stack.append(node.operand)
            elif isinstance(node, Paren):
                stack.append(node.inner)
            elif isinstance(node, Sum):
                stack.extend(node.terms)
            elif isinstance(node, Product):
                stack.extend(node.factors)
            elif isinstance(node, Power):
                stack.append(node.base)
        return out


# --- lexer ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "gen", "op", "end"
    value: object
    offset: int


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8", "surrogatepass"))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    operand_expected = True

    def fail(msg, at):
        raise ExprSyntaxError(msg, _byte_offset(text, at))

    while True:
        m = _SPACE.match(text, i)
        if m:
            i = m.end()
        if i >= len(text):
            tokens.append(Token("end", None, i))
            return tokens
        ch = text[i]
        if operand_expected:
            m = _COMPLEX.match(text, i)
            if m:
                value = complex(float(m.group(1)), float(m.group(2)))
                if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                    fail("literal overflows", i)
                tokens.append(Token("num", value, i))
                i = m.end()
                operand_expected = False
                continue
        if ch in "0123456789.":
            m = _NUMBER.match(text, i)
            if not m:
                fail("malformed number", i)
            x = float(m.group(1))
            if not math.isfinite(x):
                fail("literal overflows", i)
            tokens.append(Token("num", complex(0, x) if m.group(2) else complex(x), i))
            i = m.end()
            operand_expected = False
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            m = _IDENT.match(text, i)
            name, digits = m.group(1), m.group(2)
            if name == "i" and not digits:
                tokens.append(Token("num", 1j, i))
            else:
                if len(digits) > 9:
                    fail("generator index too long", i)
                tokens.append(Token("gen", (name, int(digits) if digits else None), i))
            i = m.end()
            operand_expected = False
            continue
        if ch in "+-*^()":
            tokens.append(Token("op", ch, i))
            i += 1
            operand_expected = ch != ")"
            continue
        fail(f"unexpected character {ch!r}", i)


# --- parser --------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, allow_negative_powers: bool, names: dict | None):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0
        self.allow_negative_powers = allow_negative_powers
        self.names = names

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, msg: str, tok: Token, cls=ExprSyntaxError):
        raise cls(msg, _byte_offset(self.text, tok.offset))

    def is_op(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == ch

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("num", "gen") or (tok.kind == "op" and tok.value == "("):
                self.error("expected an operator; products need an explicit '*'", tok)
            self.error(f"unexpected {tok.value!r}", tok)
        return node

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.error(f"nesting deeper than {MAX_DEPTH}", self.peek())

    def expr(self) -> Node:
        self.enter()
        terms, signs = [self.term()], [1]
        while self.is_op("+") or self.is_op("-"):
            signs.append(1 if self.advance().value == "+" else -1)
            terms.append(self.term())
        self.depth -= 1
        return terms[0] if len(terms) == 1 else Sum(tuple(terms), tuple(signs))

    def term(self) -> Node:
        factors = [self.prefix()]
        while self.is_op("*"):
            self.advance()
            factors.append(self.prefix())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def prefix(self) -> Node:
        self.enter()
        if self.is_op("-"):
            self.advance()
            node = Neg(self.prefix())
        elif self.is_op("+"):
            self.advance()
            node = self.prefix()
        else:
            node = self.power()
        self.depth -= 1
        return node

    def power(self) -> Node:
        base = self.atom()
        if self.is_op("^"):
            tok = self.advance()
            e = self.exponent()
            if e < 0 and not self.allow_negative_powers:
                self.error("negative powers need Laurent mode", tok, NegativePowerNotAllowed)
            return Power(base, e, tok.offset)
        return base

    def exponent(self) -> int:
        sign = 1
        paren = False
        if self.is_op("("):
            self.advance()
            paren = True
        while self.is_op("-") or self.is_op("+"):
            if self.advance().value == "-":
                sign = -sign
        tok = self.advance()
        if tok.kind != "num" or tok.value.imag != 0 or not float(tok.value.real).is_integer():
            self.error("exponent must be an integer literal", tok)
        if paren:
            if not self.is_op(")"):
                self.error("expected ')'", self.peek())
            self.advance()
        return sign * int(tok.value.real)

    def atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            return Num(tok.value, tok.offset)
        if tok.kind == "gen":
            name, index = tok.value
            self.check_generator(name, index, tok)
            return Gen(name, index, tok.offset)
        if tok.kind == "op" and tok.value == "(":
            inner = self.expr()
            if not self.is_op(")"):
                self.error("expected ')'", self.peek())
            self.advance()
            return Paren(inner)
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {tok.value!r}", tok)

    def check_generator(self, name, index, tok):
        if self.names is None:
            return
        if name not in self.names:
            allowed = ", ".join(sorted(self.names))
            self.error(f"unknown generator {name}{index or ''}; expected one of: {allowed}", tok, UnknownGenerator)
        count = self.names[name]
        if count is None:
            if index is not None:
                self.error(f"generator {name} takes no index", tok, UnknownGenerator)
        elif index is None or not 1 <= index <= count:
            self.error(f"generator {name}{index or ''} outside {name}1..{name}{count}", tok, UnknownGenerator)


def default_names(config) -> dict:
    return {"f": config.n} if config.is_free else {"z": config.n}


def parse_expr(text: str, config=None, names: dict | None = None, allow_negative_powers: bool | None = None) -> ExprAst:
    """Parse ``text`` into an AST, checking generators against ``names`` (default: from ``config``).

    Raises :class:`ExprSyntaxError` (with a byte offset), :class:`UnknownGenerator`
    or :class:`NegativePowerNotAllowed`; never anything else for string input.
    """
    if not isinstance(text, str):
        raise ExprSyntaxError(f"expected text, got {type(text).__name__}", 0)
    if names is None and config is not None:
        names = default_names(config)
    if allow_negative_powers is None:
        allow_negative_powers = bool(config is not None and config.laurent)
    try:
        return ExprAst(_Parser(text, allow_negative_powers, names).parse(), text)
    except RecursionError:
        raise ExprSyntaxError("expression nested too deeply", 0) from None


# --- lowering ------------------------------------------------------------------------


@dataclass
class AlgebraContext:
    """How to build constants and generators of one algebra during lowering."""

    names: dict
    constant: Callable[[complex], object]
    generator: Callable[[str, int | None], object]
    max_power: int = 64
    max_terms: int = 200_000


def algebra_for(config) -> AlgebraContext:
    from .free_series import FreeSeries
    from .qcalculus import QSeries

    if config.is_free:
        n = config.n
        return AlgebraContext(
            {"f": n},
            lambda c: FreeSeries(n, {(): c}),
            lambda name, i: FreeSeries.generator(n, i),
            config.max_power,
            config.max_terms,
        )
    q, laurent = config.q, config.laurent
    return AlgebraContext(
        {"z": config.n},
        lambda c: QSeries(q, {(0,) * q.n: c}, laurent),
        lambda name, i: QSeries.generator(q, i, laurent),
        config.max_power,
        config.max_terms,
    )


def ore_algebra(ext, max_power: int = 64, max_terms: int = 200_000) -> AlgebraContext:
    """``z1..zN`` for the coefficient algebra and ``t`` for the adjoined variable."""
    from .constructions.ore import OrePoly
    from .qcalculus import QSeries

    def gen(name, i):
        if name == "t":
            return OrePoly.z(ext)
        return OrePoly.coefficient(ext, QSeries.generator(ext.q, i))

    return AlgebraContext(
        {"z": ext.q.n, "t": None},
        lambda c: OrePoly.one(ext).scale(c),
        gen,
        max_power,
        max_terms,
    )


def smash_algebra(alg, max_power: int = 64, max_terms: int = 200_000) -> AlgebraContext:
    """``z1..zN`` for the acted-on algebra, ``w1..wM`` for the acting one."""
    from .constructions.smash import SmashElement

    def gen(name, i):
        return SmashElement.a_generator(alg, i) if name == "z" else SmashElement.b_generator(alg, i)

    return AlgebraContext(
        {"z": alg.a_q.n, "w": alg.b_q.n},
        lambda c: SmashElement.one(alg).scale(c),
        gen,
        max_power,
        max_terms,
    )


def freeprod_generator_index(dims) -> list[tuple[int, int]]:
    """Global generator ``f{j}`` -> (factor, variable), numbering factors consecutively."""
    return [(i, v) for i, d in enumerate(dims, start=1) for v in range(1, d + 1)]


def freeprod_algebra(dims, max_power: int = 64, max_terms: int = 200_000) -> AlgebraContext:
    from .constructions.freeprod import FreeProductElement

    dims = tuple(dims)
    index = freeprod_generator_index(dims)
    return AlgebraContext(
        {"f": len(index)},
        lambda c: FreeProductElement.one(dims).scale(c),
        lambda name, j: FreeProductElement.generator(dims, *index[j - 1]),
        max_power,
        max_terms,
    )


def lower_ast(ast: ExprAst, config=None, algebra: AlgebraContext | None = None):
    """Evaluate the AST in the configured algebra, associating left to right."""
    if algebra is None:
        if config is None:
            raise ValueError("lower_ast needs a config or an algebra context")
        algebra = algebra_for(config)
    for name, index in ast.generators():
        count = algebra.names.get(name, "missing")
        if count == "missing":
            raise ModeMismatch(f"generator {name}{index or ''} does not belong to this algebra")
        if (count is None) != (index is None) or (count is not None and not 1 <= index <= count):
            raise ModeMismatch(f"generator {name}{index or ''} is out of range here")

    def size(x) -> int:
        return len(x) if hasattr(x, "__len__") else len(x.terms())

    def mul(a, b):
        # the work of a sparse product is the product of the supports
        if size(a) * size(b) > algebra.max_terms:
            raise ExprError(f"expression expands past the cap of {algebra.max_terms} terms")
        return a * b

    def go(node):
        if isinstance(node, Num):
            return algebra.constant(node.value)
        if isinstance(node, Gen):
            return algebra.generator(node.name, node.index)
        if isinstance(node, Paren):
            return go(node.inner)
        if isinstance(node, Neg):
            return -go(node.operand)
        if isinstance(node, Sum):
            acc = go(node.terms[0]) if node.signs[0] > 0 else -go(node.terms[0])
            for sign, t in zip(node.signs[1:], node.terms[1:]):
                acc = acc + go(t) if sign > 0 else acc - go(t)
                if size(acc) > algebra.max_terms:
                    raise ExprError(f"expression expands past the cap of {algebra.max_terms} terms")
            return acc
        if isinstance(node, Product):
            acc = go(node.factors[0])
            for f in node.factors[1:]:
                acc = mul(acc, go(f))
            return acc
        if isinstance(node, Power):
            if abs(node.exponent) > algebra.max_power:
                raise ExprError(f"power {node.exponent} exceeds the cap of {algebra.max_power}", node.offset)
            base = go(node.base)
            if node.exponent < 0:
                try:
                    base = base ** -1
                except (ValueError, TypeError, ZeroDivisionError) as exc:
                    raise NegativePowerNotAllowed(f"cannot invert this base: {exc}", node.offset) from None
            acc = algebra.constant(1)
            for _ in range(abs(node.exponent)):
                acc = mul(acc, base)
            return acc
        raise TypeError(f"unknown AST node {node!r}")

    return go(ast.root)


def evaluate(text: str, config=None, algebra: AlgebraContext | None = None, allow_negative_powers: bool | None = None):
    """Parse and lower in one step."""
    names = algebra.names if algebra is not None else None
    ast = parse_expr(text, config, names=names, allow_negative_powers=allow_negative_powers)
    return lower_ast(ast, config, algebra)
