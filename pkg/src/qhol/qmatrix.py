"""Multiplicatively antisymmetric matrices ``q`` with ``q_ii = 1`` and ``q_ji = 1/q_ij``."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Iterable, Mapping

QTOL = 1e-9


@dataclass(frozen=True)
class QValidation:
    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class QMatrix:
    """Square complex matrix of commutation constants, indexed from 1.

    ``x_i x_j = q[i, j] x_j x_i`` in the algebras built on top of it. The
    constructor does not enforce antisymmetry; call :func:`validate_qmatrix`
    (configuration loading does) when the entries come from outside.
    """

    entries: tuple[tuple[complex, ...], ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(complex(x) for x in row) for row in self.entries)
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("q matrix must be square")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "_hash", hash(rows))

    def __hash__(self):
        return self._hash

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> complex:
        i, j = ij
        return self.entries[i - 1][j - 1]

    @classmethod
    def ones(cls, n: int) -> "QMatrix":
        return cls(tuple((1,) * n for _ in range(n)))

    @classmethod
    def from_upper(cls, n: int, upper: Mapping[tuple[int, int], complex]) -> "QMatrix":
        """Build from the entries ``q_ij`` with ``i < j``; missing pairs default to 1."""
        rows = [[complex(1)] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not 1 <= i < j <= n:
                raise ValueError(f"upper entry ({i},{j}) must satisfy 1 <= i < j <= {n}")
            v = complex(v)
            if v == 0:
                raise ValueError("q entries must be nonzero")
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = 1 / v
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def single(cls, n: int, q: complex) -> "QMatrix":
        """Single-parameter matrix: ``q_ij = q`` for every ``i < j``."""
        return cls.from_upper(n, {(i, j): q for i in range(1, n + 1) for j in range(i + 1, n + 1)})

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[complex]]) -> "QMatrix":
        return cls(tuple(tuple(r) for r in rows))

    def upper(self):
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                yield i, j, self[i, j]

    def is_unimodular(self, tol: float = QTOL) -> bool:
        return all(abs(abs(v) - 1) <= tol for row in self.entries for v in row)

    def is_commutative(self, tol: float = QTOL) -> bool:
        return all(abs(v - 1) <= tol for row in self.entries for v in row)

    def block(self, rows: range, cols: range) -> "QMatrix":
        return QMatrix(tuple(tuple(self[i, j] for j in cols) for i in rows))

    def to_json(self):
        return [[[v.real, v.imag] for v in row] for row in self.entries]

    def __repr__(self):
        if self.is_commutative(0):
            return f"QMatrix.ones({self.n})"
        ups = {(i, j): v for i, j, v in self.upper()}
        return f"QMatrix.from_upper({self.n}, {ups!r})"


def validate_qmatrix(q: QMatrix, mode: str = "general", tol: float = QTOL) -> QValidation:
    """Check multiplicative antisymmetry, plus ``|q_ij| = 1`` in ``unimodular`` mode."""
    if mode not in ("general", "unimodular"):
        raise ValueError(f"unknown validation mode {mode!r}")
    problems = []
    for i in range(1, q.n + 1):
        if abs(q[i, i] - 1) > tol:
            problems.append(f"q[{i},{i}] = {q[i, i]} != 1")
        for j in range(i + 1, q.n + 1):
            a, b = q[i, j], q[j, i]
            if not cmath.isfinite(a) or not cmath.isfinite(b) or a == 0 or b == 0:
                problems.append(f"q[{i},{j}] and q[{j},{i}] must be finite and nonzero")
                continue
            if abs(a * b - 1) > tol:
                problems.append(f"q[{i},{j}] * q[{j},{i}] = {a * b} != 1")
            if mode == "unimodular" and abs(abs(a) - 1) > tol:
                problems.append(f"|q[{i},{j}]| = {abs(a)} != 1")
    return QValidation(not problems, tuple(problems))
