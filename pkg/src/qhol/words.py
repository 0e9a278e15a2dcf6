"""Words over ``{1..n}``, the permutation action and the cocycle of q-rewriting.

A word is a plain tuple of 1-based letters; the empty tuple is the empty word.
Permutations act on positions: ``sigma(w)[sigma(i)] = w[i]``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapExceeded, IndexOutOfRange, LengthMismatch, NegativeExponent, NotApplicable
from .qmatrix import QMatrix

Word = tuple[int, ...]

DEFAULT_CAP = 50_000
MODULUS_RTOL = 1e-9


def s_count(w: Sequence[int]) -> int:
    """Number of adjacent unequal letters; ``len(w) - 1`` for words of length 0 or 1."""
    if len(w) <= 1:
        return len(w) - 1
    return sum(1 for a, b in zip(w, w[1:]) if a != b)


def delta(k: Sequence[int]) -> Word:
    if any(x < 0 for x in k):
        raise NegativeExponent(f"exponent vector {tuple(k)} has a negative entry")
    return tuple(i for i, m in enumerate(k, start=1) for _ in range(m))


def word_content(w: Sequence[int], n: int) -> tuple[int, ...]:
    counts = [0] * n
    for a in w:
        if not 1 <= a <= n:
            raise IndexOutOfRange(f"letter {a} outside 1..{n}")
        counts[a - 1] += 1
    return tuple(counts)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..d}``; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        if len(self) != len(other):
            raise LengthMismatch("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def inversions(self) -> Iterator[tuple[int, int]]:
        im = self.images
        for i in range(len(im)):
            for j in range(i + 1, len(im)):
                if im[i] > im[j]:
                    yield i + 1, j + 1

    @classmethod
    def all(cls, d: int) -> Iterator["Permutation"]:
        for p in itertools.permutations(range(1, d + 1)):
            yield cls(p)


def apply_permutation(sigma: Permutation, w: Sequence[int]) -> Word:
    if len(sigma) != len(w):
        raise LengthMismatch(f"permutation of degree {len(sigma)} applied to word of length {len(w)}")
    out = [0] * len(w)
    for i, a in enumerate(w, start=1):
        out[sigma(i) - 1] = a
    return tuple(out)


def cycle_sigma(s: int, t: int, d: int) -> Permutation:
    """The cycle ``(s s+1 ... t)`` for ``s < t``; with ``s > t`` the inverse of ``cycle_sigma(t, s, d)``."""
    if not (1 <= s <= d and 1 <= t <= d):
        raise IndexOutOfRange(f"cycle endpoints {s}, {t} outside 1..{d}")
    images = list(range(1, d + 1))
    if s < t:
        for i in range(s, t):
            images[i - 1] = i + 1
        images[t - 1] = s
    elif s > t:
        for i in range(t + 1, s + 1):
            images[i - 1] = i - 1
        images[t - 1] = s
    return Permutation(tuple(images))


def cocycle_lambda(q: QMatrix, sigma: Permutation, w: Sequence[int]) -> complex:
    """The scalar with ``x_w = lambda * x_{sigma(w)}``: product of ``q[w_i, w_j]`` over inversions of sigma."""
    if len(sigma) != len(w):
        raise LengthMismatch(f"permutation of degree {len(sigma)} applied to word of length {len(w)}")
    c = complex(1)
    for i, j in sigma.inversions():
        c *= q[w[i - 1], w[j - 1]]
    return c


def cocycle_by_swaps(q: QMatrix, sigma: Permutation, w: Sequence[int]) -> complex:
    """Reference rewriting: bubble the letters of ``x_w`` to their targets one adjacent swap at a time."""
    if len(sigma) != len(w):
        raise LengthMismatch(f"permutation of degree {len(sigma)} applied to word of length {len(w)}")
    cells = [(sigma(i), a) for i, a in enumerate(w, start=1)]
    c = complex(1)
    changed = True
    while changed:
        changed = False
        for p in range(len(cells) - 1):
            (ta, a), (tb, b) = cells[p], cells[p + 1]
            if ta > tb:
                # x_a x_b = q_ab x_b x_a
                c *= q[a, b]
                cells[p], cells[p + 1] = cells[p + 1], cells[p]
                changed = True
    return c


def runs(w: Sequence[int]) -> list[tuple[int, int, int]]:
    """Maximal constant blocks as ``(letter, first position, last position)``, 1-based."""
    out = []
    for i, a in enumerate(w, start=1):
        if out and out[-1][0] == a:
            out[-1] = (a, out[-1][1], i)
        else:
            out.append((a, i, i))
    return out


def count_maximal_j_subwords(w: Sequence[int], j: int) -> int:
    return sum(1 for a, _, _ in runs(w) if a == j)


def bnc(w: Sequence[int]) -> frozenset[int]:
    """Letters whose occurrences split into two or more maximal runs."""
    counts: dict[int, int] = {}
    for a, _, _ in runs(w):
        counts[a] = counts.get(a, 0) + 1
    return frozenset(a for a, c in counts.items() if c >= 2)


def bc(w: Sequence[int], n: int) -> frozenset[int]:
    return frozenset(range(1, n + 1)) - bnc(w)


def is_compact(w: Sequence[int]) -> bool:
    return not bnc(w)


def multinomial(k: Sequence[int]) -> int:
    out = math.factorial(sum(k))
    for m in k:
        out //= math.factorial(m)
    return out


def rewrite_coefficient(q: QMatrix, w: Sequence[int]) -> complex:
    """The scalar ``c`` with ``x_{delta(k)} = c * x_w`` where ``k`` is the content of ``w``.

    Every pair of positions holding a larger letter before a smaller one
    contributes ``q[smaller, larger]``.
    """
    c = complex(1)
    for i in range(len(w)):
        a = w[i]
        for j in range(i + 1, len(w)):
            b = w[j]
            if a > b:
                c *= q[b, a]
    return c


def _arrangements(q: QMatrix, k: Sequence[int]) -> Iterator[tuple[Word, complex]]:
    # Lexicographic DFS over distinct rearrangements of delta(k). Placing a
    # letter b in front of the still-unplaced smaller letters a costs q_ab each.
    n = len(k)
    remaining = list(k)
    total = sum(k)
    prefix: list[int] = []

    def step(coef: complex):
        if len(prefix) == total:
            yield tuple(prefix), coef
            return
        for b in range(1, n + 1):
            if remaining[b - 1] == 0:
                continue
            f = coef
            for a in range(1, b):
                if remaining[a - 1]:
                    f *= q[a, b] ** remaining[a - 1]
            remaining[b - 1] -= 1
            prefix.append(b)
            yield from step(f)
            prefix.pop()
            remaining[b - 1] += 1

    yield from step(complex(1))


@dataclass(frozen=True)
class MinimizingWords:
    weight: float
    words: frozenset[Word]


def minimizing_words(q: QMatrix, k: Sequence[int], cap: int = DEFAULT_CAP) -> MinimizingWords:
    """Enumerate every rearrangement of ``delta(k)`` and keep those of least rewriting modulus."""
    k = tuple(k)
    if any(m < 0 for m in k):
        raise NegativeExponent(f"exponent vector {k} has a negative entry")
    count = multinomial(k)
    if count > cap:
        raise CapExceeded(f"{count} arrangements of content {k} exceed the cap of {cap}")
    moduli = [(w, abs(c)) for w, c in _arrangements(q, k)]
    best = min(m for _, m in moduli)
    band = best * (1 + MODULUS_RTOL)
    return MinimizingWords(best, frozenset(w for w, m in moduli if m <= band))


def closed_form_weight(q: QMatrix, k: Sequence[int], tol: float = 1e-12):
    """Return ``(weight, method)`` when the above/below-diagonal moduli allow a closed form, else None."""
    mods = [(i, j, abs(v)) for i, j, v in q.upper()]
    if all(m >= 1 - tol for _, _, m in mods):
        return 1.0, "closed-form (|q_ij| >= 1 for i < j)"
    if all(m <= 1 + tol for _, _, m in mods):
        w = 1.0
        for i, j, m in mods:
            w *= m ** (k[i - 1] * k[j - 1])
        return w, "closed-form (|q_ij| <= 1 for i < j)"
    return None


def _weight(q: QMatrix, k: Sequence[int], cap: int) -> float:
    closed = closed_form_weight(q, k)
    if closed is not None:
        return closed[0]
    return minimizing_words(q, k, cap).weight


def compactify_step(q: QMatrix, w: Sequence[int], j: int) -> Word:
    """Merge the two leftmost maximal ``j``-runs of a minimizing word.

    Writing ``w = (b1, g1, b2, g2, b3)`` with ``g1``, ``g2`` those runs, the
    letters of ``g1`` are carried across ``b2`` one at a time, right to left,
    by the inverse cycles ``sigma_{t,s}, sigma_{t-1,s-1}, ...``, ending at
    ``(b1, b2, g1, g2, b3)``. Each cycle has rewriting modulus one, so a word
    in ``W(k)`` stays in ``W(k)``; ``q`` is not needed to build the result.
    """
    w = tuple(w)
    j_runs = [(a, lo, hi) for a, lo, hi in runs(w) if a == j]
    if len(j_runs) < 2:
        raise NotApplicable(f"letter {j} forms {len(j_runs)} maximal run(s) in {w}; need at least 2")
    (_, lo1, hi1), (_, lo2, _) = j_runs[0], j_runs[1]
    r, s, t = lo1 - 1, hi1, lo2 - 1
    d = len(w)
    out = w
    for i in range(s - r):
        out = apply_permutation(cycle_sigma(t - i, s - i, d), out)
    return out


def compactify(q: QMatrix, w: Sequence[int]) -> tuple[Word, dict[int, int]]:
    """Repeat :func:`compactify_step` on the smallest split letter until the word is compact.

    Returns the compact word and the number of steps spent on each letter.
    """
    w = tuple(w)
    steps: dict[int, int] = {}
    while True:
        split = bnc(w)
        if not split:
            return w, steps
        j = min(split)
        w = compactify_step(q, w, j)
        steps[j] = steps.get(j, 0) + 1


def compact_arrangements(k: Sequence[int]) -> Iterator[Word]:
    present = [i for i, m in enumerate(k, start=1) if m > 0]
    for order in itertools.permutations(present):
        yield tuple(a for a in order for _ in range(k[a - 1]))


def compact_word(q: QMatrix, k: Sequence[int], cap: int = DEFAULT_CAP, method: str = "scan") -> Word:
    """A compact word of minimal rewriting modulus for content ``k``.

    ``scan`` checks the compact arrangements directly and returns the
    lexicographically smallest minimizer. ``compactify`` starts from the
    lexicographically smallest element of ``W(k)`` and merges runs.
    """
    k = tuple(k)
    if any(m < 0 for m in k):
        raise NegativeExponent(f"exponent vector {k} has a negative entry")
    if method == "compactify":
        start = min(minimizing_words(q, k, cap).words)
        return compactify(q, start)[0]
    if method != "scan":
        raise ValueError(f"unknown method {method!r}")
    weight = _weight(q, k, cap)
    band = weight * (1 + MODULUS_RTOL)
    hits = [w for w in compact_arrangements(k) if abs(rewrite_coefficient(q, w)) <= band]
    if not hits:
        raise ArithmeticError(f"no compact minimizer found for content {k}")
    return min(hits)
