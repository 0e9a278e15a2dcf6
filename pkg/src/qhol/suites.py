"""Seeded property suites: the executable acceptance harness.

Every suite returns a :class:`SuiteResult` that records how many instances
were checked and the worst one seen, so a failure always names an offending
input. All randomness flows from one ``random.Random(seed)``.
"""
from __future__ import annotations

import cmath
import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constructions import (
    FreeProductElement,
    OreExtension,
    OrePoly,
    SmashAlgebra,
    SmashElement,
    freeprod_flatten,
    freeprod_mul,
    freeprod_norm,
    freeprod_unflatten,
    ore_vs_smash_mismatches,
    ug_derivation_extension,
    ug_from_xy,
    ug_yx_to_xy,
)
from .errors import ExprError
from .free_series import FreeSeries, abelianize, eval_commutative, eval_matrices, superpose
from .projection import project_pi, section_kappa
from .qcalculus import QSeries, normal_form_word, qmul, weight_wq_method
from .qmatrix import QMatrix
from .seminorms import (
    NormParams,
    check_equicontinuity,
    check_submultiplicative,
    kappa_bound_sides,
    norm_free_polydisk,
    norm_q_polydisk,
    norm_ug,
    taylor_sides,
)
from .words import (
    MODULUS_RTOL,
    Permutation,
    apply_permutation,
    bc,
    cocycle_by_swaps,
    cocycle_lambda,
    compact_word,
    compactify,
    compactify_step,
    count_maximal_j_subwords,
    cycle_sigma,
    delta,
    is_compact,
    bnc,
    minimizing_words,
    rewrite_coefficient,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    metric: str
    worst_value: float | None = None
    worst: dict | None = None
    failures: int = 0
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.checked} checks, {self.failures} failures"
        if self.worst_value is not None:
            line += f", worst {self.metric} = {self.worst_value:.6g}"
        return line

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "metric": self.metric,
            "worst_value": self.worst_value,
            "worst": _jsonable(self.worst),
            "notes": self.notes,
            "seconds": round(self.seconds, 3),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)


class _Tracker:
    """Counts checks and keeps the instance with the largest metric."""

    def __init__(self, name: str, metric: str):
        self.name, self.metric = name, metric
        self.checked = 0
        self.failures = 0
        self.worst_value: float | None = None
        self.worst: dict | None = None
        self.first_failure: dict | None = None
        self.notes: list[str] = []
        self.start = time.perf_counter()

    def record(self, ok: bool, value: float | None = None, **instance):
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = dict(instance, value=value)
        if value is not None and (self.worst_value is None or value > self.worst_value):
            self.worst_value = value
            self.worst = dict(instance)

    def result(self) -> SuiteResult:
        worst = self.worst
        if self.failures and self.first_failure is not None and worst is None:
            worst = self.first_failure
        if self.failures and self.first_failure is not None:
            self.notes.append(f"first failure: {self.first_failure!r}")
        return SuiteResult(
            self.name,
            self.failures == 0,
            self.checked,
            self.metric,
            self.worst_value,
            worst,
            self.failures,
            self.notes,
            time.perf_counter() - self.start,
        )


def _rel(x: complex, y: complex) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def _terms_rel(a: dict, b: dict, atol: float = 1e-12) -> float:
    """Largest coefficient discrepancy, relative to the larger element's biggest coefficient."""
    scale = max([abs(c) for c in a.values()] + [abs(c) for c in b.values()] + [atol])
    return max((abs(a.get(k, 0) - b.get(k, 0)) for k in a.keys() | b.keys()), default=0.0) / scale


# --- random generators ---------------------------------------------------------------


def _random_unit(rng: random.Random) -> complex:
    return cmath.exp(2j * math.pi * rng.random())


def random_qmatrix(rng: random.Random, n: int, kind: str = "generic") -> QMatrix:
    """A random valid q matrix.

    ``generic`` draws log-uniform moduli in [1/4, 4] with random phases;
    ``below``/``above`` keep every upper entry inside/outside the unit circle;
    ``single`` uses one parameter for all ``i < j``; ``unimodular`` puts every
    entry on the circle; ``dyadic`` uses signed powers of two so products are exact;
    ``ties`` mixes unimodular and generic entries to force tied minimizers.
    """
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if kind == "single":
        m = math.exp(rng.uniform(-math.log(4), math.log(4)))
        return QMatrix.single(n, m * _random_unit(rng))
    entries = {}
    for p in pairs:
        if kind == "generic":
            v = math.exp(rng.uniform(-math.log(4), math.log(4))) * _random_unit(rng)
        elif kind == "below":
            v = rng.uniform(0.2, 1.0) * _random_unit(rng)
        elif kind == "above":
            v = rng.uniform(1.0, 4.0) * _random_unit(rng)
        elif kind == "unimodular":
            v = _random_unit(rng)
        elif kind == "dyadic":
            v = rng.choice([1, -1, 1j, -1j]) * 2.0 ** rng.randint(-3, 3)
        elif kind == "ties":
            v = _random_unit(rng) if rng.random() < 0.5 else math.exp(rng.uniform(-1.5, 1.5)) * _random_unit(rng)
        else:
            raise ValueError(f"unknown q kind {kind!r}")
        entries[p] = v
    return QMatrix.from_upper(n, entries)


def _coef(rng: random.Random) -> complex:
    return complex(rng.gauss(0, 1), rng.gauss(0, 1))


def random_exponent(rng: random.Random, n: int, max_total: int, laurent: bool = False) -> tuple[int, ...]:
    if laurent:
        return tuple(rng.randint(-max_total, max_total) for _ in range(n))
    total = rng.randint(0, max_total)
    k = [0] * n
    for _ in range(total):
        k[rng.randrange(n)] += 1
    return tuple(k)


def random_free(rng: random.Random, n: int, max_degree: int, max_terms: int = 5) -> FreeSeries:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = tuple(rng.randint(1, n) for _ in range(rng.randint(0, max_degree)))
        terms[w] = _coef(rng)
    return FreeSeries(n, terms)


def random_qseries(rng, q: QMatrix, max_degree: int, max_terms: int = 5, laurent: bool = False) -> QSeries:
    terms = {random_exponent(rng, q.n, max_degree, laurent): _coef(rng) for _ in range(rng.randint(1, max_terms))}
    return QSeries(q, terms, laurent)


def random_freeprod(rng, dims, max_blocks: int, max_exp: int = 3, max_terms: int = 4) -> FreeProductElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        word, last = [], None
        for _ in range(rng.randint(0, max_blocks)):
            choices = [i for i in range(1, len(dims) + 1) if i != last]
            if not choices:
                break
            i = rng.choice(choices)
            e = [0] * dims[i - 1]
            while not any(e):
                e = [rng.randint(0, max_exp) for _ in e]
            word.append((i, tuple(e)))
            last = i
        terms[tuple(word)] = _coef(rng)
    return FreeProductElement(dims, terms)


def _exponents(n: int, max_total: int, min_total: int = 0):
    for k in itertools.product(range(max_total + 1), repeat=n):
        if min_total <= sum(k) <= max_total:
            yield k


def _random_permutation(rng, d: int) -> Permutation:
    p = list(range(1, d + 1))
    rng.shuffle(p)
    return Permutation(tuple(p))


# --- word combinatorics --------------------------------------------------------------


def suite_cocycle(seed: int = 0, count: int = 1000, max_n: int = 4, max_len: int = 8,
                  exhaustive_len: int = 6, q: QMatrix | None = None) -> SuiteResult:
    """Cocycle law on random instances, and the inversion formula against adjacent swaps.

    The exhaustive part uses power-of-two q entries, whose products are exact in
    floating point, so agreement is demanded bit for bit.
    """
    rng = random.Random(seed)
    tr = _Tracker("cocycle", "relative error")
    for _ in range(count):
        n = q.n if q is not None else rng.randint(1, max_n)
        qm = q if q is not None else random_qmatrix(rng, n)
        d = rng.randint(1, max_len)
        alpha = tuple(rng.randint(1, n) for _ in range(d))
        sigma, tau = _random_permutation(rng, d), _random_permutation(rng, d)
        lhs = cocycle_lambda(qm, sigma * tau, alpha)
        rhs = cocycle_lambda(qm, sigma, apply_permutation(tau, alpha)) * cocycle_lambda(qm, tau, alpha)
        err = _rel(lhs, rhs)
        tr.record(err <= 1e-9, err, sigma=sigma.images, tau=tau.images, alpha=alpha)
    n_ex = 3
    qd = random_qmatrix(rng, n_ex, "dyadic")
    for d in range(exhaustive_len + 1):
        perms = list(Permutation.all(d))
        for alpha in itertools.product(range(1, n_ex + 1), repeat=d):
            for sigma in perms:
                a, b = cocycle_lambda(qd, sigma, alpha), cocycle_by_swaps(qd, sigma, alpha)
                tr.record(a == b, None, oracle="adjacent swaps", sigma=sigma.images, alpha=alpha)
    tr.notes.append(f"exhaustive swap oracle over words of length <= {exhaustive_len} on {n_ex} letters")
    return tr.result()


def lambda_sigma_st_closed_form(q: QMatrix, s: int, t: int, alpha) -> complex:
    """``prod_{i=s}^{t-1} q[alpha_i, alpha_t]`` for the cycle ``s -> s+1 -> ... -> t -> s``."""
    c = complex(1)
    for i in range(s, t):
        c *= q[alpha[i - 1], alpha[t - 1]]
    return c


def suite_sigma_st(seed: int = 0, max_len: int = 7, n: int = 3, q: QMatrix | None = None) -> SuiteResult:
    rng = random.Random(seed)
    qm = q if q is not None else random_qmatrix(rng, n)
    tr = _Tracker("sigma-st", "relative error")
    for d in range(2, max_len + 1):
        for s, t in itertools.combinations(range(1, d + 1), 2):
            sigma = cycle_sigma(s, t, d)
            for alpha in itertools.product(range(1, qm.n + 1), repeat=d):
                err = _rel(cocycle_lambda(qm, sigma, alpha), lambda_sigma_st_closed_form(qm, s, t, alpha))
                tr.record(err <= 1e-12, err, s=s, t=t, alpha=alpha)
    return tr.result()


def suite_weights(seed: int = 0, max_total: int = 6, max_n: int = 3, samples: int = 6,
                  q: QMatrix | None = None) -> SuiteResult:
    """Closed-form weights against brute-force minimisation, plus the q = 1/2, k = (2, 3) value."""
    rng = random.Random(seed)
    tr = _Tracker("weights", "relative error")
    cases = []
    if q is not None:
        cases.append(q)
    else:
        for n in range(1, max_n + 1):
            for kind in ("single", "below", "above"):
                cases += [random_qmatrix(rng, n, kind) for _ in range(samples)]
            cases.append(QMatrix.single(n, 0.5))
            cases.append(QMatrix.ones(n))
    for qm in cases:
        for k in _exponents(qm.n, max_total):
            value, method = weight_wq_method(qm, k)
            brute = minimizing_words(qm, k).weight
            err = _rel(value, brute)
            tr.record(err <= 1e-9, err, q=qm.to_json(), k=k, method=method)
    if q is None:
        value, method = weight_wq_method(QMatrix.single(2, 0.5), (2, 3))
        err = _rel(value, 1 / 64)
        tr.record(err <= 1e-12 and method.startswith("closed-form"), err, q="single 1/2", k=(2, 3), weight=value)
        tr.notes.append(f"w_q(2,3) at q=1/2: {value!r} via {method}")
    return tr.result()


def suite_wk_lemmas(seed: int = 0, max_total: int = 5, max_n: int = 3, matrices: int = 20,
                    q: QMatrix | None = None) -> SuiteResult:
    """Exhaustive check of the two characterisations of minimising words.

    (a) ``sigma(delta(k))`` lies in ``W(k)`` iff ``|lambda(sigma, delta(k))| = w_q(k)``;
    (b) for ``alpha`` in ``W(k)``: ``|lambda(sigma, alpha)| >= 1``, with equality iff
    ``sigma(alpha)`` lies in ``W(k)``.
    """
    rng = random.Random(seed)
    tr = _Tracker("wk-lemmas", "violation")
    kinds = ["generic", "ties", "unimodular", "below", "above"]
    qs = [q] if q is not None else [
        random_qmatrix(rng, rng.randint(2, max_n), kinds[i % len(kinds)]) for i in range(matrices)
    ]
    for qm in qs:
        for k in _exponents(qm.n, max_total, 1):
            mw = minimizing_words(qm, k)
            w, W = mw.weight, mw.words
            d = sum(k)
            perms = list(Permutation.all(d))
            base = delta(k)
            for sigma in perms:
                lam = abs(cocycle_lambda(qm, sigma, base))
                member = apply_permutation(sigma, base) in W
                at_min = abs(lam - w) <= MODULUS_RTOL * w
                tr.record(member == at_min, 0.0 if member == at_min else 1.0,
                          lemma="Wk", k=k, sigma=sigma.images)
            for alpha in sorted(W):
                for sigma in perms:
                    lam = abs(cocycle_lambda(qm, sigma, alpha))
                    member = apply_permutation(sigma, alpha) in W
                    is_one = abs(lam - 1) <= MODULUS_RTOL
                    ok = lam >= 1 - MODULUS_RTOL and member == is_one
                    tr.record(ok, max(0.0, 1 - lam), lemma="lambda=1", k=k, alpha=alpha, sigma=sigma.images)
    return tr.result()


def suite_compactify(seed: int = 0, max_total: int = 6, max_n: int = 3, matrices: int = 6,
                     q: QMatrix | None = None) -> SuiteResult:
    """Run compactification from every minimising word and check every step."""
    rng = random.Random(seed)
    tr = _Tracker("compactify", "violation")
    kinds = ["generic", "ties", "unimodular"]
    if q is not None:
        qs = [q]
    else:
        qs = [random_qmatrix(rng, n, kinds[i % len(kinds)]) for n in range(1, max_n + 1) for i in range(matrices)]
    for qm in qs:
        for k in _exponents(qm.n, max_total, 1):
            mw = minimizing_words(qm, k)
            W = mw.words
            compact_in_W = {w for w in W if is_compact(w)}
            for start in sorted(W):
                out, steps = compactify(qm, start)
                ok = is_compact(out) and out in W and all(v <= sum(k) for v in steps.values())
                tr.record(ok, 0.0 if ok else 1.0, check="compactify", q=qm.to_json(), k=k, start=start, out=out)
                # single-step postconditions
                w = start
                while bnc(w):
                    j = min(bnc(w))
                    nxt = compactify_step(qm, w, j)
                    ok = (
                        nxt in W
                        and count_maximal_j_subwords(nxt, j) == count_maximal_j_subwords(w, j) - 1
                        and bc(w, qm.n) <= bc(nxt, qm.n)
                    )
                    tr.record(ok, 0.0 if ok else 1.0, check="step", k=k, word=w, letter=j)
                    w = nxt
                # the weight reached does not depend on the starting word
                err = _rel(abs(rewrite_coefficient(qm, out)), mw.weight)
                tr.record(err <= MODULUS_RTOL, err, check="weight invariance", k=k, start=start)
            for method in ("scan", "compactify"):
                cw = compact_word(qm, k, method=method)
                ok = cw in compact_in_W
                tr.record(ok, 0.0 if ok else 1.0, check=f"compact_word/{method}", k=k, word=cw)
            scan_hits = {
                w for w in itertools.permutations(delta(k))
                if is_compact(w) and abs(rewrite_coefficient(qm, w)) <= mw.weight * (1 + MODULUS_RTOL)
            }
            tr.record(scan_hits == compact_in_W, 0.0 if scan_hits == compact_in_W else 1.0,
                      check="compact minimisers", k=k)
    return tr.result()


# --- q-calculus ----------------------------------------------------------------------


def suite_pikappa(seed: int = 0, max_total: int = 6, max_n: int = 3, combos: int = 200,
                  matrices: int = 3, q: QMatrix | None = None) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("pikappa", "coefficient error")
    kinds = ["generic", "below", "above", "ties", "single"]
    if q is not None:
        qs = [q]
    else:
        qs = [random_qmatrix(rng, n, kinds[(i + n) % len(kinds)]) for n in range(1, max_n + 1) for i in range(matrices)]
    for qm in qs:
        for k in _exponents(qm.n, max_total):
            a = QSeries.monomial(qm, k)
            lifted = section_kappa(a)
            err = _terms_rel(project_pi(lifted, qm).terms, a.terms)
            tr.record(err <= 1e-9, err, q=qm.to_json(), k=k)
            # the lift sits on one compact word of least rewriting modulus
            (word, lam), = lifted.terms.items()
            w = minimizing_words(qm, k).weight
            ok = is_compact(word) and abs(abs(lam) - w) <= MODULUS_RTOL * w
            tr.record(ok, None, check="compact minimising support", q=qm.to_json(), k=k, word=word)
        # pi vanishes on the defining relations
        for i, j in itertools.permutations(range(1, qm.n + 1), 2):
            rel = FreeSeries(qm.n, {(i, j): 1, (j, i): -qm[i, j]})
            residue = project_pi(rel, qm)
            raw = abs(normal_form_word(qm, (i, j))[0] - qm[i, j] * normal_form_word(qm, (j, i))[0])
            tr.record(not residue and raw <= 4e-16 * max(1.0, abs(qm[i, j])), raw, relation=(i, j))
    for _ in range(combos):
        qm = qs[rng.randrange(len(qs))]
        a = random_qseries(rng, qm, max_total, 6)
        err = _terms_rel(project_pi(section_kappa(a), qm).terms, a.terms)
        tr.record(err <= 1e-9, err, q=qm.to_json(), a=a.terms)
        # pi is multiplicative
        f, g = random_free(rng, qm.n, 4), random_free(rng, qm.n, 4)
        err = _terms_rel(project_pi(f * g, qm).terms, (project_pi(f, qm) * project_pi(g, qm)).terms)
        tr.record(err <= 1e-9, err, check="pi multiplicative", f=f.terms, g=g.terms)
    return tr.result()


def suite_assoc(seed: int = 0, count: int = 200, max_degree: int = 4, oracle_total: int = 8,
                q: QMatrix | None = None) -> SuiteResult:
    """Associativity and unit laws of every product, and qmul against the word oracle."""
    rng = random.Random(seed)
    tr = _Tracker("assoc", "relative error")

    def check(label, a, b, c, one):
        ab_c, a_bc = (a * b) * c, a * (b * c)
        ta = ab_c.terms() if callable(getattr(ab_c, "terms")) else ab_c.terms
        tb = a_bc.terms() if callable(getattr(a_bc, "terms")) else a_bc.terms
        err = _terms_rel(ta, tb)
        tr.record(err <= 1e-9, err, product=label)
        unit = (one * a - a, a * one - a)
        ok = all(not u for u in unit)
        tr.record(ok, None, product=label, law="unit")

    for _ in range(count):
        n = q.n if q is not None else rng.randint(1, 3)
        qm = q if q is not None else random_qmatrix(rng, n, rng.choice(["generic", "unimodular"]))
        check("fmul", *(random_free(rng, n, max_degree) for _ in range(3)), FreeSeries.one(n))
        check("qmul", *(random_qseries(rng, qm, max_degree) for _ in range(3)), QSeries.one(qm))
        check("qmul-laurent", *(random_qseries(rng, qm, max_degree, laurent=True) for _ in range(3)),
              QSeries.one(qm, True))
        dims = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 3)))
        check("freeprod", *(random_freeprod(rng, dims, max_degree) for _ in range(3)), FreeProductElement.one(dims))
        m = rng.randint(1, 2)
        ext = OreExtension.diagonal(random_qmatrix(rng, m), [_coef(rng) for _ in range(m)])
        ores = [OrePoly.from_terms(ext, {(rng.randint(0, 3), random_exponent(rng, m, 2)): _coef(rng)
                                        for _ in range(3)}) for _ in range(3)]
        check("ore", *ores, OrePoly.one(ext))
        alg = SmashAlgebra(random_qmatrix(rng, m), QMatrix.ones(1), (tuple(_coef(rng) for _ in range(m)),), "total")
        sm = [SmashElement(alg, {(random_exponent(rng, m, 2), (rng.randint(0, 3),)): _coef(rng) for _ in range(3)})
              for _ in range(3)]
        check("smash", *sm, SmashElement.one(alg))
    # qmul on monomials equals concatenation followed by normal form
    qs = [q] if q is not None else [random_qmatrix(rng, n) for n in (1, 2, 3)]
    for qm in qs:
        exps = list(_exponents(qm.n, oracle_total))
        for k in exps:
            for l in exps:
                if sum(k) + sum(l) > oracle_total:
                    continue
                prod = qmul(QSeries.monomial(qm, k), QSeries.monomial(qm, l))
                c, key = normal_form_word(qm, delta(k) + delta(l))
                err = _rel(prod.coefficient(key), c)
                tr.record(err <= 1e-12 and len(prod) == 1, err, check="word oracle", k=k, l=l)
    return tr.result()


# --- norms ---------------------------------------------------------------------------


def _rho(rng, n: int, lo: float = 0.2, hi: float = 2.0) -> tuple[float, ...]:
    return tuple(rng.uniform(lo, hi) for _ in range(n))


def suite_kappabound(seed: int = 0, count: int = 500, max_total: int = 5, max_n: int = 3,
                     q: QMatrix | None = None) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("kappabound", "lhs - rhs")
    kinds = ["generic", "below", "above", "single", "ties"]
    for _ in range(count):
        n = q.n if q is not None else rng.randint(1, max_n)
        qm = q if q is not None else random_qmatrix(rng, n, rng.choice(kinds))
        a = random_qseries(rng, qm, max_total)
        rho, tau = _rho(rng, n), rng.uniform(1.0, 3.0)
        lhs, rhs = kappa_bound_sides(a, qm, rho, tau)
        tr.record(lhs <= rhs + 1e-9, lhs - rhs, q=qm.to_json(), a=a.terms, rho=rho, tau=tau)
    if q is None:
        tight = QSeries.monomial(QMatrix.single(2, 0.5), (1, 1))
        lhs, rhs = kappa_bound_sides(tight, tight.q, (1.0, 1.0), 2.0)
        ok = abs(lhs - 2) <= 1e-12 and abs(rhs - 2) <= 1e-12
        tr.record(ok, lhs - rhs, instance="tight", lhs=lhs, rhs=rhs)
        tr.notes.append(f"tight instance: {lhs!r} <= {rhs!r}")
    return tr.result()


def _submult_instance(rng, variant: str, max_degree: int, q: QMatrix | None):
    n = q.n if q is not None else rng.randint(1, 3)
    if variant == "free_entire":
        f, g = random_free(rng, n, max_degree), random_free(rng, n, max_degree)
        return NormParams(variant, rho=rng.uniform(0.2, 2.0)), f, g
    if variant == "free_polydisk":
        f, g = random_free(rng, n, max_degree), random_free(rng, n, max_degree)
        return NormParams(variant, rho=_rho(rng, n), tau=rng.uniform(1.0, 3.0)), f, g
    if variant == "q_polydisk":
        kind = rng.choice(["generic", "below", "above", "single", "ties"]) if q is None else None
        qm = q if q is not None else random_qmatrix(rng, n, kind)
        deg = max_degree if q is None and kind in ("below", "above", "single") else min(max_degree, 3)
        return NormParams(variant, rho=_rho(rng, n)), random_qseries(rng, qm, deg), random_qseries(rng, qm, deg)
    if variant == "q_polyannulus":
        qm = q if q is not None and q.is_unimodular() else random_qmatrix(rng, n, "unimodular")
        rho = _rho(rng, n, 0.2, 1.0)
        tau = tuple(r * rng.uniform(1.01, 3.0) for r in rho)
        f = random_qseries(rng, qm, max_degree, laurent=True)
        g = random_qseries(rng, qm, max_degree, laurent=True)
        return NormParams(variant, rho=rho, tau=tau), f, g
    raise ValueError(f"unknown variant {variant!r}")


SUBMULT_VARIANTS = ("free_entire", "free_polydisk", "q_polydisk", "q_polyannulus")


def suite_submult(seed: int = 0, count: int = 1000, max_degree: int = 6, variants=SUBMULT_VARIANTS,
                  q: QMatrix | None = None) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("submult", "ratio ||fg|| / (||f|| ||g||)")
    per_variant = {}
    for variant in variants:
        worst = 0.0
        for _ in range(count):
            params, f, g = _submult_instance(rng, variant, max_degree, q)
            holds, ratio = check_submultiplicative(variant, params, f, g)
            worst = max(worst, ratio)
            tr.record(holds, ratio, variant=variant, rho=params.rho, tau=params.tau, f=f.terms, g=g.terms)
        per_variant[variant] = worst
    tr.notes += [f"{v}: worst ratio {r:.12g}" for v, r in per_variant.items()]
    return tr.result()


def suite_taylor(seed: int = 0, max_len: int = 8, max_n: int = 3, params: int = 50) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("taylor", "lhs / rhs")
    words = [w for d in range(max_len + 1) for w in itertools.product(range(1, max_n + 1), repeat=d)]
    for _ in range(params):
        R1 = rng.uniform(0.5, 3.0)
        rho = (R1 * rng.uniform(0.05, 0.99),) + _rho(rng, max_n - 1, 0.05, 5.0)
        tau = rng.uniform(1.0, 3.0)
        R = (R1,) + (math.inf,) * (max_n - 1)
        if any(math.isfinite(x) for x in R[1:]) or not rho[0] < R[0]:
            raise AssertionError("bad Taylor parameters")
        for w in words:
            lhs, rhs = taylor_sides(w, rho, tau)
            ratio = lhs / rhs
            tr.record(ratio <= 1 + 1e-9, ratio, word=w, rho=rho, tau=tau)
    return tr.result()


def suite_equicont(seed: int = 0, max_degree: int = 40, q_mod: float = 0.5, rho: float = 0.99,
                   r: float = 0.995, bound: float = 1e6) -> SuiteResult:
    """The scaling ``z -> z / q`` with ``|q| < 1`` is not equicontinuous; its ratios blow up.

    The reported growth sequence is checked against norms of ``sigma^k``
    applied to the monomial, computed directly.
    """
    rng = random.Random(seed)
    tr = _Tracker("equicont", "growth")
    q_scale = q_mod * _random_unit(rng)
    rep = check_equicontinuity([q_scale], max_degree, "semigroup", rho, r)
    k_hit = rep.first_exceeding(bound)
    tr.record(not rep.holds, None, check="contraction fails", q=q_scale)
    tr.record(k_hit is not None and k_hit <= max_degree, rep.growth[-1] if rep.growth else None,
              check=f"growth exceeds {bound:g}", first_k=k_hit)
    one = QMatrix.ones(1)
    for k, g in enumerate(rep.growth, start=1):
        image = QSeries(one, {(k,): q_scale ** (-k)})  # sigma(z)^k
        direct = norm_q_polydisk(image, (rho,)) / norm_q_polydisk(QSeries.monomial(one, (k,)), (r,))
        err = _rel(direct, g)
        tr.record(err <= 1e-9, None, check="growth vs direct norms", k=k, err=err)
    for mods, mode, expect in (([1.0, 2.0], "semigroup", True), ([1.0, 1.0], "group", True),
                               ([1.0, 2.0], "group", False), ([0.5, 1.0], "semigroup", False)):
        scale = [m * _random_unit(rng) for m in mods]
        got = check_equicontinuity(scale, 6, mode, rho, r).holds
        tr.record(got == expect, None, check="mode", mods=mods, mode=mode)
    tr.notes.append(f"|q| = {q_mod}: growth first exceeds {bound:g} at k = {k_hit}")
    return tr.result()


# --- constructions -------------------------------------------------------------------


def suite_freeprod(seed: int = 0, count: int = 500, max_blocks: int = 4, max_factors: int = 3) -> SuiteResult:
    """Flattening univariate free products is multiplicative and preserves the norms.

    With power-of-two radii every weight is computed exactly, so the two norms
    must agree bit for bit; generic radii are compared at 1e-12.
    """
    rng = random.Random(seed)
    tr = _Tracker("freeprod", "relative error")
    for _ in range(count):
        m = rng.randint(1, max_factors)
        dims = (1,) * m
        u, v = random_freeprod(rng, dims, max_blocks), random_freeprod(rng, dims, max_blocks)
        fu, fv = freeprod_flatten(u), freeprod_flatten(v)
        err = _terms_rel(freeprod_flatten(freeprod_mul(u, v)).terms, (fu * fv).terms)
        tr.record(err == 0.0, err, check="multiplicative", u=u.terms, v=v.terms)
        tr.record(freeprod_unflatten(fu).terms == u.terms, None, check="inverse", u=u.terms)
        rho = tuple(2.0 ** rng.randint(-3, 3) for _ in range(m))
        tau = 2.0 ** rng.randint(0, 3)
        for x in (u, v, freeprod_mul(u, v)):
            a, b = freeprod_norm(x, rho, tau), norm_free_polydisk(freeprod_flatten(x), rho, tau)
            tr.record(a == b, _rel(a, b), check="norm (dyadic radii)", x=x.terms, rho=rho, tau=tau)
        rho = _rho(rng, m)
        tau = rng.uniform(1.0, 3.0)
        a, b = freeprod_norm(u, rho, tau), norm_free_polydisk(fu, rho, tau)
        tr.record(_rel(a, b) <= 1e-12, _rel(a, b), check="norm (generic radii)", u=u.terms, rho=rho, tau=tau)
    return tr.result()


def suite_ore_smash(seed: int = 0, max_degree: int = 5, samples: int = 3) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("ore-smash", "mismatches")
    diags = [[2.0], [0.5 * _random_unit(rng)], [1.0, -1.0]]
    diags += [[_coef(rng) for _ in range(rng.randint(1, 2))] for _ in range(samples)]
    for diag in diags:
        bound = max_degree if len(diag) == 1 else min(max_degree, 4)
        bad = ore_vs_smash_mismatches(diag, bound)
        tr.record(not bad, float(len(bad)), sigma=diag, degree=bound, first=bad[0] if bad else None)
    return tr.result()


def _ug_hand(a: int, b: int, c: int, d: int) -> dict[tuple[int, int], complex]:
    """``(x^a y^b)(x^c y^d) = x^a (x - b)^c y^(b+d)``, expanded by the binomial theorem."""
    out = {}
    for m in range(c + 1):
        coef = math.comb(c, m) * (-b) ** (c - m)
        if coef:
            out[(a + m, b + d)] = out.get((a + m, b + d), 0) + complex(coef)
    return out


def suite_ug(seed: int = 0, max_degree: int = 4, cutoffs=(0, 1, 2, 4, 8), ts=(0.5, 1.0, 2.5)) -> SuiteResult:
    tr = _Tracker("ug", "coefficient error")
    basis = [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1) if i + j <= max_degree]
    yx = ug_derivation_extension()
    for (a, b), (c, d) in itertools.product(basis, repeat=2):
        got = (ug_from_xy({(a, b): 1}) * ug_from_xy({(c, d): 1})).xy_terms()
        hand = _ug_hand(a, b, c, d)
        err = _terms_rel(got, hand)
        tr.record(err == 0.0, err, product=((a, b), (c, d)))
        # same product computed in the y^j x^i presentation, then converted
        left = _xy_in_yx(yx, a, b)
        right = _xy_in_yx(yx, c, d)
        err = _terms_rel(ug_yx_to_xy(left * right), hand)
        tr.record(err <= 1e-12, err, product=((a, b), (c, d)), route="y^j x^i presentation")
        for n in cutoffs:
            for t in ts:
                direct = math.fsum(abs(v) * t ** i for (i, j), v in hand.items() if j <= n)
                err = _rel(norm_ug(ug_from_xy({(a, b): 1}) * ug_from_xy({(c, d): 1}), n, t), direct)
                tr.record(err <= 1e-12, err, norm=(n, t), product=((a, b), (c, d)))
    return tr.result()


def _xy_in_yx(ext, i: int, j: int) -> OrePoly:
    """``x^i y^j`` inside ``C[y][x; delta]``: the product of generators taken in that order."""
    x = OrePoly.z(ext)
    y = OrePoly.coefficient(ext, QSeries.generator(ext.q, 1))
    return (x ** i) * (y ** j)


# --- functional calculus -------------------------------------------------------------


def _random_matrices(rng, n: int, size: int) -> list[np.ndarray]:
    out = []
    for _ in range(n):
        m = np.array([[_coef(rng) for _ in range(size)] for _ in range(size)])
        out.append(m / max(1.0, np.linalg.norm(m, 2)))
    return out


def _mat_err(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    return float(np.abs(a - b).max()) / scale


def suite_calculus(seed: int = 0, count: int = 100, max_degree: int = 5, max_size: int = 4) -> SuiteResult:
    rng = random.Random(seed)
    tr = _Tracker("calculus", "relative error")
    for _ in range(count):
        n, size = rng.randint(1, 3), rng.randint(1, max_size)
        mats = _random_matrices(rng, n, size)
        f, g = random_free(rng, n, max_degree), random_free(rng, n, max_degree)
        err = _mat_err(eval_matrices(f * g, mats), eval_matrices(f, mats) @ eval_matrices(g, mats))
        tr.record(err <= 1e-8, err, law="homomorphism", f=f.terms, g=g.terms)
        m = rng.randint(1, 3)
        outer = random_free(rng, m, 3)
        inner = [random_free(rng, n, 2, 3) for _ in range(m)]
        lhs = eval_matrices(superpose(outer, inner), mats)
        rhs = eval_matrices(outer, [eval_matrices(h, mats) for h in inner])
        err = _mat_err(lhs, rhs)
        tr.record(err <= 1e-8, err, law="superposition", g=outer.terms)
        err = _terms_rel(abelianize(f * g).terms, (abelianize(f) * abelianize(g)).terms)
        tr.record(err <= 1e-9, err, law="abelianization multiplicative")
        # commuting tuples: diagonal, and a common conjugate of diagonal matrices
        points = [[_coef(rng) * 0.8 for _ in range(n)] for _ in range(size)]
        diag = [np.diag([p[i] for p in points]) for i in range(n)]
        expected = np.diag([eval_commutative(abelianize(f), p) for p in points])
        err = _mat_err(eval_matrices(f, diag), expected)
        tr.record(err <= 1e-8, err, law="calc_compat (diagonal)")
        s = np.eye(size) + 0.3 * _random_matrices(rng, 1, size)[0]
        s_inv = np.linalg.inv(s)
        conj = [s @ d @ s_inv for d in diag]
        err = _mat_err(eval_matrices(f, conj), s @ expected @ s_inv)
        tr.record(err <= 1e-8, err, law="calc_compat (conjugated)")
    return tr.result()


# --- parser --------------------------------------------------------------------------

_FUZZ_ALPHABET = ["f1", "f2", "f3", "z1", "z2", "t", "i", "1", "0.5", "2i", "1e3", "+", "-", "*", "^", "(", ")",
                  " ", "-1", "^-2", "1.5-2i", ".", "e", "ff", "f0", "f99"]


def suite_parser(seed: int = 0, fuzz: int = 100_000, roundtrip: int = 10_000) -> SuiteResult:
    """Parser robustness on random bytes and token soup, and exact serialization round trips."""
    from .config import SessionConfig
    from .expr import evaluate, parse_expr
    from .serialize import deserialize, serialize

    rng = random.Random(seed)
    tr = _Tracker("parser", "round-trip error")
    cfgs = [
        SessionConfig(3, "free", max_terms=2000, max_power=8),
        SessionConfig(2, "q_polydisk", random_qmatrix(rng, 2), max_terms=2000, max_power=8),
        SessionConfig(2, "q_laurent", random_qmatrix(rng, 2, "unimodular"), max_terms=2000, max_power=8),
    ]
    crashes = 0
    for i in range(fuzz):
        cfg = cfgs[i % len(cfgs)]
        if i % 2:
            raw = bytes(rng.randrange(256) for _ in range(rng.randint(0, 24)))
            text = raw.decode("utf-8", errors="surrogateescape")
        else:
            text = "".join(rng.choice(_FUZZ_ALPHABET) for _ in range(rng.randint(0, 16)))
        try:
            evaluate(text, cfg)
        except ExprError as exc:
            if exc.offset is not None and not 0 <= exc.offset <= len(text.encode("utf-8", "surrogateescape")):
                crashes += 1
                tr.record(False, None, text=text, problem="offset outside input")
                continue
        except Exception as exc:  # anything else is a crash
            crashes += 1
            tr.record(False, None, text=text, problem=f"{type(exc).__name__}: {exc}")
            continue
        tr.record(True, None)
    tr.notes.append(f"fuzz: {fuzz} inputs, {crashes} crashes")
    try:
        parse_expr("(" * 5000 + "f1" + ")" * 5000, cfgs[0])
        tr.record(False, None, problem="deep nesting accepted")
    except ExprError:
        tr.record(True, None)
    for i in range(roundtrip):
        cfg = cfgs[i % len(cfgs)]
        if cfg.is_free:
            x = random_free(rng, cfg.n, 6, 6)
        else:
            x = random_qseries(rng, cfg.q, 6, 6, cfg.laurent)
        text = serialize(x)
        back = deserialize(text, cfg)
        exact = back.terms == x.terms and all(
            math.copysign(1, back.terms[k].real) == math.copysign(1, c.real) for k, c in x.terms.items()
        )
        tr.record(exact, None, check="deserialize", text=text)
        lowered = evaluate(text, cfg)
        err = _terms_rel(lowered.terms, x.terms)
        tr.record(err <= 1e-12, err, check="parse+lower", text=text)
        again = serialize(lowered)
        tr.record(serialize(evaluate(again, cfg)) == again, None, check="idempotent", text=again)
    return tr.result()


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "cocycle": suite_cocycle,
    "sigma-st": suite_sigma_st,
    "weights": suite_weights,
    "wk-lemmas": suite_wk_lemmas,
    "compactify": suite_compactify,
    "pikappa": suite_pikappa,
    "assoc": suite_assoc,
    "kappabound": suite_kappabound,
    "submult": suite_submult,
    "taylor": suite_taylor,
    "equicont": suite_equicont,
    "freeprod": suite_freeprod,
    "ore-smash": suite_ore_smash,
    "ug": suite_ug,
    "calculus": suite_calculus,
    "parser": suite_parser,
}

# which keyword of each suite a --max-degree flag controls
DEGREE_KEYWORD = {
    "cocycle": "max_len",
    "sigma-st": "max_len",
    "weights": "max_total",
    "wk-lemmas": "max_total",
    "compactify": "max_total",
    "pikappa": "max_total",
    "assoc": "max_degree",
    "kappabound": "max_total",
    "submult": "max_degree",
    "taylor": "max_len",
    "equicont": "max_degree",
    "freeprod": "max_blocks",
    "ore-smash": "max_degree",
    "ug": "max_degree",
    "calculus": "max_degree",
}

# suites that accept a caller-supplied q matrix
TAKES_Q = {"cocycle", "sigma-st", "weights", "wk-lemmas", "compactify", "pikappa", "assoc", "kappabound", "submult"}


def run_suite(name: str, seed: int = 0, max_degree: int | None = None, q: QMatrix | None = None, **kwargs) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    if max_degree is not None and name in DEGREE_KEYWORD:
        kwargs[DEGREE_KEYWORD[name]] = max_degree
    if q is not None and name in TAKES_Q:
        kwargs["q"] = q
    return SUITES[name](seed=seed, **kwargs)
