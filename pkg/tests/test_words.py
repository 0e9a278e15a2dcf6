import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhol.errors import CapExceeded, IndexOutOfRange, LengthMismatch, NegativeExponent, NotApplicable
from qhol.qmatrix import QMatrix
from qhol.words import (
    Permutation,
    apply_permutation,
    bc,
    bnc,
    cocycle_by_swaps,
    cocycle_lambda,
    compact_word,
    compactify,
    compactify_step,
    count_maximal_j_subwords,
    cycle_sigma,
    delta,
    is_compact,
    minimizing_words,
    multinomial,
    rewrite_coefficient,
    s_count,
    word_content,
)


def test_s_count():
    assert s_count((1, 1, 2, 2)) == 1
    assert s_count(()) == -1
    assert s_count((1, 2, 1)) == 2


def test_delta():
    assert delta((2, 1)) == (1, 1, 2)
    assert delta((0, 0)) == ()
    assert delta((1, 0, 2)) == (1, 3, 3)
    with pytest.raises(NegativeExponent):
        delta((1, -1))


def test_word_content():
    assert word_content((2, 1, 2), 2) == (1, 2)
    assert word_content((), 3) == (0, 0, 0)
    assert word_content(delta((3, 1)), 2) == (3, 1)


def test_apply_permutation():
    assert apply_permutation(Permutation.identity(3), (1, 2, 1)) == (1, 2, 1)
    assert apply_permutation(Permutation((2, 1)), (1, 2)) == (2, 1)
    assert apply_permutation(cycle_sigma(1, 3, 3), (1, 2, 3)) == (3, 1, 2)
    with pytest.raises(LengthMismatch):
        apply_permutation(Permutation.identity(2), (1, 2, 1))


def test_apply_permutation_is_an_action():
    w = (1, 2, 3, 1)
    for s in Permutation.all(4):
        for t in Permutation.all(4):
            assert apply_permutation(s * t, w) == apply_permutation(s, apply_permutation(t, w))


def test_cycle_sigma():
    assert cycle_sigma(1, 2, 2) == Permutation((2, 1))
    for d in range(2, 7):
        for s, t in itertools.permutations(range(1, d + 1), 2):
            assert cycle_sigma(s, t, d) * cycle_sigma(t, s, d) == Permutation.identity(d)
    assert cycle_sigma(2, 4, 5).images == (1, 3, 4, 2, 5)
    with pytest.raises(IndexOutOfRange):
        cycle_sigma(0, 2, 3)


def test_cocycle_lambda_examples():
    q = QMatrix.single(2, 0.3 + 0.4j)
    assert cocycle_lambda(q, Permutation.identity(4), (2, 1, 2, 1)) == 1
    assert cocycle_lambda(q, Permutation((2, 1)), (1, 2)) == q[1, 2]
    with pytest.raises(LengthMismatch):
        cocycle_lambda(q, Permutation.identity(2), (1,))


def test_lambda_sigma_st_closed_form(rng):
    q = QMatrix.from_upper(3, {(1, 2): 0.5j, (1, 3): 3.0, (2, 3): -0.25 + 1j})
    for d in range(2, 6):
        for alpha in itertools.product((1, 2, 3), repeat=d):
            for s, t in itertools.combinations(range(1, d + 1), 2):
                expected = math.prod(q[alpha[i - 1], alpha[t - 1]] for i in range(s, t))
                assert cocycle_lambda(q, cycle_sigma(s, t, d), alpha) == pytest.approx(expected, rel=1e-12)


def test_lambda_matches_rewriting():
    # x_w = lambda(sigma, w) x_{sigma(w)}, read off through the rewrite coefficients
    q = QMatrix.from_upper(3, {(1, 2): 0.5j, (1, 3): 3.0, (2, 3): -0.25 + 1j})
    w = (3, 1, 2, 1, 3)
    for s in Permutation.all(5):
        lhs = rewrite_coefficient(q, apply_permutation(s, w))
        rhs = rewrite_coefficient(q, w) * cocycle_lambda(q, s, w)
        assert lhs == pytest.approx(rhs, rel=1e-12)


words = st.lists(st.integers(1, 3), min_size=0, max_size=6).map(tuple)


@settings(max_examples=200, deadline=None)
@given(words, st.randoms(use_true_random=False))
def test_inversion_formula_matches_swaps(w, r):
    q = QMatrix.from_upper(3, {(1, 2): 2.0, (1, 3): -0.5j, (2, 3): 0.25})
    p = list(range(1, len(w) + 1))
    r.shuffle(p)
    s = Permutation(tuple(p))
    assert cocycle_lambda(q, s, w) == cocycle_by_swaps(q, s, w)


def test_runs_and_compactness():
    assert count_maximal_j_subwords((1, 1, 2, 2, 1), 1) == 2
    assert count_maximal_j_subwords((1, 1, 2, 2, 1), 2) == 1
    assert count_maximal_j_subwords((), 1) == 0
    assert is_compact((2, 2, 1, 1, 1))
    assert not is_compact((1, 2, 1))
    assert is_compact(())
    assert bnc((1, 2, 1, 3, 2)) == {1, 2}
    assert bc((1, 2, 1, 3, 2), 4) == {3, 4}


def test_minimizing_words_examples(q_half):
    mw = minimizing_words(q_half, (1, 1))
    assert mw.weight == pytest.approx(0.5)
    assert mw.words == {(2, 1)}
    uni = QMatrix.from_upper(3, {(1, 2): 1j, (1, 3): -1, (2, 3): (1 + 1j) / math.sqrt(2)})
    k = (2, 1, 1)
    mw = minimizing_words(uni, k)
    assert mw.weight == pytest.approx(1)
    assert mw.words == set(itertools.permutations(delta(k)))
    mw = minimizing_words(uni, (0, 4, 0))
    assert mw.weight == 1 and mw.words == {(2, 2, 2, 2)}


def test_minimizing_words_brute_force_oracle():
    # the DFS weights agree with rewriting each distinct shuffle from scratch
    q = QMatrix.from_upper(3, {(1, 2): 0.4, (1, 3): 2.5j, (2, 3): 0.7 - 1.1j})
    k = (2, 2, 1)
    moduli = {w: abs(rewrite_coefficient(q, w)) for w in set(itertools.permutations(delta(k)))}
    best = min(moduli.values())
    mw = minimizing_words(q, k)
    assert mw.weight == pytest.approx(best, rel=1e-12)
    assert mw.words == {w for w, m in moduli.items() if m <= best * (1 + 1e-9)}


def test_minimizing_words_cap():
    q = QMatrix.ones(3)
    assert multinomial((4, 4, 4)) == 34650
    with pytest.raises(CapExceeded):
        minimizing_words(q, (4, 4, 4), cap=1000)


def test_compactify_step_examples(q_half):
    assert compactify_step(QMatrix.ones(2), (1, 2, 1), 1) in {(1, 1, 2), (2, 1, 1)}
    for k in [(2, 2), (3, 2), (2, 3)]:
        W = minimizing_words(q_half, k).words
        for w in W:
            if count_maximal_j_subwords(w, 1) >= 2:
                assert compactify_step(q_half, w, 1) in W
    with pytest.raises(NotApplicable):
        compactify_step(q_half, (1, 1, 2), 1)


def test_compactify_reaches_compact_minimizer():
    q = QMatrix.from_upper(3, {(1, 2): 1j, (1, 3): 0.5, (2, 3): 1})
    for k in [(2, 2, 1), (1, 2, 2), (2, 1, 2)]:
        W = minimizing_words(q, k).words
        for w in W:
            out, steps = compactify(q, w)
            assert is_compact(out) and out in W
            assert all(v <= sum(k) for v in steps.values())


def test_compact_word_examples(q_half):
    assert compact_word(q_half, (1, 1)) == (2, 1)
    assert compact_word(QMatrix.ones(2), (2, 1)) == (1, 1, 2)
    assert compact_word(QMatrix.ones(3), (0, 0, 0)) == ()
    assert compact_word(q_half, (1, 1), method="compactify") == (2, 1)
