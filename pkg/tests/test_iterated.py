import itertools

import numpy as np
import pytest

from hvol.curve import PathWord, a_loop, b_loop, e, ie, relator_word
from hvol.iterated import (
    alpha_alpha_b_display,
    basic_iterated_matrix,
    beta_beta_a_display,
    harmonic_iterated_matrix,
    harmonic_pair_iterated,
    k_combination_iterated,
    loop_iterated_closed,
    segment_iterated,
    word_iterated,
)
from hvol.periods import alpha, beta, omega, omega_bar, segment_period


def test_segment_rule_half_product():
    assert segment_iterated(3, omega(1), omega(1), e(0)) == pytest.approx(0.5)
    for letter in (e(3), ie(3), e(3).inverse(), ie(3).inverse()):
        p1 = segment_period(3, omega(1), letter)
        p2 = segment_period(3, omega_bar(2), letter)
        assert segment_iterated(3, omega(1), omega_bar(2), letter) == pytest.approx(0.5 * p1 * p2)


def test_segment_rule_rejects_harmonic():
    with pytest.raises(ValueError):
        segment_iterated(3, alpha(1), omega(1), e(0))


def test_shuffle_fold_two_letters_by_hand():
    # int_{e_1 . i(e_2)} w1 w2 = seg(e_1) + seg(i e_2) + P_e1(w1) P_ie2(w2)
    w = PathWord([e(1), ie(2)])
    p = lambda f, l: segment_period(3, f, l)
    expected = (
        0.5 * p(omega(1), e(1)) * p(omega(2), e(1))
        + 0.5 * p(omega(1), ie(2)) * p(omega(2), ie(2))
        + p(omega(1), e(1)) * p(omega(2), ie(2))
    )
    assert word_iterated(3, omega(1), omega(2), w) == pytest.approx(expected)


@pytest.mark.parametrize("g", [3, 4, 5])
def test_engine_matches_loop_formulas(g):
    for k in range(1, g + 1):
        for kind, word in (("a", a_loop(g, k)), ("b", b_loop(g, k))):
            m = basic_iterated_matrix(g, word)
            for i, j in itertools.product(range(1, g + 1), repeat=2):
                assert abs(m[i - 1, j - 1] - loop_iterated_closed(g, i, j, k, kind)) < 1e-10
                assert abs(m[i - 1, g + j - 1] - loop_iterated_closed(g, i, j, k, kind, True)) < 1e-10


@pytest.mark.parametrize("g", [3, 4, 5])
def test_shuffle_symmetrization(g):
    # int w1 w2 + int w2 w1 = int w1 * int w2 on every word
    for word in (a_loop(g, 2), b_loop(g, g), relator_word(g)):
        m = basic_iterated_matrix(g, word)
        p = np.diag(m) * 2  # int w w = (int w)^2 / 2
        total = np.array([sum(segment_period(g, f, l) for l in word) for f in
                          [omega(i) for i in range(1, g + 1)] + [omega_bar(i) for i in range(1, g + 1)]])
        assert np.allclose(m + m.T, np.outer(total, total), atol=1e-12)
        assert np.allclose(p, total**2, atol=1e-12)


@pytest.mark.parametrize("g", [3, 4, 5])
def test_harmonic_displays_displays(g):
    for i, j, k in itertools.product(range(1, g + 1), repeat=3):
        assert abs(harmonic_pair_iterated(g, beta(i), beta(j), "a", k) - beta_beta_a_display(g, i, j, k)) < 1e-10
        assert abs(harmonic_pair_iterated(g, beta(i), beta(j), "b", k)) < 1e-10
        assert abs(harmonic_pair_iterated(g, alpha(i), alpha(j), "a", k)) < 1e-10
        assert abs(harmonic_pair_iterated(g, alpha(i), alpha(j), "b", k) - alpha_alpha_b_display(g, i, j, k)) < 1e-10


def test_harmonic_matrix_layout():
    r = harmonic_iterated_matrix(3, b_loop(3, 2))
    # position of alpha_2 is 2 (x2), beta_1 is 1 (y1)
    assert r[2, 1] == pytest.approx(harmonic_pair_iterated(3, alpha(2), beta(1), "b", 2))


def test_k_combination_on_relator_vanishes():
    pairs = [(alpha(1), beta(1), 1), (alpha(2), beta(2), -1)]
    assert abs(k_combination_iterated(3, pairs, relator_word(3))) < 1e-12
    with pytest.raises(ValueError):
        k_combination_iterated(3, [(alpha(1), beta(1), 1)], relator_word(3))
