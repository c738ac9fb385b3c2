import cmath
import math

import numpy as np
import pytest

from hvol import GenusError, check_genus
from hvol.curve import (
    Q0,
    Q1,
    PathLetter,
    PathWord,
    a_loop,
    b_loop,
    e,
    half_pullback,
    ie,
    loop_words,
    path_point,
    relator_word,
)


def test_genus_range():
    assert check_genus(3) == 3
    assert check_genus(12) == 12
    for bad in (2, 13, 0, -1):
        with pytest.raises(GenusError):
            check_genus(bad)
    with pytest.raises(GenusError):
        check_genus(3.5)


def test_letter_endpoints():
    assert (e(0).start, e(0).end) == (Q0, Q1)
    assert (ie(0).start, ie(0).end) == (Q1, Q0)
    assert (e(0).inverse().start, e(0).inverse().end) == (Q1, Q0)
    assert (ie(2).inverse().start, ie(2).inverse().end) == (Q0, Q1)


def test_letter_index_checked():
    with pytest.raises(ValueError):
        PathLetter(8).check(3)
    PathLetter(7).check(3)


def test_loop_words_g3():
    assert a_loop(3, 1).letters == (e(1), ie(2))
    assert b_loop(3, 2).letters == (e(3), ie(2), e(1), ie(0))
    words = loop_words(3)
    assert sorted(words) == ["a1", "a2", "a3", "b1", "b2", "b3"]
    for w in words.values():
        assert w.is_loop(Q0)


def test_relator_word_is_loop():
    w = relator_word(3)
    assert len(w) == 8
    assert w.letters[0] == e(0) and w.letters[1] == ie(1)
    assert w.is_loop()


def test_word_inverse_and_concat():
    w = a_loop(4, 2)
    inv = w.inverse()
    assert inv.letters == (ie(4).inverse(), e(3).inverse())
    assert (w + inv).is_loop()
    assert not PathWord([e(0), e(1)]).is_path()


def test_path_point_endpoints_g3():
    zeta = cmath.exp(2j * math.pi / 8)
    p = path_point(3, e(0), 0.0)
    assert p.z == 0 and p.w == pytest.approx(1j)
    mid = path_point(3, e(1), 0.5)
    assert mid.z == pytest.approx(zeta) and abs(mid.w) < 1e-12
    end = path_point(3, e(0), 1.0)
    assert end.z == 0 and end.w == pytest.approx(-1j)
    assert path_point(3, ie(0), 0.0).w == pytest.approx(-1j)


def test_path_point_on_curve():
    for letter in (e(0), ie(3), e(5).inverse()):
        for t in np.linspace(0, 1, 11):
            assert path_point(3, letter, float(t)).residual(3) < 1e-12


def test_path_point_rejects_outside():
    with pytest.raises(ValueError):
        path_point(3, e(0), 1.5)


def test_half_pullback_matches_path_point():
    s = np.array([0.1, 0.4, 0.9])
    for letter in (e(2), ie(2), e(2).inverse(), ie(2).inverse()):
        for half in (0, 1):
            z, w, _ = half_pullback(3, letter, half, s, 1 - s)
            for k, sk in enumerate(s):
                p = path_point(3, letter, (half + sk) / 2)
                assert z[k] == pytest.approx(p.z, abs=1e-14)
                assert w[k] == pytest.approx(p.w, abs=1e-12)


def test_half_pullback_derivative():
    # dz/ds by central differences, in the half's own parameter
    s = np.array([0.3, 0.6])
    h = 1e-6
    for letter in (e(1), ie(1).inverse()):
        for half in (0, 1):
            _, _, dz = half_pullback(3, letter, half, s, 1 - s)
            zp, _, _ = half_pullback(3, letter, half, s + h, 1 - s - h)
            zm, _, _ = half_pullback(3, letter, half, s - h, 1 - s + h)
            assert np.allclose((zp - zm) / (2 * h), dz, atol=1e-8)


def test_half_pullback_near_branch_point_keeps_precision():
    # with r = 1 - 1e-300 the radicand must be ~ n * 1e-300, not 0
    s_c = np.array([1e-300])
    _, w, _ = half_pullback(3, e(0), 0, 1 - s_c, s_c)
    assert abs(w[0]) == pytest.approx(math.sqrt(8e-300), rel=1e-12)
