"""Length-two iterated integrals along words in e_j and iota(e_j).

On a single letter, iota(e_k) = e_k^-1 and iota^* negates every form
involved, so int_{e_k} f1 f2 = int_{e_k} f2 f1 = (1/2) int f1 int f2.
The shuffle fold over a word then gives every loop value in closed form.
Real harmonic forms are expanded bilinearly over the omega'/conj basis.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from . import check_genus
from .curve import PathLetter, PathWord, loop_word
from .kernel import t_u, zeta_pow
from .periods import (
    FormRef,
    coefficient_vector,
    letter_period_vector,
    segment_period,
)
from .tensors import BasisSymbol, pairing, symbols

K_TOL = 1e-10


def segment_iterated(g: int, f1: FormRef, f2: FormRef, letter: PathLetter) -> complex:
    if not (f1.holomorphic and f2.holomorphic):
        raise ValueError("segment_iterated takes omega'/conj omega' only; expand alpha/beta first")
    # rewrite down to a plain forward e_k: each of iota and reversal turns
    # the letter into the inverse path and swaps the order of the forms
    swaps = int(letter.involuted) + int(letter.reversed)
    first, second = (f1, f2) if swaps % 2 == 0 else (f2, f1)
    base = PathLetter(letter.index)
    # int_{e_k} w1 w2 = int_{e_k} w2 w1, so both orders are half the product
    return 0.5 * segment_period(g, first, base) * segment_period(g, second, base)


@lru_cache(maxsize=4096)
def basic_iterated_matrix(g: int, word: PathWord) -> np.ndarray:
    """M[a, b] = int_word phi_a phi_b over the 2g basic forms phi."""
    check_genus(g)
    if not word.is_path():
        raise ValueError(f"word {word} is not a composable path")
    periods = np.array([letter_period_vector(g, letter) for letter in word])  # (L, 2g)
    m = np.zeros((2 * g, 2 * g), dtype=complex)
    running = np.zeros(2 * g, dtype=complex)
    for p in periods:
        m += 0.5 * np.outer(p, p) + np.outer(running, p)
        running += p
    m.setflags(write=False)
    return m


def word_iterated(g: int, f1: FormRef, f2: FormRef, word: PathWord) -> complex:
    c1 = coefficient_vector(g, f1)
    c2 = coefficient_vector(g, f2)
    return complex(c1 @ basic_iterated_matrix(g, word) @ c2)


def harmonic_pair_iterated(g: int, h1: FormRef, h2: FormRef, kind: str, k: int) -> float:
    if h1.holomorphic or h2.holomorphic:
        raise ValueError("harmonic_pair_iterated takes alpha/beta forms")
    value = word_iterated(g, h1, h2, loop_word(g, kind, k))
    if abs(value.imag) > K_TOL:
        raise ArithmeticError(f"iterated integral of real forms has imaginary part {value.imag:.3e}")
    return value.real


def loop_iterated_closed(
    g: int, i: int, j: int, k: int, kind: str, conjugate_second: bool = False
) -> complex:
    """The displayed loop formulas for int omega'_i omega'_j over a_k or b_k.

    With ``conjugate_second`` the second form is conj omega'_j, which
    replaces zeta^j by zeta^-j throughout.
    """
    check_genus(g)
    s = -1 if conjugate_second else 1
    z = lambda m: complex(zeta_pow(g, m))
    if kind == "a":
        return 0.5 * z((i + s * j) * (2 * k - 1)) * (1 - 2 * z(s * j) + z(i + s * j))
    if kind == "b":
        total = sum(
            0.5 * z((i + s * j) * (2 * l - 2)) * (1 - 2 * z(i) + z(i + s * j)) for l in range(1, k + 1)
        )
        for l in range(1, k + 1):
            for m in range(l + 1, k + 1):
                total += (z(i) - 1) * (z(s * j) - 1) * z(i * (2 * m - 2) + s * j * (2 * l - 2))
        return total
    raise ValueError(f"unknown loop kind {kind!r}")


def beta_beta_a_display(g: int, i: int, j: int, k: int) -> float:
    """t_u display for int_{a_k} beta_i beta_j."""
    t = lambda u: t_u(g, u)
    total = (t(2 * k - 2 * j) - t(2 * k)) * sum(t(2 * k - 2 * u) for u in range(1, i + 1))
    total += (t(2 * k) - t(2 * k - 2 * i)) * sum(t(2 * k - 2 * u + 2) for u in range(1, j + 1))
    return (total / (2 * (g + 1) ** 2)).real


def alpha_alpha_b_display(g: int, i: int, j: int, k: int) -> float:
    """t_u display for int_{b_k} alpha_i alpha_j (second sum empty when k = 1)."""
    t = lambda u: t_u(g, u)
    total = sum(
        t(2 * u - 2 * j) * t(2 * u - 2 * i)
        - 2 * t(2 * u - 2 * j - 2) * t(2 * u - 2 * i)
        + t(2 * u - 2 * j - 2) * t(2 * u - 2 * i - 2)
        for u in range(1, k + 1)
    )
    total += sum(
        2 * (t(2 * v - 2 * i) - t(2 * v - 2 * i - 2)) * (t(2 * v - 2 * j - 2) - t(-2 * j))
        for v in range(2, k + 1)
    )
    return (total / (2 * (g + 1) ** 2)).real


def form_symbol(form: FormRef) -> BasisSymbol:
    """The homology class Poincare dual to alpha_i / beta_i."""
    if form.kind == "alpha":
        return BasisSymbol("x", form.index)
    if form.kind == "beta":
        return BasisSymbol("y", form.index)
    raise ValueError("only alpha/beta have integral homology duals")


def k_combination_iterated(
    g: int, pairs: Sequence[tuple[FormRef, FormRef, int]], word: PathWord
) -> complex:
    """sum w * int_word h1 h2 for a combination whose wedge class vanishes."""
    total_pairing = sum(w * pairing(form_symbol(h1), form_symbol(h2)) for h1, h2, w in pairs)
    if total_pairing != 0:
        raise ValueError(f"pairs are not in K: total pairing {total_pairing}")
    return sum((w * word_iterated(g, h1, h2, word) for h1, h2, w in pairs), 0j)


def symbol_form(symbol: BasisSymbol) -> FormRef:
    """x_i -> alpha_i, y_i -> beta_i."""
    return FormRef("alpha" if symbol.letter == "x" else "beta", symbol.index)


@lru_cache(maxsize=4096)
def harmonic_iterated_matrix(g: int, word: PathWord) -> np.ndarray:
    """R[p, q] = int_word PD(s_p) PD(s_q), rows/columns in symbol order x1, y1, x2, ..."""
    coeffs = np.array([coefficient_vector(g, symbol_form(s)) for s in symbols(g)])
    r = coeffs @ basic_iterated_matrix(g, word) @ coeffs.T
    if np.abs(r.imag).max() > K_TOL:
        raise ArithmeticError("iterated integrals of real forms came out complex")
    out = np.ascontiguousarray(r.real)
    out.setflags(write=False)
    return out
