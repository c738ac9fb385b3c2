"""Closed-form periods of the normalized holomorphic forms on C0.

With omega'_i normalized so that the integral over e_j is zeta^(i j), every
period is a finite sum of roots of unity.  The real harmonic forms alpha_i,
beta_i (Poincare duals of a_i, b_i) are stored as coefficient rows over
(omega'_1..omega'_g, conj omega'_1..conj omega'_g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import check_genus
from .curve import PathLetter, PathWord, a_loop, b_loop
from .kernel import zeta_pow

HOLOMORPHIC = ("omega", "omega_bar")
HARMONIC = ("alpha", "beta")


class PeriodCheckError(RuntimeError):
    """A closed form disagreed with its numerical counterpart."""


@dataclass(frozen=True)
class FormRef:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in HOLOMORPHIC + HARMONIC:
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("form indices start at 1")

    @property
    def holomorphic(self) -> bool:
        return self.kind in HOLOMORPHIC

    def __str__(self) -> str:
        names = {"omega": "w'", "omega_bar": "conj w'", "alpha": "alpha", "beta": "beta"}
        return f"{names[self.kind]}_{self.index}"


def omega(i: int) -> FormRef:
    return FormRef("omega", i)


def omega_bar(i: int) -> FormRef:
    return FormRef("omega_bar", i)


def alpha(i: int) -> FormRef:
    return FormRef("alpha", i)


def beta(i: int) -> FormRef:
    return FormRef("beta", i)


def _check_form(g: int, form: FormRef) -> None:
    if form.index > g:
        raise ValueError(f"form index {form.index} outside 1..{g}")


def segment_period(g: int, form: FormRef, letter: PathLetter) -> complex:
    """Integral of omega'_i (or its conjugate) along a single letter."""
    check_genus(g)
    letter.check(g)
    if not form.holomorphic:
        raise ValueError("segment_period takes omega'/conj omega' only; expand alpha/beta first")
    _check_form(g, form)
    value = complex(zeta_pow(g, form.index * letter.index))
    if form.kind == "omega_bar":
        value = value.conjugate()
    # iota^* omega' = -omega', and reversing a path flips the sign
    if letter.involuted:
        value = -value
    if letter.reversed:
        value = -value
    return value


def word_period(g: int, form: FormRef, word: PathWord) -> complex:
    return sum((segment_period(g, form, letter) for letter in word), 0j)


def loop_period_closed(g: int, i: int, kind: str, j: int) -> complex:
    """int_{a_j} omega'_i = zeta^(i(2j-1)) (1 - zeta^i); int_{b_j} = (zeta^(2ij) - 1)/(zeta^i + 1)."""
    check_genus(g)
    if not (1 <= i <= g and 1 <= j <= g):
        raise ValueError("indices must lie in 1..g")
    z = lambda k: complex(zeta_pow(g, k))
    if kind == "a":
        return z(i * (2 * j - 1)) * (1 - z(i))
    if kind == "b":
        return (z(2 * i * j) - 1) / (z(i) + 1)
    raise ValueError(f"unknown loop kind {kind!r}")


@dataclass(frozen=True)
class PeriodMatrices:
    omega_a: np.ndarray
    omega_b: np.ndarray
    omega_a_inv: np.ndarray
    omega_b_inv: np.ndarray
    Z: np.ndarray

    @property
    def g(self) -> int:
        return self.Z.shape[0]


def closed_inverse_a(g: int) -> np.ndarray:
    idx = np.arange(1, g + 1)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    zj = zeta_pow(g, j)
    return zj * (-1 + zeta_pow(g, -2 * i * j)) / (1 - zj) / (g + 1)


def closed_inverse_b(g: int) -> np.ndarray:
    idx = np.arange(1, g + 1)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    return zeta_pow(g, -2 * i * j) * (1 + zeta_pow(g, j)) / (g + 1)


def schindler_z(g: int) -> np.ndarray:
    """Period matrix from the root-of-unity sum over k = 1..g."""
    z = np.zeros((g, g), dtype=complex)
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            total = 0j
            for k in range(1, g + 1):
                total += (
                    zeta_pow(g, k)
                    * (zeta_pow(g, -2 * i * k) - 1)
                    * (zeta_pow(g, 2 * k * j) - 1)
                    / (1 - zeta_pow(g, 2 * k))
                )
            z[i - 1, j - 1] = total / (g + 1)
    return z


def schindler_imag_part(g: int) -> np.ndarray:
    """Real matrix Y with Z = iY, from the cotangent-type presentation."""
    y = np.zeros((g, g))
    c = lambda m: (1 + math.cos(m * math.pi / (g + 1))) / math.sin(m * math.pi / (g + 1))
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            y[i - 1, j - 1] = sum(c(2 * nu - 1) + c(2 * (j - nu) + 1) for nu in range(1, i + 1))
    return y / (g + 1)


def is_positive_definite(m: np.ndarray, pivot_tol: float = 1e-10) -> bool:
    sym = 0.5 * (m + m.T)
    try:
        lower = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError:
        return False
    return bool(np.all(np.diag(lower) ** 2 > pivot_tol))


@lru_cache(maxsize=None)
def period_matrices(g: int) -> PeriodMatrices:
    check_genus(g)
    omega_a = np.array(
        [[word_period(g, omega(i), a_loop(g, j)) for j in range(1, g + 1)] for i in range(1, g + 1)]
    )
    omega_b = np.array(
        [[word_period(g, omega(i), b_loop(g, j)) for j in range(1, g + 1)] for i in range(1, g + 1)]
    )
    inv_a = closed_inverse_a(g)
    inv_b = closed_inverse_b(g)
    eye = np.eye(g)
    for name, m, inv in (("a", omega_a, inv_a), ("b", omega_b, inv_b)):
        err = max(np.abs(m @ inv - eye).max(), np.abs(np.linalg.inv(m) - inv).max())
        if err > 1e-12:
            raise PeriodCheckError(f"closed inverse of Omega_{name} off by {err:.3e}")
    z = inv_a @ omega_b
    z_sum = schindler_z(g)
    z_real_form = 1j * schindler_imag_part(g)
    err = max(np.abs(z - z_sum).max(), np.abs(z - z_real_form).max())
    if err > 1e-10:
        raise PeriodCheckError(f"period matrix presentations disagree by {err:.3e}")
    for m in (omega_a, omega_b, inv_a, inv_b, z):
        m.setflags(write=False)
    return PeriodMatrices(omega_a, omega_b, inv_a, inv_b, z)


@dataclass(frozen=True)
class HarmonicCoefficients:
    """Rows give alpha_i / beta_i over (omega'_1..g, conj omega'_1..g)."""

    alpha: np.ndarray
    beta: np.ndarray

    def row(self, form: FormRef) -> np.ndarray:
        table = self.alpha if form.kind == "alpha" else self.beta
        return table[form.index - 1]


@lru_cache(maxsize=None)
def harmonic_coefficients(g: int) -> HarmonicCoefficients:
    pm = period_matrices(g)
    # alpha = Re(Omega_b^-1 omega'), beta = -Re(Omega_a^-1 omega')
    a = 0.5 * np.hstack([pm.omega_b_inv, pm.omega_b_inv.conj()])
    b = -0.5 * np.hstack([pm.omega_a_inv, pm.omega_a_inv.conj()])
    a.setflags(write=False)
    b.setflags(write=False)
    return HarmonicCoefficients(a, b)


def coefficient_vector(g: int, form: FormRef) -> np.ndarray:
    """Expansion of any form over the 2g holomorphic/antiholomorphic basis."""
    _check_form(g, form)
    if form.kind == "omega":
        v = np.zeros(2 * g, dtype=complex)
        v[form.index - 1] = 1
        return v
    if form.kind == "omega_bar":
        v = np.zeros(2 * g, dtype=complex)
        v[g + form.index - 1] = 1
        return v
    return harmonic_coefficients(g).row(form).copy()


def basic_forms(g: int) -> list[FormRef]:
    return [omega(i) for i in range(1, g + 1)] + [omega_bar(i) for i in range(1, g + 1)]


def letter_period_vector(g: int, letter: PathLetter) -> np.ndarray:
    return np.array([segment_period(g, f, letter) for f in basic_forms(g)])


def letter_period(g: int, form: FormRef, letter: PathLetter) -> complex:
    """Period of any form (alpha/beta expanded) along one letter."""
    return complex(coefficient_vector(g, form) @ letter_period_vector(g, letter))


def loop_period(g: int, form: FormRef, word: PathWord) -> complex:
    return sum((letter_period(g, form, letter) for letter in word), 0j)
