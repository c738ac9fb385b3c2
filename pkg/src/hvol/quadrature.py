"""Direct numerical integration along the parametrized paths.

Every letter is split at its branch point into two halves; on each half the
pullback of omega'_i has an inverse-square-root singularity at one end,
which tanh-sinh quadrature absorbs without any substitution.  Nothing here
reads a closed-form period: the only inputs are the path parametrizations
and the differentials z^(i-1) dz / w with their normalizing scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import check_genus
from .curve import PathLetter, PathWord, a_loop, b_loop, half_pullback
from .kernel import omega_prime_scale
from .periods import FormRef

T_MAX = 6.0
MIN_LEVEL = 4
MAX_LEVEL = 14
CHUNK = 256

Reparam = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadConfig:
    """level: finest node-doubling depth; grid_level: depth of the inner rule
    for cumulative primitives (0 means same as the outer level)."""

    level: int = 8
    abs_tol: float = 1e-12
    grid_level: int = 0

    def __post_init__(self):
        if not MIN_LEVEL <= self.level <= MAX_LEVEL:
            raise ValueError(f"quadrature level {self.level} outside [{MIN_LEVEL}, {MAX_LEVEL}]")
        if self.abs_tol < 1e-13:
            raise ValueError("abs_tol below 1e-13 is not reachable in double precision")
        if self.grid_level and not MIN_LEVEL <= self.grid_level <= MAX_LEVEL:
            raise ValueError(f"grid level {self.grid_level} outside [{MIN_LEVEL}, {MAX_LEVEL}]")

    def inner(self, level: int) -> int:
        return self.grid_level or level


def _expit(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out


@lru_cache(maxsize=None)
def tanh_sinh_rule(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes x, complements 1 - x and weights on [0, 1]."""
    h = 2.0 ** -(level - 3)
    n = int(T_MAX / h)
    tau = h * np.arange(-n, n + 1)
    u = 0.5 * np.pi * np.sinh(tau)
    x = _expit(2 * u)
    x_c = _expit(-2 * u)
    w = h * np.pi * np.cosh(tau) * x * x_c
    keep = (w > 0) & (x > 0) & (x_c > 0)
    out = (x[keep], x_c[keep], w[keep])
    for arr in out:
        arr.setflags(write=False)
    return out


def cubic_clustering(x: np.ndarray, x_c: np.ndarray):
    """t -> t^3 with its exact complement and derivative."""
    return x**3, x_c * (1 + x + x * x), 3 * x * x


def half_integrand(g: int, letter: PathLetter, half: int, reparam: Optional[Reparam] = None):
    """phi(x, x_c) -> pullbacks of (omega'_1..g, conj omega'_1..g), shape (..., 2g)."""
    check_genus(g)
    letter.check(g)
    scales = np.array([omega_prime_scale(g, i) for i in range(1, g + 1)])
    powers = np.arange(g)

    def phi(x: np.ndarray, x_c: np.ndarray) -> np.ndarray:
        if reparam is not None:
            s, s_c, jac = reparam(x, x_c)
        else:
            s, s_c, jac = x, x_c, 1.0
        z, w, dz = half_pullback(g, letter, half, s, s_c)
        # nodes that underflow onto the branch point carry no weight
        at_branch = w == 0
        ratio = dz * jac / np.where(at_branch, 1.0, w)
        ratio = np.where(at_branch, 0.0, ratio)
        base = ratio[..., None] * z[..., None] ** powers * scales
        return np.concatenate([base, base.conj()], axis=-1)

    return phi


def _form_column(g: int, form: FormRef) -> int:
    if not form.holomorphic:
        raise ValueError("the oracle integrates omega'/conj omega' only")
    if not 1 <= form.index <= g:
        raise ValueError(f"form index {form.index} outside 1..{g}")
    return form.index - 1 + (g if form.kind == "omega_bar" else 0)


def letter_periods_at_level(g: int, letter: PathLetter, level: int, reparam: Optional[Reparam] = None) -> np.ndarray:
    x, x_c, w = tanh_sinh_rule(level)
    return sum(w @ half_integrand(g, letter, half, reparam)(x, x_c) for half in (0, 1))


def _converge(compute, cfg: QuadConfig, what: str):
    prev = compute(MIN_LEVEL)
    err = np.inf
    for level in range(MIN_LEVEL + 1, cfg.level + 1):
        cur = compute(level)
        err = float(np.max(np.abs(cur - prev)))
        if err < cfg.abs_tol:
            return cur, err
        prev = cur
    raise QuadratureError(f"{what}: no convergence by level {cfg.level}, estimate {err:.3e}", err)


def quad_period(
    g: int, form: FormRef, letter: PathLetter, cfg: QuadConfig = QuadConfig(), reparam: Optional[Reparam] = None
) -> complex:
    col = _form_column(g, form)
    value, _ = _converge(
        lambda level: letter_periods_at_level(g, letter, level, reparam)[col], cfg, f"period of {form} on {letter}"
    )
    return complex(value)


def quad_word_period(g: int, form: FormRef, word: PathWord, cfg: QuadConfig = QuadConfig()) -> complex:
    return sum((quad_period(g, form, letter, cfg) for letter in word), 0j)


def quad_period_vector(g: int, word: PathWord, cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    """Periods of all 2g basic forms along a word."""
    out = np.zeros(2 * g, dtype=complex)
    for letter in word:
        vec, _ = _converge(lambda level: letter_periods_at_level(g, letter, level), cfg, f"periods on {letter}")
        out += vec
    return out


def _half_tables(g: int, letter: PathLetter, half: int, level: int, inner: int, reparam) -> tuple[np.ndarray, np.ndarray]:
    """Full integrals I (2g,) and D[a, b] = int_{s1 <= s2} phi_a(s1) phi_b(s2) on one half."""
    phi = half_integrand(g, letter, half, reparam)
    x, x_c, w = tanh_sinh_rule(level)
    u, u_c, v = tanh_sinh_rule(inner)
    vals = phi(x, x_c)
    total = v @ phi(u, u_c)
    prim = np.empty_like(vals)
    for lo in range(0, x.size, CHUNK):
        s = x[lo : lo + CHUNK, None]
        s_c = x_c[lo : lo + CHUNK, None]
        left = s[:, 0] <= 0.5
        # [0, s]: nodes s*u with complement s_c + s*u_c
        fl = phi(s * u, s_c + s * u_c)
        head = s * np.einsum("k,skm->sm", v, fl)
        # [s, 1]: nodes s + s_c*u with complement s_c*u_c
        fr = phi(s + s_c * u, s_c * u_c)
        tail = total - s_c * np.einsum("k,skm->sm", v, fr)
        prim[lo : lo + CHUNK] = np.where(left[:, None], head, tail)
    d = np.einsum("s,sa,sb->ab", w, prim, vals)
    return w @ vals, d


@lru_cache(maxsize=2048)
def _cached_half_tables(g: int, letter: PathLetter, half: int, level: int, inner: int, clustered: bool):
    out = _half_tables(g, letter, half, level, inner, cubic_clustering if clustered else None)
    for arr in out:
        arr.setflags(write=False)
    return out


def iterated_matrix_at_level(g: int, word: PathWord, level: int, inner: int, clustered: bool = False) -> np.ndarray:
    """Basic-form matrix int_word phi_a phi_b, concatenating half-letter tables."""
    if not word.is_path():
        raise ValueError(f"word {word} is not a composable path")
    m = np.zeros((2 * g, 2 * g), dtype=complex)
    running = np.zeros(2 * g, dtype=complex)
    for letter in word:
        for half in (0, 1):
            total, d = _cached_half_tables(g, letter, half, level, inner, clustered)
            m += d + np.outer(running, total)
            running += total
    return m


def quad_iterated_matrix(
    g: int, word: PathWord, cfg: QuadConfig = QuadConfig(), clustered: bool = False
) -> tuple[np.ndarray, float]:
    """Matrix of all basic iterated integrals on a word plus an error estimate
    (difference against the next coarser level)."""
    check_genus(g)
    level = cfg.level
    fine = iterated_matrix_at_level(g, word, level, cfg.inner(level), clustered)
    coarse = iterated_matrix_at_level(g, word, level - 1, cfg.inner(level - 1), clustered)
    return fine, float(np.max(np.abs(fine - coarse)))


def quad_iterated(
    g: int, f1: FormRef, f2: FormRef, word: PathWord, cfg: QuadConfig = QuadConfig(), clustered: bool = False
) -> tuple[complex, float]:
    a, b = _form_column(g, f1), _form_column(g, f2)
    m, err = quad_iterated_matrix(g, word, cfg, clustered)
    return complex(m[a, b]), err


def numerical_period_matrices(g: int, cfg: QuadConfig = QuadConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Omega_a, Omega_b (rows omega'_i, columns loops) by quadrature."""
    om_a = np.array([quad_period_vector(g, a_loop(g, j), cfg)[:g] for j in range(1, g + 1)]).T
    om_b = np.array([quad_period_vector(g, b_loop(g, j), cfg)[:g] for j in range(1, g + 1)]).T
    return om_a, om_b


def numerical_harmonic_periods(g: int, cfg: QuadConfig = QuadConfig()) -> dict[str, np.ndarray]:
    """int over a_j, b_j of alpha_i = Re(Omega_b^-1 omega')_i and beta_i = -Re(Omega_a^-1 omega')_i,
    with both period matrices and their inverses taken from quadrature."""
    om_a, om_b = numerical_period_matrices(g, cfg)
    inv_a = np.linalg.inv(om_a)
    inv_b = np.linalg.inv(om_b)
    return {
        "alpha_a": (inv_b @ om_a).real,
        "alpha_b": (inv_b @ om_b).real,
        "beta_a": -(inv_a @ om_a).real,
        "beta_b": -(inv_a @ om_b).real,
    }
