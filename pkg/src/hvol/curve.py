"""The curve C0 : w^2 = z^(2g+2) - 1, its path family e_j and loop words.

Every path letter runs between the two points Q0 = (0, i) and Q1 = (0, -i)
through a branch point P_j = (zeta^j, 0).  A plain letter e_j goes
Q0 -> P_j -> Q1; the involuted letter iota(e_j) has w negated and goes
Q1 -> P_j -> Q0.  Indices are 0-based for e_j (as in the curve model) and
1-based for the loops a_i, b_i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import check_genus

Q0 = "Q0"
Q1 = "Q1"


def n_branch(g: int) -> int:
    return 2 * g + 2


@dataclass(frozen=True)
class PathLetter:
    """One traversal of e_j or iota(e_j), possibly backwards."""

    index: int
    involuted: bool = False
    reversed: bool = False

    @property
    def start(self) -> str:
        forward_start = Q1 if self.involuted else Q0
        if self.reversed:
            return Q0 if forward_start == Q1 else Q1
        return forward_start

    @property
    def end(self) -> str:
        return Q0 if self.start == Q1 else Q1

    def inverse(self) -> "PathLetter":
        return PathLetter(self.index, self.involuted, not self.reversed)

    def check(self, g: int) -> None:
        if not 0 <= self.index < n_branch(g):
            raise ValueError(f"letter index {self.index} outside 0..{n_branch(g) - 1}")

    def __str__(self) -> str:
        base = f"e_{self.index}"
        if self.involuted:
            base = f"i(e_{self.index})"
        return base + ("^-1" if self.reversed else "")


def e(j: int) -> PathLetter:
    return PathLetter(j)


def ie(j: int) -> PathLetter:
    return PathLetter(j, involuted=True)


@dataclass(frozen=True)
class PathWord:
    letters: tuple[PathLetter, ...]

    def __init__(self, letters: Iterable[PathLetter]):
        object.__setattr__(self, "letters", tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[PathLetter]:
        return iter(self.letters)

    def __add__(self, other: "PathWord") -> "PathWord":
        return PathWord(self.letters + other.letters)

    def inverse(self) -> "PathWord":
        return PathWord(letter.inverse() for letter in reversed(self.letters))

    def is_path(self) -> bool:
        return all(a.end == b.start for a, b in zip(self.letters, self.letters[1:]))

    def is_loop(self, base: str = Q0) -> bool:
        if not self.letters:
            return True
        return self.is_path() and self.letters[0].start == base and self.letters[-1].end == base

    def insert(self, position: int, piece: "PathWord") -> "PathWord":
        return PathWord(self.letters[:position] + piece.letters + self.letters[position:])

    def __str__(self) -> str:
        return ".".join(str(letter) for letter in self.letters) or "1"


def a_loop(g: int, i: int) -> PathWord:
    check_genus(g)
    if not 1 <= i <= g:
        raise ValueError(f"loop index {i} outside 1..{g}")
    return PathWord([e(2 * i - 1), ie(2 * i)])


def b_loop(g: int, i: int) -> PathWord:
    check_genus(g)
    if not 1 <= i <= g:
        raise ValueError(f"loop index {i} outside 1..{g}")
    letters: list[PathLetter] = []
    for m in range(i, 0, -1):
        letters += [e(2 * m - 1), ie(2 * m - 2)]
    return PathWord(letters)


def loop_words(g: int) -> dict[str, PathWord]:
    """Words for the symplectic loops, keyed 'a1'..'ag', 'b1'..'bg'."""
    out = {f"a{i}": a_loop(g, i) for i in range(1, g + 1)}
    out.update({f"b{i}": b_loop(g, i) for i in range(1, g + 1)})
    return out


def loop_word(g: int, kind: str, i: int) -> PathWord:
    if kind in ("a", "x"):
        return a_loop(g, i)
    if kind in ("b", "y"):
        return b_loop(g, i)
    raise ValueError(f"unknown loop kind {kind!r}")


def relator_word(g: int) -> PathWord:
    """e_0 . iota(e_1) . e_2 ... iota(e_{2g+1}), null-homotopic at Q0."""
    check_genus(g)
    return PathWord(e(j) if j % 2 == 0 else ie(j) for j in range(n_branch(g)))


@dataclass(frozen=True)
class CurvePoint:
    z: complex
    w: complex

    def residual(self, g: int) -> float:
        return abs(self.w**2 - (self.z ** n_branch(g) - 1))


def path_point(g: int, letter: PathLetter, t: float) -> CurvePoint:
    """Point of a letter at time t in [0, 1], using the two-piece formula."""
    check_genus(g)
    letter.check(g)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"path parameter {t} outside [0, 1]")
    if letter.reversed:
        t = 1.0 - t
    n = n_branch(g)
    zeta_j = cmath.exp(2j * math.pi * letter.index / n)
    if t <= 0.5:
        s = 2 * t
        z = s * zeta_j
        w = 1j * math.sqrt(1 - s**n)
    else:
        s = 2 - 2 * t
        z = s * zeta_j
        w = -1j * math.sqrt(1 - s**n)
    if letter.involuted:
        w = -w
    return CurvePoint(z, w)


def _radicand(n: int, r: np.ndarray, r_c: np.ndarray) -> np.ndarray:
    # 1 - r^n, accurate when r is close to 1 (r_c = 1 - r known exactly)
    near = r_c < 0.5
    safe_c = np.where(near, r_c, 0.25)
    out = np.where(near, -np.expm1(n * np.log1p(-safe_c)), 1.0 - np.where(near, 0.5, r) ** n)
    return out


def half_pullback(
    g: int, letter: PathLetter, half: int, s: np.ndarray, s_c: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(z, w, dz/ds) on one half of a letter, in that half's forward parameter.

    ``half`` is 0 or 1 in traversal order; ``s`` runs 0 -> 1 along the half
    and ``s_c`` must equal 1 - s (passed separately so the branch point
    endpoint keeps full relative precision).
    """
    n = n_branch(g)
    s = np.asarray(s, dtype=float)
    s_c = np.asarray(s_c, dtype=float)
    base_half = half
    if letter.reversed:
        base_half = 1 - half
        s, s_c = s_c, s
    zeta_j = np.exp(2j * np.pi * letter.index / n)
    if base_half == 0:
        r, r_c = s, s_c
        dz = np.full(r.shape, zeta_j)
        sheet = 1.0
    else:
        r, r_c = s_c, s
        dz = np.full(r.shape, -zeta_j)
        sheet = -1.0
    if letter.involuted:
        sheet = -sheet
    if letter.reversed:
        dz = -dz
    z = r * zeta_j
    w = sheet * 1j * np.sqrt(_radicand(n, r, r_c))
    return z, w, dz
