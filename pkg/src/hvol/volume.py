"""Harmonic volume of C0 on (H^3)'.

A tensor sum h1 (x) h2 (x) h3 is grouped by its third slot: x_k sends the
group to the loop a_k, y_k to b_k, and the first two slots become the
harmonic forms alpha/beta.  The correction form integrates to zero on
every e_j and iota(e_j), so only the iterated-integral part survives.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import check_genus
from .curve import PathWord, loop_word
from .iterated import harmonic_iterated_matrix, symbol_form
from .periods import FormRef
from .tensors import (
    S3,
    BasisSymbol,
    CanonicalFamily,
    TensorElement,
    enumerate_basis,
    family_a,
    p_map,
    pairing,
    s3_act,
)

SNAP_TOL = 1e-4
HALF = Fraction(1, 2)


class NotInKernelError(ValueError):
    """The tensor is not in ker p, so it has no harmonic volume."""


class SnapFailure(ArithmeticError):
    def __init__(self, raw: float, residual: float, label: str = ""):
        super().__init__(f"volume {label} raw {raw:.12g} is {residual:.3e} away from 0 and 1/2")
        self.raw = raw
        self.residual = residual


@dataclass(frozen=True)
class LoopGroup:
    loop_symbol: BasisSymbol
    loop: PathWord
    pairs: tuple[tuple[FormRef, FormRef, int], ...]
    symbol_pairs: tuple[tuple[BasisSymbol, BasisSymbol, int], ...]

    def k_defect(self) -> int:
        return sum(w * pairing(a, b) for a, b, w in self.symbol_pairs)


@dataclass(frozen=True)
class HalfValue:
    value: Fraction
    raw: float
    residual: float

    def __str__(self) -> str:
        return str(self.value)


def k_decompose(g: int, t: TensorElement) -> list[LoopGroup]:
    check_genus(g)
    if t.max_index() > g:
        raise ValueError(f"tensor uses index {t.max_index()} > g = {g}")
    if not all(part == {} for part in p_map(t)):
        raise NotInKernelError(f"{t} is not in the kernel of p")
    grouped: dict[BasisSymbol, list[tuple[BasisSymbol, BasisSymbol, int]]] = {}
    for (a, b, c), coeff in t.items():
        grouped.setdefault(c, []).append((a, b, coeff))
    groups = []
    for c in sorted(grouped):
        sym_pairs = tuple(grouped[c])
        group = LoopGroup(
            c,
            loop_word(g, c.letter, c.index),
            tuple((symbol_form(a), symbol_form(b), w) for a, b, w in sym_pairs),
            sym_pairs,
        )
        # (H^3)' sits inside K (x) H, so this cannot fire for kernel elements
        if group.k_defect() != 0:
            raise NotInKernelError(f"loop group on {c} has wedge class {group.k_defect()}")
        groups.append(group)
    return groups


def _conjugated(word: PathWord, conjugator: Optional[PathWord]) -> PathWord:
    if conjugator is None:
        return word
    return conjugator + word + conjugator.inverse()


def volume_raw(g: int, t: TensorElement, conjugator: Optional[PathWord] = None) -> float:
    """Sum of iterated integrals before reduction mod 1.

    ``conjugator`` replaces every loop gamma by c.gamma.c^-1 (a loop c at
    the base point), a check on base-point independence.
    """
    if conjugator is not None and not conjugator.is_loop():
        raise ValueError("conjugator must be a loop at Q0")
    total = 0.0
    for group in k_decompose(g, t):
        r = harmonic_iterated_matrix(g, _conjugated(group.loop, conjugator))
        total += sum(w * r[a.position(), b.position()] for a, b, w in group.symbol_pairs)
    return total


def volume_real(g: int, t: TensorElement, conjugator: Optional[PathWord] = None) -> float:
    return volume_raw(g, t, conjugator) % 1.0


def mod1_distance(a: float, b: float) -> float:
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


def volume(g: int, t: TensorElement, tol: float = SNAP_TOL, label: str = "") -> HalfValue:
    raw = volume_raw(g, t)
    candidates = [(mod1_distance(raw, float(v)), v) for v in (Fraction(0), HALF)]
    residual, value = min(candidates)
    if residual >= tol:
        raise SnapFailure(raw, residual, label or str(t))
    return HalfValue(value, raw, residual)


def predicted_value(family: CanonicalFamily, g: int) -> Fraction:
    """Expected volume of an element of A."""
    if family.kind in ("6a", "6b"):
        return HALF
    if family.kind == "2":
        i, k = family.index("i"), family.index("k")
        if i < k and 2 <= k <= g - 1 and family.z == "y":
            return HALF
    return Fraction(0)


@dataclass(frozen=True)
class VolumeRow:
    family: CanonicalFamily
    result: Optional[HalfValue]
    expected: Fraction
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.result is not None and self.result.value == self.expected


class VolumeTableError(ArithmeticError):
    def __init__(self, rows: list[VolumeRow]):
        bad = [r for r in rows if r.result is None]
        super().__init__(f"{len(bad)} snap failures, first: {bad[0].error}")
        self.rows = rows


def _row(g: int, fam: CanonicalFamily, tol: float) -> VolumeRow:
    expected = predicted_value(fam, g)
    try:
        return VolumeRow(fam, volume(g, fam.element, tol, fam.label()), expected)
    except SnapFailure as exc:
        return VolumeRow(fam, None, expected, str(exc))


def volume_table(g: int, tol: float = SNAP_TOL, jobs: int = 1, strict: bool = True) -> list[VolumeRow]:
    """Every element of A evaluated through the iterated-integral engine."""
    check_genus(g)
    fams = family_a(g)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda f: _row(g, f, tol), fams))
    else:
        rows = [_row(g, f, tol) for f in fams]
    if strict and any(r.result is None for r in rows):
        raise VolumeTableError(rows)
    return rows


def basis_volumes(g: int, tol: float = SNAP_TOL) -> list[tuple[object, HalfValue]]:
    """Volumes on the whole basis B of (H^3)'."""
    _, basis = enumerate_basis(g)
    return [(b, volume(g, b.element, tol)) for b in basis]


def max_equivariance_defect(g: int) -> float:
    """max over A and S3 of |I(sigma t) - sgn(sigma) I(t)| mod 1."""
    worst = 0.0
    for fam in family_a(g):
        base = volume_raw(g, fam.element)
        for perm in S3:
            image, sign = s3_act(perm, fam.element)
            worst = max(worst, mod1_distance(volume_raw(g, image), sign * base))
    return worst
