"""Symplectic basis of H, the map p : H^3 -> H^+3 and the basis of its kernel.

Basis symbols are ordered x1, y1, x2, y2, ...; a monomial z_a (x) z_b (x) z_c
has flat index (a * 2g + b) * 2g + c in that ordering.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import check_genus

Monomial = tuple["BasisSymbol", "BasisSymbol", "BasisSymbol"]

# odd prime for exact rank computations; products stay below 2^63
RANK_PRIME = 2_147_483_629


@dataclass(frozen=True, order=True)
class BasisSymbol:
    letter: str
    index: int

    def __post_init__(self):
        if self.letter not in ("x", "y") or self.index < 1:
            raise ValueError(f"bad basis symbol {self.letter}{self.index}")

    def position(self) -> int:
        return 2 * (self.index - 1) + (self.letter == "y")

    def __str__(self) -> str:
        return f"{self.letter}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "BasisSymbol":
        return cls(text[0], int(text[1:]))


def x(i: int) -> BasisSymbol:
    return BasisSymbol("x", i)


def y(i: int) -> BasisSymbol:
    return BasisSymbol("y", i)


def symbols(g: int) -> list[BasisSymbol]:
    return [s for i in range(1, g + 1) for s in (x(i), y(i))]


def pairing(u: BasisSymbol, v: BasisSymbol) -> int:
    """Intersection pairing: (x_i, y_j) = delta_ij = -(y_j, x_i), all others zero."""
    if u.index != v.index or u.letter == v.letter:
        return 0
    return 1 if u.letter == "x" else -1


class TensorElement(Mapping):
    """Integer combination of monomials z_a (x) z_b (x) z_c."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        acc: dict[Monomial, int] = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            acc[tuple(mono)] += int(coeff)
        self._terms = {m: c for m, c in sorted(acc.items()) if c}

    @classmethod
    def mono(cls, a: BasisSymbol, b: BasisSymbol, c: BasisSymbol, coeff: int = 1) -> "TensorElement":
        return cls({(a, b, c): coeff})

    def __getitem__(self, key: Monomial) -> int:
        return self._terms[key]

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "TensorElement":
        return TensorElement({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "TensorElement":
        return TensorElement({m: k * c for m, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def max_index(self) -> int:
        return max((s.index for m in self._terms for s in m), default=0)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b, c), coeff in self._terms.items():
            sign = "-" if coeff < 0 else "+"
            mag = "" if abs(coeff) == 1 else f"{abs(coeff)}*"
            parts.append(f"{sign} {mag}{a}@{b}@{c}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "TensorElement":
        """Parse e.g. 'x1@y1@y2 - x3@y3@y2' (coefficients as '2*x1@...')."""
        cleaned = text.replace("-", " - ").replace("+", " + ").split()
        terms: list[tuple[Monomial, int]] = []
        sign = 1
        for token in cleaned:
            if token in "+-":
                sign = -1 if token == "-" else 1
                continue
            coeff = 1
            if "*" in token:
                c, token = token.split("*")
                coeff = int(c)
            slots = token.split("@")
            if len(slots) != 3:
                raise ValueError(f"monomial {token!r} does not have three slots")
            terms.append((tuple(BasisSymbol.parse(s) for s in slots), sign * coeff))
            sign = 1
        return cls(terms)

    def flat(self, g: int) -> dict[int, int]:
        n = 2 * g
        return {
            (a.position() * n + b.position()) * n + c.position(): coeff
            for (a, b, c), coeff in self._terms.items()
        }


def p_map(t: TensorElement) -> tuple[dict[BasisSymbol, int], ...]:
    """p(a b c) = ((a,b) c, (b,c) a, (c,a) b), zero entries dropped."""
    out: tuple[dict, dict, dict] = (defaultdict(int), defaultdict(int), defaultdict(int))
    for (a, b, c), coeff in t.items():
        out[0][c] += coeff * pairing(a, b)
        out[1][a] += coeff * pairing(b, c)
        out[2][b] += coeff * pairing(c, a)
    return tuple({s: v for s, v in sorted(part.items()) if v} for part in out)


def in_kernel(t: TensorElement) -> bool:
    return not any(p_map(t))


def p_matrix(g: int) -> np.ndarray:
    """Integer matrix of p, shape (3 * 2g, (2g)^3)."""
    syms = symbols(g)
    n = 2 * g
    m = np.zeros((3 * n, n**3), dtype=np.int64)
    for col, (a, b, c) in enumerate(itertools.product(syms, repeat=3)):
        m[c.position(), col] += pairing(a, b)
        m[n + a.position(), col] += pairing(b, c)
        m[2 * n + b.position(), col] += pairing(c, a)
    return m


S3 = ((1, 2, 3), (2, 3, 1), (3, 1, 2), (2, 1, 3), (1, 3, 2), (3, 2, 1))


def perm_sign(perm: tuple[int, int, int]) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def s3_act(perm: tuple[int, int, int], t: TensorElement) -> tuple[TensorElement, int]:
    """sigma(h1 h2 h3) = h_sigma(1) h_sigma(2) h_sigma(3); also returns sgn(sigma)."""
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"{perm} is not a permutation of (1, 2, 3)")
    image = TensorElement(
        (tuple(mono[p - 1] for p in perm), coeff) for mono, coeff in t.items()
    )
    return image, perm_sign(perm)


@dataclass(frozen=True)
class CanonicalFamily:
    """One element of the family A: its kind, indices and expansion."""

    kind: str
    indices: tuple[tuple[str, int], ...]
    z: str | None
    element: TensorElement = field(compare=False)

    def index(self, name: str) -> int:
        return dict(self.indices)[name]

    def label(self) -> str:
        parts = [f"{k}={v}" for k, v in self.indices]
        if self.z:
            parts.append(f"z={self.z}")
        return f"({self.kind}) " + ",".join(parts)


KINDS = ("1", "2", "3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b")


def _wrap(g: int, i: int) -> int:
    return (i - 1) % g + 1


def family_a(g: int) -> list[CanonicalFamily]:
    check_genus(g)
    M = TensorElement.mono
    sym = {"x": x, "y": y}
    fam: list[CanonicalFamily] = []
    rng = range(1, g + 1)
    for i, j, k in itertools.permutations(rng, 3):
        for la, lb, lc in itertools.product("xy", repeat=3):
            fam.append(
                CanonicalFamily(
                    "1", (("i", i), ("j", j), ("k", k)), la + lb + lc,
                    M(sym[la](i), sym[lb](j), sym[lc](k)),
                )
            )
    for k in rng:
        k1 = _wrap(g, k + 1)
        for zl in "xy":
            zk = sym[zl](k)
            for i in rng:
                if i in (k, k1):
                    continue
                el = M(x(i), y(i), zk) - M(x(k1), y(k1), zk)
                fam.append(CanonicalFamily("2", (("i", i), ("k", k)), zl, el))
    for kind, s in (("3a", x), ("3b", y)):
        for i in rng:
            for k in rng:
                if i == k:
                    continue
                for zl in "xy":
                    fam.append(
                        CanonicalFamily(kind, (("i", i), ("k", k)), zl, M(s(i), s(i), sym[zl](k)))
                    )
    for kind, s in (("4a", x), ("4b", y)):
        for i in rng:
            fam.append(CanonicalFamily(kind, (("i", i),), None, M(s(i), s(i), s(i))))
    for i in rng:
        i1 = _wrap(g, i + 1)
        fam.append(
            CanonicalFamily("5a", (("i", i),), None, M(x(i1), x(i), y(i1)) + M(y(i1), x(i), x(i1)))
        )
    for i in rng:
        i1 = _wrap(g, i + 1)
        fam.append(
            CanonicalFamily("5b", (("i", i),), None, M(y(i1), y(i), x(i1)) + M(x(i1), y(i), y(i1)))
        )
    for i in rng:
        i1 = _wrap(g, i + 1)
        el = M(x(i), x(i), y(i)) - M(x(i), x(i1), y(i1)) - M(x(i1), x(i), y(i1))
        fam.append(CanonicalFamily("6a", (("i", i),), None, el))
    for i in rng:
        i1 = _wrap(g, i + 1)
        el = M(y(i), y(i), x(i)) - M(y(i), y(i1), x(i1)) - M(y(i1), y(i), x(i1))
        fam.append(CanonicalFamily("6b", (("i", i),), None, el))
    return fam


@dataclass(frozen=True)
class BasisElement:
    perm: tuple[int, int, int]
    source: CanonicalFamily
    element: TensorElement


class BasisError(RuntimeError):
    """The enumerated family does not form a basis of ker p."""


def rank_mod_prime(m: np.ndarray, prime: int = RANK_PRIME) -> int:
    """Exact rank over Z/prime; a lower bound for the rank over Q."""
    a = np.mod(np.array(m, dtype=np.int64), prime)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), prime - 2, prime)
        a[rank] = (a[rank] * inv) % prime
        others = np.nonzero(a[:, col])[0]
        others = others[others != rank]
        if others.size:
            factors = a[others, col][:, None]
            a[others] = (a[others] - factors * a[rank]) % prime
        rank += 1
    return rank


def monomial_matrix(g: int, elements: Iterable[TensorElement]) -> np.ndarray:
    elements = list(elements)
    n3 = (2 * g) ** 3
    m = np.zeros((len(elements), n3), dtype=np.int64)
    for row, el in enumerate(elements):
        for col, coeff in el.flat(g).items():
            m[row, col] = coeff
    return m


def expected_rank(g: int) -> int:
    return (2 * g) ** 3 - 6 * g


def enumerate_basis(g: int, check: bool = True) -> tuple[list[CanonicalFamily], list[BasisElement]]:
    """The family A and its S3 saturation B, a basis of (H^3)'.

    Members of A with repeated slots (kinds 3-6) have S3 stabilizers, so
    the saturation keeps the first occurrence of each element.  An image
    equal to the negative of a kept element would break independence and
    is reported by the rank check.
    """
    fam = family_a(g)
    seen: set[TensorElement] = set()
    basis: list[BasisElement] = []
    for member in fam:
        for perm in S3:
            image, _ = s3_act(perm, member.element)
            if image in seen:
                continue
            seen.add(image)
            basis.append(BasisElement(perm, member, image))
    if check:
        if len(basis) != expected_rank(g):
            raise BasisError(f"|B| = {len(basis)}, expected {expected_rank(g)}")
        bad = [b for b in basis if not in_kernel(b.element)]
        if bad:
            raise BasisError(f"{len(bad)} elements of B lie outside ker p, e.g. {bad[0].element}")
        rank = rank_mod_prime(monomial_matrix(g, (b.element for b in basis)))
        if rank != len(basis):
            raise BasisError(f"B has rank {rank} < {len(basis)}")
    return fam, basis
