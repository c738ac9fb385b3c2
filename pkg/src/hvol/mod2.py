"""Mod-2 homology of the hyperelliptic curve as a symmetric-group module.

H over GF(2) is written in the basis f_1..f_2g where f_i is the sum of the
branch-point classes of P_0 and P_i; f_(2g+1) = f_1 + ... + f_2g closes the
relation.  The Dehn twists sigma_1..sigma_(2g+1) act through S_(2g+2):
sigma_j (j >= 2) swaps f_(j-1), f_j and sigma_1 shears f_i -> f_1 + f_i.
Functionals are column vectors; the group acts on them by phi -> phi o rho(g)^-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from . import check_genus, gf2
from .tensors import CanonicalFamily, TensorElement, enumerate_basis, family_a, symbols

Word = tuple[tuple[int, int], ...]  # (generator index, exponent +-1)

GROUPS = ("S2g+1", "S2g+2", "Delta", "Delta'")
MODULES = ("H", "H3", "H3'")


def dim_h(g: int) -> int:
    return 2 * check_genus(g)


def f_vector(g: int, i: int) -> np.ndarray:
    """f_i in coordinates f_1..f_2g, including f_(2g+1) = sum of all."""
    n = dim_h(g)
    if i == n + 1:
        return np.ones(n, dtype=np.uint8)
    if not 1 <= i <= n:
        raise ValueError(f"f index {i} outside 1..{n + 1}")
    return gf2.eye(n)[i - 1].copy()


@lru_cache(maxsize=None)
def arnold_action(g: int, j: int) -> np.ndarray:
    """Matrix of sigma_j on H (column i is the image of f_(i+1))."""
    n = dim_h(g)
    if not 1 <= j <= n + 1:
        raise ValueError(f"generator index {j} outside 1..{n + 1}")
    m = np.zeros((n, n), dtype=np.uint8)
    for i in range(1, n + 1):
        if j == 1:
            img = f_vector(g, 1) if i == 1 else f_vector(g, 1) ^ f_vector(g, i)
        else:
            img = f_vector(g, {j - 1: j, j: j - 1}.get(i, i))
        m[:, i - 1] = img
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def xy_to_f(g: int) -> np.ndarray:
    """Column p gives the f-coordinates of the p-th symbol x1, y1, x2, ...

    x_i = f_(2i-1) + f_2i and y_i = f_1 + ... + f_(2i-1).
    """
    n = dim_h(g)
    t = np.zeros((n, n), dtype=np.uint8)
    for i in range(1, g + 1):
        t[2 * i - 2, 2 * i - 2] = t[2 * i - 1, 2 * i - 2] = 1
        t[: 2 * i - 1, 2 * i - 1] = 1
    t.setflags(write=False)
    return t


def symplectic_form(g: int) -> np.ndarray:
    n = dim_h(g)
    j = np.zeros((n, n), dtype=np.uint8)
    for i in range(g):
        j[2 * i, 2 * i + 1] = j[2 * i + 1, 2 * i] = 1
    return j


@lru_cache(maxsize=None)
def f_pairing(g: int) -> np.ndarray:
    """Intersection form mod 2 in the f-basis."""
    t_inv = gf2.inverse(xy_to_f(g))
    out = gf2.matmul(gf2.matmul(t_inv.T, symplectic_form(g)), t_inv)
    out.setflags(write=False)
    return out


def psi_rule(i: int, j: int, k: int) -> int:
    """1 exactly when two of the three f-indices agree and the third differs."""
    return int(len({i, j, k}) == 2)


@lru_cache(maxsize=None)
def psi_vector(g: int) -> np.ndarray:
    n = dim_h(g)
    v = np.array([psi_rule(*ijk) for ijk in itertools.product(range(n), repeat=3)], dtype=np.uint8)
    v.setflags(write=False)
    return v


def f_cube_vector(g: int, terms: Mapping[tuple[int, int, int], int]) -> np.ndarray:
    """Coordinates of sum c * f_i (x) f_j (x) f_k with indices in 1..2g+1."""
    n = dim_h(g)
    out = np.zeros(n**3, dtype=np.uint8)
    for (i, j, k), c in terms.items():
        if c % 2:
            out ^= np.kron(np.kron(f_vector(g, i), f_vector(g, j)), f_vector(g, k)).astype(np.uint8)
    return out


def psi_eval(g: int, terms: Mapping[tuple[int, int, int], int]) -> int:
    return int(gf2.matmul(f_cube_vector(g, terms)[None, :], psi_vector(g)[:, None])[0, 0])


def psi_relation_defect(g: int) -> int:
    """Triples in 1..2g+1 where the rule disagrees with the multilinear expansion."""
    n = dim_h(g)
    return sum(
        psi_eval(g, {ijk: 1}) != psi_rule(*ijk) for ijk in itertools.product(range(1, n + 2), repeat=3)
    )


def xy_cube_vector(g: int, t: TensorElement) -> np.ndarray:
    """Mod-2 f-coordinates of an integral tensor in the symplectic basis."""
    n = dim_h(g)
    tf = xy_to_f(g)
    out = np.zeros(n**3, dtype=np.uint8)
    for (a, b, c), coeff in t.items():
        if coeff % 2:
            out ^= np.kron(np.kron(tf[:, a.position()], tf[:, b.position()]), tf[:, c.position()]).astype(np.uint8)
    return out


def psi_on_tensor(g: int, t: TensorElement) -> int:
    return int(gf2.matmul(xy_cube_vector(g, t)[None, :], psi_vector(g)[:, None])[0, 0])


@lru_cache(maxsize=None)
def p_bar(g: int) -> np.ndarray:
    """p mod 2 on the f-cube, shape (3n, n^3)."""
    n = dim_h(g)
    jf = f_pairing(g)
    e = gf2.eye(n)
    m = np.zeros((3 * n, n**3), dtype=np.uint8)
    for col, (a, b, c) in enumerate(itertools.product(range(n), repeat=3)):
        m[:n, col] = jf[a, b] * e[c]
        m[n : 2 * n, col] = jf[b, c] * e[a]
        m[2 * n :, col] = jf[c, a] * e[b]
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def kernel_span(g: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """RREF basis (rows) of the GF(2) span of the basis B of (H^3)', with pivots."""
    _, basis = enumerate_basis(g)
    rows = np.array([xy_cube_vector(g, b.element) for b in basis])
    r, piv = gf2.rref(rows)
    r.setflags(write=False)
    return r, tuple(piv)


def group_generators(g: int, group: str) -> list[int]:
    n = dim_h(g)
    if group in ("S2g+1", "Delta'"):
        return list(range(2, n + 2))
    if group in ("S2g+2", "Delta"):
        return list(range(1, n + 2))
    raise ValueError(f"unknown group {group!r}; choose from {GROUPS}")


def module_action(g: int, module: str, j: int) -> np.ndarray:
    a = arnold_action(g, j)
    if module == "H":
        return a
    if module in ("H3", "H3'"):
        return gf2.kron3(a)
    raise ValueError(f"unknown module {module!r}; choose from {MODULES}")


@dataclass(frozen=True)
class InvariantSpace:
    group: str
    module: str
    basis: np.ndarray  # rows; for H3' the values on the rows of kernel_span

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def span_action(g: int, j: int) -> np.ndarray:
    """Matrix Rm with (x R) rho = (x Rm) R for coordinates x on kernel_span."""
    r, piv = kernel_span(g)
    img = gf2.matmul(r, gf2.kron3(arnold_action(g, j)).T)
    coords = img[:, list(piv)]
    if not np.array_equal(gf2.matmul(coords, r), img):
        raise ArithmeticError(f"sigma_{j} does not preserve the (H^3)' span")
    return coords


def invariant_functionals(g: int, group: str, module: str) -> InvariantSpace:
    gens = group_generators(g, group)
    blocks = []
    for j in gens:
        if module == "H3'":
            m = span_action(g, j)
        else:
            m = module_action(g, module, j).T
        blocks.append(m ^ gf2.eye(m.shape[0]))
    return InvariantSpace(group, module, gf2.nullspace(np.concatenate(blocks)))


def restrict_to_span(g: int, phi: np.ndarray) -> np.ndarray:
    r, _ = kernel_span(g)
    return gf2.matmul(r, np.asarray(phi)[:, None])[:, 0]


@dataclass(frozen=True)
class SecondProofRow:
    family: CanonicalFamily
    psi: int


def second_proof_table(g: int) -> list[SecondProofRow]:
    """psi on the kind (1) and (2) members of A after the substitution x, y -> f."""
    return [SecondProofRow(f, psi_on_tensor(g, f.element)) for f in family_a(g) if f.kind in ("1", "2")]


# --- group presentations and H^1 -------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    n_generators: int
    relators: tuple[Word, ...]
    names: tuple[str, ...] = field(default=())

    def abelianization_matrix(self) -> np.ndarray:
        """Integer exponent sums, one row per relator."""
        m = np.zeros((len(self.relators), self.n_generators), dtype=np.int64)
        for row, word in enumerate(self.relators):
            for j, e in word:
                m[row, j - 1] += e
        return m


def _inv(word: Word) -> Word:
    return tuple((j, -e) for j, e in reversed(word))


def birman_hilden(g: int) -> GroupPresentation:
    """Generators sigma_1..sigma_(2g+1) of the hyperelliptic mapping class group."""
    n = 2 * check_genus(g) + 1
    rels: list[Word] = []
    for a in range(1, n + 1):
        for b in range(a + 2, n + 1):
            rels.append(((a, 1), (b, 1), (a, -1), (b, -1)))
    for a in range(1, n):
        b = a + 1
        rels.append(((a, 1), (b, 1), (a, 1), (b, -1), (a, -1), (b, -1)))
    theta: Word = tuple((j, 1) for j in range(1, n + 1))
    kappa: Word = tuple((j, 1) for j in range(n, 0, -1))
    tk = theta + kappa
    rels.append(theta * (n + 1))
    rels.append(tk * 2)
    rels.append(((1, 1),) + tk + ((1, -1),) + _inv(tk))
    return GroupPresentation(n, tuple(rels), tuple(f"sigma_{j}" for j in range(1, n + 1)))


class PresentationError(ArithmeticError):
    """The module action does not satisfy a relator."""


@dataclass(frozen=True)
class DualModule:
    """Left action on functionals: D_j = (rho_j^-1)^T, with inverses stored."""

    dim: int
    act: tuple[np.ndarray, ...]
    act_inv: tuple[np.ndarray, ...]

    @classmethod
    def from_action(cls, rhos: Sequence[np.ndarray]) -> "DualModule":
        dim = rhos[0].shape[0] if rhos else 0
        act = tuple(gf2.inverse(r).T.copy() for r in rhos)
        act_inv = tuple(gf2.as_gf2(r).T.copy() for r in rhos)
        return cls(dim, act, act_inv)

    @classmethod
    def trivial(cls, n_generators: int, dim: int = 1) -> "DualModule":
        ident = tuple(gf2.eye(dim) for _ in range(n_generators))
        return cls(dim, ident, ident)


def dual_h(g: int) -> DualModule:
    return DualModule.from_action([arnold_action(g, j) for j in range(1, 2 * g + 2)])


def word_action(module: DualModule, word: Word) -> np.ndarray:
    cur = gf2.eye(module.dim)
    for j, e in word:
        cur = gf2.matmul(cur, module.act[j - 1] if e > 0 else module.act_inv[j - 1])
    return cur


def check_relators(pres: GroupPresentation, module: DualModule) -> None:
    for idx, word in enumerate(pres.relators):
        if not np.array_equal(word_action(module, word), gf2.eye(module.dim)):
            raise PresentationError(f"relator {idx} does not act trivially")


def relator_block(module: DualModule, word: Word, n_generators: int) -> np.ndarray:
    """Linear map (c(s_1), ..., c(s_m)) -> c(word) under c(gh) = c(g) + g c(h)."""
    d = module.dim
    out = np.zeros((d, d * n_generators), dtype=np.uint8)
    cur = gf2.eye(d)
    for j, e in word:
        sl = slice((j - 1) * d, j * d)
        if e > 0:
            out[:, sl] ^= cur
            cur = gf2.matmul(cur, module.act[j - 1])
        else:
            # c(s^-1) = -s^-1 c(s); signs vanish mod 2
            cur = gf2.matmul(cur, module.act_inv[j - 1])
            out[:, sl] ^= cur
    return out


@dataclass(frozen=True)
class H1Result:
    dim: int
    cocycles: np.ndarray  # basis of Z^1, rows
    coboundaries: np.ndarray  # spanning rows of B^1
    representatives: np.ndarray  # rows completing B^1 to Z^1
    relator_matrix: np.ndarray

    def is_cocycle(self, c: np.ndarray) -> bool:
        return not gf2.matmul(self.relator_matrix, np.asarray(c)[:, None]).any()

    def is_coboundary(self, c: np.ndarray) -> bool:
        if self.coboundaries.shape[0] == 0:
            return not np.asarray(c).any()
        return gf2.in_row_space(self.coboundaries, c)


def coboundary_rows(module: DualModule) -> np.ndarray:
    """Row v gives the cocycle sigma -> sigma v - v, one row per module basis vector."""
    cols = np.concatenate([a ^ gf2.eye(module.dim) for a in module.act], axis=0)
    return cols.T.copy()


def presentation_h1(pres: GroupPresentation, module: DualModule) -> H1Result:
    m = pres.n_generators
    d = module.dim
    if d == 0:
        empty = np.zeros((0, 0), dtype=np.uint8)
        return H1Result(0, empty, empty, empty, empty)
    if len(module.act) != m:
        raise ValueError("module needs one matrix per generator")
    check_relators(pres, module)
    blocks = [relator_block(module, w, m) for w in pres.relators]
    relmat = np.concatenate(blocks) if blocks else np.zeros((0, d * m), dtype=np.uint8)
    z1 = gf2.nullspace(relmat)
    b1_rows = coboundary_rows(module)
    b1 = gf2.rref(b1_rows)[0]
    reps = []
    current = b1
    for z in z1:
        stacked = np.vstack([current, z])
        if gf2.rank(stacked) > current.shape[0]:
            reps.append(z)
            current = gf2.rref(stacked)[0]
    reps_arr = np.array(reps, dtype=np.uint8).reshape(len(reps), d * m)
    return H1Result(len(reps), z1, b1, reps_arr, relmat)


def abelianization_rank_mod2(pres: GroupPresentation) -> int:
    """dim Hom(G, Z/2) from the exponent-sum matrix."""
    return pres.n_generators - gf2.rank(pres.abelianization_matrix())


@dataclass(frozen=True)
class ConnectingClass:
    cocycle: np.ndarray  # concatenated c(sigma_1), ..., c(sigma_(2g+1)) in H*
    is_cocycle: bool
    nonzero: bool
    equals_generator: bool


class FactorizationError(ArithmeticError):
    """The coboundary of the extension does not factor through p."""


def extend_functional(g: int, values: np.ndarray) -> np.ndarray:
    """Some functional on the full cube whose values on kernel_span rows are ``values``."""
    r, _ = kernel_span(g)
    x = gf2.solve(r, values)
    if x is None:
        raise ArithmeticError("kernel span rows are dependent")
    return x


def connecting_class(
    g: int, functional: Optional[np.ndarray] = None, extension: Optional[np.ndarray] = None
) -> ConnectingClass:
    """delta of a Delta-invariant functional on (H^3)', projected to the first H*.

    ``functional`` gives values on the kernel_span rows (default: the
    invariant generator); ``extension`` is a functional on the full cube
    restricting to it (default: solved for).
    """
    n = dim_h(g)
    if functional is None:
        inv = invariant_functionals(g, "Delta", "H3'")
        if inv.dim != 1:
            raise ArithmeticError(f"expected a one-dimensional invariant space, got {inv.dim}")
        functional = inv.basis[0]
    functional = gf2.as_gf2(functional)
    phi = extend_functional(g, functional) if extension is None else gf2.as_gf2(extension)
    if not np.array_equal(restrict_to_span(g, phi), functional):
        raise ValueError("extension does not restrict to the functional")
    pb = p_bar(g)
    pieces = []
    for j in range(1, n + 2):
        d3 = gf2.inverse(gf2.kron3(arnold_action(g, j))).T
        c = gf2.matmul(d3, phi[:, None])[:, 0] ^ phi
        if restrict_to_span(g, c).any():
            raise FactorizationError(f"sigma_{j}: functional is not invariant")
        chi = gf2.solve(pb.T, c)
        if chi is None:
            raise FactorizationError(f"sigma_{j}: cochain does not factor through p")
        pieces.append(chi[:n])
    cocycle = np.concatenate(pieces)
    h1 = presentation_h1(birman_hilden(g), dual_h(g))
    ok = h1.is_cocycle(cocycle)
    nonzero = not h1.is_coboundary(cocycle)
    equals = h1.dim == 1 and nonzero and h1.is_coboundary(cocycle ^ h1.representatives[0])
    return ConnectingClass(cocycle, ok, nonzero, equals)


def symbol_images(g: int) -> dict[str, np.ndarray]:
    t = xy_to_f(g)
    return {str(s): t[:, s.position()].copy() for s in symbols(g)}
