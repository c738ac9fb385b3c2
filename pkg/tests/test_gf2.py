import numpy as np
import pytest

from hvol import gf2


def rand_matrix(rng, r, c, density=0.5):
    return (rng.random((r, c)) < density).astype(np.uint8)


def test_rref_small():
    m = np.array([[1, 1, 0], [1, 1, 1], [0, 0, 1]], dtype=np.uint8)
    r, piv = gf2.rref(m)
    assert piv == [0, 2]
    assert np.array_equal(r, np.array([[1, 1, 0], [0, 0, 1]]))


@pytest.mark.parametrize("seed", range(5))
def test_nullspace_and_rank(seed):
    rng = np.random.default_rng(seed)
    m = rand_matrix(rng, 23, 41)
    ns = gf2.nullspace(m)
    assert ns.shape[0] == 41 - gf2.rank(m)
    assert not gf2.matmul(m, ns.T).any()
    assert gf2.rank(ns) == ns.shape[0]


@pytest.mark.parametrize("seed", range(5))
def test_solve_and_inverse(seed):
    rng = np.random.default_rng(seed)
    while True:
        a = rand_matrix(rng, 12, 12)
        if gf2.rank(a) == 12:
            break
    inv = gf2.inverse(a)
    assert np.array_equal(gf2.matmul(a, inv), gf2.eye(12))
    b = rand_matrix(rng, 12, 1)[:, 0]
    x = gf2.solve(a, b)
    assert np.array_equal(gf2.matmul(a, x[:, None])[:, 0], b)


def test_inconsistent_and_singular():
    a = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    assert gf2.solve(a, np.array([1, 0])) is None
    with pytest.raises(np.linalg.LinAlgError):
        gf2.inverse(a)


def test_matmul_parity_beyond_byte_range():
    a = np.ones((1, 600), dtype=np.uint8)
    assert gf2.matmul(a, a.T)[0, 0] == 0
    assert gf2.matmul(a[:, :301], a[:, :301].T)[0, 0] == 1


def test_row_space_helpers():
    basis = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    assert gf2.in_row_space(basis, np.array([1, 1, 0]))
    assert not gf2.in_row_space(basis, np.array([1, 0, 0]))
    assert gf2.same_row_space(basis, np.array([[1, 1, 0], [0, 1, 1]]))
