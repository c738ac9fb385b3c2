import itertools

import numpy as np
import pytest

from hvol import gf2
from hvol.mod2 import (
    DualModule,
    GroupPresentation,
    abelianization_rank_mod2,
    arnold_action,
    birman_hilden,
    check_relators,
    connecting_class,
    dual_h,
    extend_functional,
    f_pairing,
    invariant_functionals,
    kernel_span,
    p_bar,
    presentation_h1,
    psi_eval,
    psi_on_tensor,
    psi_relation_defect,
    psi_vector,
    second_proof_table,
    symbol_images,
    xy_to_f,
)
from hvol.tensors import TensorElement
from hvol.volume import volume_table

T = TensorElement.parse


def test_arnold_examples_g3():
    m = arnold_action(3, 3)
    expect = np.eye(6, dtype=np.uint8)[:, [0, 2, 1, 3, 4, 5]]
    assert np.array_equal(m, expect)
    s1 = arnold_action(3, 1)
    assert list(s1[:, 1]) == [1, 1, 0, 0, 0, 0]
    assert list(s1[:, 0]) == [1, 0, 0, 0, 0, 0]
    # sigma_(2g+1) swaps f_2g with f_(2g+1) = sum of all
    s7 = arnold_action(3, 7)
    assert list(s7[:, 5]) == [1] * 6


@pytest.mark.parametrize("g", [3, 4])
def test_generators_are_involutions_preserving_pairing(g):
    jf = f_pairing(g)
    for j in range(1, 2 * g + 2):
        a = arnold_action(g, j)
        assert np.array_equal(gf2.matmul(a, a), gf2.eye(2 * g))
        assert np.array_equal(gf2.matmul(gf2.matmul(a.T, jf), a), jf)


def test_f_pairing_pattern():
    # every two distinct f_i meet once mod 2
    jf = f_pairing(4)
    assert np.array_equal(jf, 1 - np.eye(8, dtype=np.uint8))


def test_xy_to_f_examples():
    img = symbol_images(3)
    assert list(img["x1"]) == [1, 1, 0, 0, 0, 0]
    assert list(img["y1"]) == [1, 0, 0, 0, 0, 0]
    assert list(img["y2"]) == [1, 1, 1, 0, 0, 0]
    assert gf2.rank(xy_to_f(3)) == 6


def test_psi_examples():
    assert psi_eval(3, {(1, 2, 3): 1}) == 0
    assert psi_eval(3, {(1, 1, 1): 1}) == 0
    assert psi_eval(3, {(1, 1, 2): 1}) == 1


@pytest.mark.parametrize("g", [3, 4])
def test_psi_well_defined_and_invariant(g):
    assert psi_relation_defect(g) == 0
    psi = psi_vector(g)
    for j in range(2, 2 * g + 2):
        assert np.array_equal(gf2.matmul(gf2.kron3(arnold_action(g, j)).T, psi[:, None])[:, 0], psi)
    # sigma_1 breaks it, as S_(2g+2) has no invariant
    assert not np.array_equal(gf2.matmul(gf2.kron3(arnold_action(g, 1)).T, psi[:, None])[:, 0], psi)


@pytest.mark.parametrize("g", [3, 4])
def test_invariant_dimensions(g):
    assert invariant_functionals(g, "S2g+1", "H").dim == 0
    s = invariant_functionals(g, "S2g+1", "H3")
    assert s.dim == 1 and np.array_equal(s.basis[0], psi_vector(g))
    assert invariant_functionals(g, "S2g+2", "H3").dim == 0
    assert invariant_functionals(g, "Delta", "H3'").dim == 1
    assert invariant_functionals(g, "Delta'", "H3'").dim == 1


@pytest.mark.parametrize("g", [3, 4])
def test_kernel_span_is_kernel_of_p_mod2(g):
    r, _ = kernel_span(g)
    assert r.shape[0] == (2 * g) ** 3 - 6 * g
    assert not gf2.matmul(p_bar(g), r.T).any()


@pytest.mark.parametrize("g", [3, 4])
def test_invariant_on_span_is_psi_and_the_volume(g):
    inv = invariant_functionals(g, "Delta", "H3'").basis[0]
    r, _ = kernel_span(g)
    assert np.array_equal(inv, gf2.matmul(r, psi_vector(g)[:, None])[:, 0])


def test_second_proof_examples():
    assert psi_on_tensor(3, T("x1@y1@y2 + x3@y3@y2")) == 1
    assert all(row.psi == 0 for row in second_proof_table(3) if row.family.kind == "1")
    assert all(row.psi == 0 for row in second_proof_table(4) if row.family.kind == "2" and row.family.z == "x")


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_second_proof_matches_analytic(g):
    analytic = {r.family: r.result.value for r in volume_table(g)}
    for row in second_proof_table(g):
        assert row.psi == int(2 * analytic[row.family])


@pytest.mark.parametrize("g", [3, 4])
def test_birman_hilden_relators_act_trivially(g):
    check_relators(birman_hilden(g), dual_h(g))


def test_relator_count_g3():
    pres = birman_hilden(3)
    n = 7
    assert len(pres.relators) == (n - 1) * (n - 2) // 2 + (n - 1) + 3


@pytest.mark.parametrize("g", [3, 4])
def test_h1_dual_h(g):
    assert presentation_h1(birman_hilden(g), dual_h(g)).dim == 1


def test_h1_trivial_module_matches_abelianization():
    pres = birman_hilden(3)
    h1 = presentation_h1(pres, DualModule.trivial(pres.n_generators))
    assert h1.dim == abelianization_rank_mod2(pres) == 1


def test_h1_zero_module():
    pres = birman_hilden(3)
    assert presentation_h1(pres, DualModule.trivial(pres.n_generators, dim=0)).dim == 0


def test_h1_free_and_cyclic_groups():
    # Z/2 = <s | s^2>: H^1(Z/2; F2) = F2; free group on two letters: F2^2
    c2 = GroupPresentation(1, (((1, 1), (1, 1)),))
    assert presentation_h1(c2, DualModule.trivial(1)).dim == 1
    assert presentation_h1(GroupPresentation(2, ()), DualModule.trivial(2)).dim == 2
    # Z/3 = <s | s^3>: no F2 classes
    c3 = GroupPresentation(1, (((1, 1),) * 3,))
    assert presentation_h1(c3, DualModule.trivial(1)).dim == 0


@pytest.mark.parametrize("g", [3, 4])
def test_connecting_class_generates(g):
    cc = connecting_class(g)
    assert cc.is_cocycle and cc.nonzero and cc.equals_generator


def test_connecting_class_of_zero_is_trivial():
    r, _ = kernel_span(3)
    cc = connecting_class(3, functional=np.zeros(r.shape[0], dtype=np.uint8))
    assert cc.is_cocycle and not cc.nonzero


def test_connecting_class_independent_of_extension():
    g = 3
    base = connecting_class(g)
    # psi extends the invariant; so does psi plus anything vanishing on the span
    psi = psi_vector(g)
    shift = gf2.matmul(p_bar(g).T, np.eye(3 * 2 * g, dtype=np.uint8)[:, [0, 7]])[:, 0]
    other = connecting_class(g, extension=psi ^ shift)
    h1 = presentation_h1(birman_hilden(g), dual_h(g))
    assert other.nonzero
    assert h1.is_coboundary(base.cocycle ^ other.cocycle)


def test_extension_restricts_correctly():
    inv = invariant_functionals(3, "Delta", "H3'").basis[0]
    phi = extend_functional(3, inv)
    r, _ = kernel_span(3)
    assert np.array_equal(gf2.matmul(r, phi[:, None])[:, 0], inv)
