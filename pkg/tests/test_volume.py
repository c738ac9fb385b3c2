from fractions import Fraction

import pytest

from hvol.curve import PathWord, e, ie
from hvol.tensors import TensorElement, family_a, s3_act, S3
from hvol.volume import (
    NotInKernelError,
    SnapFailure,
    basis_volumes,
    k_decompose,
    max_equivariance_defect,
    mod1_distance,
    predicted_value,
    volume,
    volume_raw,
    volume_real,
    volume_table,
)
from hvol.periods import alpha, beta

T = TensorElement.parse
HALF = Fraction(1, 2)


def test_k_decompose_examples():
    groups = k_decompose(3, T("x1@y1@y2 - x3@y3@y2"))
    assert len(groups) == 1
    assert str(groups[0].loop_symbol) == "y2"
    assert groups[0].pairs == ((alpha(1), beta(1), 1), (alpha(3), beta(3), -1))

    groups = k_decompose(3, T("x1@x1@y1 - x1@x2@y2 - x2@x1@y2"))
    assert [str(g.loop_symbol) for g in groups] == ["y1", "y2"]
    assert all(g.k_defect() == 0 for g in groups)

    groups = k_decompose(3, T("x1@x2@x3"))
    assert len(groups) == 1 and str(groups[0].loop_symbol) == "x3"


def test_k_decompose_rejects_outside_kernel():
    with pytest.raises(NotInKernelError):
        k_decompose(3, T("x1@y1@x2"))
    with pytest.raises(ValueError):
        k_decompose(3, T("x4@x1@x1"))


def test_volume_examples():
    assert volume(3, T("x1@y1@y2 - x3@y3@y2")).value == HALF
    assert volume(4, T("x2@y2@x3 - x4@y4@x3")).value == 0
    assert volume(3, T("x1@x2@y3")).value == 0
    assert volume(3, T("x1@x1@y1 - x1@x2@y2 - x2@x1@y2")).value == HALF


def test_type2_raw_value_in_cyclic_form():
    # with the third slot moved to a_i the sum evaluates to exactly -1/2
    assert volume_raw(3, T("y1@y2@x1 - y3@y2@x3")) == pytest.approx(-0.5, abs=1e-12)
    assert volume_real(3, T("x1@y1@y2 - x3@y3@y2")) == pytest.approx(0.5, abs=1e-12)


def test_prediction_branches():
    fams = {(f.kind, f.indices, f.z): f for f in family_a(6)}
    f = fams[("2", (("i", 5), ("k", 3)), "y")]
    assert predicted_value(f, 6) == 0 and volume(6, f.element).value == 0
    for f in family_a(5):
        if f.kind == "2" and f.index("k") == 5:
            assert volume(5, f.element).value == 0


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_volume_table_matches_prediction(g):
    rows = volume_table(g)
    assert all(r.ok for r in rows)
    assert max(r.result.residual for r in rows) < 1e-4
    assert {r.family.kind for r in rows if r.result.value == HALF} == {"2", "6a", "6b"}


def test_volume_table_parallel_is_identical():
    assert [r.result for r in volume_table(4, jobs=4)] == [r.result for r in volume_table(4)]


def test_s3_equivariance_g3():
    assert max_equivariance_defect(3) < 1e-8


def test_base_point_conjugation():
    for fam in family_a(3):
        base = volume_raw(3, fam.element)
        for c in (PathWord([e(0), ie(0)]), PathWord([e(0), ie(1)])):
            assert mod1_distance(volume_raw(3, fam.element, c), base) < 1e-10


def test_conjugator_must_be_loop():
    with pytest.raises(ValueError):
        volume_raw(3, T("x1@x2@y3"), PathWord([e(0)]))


def test_snap_failure_reported():
    with pytest.raises(SnapFailure) as info:
        volume(3, T("x1@y1@y2 - x3@y3@y2"), tol=0.0)
    assert info.value.raw == pytest.approx(0.5)


def test_whole_basis_snaps():
    vals = basis_volumes(3)
    assert len(vals) == 198
    assert all(hv.residual < 1e-10 for _, hv in vals)
