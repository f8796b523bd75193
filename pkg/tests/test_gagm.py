import pytest
from hypothesis import given, settings, strategies as st

from hecke_eigen.exact import ExactMatrix, scalar
from hecke_eigen.gagm import (
    TriangularSystem,
    admissible_hecke_indices,
    audit_factorization,
    build_candidate_K,
    check_eigen_gagm,
    classify_connection,
    hecke2_sides,
    run_gagm,
)
from hecke_eigen.local_systems import MatrixRep, exterior_square, is_isomorphic, on_curve
from hecke_eigen.moduli import curve

from conftest import curve_add_chars, curve_chars


def vals(*xs):
    return tuple(scalar(x) for x in xs)


def system(p, alpha):
    g = len(p) // 2
    return TriangularSystem(on_curve(g, p), on_curve(g, alpha, "add"))


def test_classify_examples():
    s = curve(1)
    u = classify_connection(MatrixRep(s, 2, (ExactMatrix.of([[1, 1], [0, 1]]), ExactMatrix.identity(2))))
    assert u.kind == "unipotent" and u.alpha.values == vals(1, 0)
    t = classify_connection(MatrixRep(s, 2, (ExactMatrix.of([[2, 2], [0, 2]]), ExactMatrix.of([[3, 0], [0, 3]]))))
    assert t.kind == "gm_ga_triangular"
    assert t.p.values == vals(2, 3) and t.alpha.values == vals(1, 0)
    o = classify_connection(MatrixRep(s, 2, (ExactMatrix.diag([2, 3]), ExactMatrix.identity(2))))
    assert o.kind == "out_of_scope"


@pytest.mark.parametrize("model, expected", [("rank1", {1}), ("bunprime2", {2}), ("bunprime", set())])
def test_admissibility_table(model, expected):
    assert admissible_hecke_indices(model).indices == expected
    assert admissible_hecke_indices(model) == admissible_hecke_indices(model)


def test_admissibility_notes():
    a = admissible_hecke_indices("bunprime2")
    assert "M(-x)" in a.notes[2]
    with pytest.raises(ValueError):
        admissible_hecke_indices("rank3")


def test_candidate_examples():
    fam = build_candidate_K(system((1, 1), (1, 0)), (0, 2))
    for d in fam.degrees:
        assert fam[d].c.is_trivial()
        assert fam[d].alpha.values == vals(1, 0)
    fam = build_candidate_K(system((2, 3), (0, 0)), (0, 2))
    assert all(fam[d].c.values == vals(4, 9) and fam[d].alpha.is_zero() for d in fam.degrees)
    fam = build_candidate_K(system((2, 3), (1, 0)), (0, 2))
    assert all(fam[d].c.values == vals(4, 9) and fam[d].alpha.values == vals(1, 0) for d in fam.degrees)


def test_verdict_alpha_zero():
    sys = system((2, 3), (0, 0))
    fam = build_candidate_K(sys, (-1, 2))
    for d in range(-1, 2):
        v = check_eigen_gagm(sys, fam, d)
        assert v.isomorphic and v.oracle_agrees
        assert v.obstruction is None
        assert v.audit.F_step.passed


def test_verdict_unipotent_obstruction():
    sys = system((1, 1), (1, 0))
    fam = build_candidate_K(sys, (0, 1))
    v = check_eigen_gagm(sys, fam, 0)
    assert not v.isomorphic
    assert v.oracle_agrees
    assert v.obstruction.values == vals(1, 0)
    assert v.semisimplified is True
    # certificate: no invertible intertwiner
    assert v.verdict.certificate is not None


def test_lhs_against_itself():
    sys = system((2, 3), (1, 0))
    fam = build_candidate_K(sys, (0, 1))
    lhs, _ = hecke2_sides(sys, fam, 0)
    v = is_isomorphic(lhs, lhs)
    assert v and v.witness is not None


def test_audit_steps():
    sys = system((1, 1), (1, 0))
    fam = build_candidate_K(sys, (0, 1))
    a = audit_factorization(sys, fam, 0)
    assert a.u_step.passed and a.p2_step.passed
    assert not a.F_step.passed
    assert a.F_step.detail["oracle"] == "not_isomorphic"
    assert a.F_step.detail["homotopy_reading_isomorphic"] is True
    assert a.composition.passed
    assert a.composition.detail["homotopy_reading_matches"] is False


def test_triangular_system_needs_curve():
    with pytest.raises(ValueError):
        TriangularSystem(on_curve(1, (2, 3)), on_curve(2, (0, 0, 0, 0), "add"))


@settings(max_examples=15)
@given(curve_chars(1), curve_add_chars(1))
def test_verdicts_agree_with_oracle(p, alpha):
    sys = TriangularSystem(p, alpha)
    assert exterior_square(sys.E) == p**2
    fam, verdicts = run_gagm(sys, (0, 2))
    for v in verdicts:
        assert v.oracle_agrees
        assert v.isomorphic == alpha.is_zero()
        if not v.isomorphic:
            assert v.obstruction == alpha
        if v.verdict.witness is not None:
            lhs, rhs = hecke2_sides(sys, fam, v.degree)
            T = v.verdict.witness
            assert all(T @ x == y @ T for x, y in zip(lhs.images, rhs.images))


@settings(max_examples=10)
@given(curve_chars(2))
def test_alpha_zero_is_isomorphic_genus2(p):
    sys = TriangularSystem(p, on_curve(2, (0, 0, 0, 0), "add"))
    _, verdicts = run_gagm(sys, (-1, 1))
    assert all(v.isomorphic for v in verdicts)


def test_verdict_json():
    sys = system((2, 3), (1, 0))
    _, verdicts = run_gagm(sys, (0, 1))
    j = verdicts[0].to_json()
    assert j["result"] == "not_isomorphic"
    assert j["obstruction"] == [[1, 1, 0, 1], [0, 1, 0, 1]]
    assert set(j["audit"]) == {"u_step", "p2_step", "F_step", "composition"}
