import json

import pytest
import sympy
from hypothesis import given, strategies as st

from hecke_eigen.exact import scalar
from hecke_eigen.gl1 import (
    DecompositionMismatch,
    EigensheafFamily,
    beta_compat_check,
    build_eigensheaf,
    check_eigen_gl1,
    closed_form,
    descend_step,
    direct_transfer,
    eigen_equations,
    elementary_divisors,
    uniqueness_check,
)
from hecke_eigen.local_systems import MultChar, external_product, on_curve, pullback
from hecke_eigen.moduli import ext_space, pic, translation_map

from conftest import curve_chars, nonzero_scalars


def vals(*xs):
    return tuple(scalar(x) for x in xs)


def test_build_genus1():
    e = on_curve(1, (2, 3))
    fam = build_eigensheaf(e)
    assert fam.window == (-2, 4)
    for d in fam.degrees:
        assert fam[d].values == vals(2, 3)
        assert fam[d].space == pic(1, d)
    assert fam.provenance[0] == "descended" and fam.provenance[1] == "direct-transfer"


def test_build_trivial():
    fam = build_eigensheaf(on_curve(2, (1, 1, 1, 1)))
    assert all(fam[d].is_trivial() for d in fam.degrees)


def test_direct_region_genus2():
    e = on_curve(2, (2, 3, 5, 7))
    fam = build_eigensheaf(e)
    for d in range(3, 7):
        assert fam[d] == direct_transfer(e, d)
        assert fam[d].values == vals(2, 3, 5, 7)
    with pytest.raises(ValueError):
        direct_transfer(e, 2)


def test_descend_step_examples():
    e = on_curve(1, (2, 3))
    assert descend_step(MultChar(pic(1, 1), (2, 3)), e).values == vals(2, 3)
    triv = on_curve(1, (1, 1))
    assert descend_step(MultChar(pic(1, 1), (1, 1)), triv).is_trivial()
    with pytest.raises(DecompositionMismatch):
        descend_step(MultChar(pic(1, 1), (2, 3)), on_curve(1, (5, 7)))


def test_descend_step_checks_second_successor():
    e = on_curve(1, (2, 3))
    with pytest.raises(DecompositionMismatch):
        descend_step(MultChar(pic(1, 1), (2, 3)), e, MultChar(pic(1, 2), (2, 5)))


def test_check_eigen_examples():
    e = on_curve(1, (2, 3))
    fam = build_eigensheaf(e)
    assert check_eigen_gl1(e, fam, 0)
    tampered = fam.with_member(1, MultChar(pic(1, 1), (5, 3)))
    assert not check_eigen_gl1(e, tampered, 0)
    assert not check_eigen_gl1(e, tampered, 1)
    assert tampered.failing_degrees() == [0, 1]


def test_family_validates_window():
    e = on_curve(1, (2, 3))
    with pytest.raises(ValueError):
        build_eigensheaf(e, (3, 1))


@given(curve_chars(2))
def test_family_properties(e):
    fam = build_eigensheaf(e)
    g = 2
    for d in range(fam.window[0], fam.window[1]):
        assert check_eigen_gl1(e, fam, d)
        assert descend_step(fam[d + 1], e) == fam[d]
        lifted = external_product(fam[d + 1], MultChar.trivial(ext_space(g)))
        assert pullback(lifted, translation_map(g, d, 1)) == external_product(fam[d], MultChar.trivial(ext_space(g)))
    for d in fam.degrees:
        assert fam[d] == closed_form(e, d)


@given(curve_chars(1), st.integers(0, 1), st.integers(-2, 3), nonzero_scalars)
def test_perturbation_breaks_identity(e, i, d, v):
    fam = build_eigensheaf(e)
    old = fam[d].values
    if v == old[i]:
        return
    new = old[:i] + (v,) + old[i + 1 :]
    tampered = fam.with_member(d, MultChar(pic(1, d), new))
    adjacent = [k for k in (d - 1, d) if fam.window[0] <= k < fam.window[1]]
    assert any(not check_eigen_gl1(e, tampered, k) for k in adjacent)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_uniqueness(g):
    e = on_curve(g, [2, 3, 5, 7, 11, 13][: 2 * g])
    assert uniqueness_check(e)
    assert uniqueness_check(on_curve(g, [1] * (2 * g)))


def test_uniqueness_needs_two_degrees():
    # a single degree gives no equations, so the family is not pinned down
    assert not uniqueness_check(on_curve(1, (2, 3)), (0, 0))


@pytest.mark.parametrize("g, window", [(1, (-2, 4)), (2, (-1, 3)), (3, (0, 2))])
def test_elementary_divisors_match_sympy(g, window):
    rows, _ = eigen_equations(g, window)
    ncols = (window[1] - window[0] + 1) * 2 * g
    ours = elementary_divisors(rows, ncols)
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = [abs(int(snf[k, k])) for k in range(min(snf.shape)) if snf[k, k] != 0]
    assert sorted(ours) == sorted(theirs)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4))
def test_elementary_divisors_property(rows):
    ours = elementary_divisors(rows, 3)
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = [abs(int(snf[k, k])) for k in range(min(snf.shape)) if snf[k, k] != 0]
    assert sorted(ours) == sorted(theirs)
    for a, b in zip(ours, ours[1:]):
        assert b % a == 0


def test_beta_compat():
    assert beta_compat_check(on_curve(2, (2, 3, 5, 7)), 3)
    assert beta_compat_check(on_curve(1, (scalar(0, 1), 2)), 1)


def test_family_json():
    fam = build_eigensheaf(on_curve(1, (2, 3)), (0, 1))
    j = fam.to_json()
    assert isinstance(fam, EigensheafFamily)
    assert json.loads(json.dumps(j)) == j
