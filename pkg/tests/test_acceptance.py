"""Acceptance criteria 1-10, each printed as one PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py``.
"""

import random
from pathlib import Path

import pytest

from hecke_eigen.cli import main
from hecke_eigen.exact import ExactMatrix
from hecke_eigen.gagm import (
    TriangularSystem,
    admissible_hecke_indices,
    audit_factorization,
    build_candidate_K,
    check_eigen_gagm,
)
from hecke_eigen.gl1 import (
    beta_compat_check,
    build_eigensheaf,
    check_eigen_gl1,
    closed_form,
    default_window,
    descend_step,
    uniqueness_check,
)
from hecke_eigen.local_systems import (
    AddChar,
    MatrixRep,
    MultChar,
    as_matrix_rep,
    exterior_square,
    is_isomorphic,
    on_curve,
    tensor,
)
from hecke_eigen.moduli import curve, pic
from hecke_eigen.oracle import brute_force_isomorphic, jordan_oracle_2x2
from hecke_eigen.sampling import (
    ENTRY_PALETTE,
    MULT_PALETTE,
    random_2x2_pair,
    random_add_char,
    random_curve_char,
    random_invertible,
    random_matrix,
)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
GENERA = (1, 2, 3, 4)


def _characters(g, count, seed):
    rng = random.Random(seed * 1000 + g)
    return [random_curve_char(rng, g) for _ in range(count)]


@pytest.fixture(scope="module")
def gl1_sample():
    """100 seeded characters per genus with their families on the default window."""
    out = {}
    for g in GENERA:
        out[g] = [(e, build_eigensheaf(e, default_window(g))) for e in _characters(g, 100, seed=1)]
    return out


def test_criterion_01_gl1_eigen_identity(gl1_sample, record_criterion):
    checked = failures = 0
    for g, items in gl1_sample.items():
        lo, hi = default_window(g)
        for e, fam in items:
            for d in range(lo, hi):
                checked += 1
                failures += not check_eigen_gl1(e, fam, d)
    ok = failures == 0 and checked > 0
    record_criterion(1, "GL1 eigen-identity", ok, f"{checked} degree pairs, {failures} failures")
    assert ok


def test_criterion_02_beta_compat(record_criterion):
    rng = random.Random(2)
    checked = failures = 0
    for _ in range(50):
        g = rng.choice(GENERA)
        e = random_curve_char(rng, g)
        for n in range(1, 7):
            checked += 1
            failures += not beta_compat_check(e, n)
    ok = failures == 0
    record_criterion(2, "beta_n compatibility", ok, f"{checked} (e, n) pairs, {failures} failures")
    assert ok


def test_criterion_03_recursion_matches_closed_form(gl1_sample, record_criterion):
    descended = mismatches = 0
    for g, items in gl1_sample.items():
        lo, hi = default_window(g)
        for e, fam in items:
            for d in range(lo, hi + 1):
                if d <= 2 * g - 2:
                    descended += 1
                    mismatches += fam.provenance[d] != "descended"
                mismatches += fam[d] != closed_form(e, d)
                if d < hi:
                    mismatches += descend_step(fam[d + 1], e) != fam[d]
    ok = mismatches == 0 and descended > 0
    record_criterion(3, "recursion vs closed form", ok, f"{descended} descended members, {mismatches} mismatches")
    assert ok


def test_criterion_04_uniqueness(gl1_sample, record_criterion):
    unique_fail = 0
    for g, items in gl1_sample.items():
        for e, _ in items:
            unique_fail += not uniqueness_check(e, default_window(g))

    # every single-value perturbation of a valid family breaks an adjacent check
    rng = random.Random(4)
    perturbed = survived = 0
    for g in GENERA:
        lo, hi = default_window(g)
        for e, fam in gl1_sample[g][:5]:
            for d in range(lo, hi + 1):
                for i in range(2 * g):
                    old = fam[d].values
                    new = rng.choice([v for v in MULT_PALETTE if v != old[i]])
                    bad = fam.with_member(d, MultChar(pic(g, d), old[:i] + (new,) + old[i + 1 :]))
                    perturbed += 1
                    adjacent = [k for k in (d - 1, d) if lo <= k < hi]
                    survived += all(check_eigen_gl1(e, bad, k) for k in adjacent)
    ok = unique_fail == 0 and survived == 0
    record_criterion(
        4,
        "uniqueness",
        ok,
        f"{4 * 100 - unique_fail}/400 unique, {perturbed} perturbations, {survived} undetected",
    )
    assert ok


def test_criterion_05_admissibility(record_criterion):
    table = {m: set(admissible_hecke_indices(m).indices) for m in ("rank1", "bunprime2", "bunprime")}
    ok = table == {"rank1": {1}, "bunprime2": {2}, "bunprime": set()}
    record_criterion(5, "admissibility table", ok, str({k: sorted(v) for k, v in table.items()}))
    assert ok


def test_criterion_06_exterior_square(record_criterion):
    rng = random.Random(6)
    failures = 0
    for _ in range(100):
        g = rng.choice(GENERA)
        p = random_curve_char(rng, g)
        alpha = random_add_char(rng, curve(g))
        failures += not exterior_square(alpha).is_trivial()
        failures += not exterior_square(as_matrix_rep(alpha)).is_trivial()
        E = tensor(p, alpha)
        failures += exterior_square(E) != p**2
        failures += exterior_square(as_matrix_rep(E)) != p**2
    ok = failures == 0
    record_criterion(6, "exterior squares", ok, f"100 triangular systems, {failures} failures")
    assert ok


def _coefficients(rng, k):
    return [(rng.choice(MULT_PALETTE), rng.choice(ENTRY_PALETTE)) for _ in range(k)]


def _family(base, coeffs):
    n = base.rows
    return [ExactMatrix.scalar_matrix(a, n) + base.scale(b) for a, b in coeffs]


def _multi_generator_instance(rng):
    g = rng.choice((1, 2))
    n = rng.choice((2, 2, 3))
    coeffs = _coefficients(rng, 2 * g)
    kind = rng.randrange(4)
    base = random_matrix(rng, n)
    lhs = _family(base, coeffs)
    if kind == 0:
        T = random_invertible(rng, n)
        rhs = [T @ m @ T.inverse for m in lhs]
    elif kind == 1:
        rhs = [m.transpose() for m in lhs]
    elif kind == 2:
        # same eigenvalues, different Jordan type
        lam = rng.choice(MULT_PALETTE)
        nil = ExactMatrix.of([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])
        lhs = _family(ExactMatrix.scalar_matrix(lam, n) + nil, coeffs)
        rhs = _family(ExactMatrix.scalar_matrix(lam, n), coeffs)
    else:
        rhs = _family(random_matrix(rng, n), coeffs)
    # MatrixRep rejects singular images
    return MatrixRep(curve(g), n, tuple(lhs)), MatrixRep(curve(g), n, tuple(rhs))


def test_criterion_07_iso_tester_vs_oracles(record_criterion):
    rng = random.Random(7)
    single = single_bad = 0
    outcomes = {True: 0, False: 0}
    while single < 500:
        a, b = random_2x2_pair(rng)
        if not (a.is_invertible() and b.is_invertible()):
            continue
        s = curve(1)
        engine = bool(is_isomorphic(MatrixRep(s, 2, (a, ExactMatrix.identity(2))), MatrixRep(s, 2, (b, ExactMatrix.identity(2)))))
        single += 1
        outcomes[engine] += 1
        single_bad += engine != jordan_oracle_2x2(a, b)

    multi = multi_bad = 0
    multi_outcomes = {True: 0, False: 0}
    while multi < 100:
        try:
            lhs, rhs = _multi_generator_instance(rng)
        except ValueError:
            continue  # non-commuting or singular draw
        engine = bool(is_isomorphic(lhs, rhs))
        multi += 1
        multi_outcomes[engine] += 1
        multi_bad += engine != brute_force_isomorphic(lhs.images, rhs.images, lhs.size)
    ok = single_bad == 0 and multi_bad == 0 and min(outcomes.values()) > 0 and min(multi_outcomes.values()) > 0
    record_criterion(
        7,
        "isomorphism tester vs oracles",
        ok,
        f"single {single} ({outcomes[True]} iso), {single_bad} disagreements; "
        f"multi {multi} ({multi_outcomes[True]} iso), {multi_bad} disagreements",
    )
    assert ok


def _documented_systems():
    """alpha != 0 family used for the Hecke_2 verdict and audit criteria."""
    out = []
    for g in (1, 2):
        n = 2 * g
        for p in ([1] * n, [2, 3, 5, 7][:n], [-1, 2, 3, -2][:n]):
            for alpha in ([1] + [0] * (n - 1), [0, 1, 2, 3][:n]):
                out.append(TriangularSystem(on_curve(g, p), on_curve(g, alpha, "add")))
    out.append(TriangularSystem(on_curve(3, [2, 1, 1, 3, 1, 1]), on_curve(3, [0, 0, 1, 0, 0, 0], "add")))
    return out


def _alpha_zero_systems():
    rng = random.Random(8)
    out = []
    for g in GENERA:
        for _ in range(2):
            out.append(TriangularSystem(random_curve_char(rng, g), AddChar.zero(curve(g))))
    return out


@pytest.fixture(scope="module")
def gagm_verdicts():
    out = []
    for sys in _alpha_zero_systems() + _documented_systems():
        g = sys.genus
        window = (-2, 2 * g + 2) if g <= 2 else (-1, 2)
        fam = build_candidate_K(sys, window)
        out.append((sys, [check_eigen_gagm(sys, fam, d) for d in range(window[0], window[1])]))
    return out


def test_criterion_08_gagm_verdicts(gagm_verdicts, record_criterion):
    zero_bad = nonzero_bad = missing = 0
    nonzero_degrees = 0
    for sys, verdicts in gagm_verdicts:
        if sys.alpha.is_zero():
            zero_bad += sum(not v.isomorphic for v in verdicts)
            continue
        for v in verdicts:
            nonzero_degrees += 1
            nonzero_bad += not v.oracle_agrees
            body = v.to_json()
            if not v.isomorphic:
                missing += "obstruction" not in body or v.obstruction != sys.alpha
            missing += "semisimplified_match" not in body
    ok = zero_bad == 0 and nonzero_bad == 0 and missing == 0
    record_criterion(
        8,
        "GaGm Hecke_2 verdicts",
        ok,
        f"alpha=0 non-iso degrees {zero_bad}; alpha!=0: {nonzero_degrees} degrees, "
        f"{nonzero_bad} oracle disagreements, {missing} missing diagnostics",
    )
    assert ok


def test_criterion_09_proof_path_audit(gagm_verdicts, record_criterion):
    bad = audits = 0
    F_fail = 0
    for sys, verdicts in gagm_verdicts:
        for v in verdicts:
            a = v.audit or audit_factorization(sys, build_candidate_K(sys, (v.degree, v.degree + 1)), v.degree)
            audits += 1
            bad += not (a.u_step.passed and a.p2_step.passed and a.composition.passed)
            oracle_iso = a.F_step.detail["oracle"] == "isomorphic"
            bad += oracle_iso != a.F_step.passed
            F_fail += not a.F_step.passed
    ok = bad == 0 and audits > 0
    record_criterion(
        9, "proof-path audit", ok, f"{audits} audits, {bad} step/oracle mismatches, F step isomorphism fails in {F_fail}"
    )
    assert ok


def test_criterion_10_determinism(tmp_path, record_criterion, capsys):
    runs = [
        ["gl1-check", "--config", str(CONFIGS / "gl1_genus2.json")],
        ["gagm-check", "--config", str(CONFIGS / "gagm_unipotent.json")],
        ["classify", "--config", str(CONFIGS / "classify_example.json")],
        ["selftest", "--seed", "42"],
    ]
    differing = []
    for k, argv in enumerate(runs):
        a, b = tmp_path / f"{k}a.json", tmp_path / f"{k}b.json"
        main(argv + ["--out", str(a)])
        main(argv + ["--out", str(b)])
        if a.read_bytes() != b.read_bytes():
            differing.append(argv[0])
    capsys.readouterr()
    ok = not differing
    record_criterion(10, "determinism", ok, f"{len(runs)} commands run twice, differing: {differing or 'none'}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
