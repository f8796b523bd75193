"""Scenario suites and the report they produce.

Each check becomes one entry with status pass, fail, report (a verdict
recorded without an expectation) or error.  Errors raised by a check are
caught and recorded so a suite always runs to the end.  Entries are sorted
before serialization, so the report bytes depend only on config and seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .config import RunConfig
from .exact import ExactMatrix, det, find_invertible, intertwiner_space, mat_mul
from .gagm import (
    TriangularSystem,
    admissible_hecke_indices,
    build_candidate_K,
    check_eigen_gagm,
    classify_connection,
)
from .gl1 import (
    InvariantViolation,
    beta_compat_check,
    build_eigensheaf,
    check_eigen_gl1,
    closed_form,
    descend_step,
    eigen_gl1_sides,
    uniqueness_check,
)
from .local_systems import (
    AddChar,
    MatrixRep,
    MultChar,
    Rank2Triangular,
    as_matrix_rep,
    exterior_square,
    is_isomorphic,
    tensor,
)
from .moduli import (
    abel_jacobi_map,
    beta_map,
    compose,
    curve,
    hecke1_map,
    identity_map,
    les_conclusion,
    product_map,
)
from .oracle import brute_force_isomorphic, jordan_oracle_2x2
from .sampling import (
    ADD_PALETTE,
    MULT_PALETTE,
    random_2x2_pair,
    random_add_char,
    random_curve_char,
    random_invertible,
    random_matrix,
)
from .surface import SurfaceGroup, Word, abelianize, check_relation, relator

SCHEMA_VERSION = 1

EXPECTED_ADMISSIBILITY = {"rank1": [1], "bunprime2": [2], "bunprime": []}


@dataclass
class Entry:
    scenario: str
    check: str
    status: str  # pass | fail | report | error
    degree: int | None = None
    detail: dict = field(default_factory=dict)

    def sort_key(self):
        return (self.scenario, self.degree is not None, self.degree or 0, self.check)

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "check": self.check, "degree": self.degree, "status": self.status, **self.detail}


@dataclass
class RunReport:
    config: dict | None
    entries: list[Entry] = field(default_factory=list)
    error: dict | None = None

    @property
    def totals(self) -> dict:
        counts = {"passed": 0, "failed": 0, "reported": 0, "errors": 0}
        key = {"pass": "passed", "fail": "failed", "report": "reported", "error": "errors"}
        for e in self.entries:
            counts[key[e.status]] += 1
        return counts

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "engine_version": __version__,
            "config": self.config,
            "entries": [e.to_json() for e in sorted(self.entries, key=Entry.sort_key)],
            "totals": self.totals,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def dumps(self, pretty: bool = False) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2 if pretty else None) + "\n"

    def summary(self) -> str:
        if self.error is not None:
            return f"configuration error at {self.error['path']}: {self.error['message']}"
        lines = []
        for e in sorted(self.entries, key=Entry.sort_key):
            deg = "" if e.degree is None else f" d={e.degree}"
            lines.append(f"[{e.status.upper():6}] {e.scenario}:{e.check}{deg}")
        t = self.totals
        lines.append(f"passed {t['passed']}, failed {t['failed']}, reported {t['reported']}, errors {t['errors']}")
        return "\n".join(lines)


def config_error_report(path: str, message: str) -> RunReport:
    return RunReport(config=None, error={"kind": "config", "path": path, "message": message})


def exit_code(report: RunReport) -> int:
    if report.error is not None and report.error.get("kind") == "config":
        return 2
    if any(e.status == "error" and e.detail.get("error_kind") == "invariant" for e in report.entries):
        return 3
    if any(e.status in ("fail", "error") for e in report.entries):
        return 1
    return 0


def _vals(xs) -> list:
    return [v.to_json() for v in xs]


class _Suite:
    def __init__(self, scenario: str):
        self.scenario = scenario
        self.entries: list[Entry] = []

    def add(self, check: str, status: str, degree: int | None = None, **detail) -> None:
        self.entries.append(Entry(self.scenario, check, status, degree, detail))

    def guard(self, check: str, fn: Callable[[], None], degree: int | None = None) -> None:
        try:
            fn()
        except (InvariantViolation, AssertionError) as exc:
            self.add(check, "error", degree, error_kind="invariant", message=str(exc))
        except Exception as exc:  # recorded, never propagated
            self.add(check, "error", degree, error_kind=type(exc).__name__, message=str(exc))


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# --- gl1 ---------------------------------------------------------------------


def run_gl1(cfg: RunConfig) -> list[Entry]:
    s = _Suite("gl1")
    g = cfg.genus
    e = MultChar(curve(g), cfg.mult)
    lo, hi = cfg.effective_window
    state: dict = {}

    def construct():
        fam = build_eigensheaf(e, (lo, hi))
        state["fam"] = fam
        s.add("construction", "pass", family=fam.to_json())

    s.guard("construction", construct)
    fam = state.get("fam")

    for d in range(lo, hi + 1):
        les = les_conclusion(g, d)
        s.add("fibration", "report", d, verdict=les.verdict, evidence=les.evidence)

    if fam is not None:
        for d in range(lo, hi):
            def eigen(d=d):
                ok = check_eigen_gl1(e, fam, d)
                detail = {}
                if not ok:
                    lhs, rhs = eigen_gl1_sides(e, fam, d)
                    detail = {"counterexample": {"lhs": _vals(lhs.values), "rhs": _vals(rhs.values)}}
                s.add("eigen_identity", _status(ok), d, **detail)

            s.guard("eigen_identity", eigen, d)

        for d in range(lo, hi + 1):
            def recursion(d=d):
                closed_ok = fam[d] == closed_form(e, d)
                step_ok = True
                if d < hi:
                    step_ok = descend_step(fam[d + 1], e, fam[d + 2] if d + 2 <= hi else None) == fam[d]
                detail = {"provenance": fam.provenance[d]}
                if not (closed_ok and step_ok):
                    detail["counterexample"] = {"family": _vals(fam[d].values), "closed_form": _vals(closed_form(e, d).values)}
                s.add("recursion_vs_closed_form", _status(closed_ok and step_ok), d, **detail)

            s.guard("recursion_vs_closed_form", recursion, d)

    def unique():
        ok = uniqueness_check(e, (lo, hi))
        detail = {} if ok else {"certificate": {"window": [lo, hi], "reason": "eigen-equations do not pin down a unique family"}}
        s.add("uniqueness", _status(ok), **detail)

    s.guard("uniqueness", unique)

    for n in range(1, 7):
        s.guard(f"beta_compat_n{n}", lambda n=n: s.add(f"beta_compat_n{n}", _status(beta_compat_check(e, n))))

    def square():
        bad = []
        for n in range(1, 7):
            lhs = compose(abel_jacobi_map(g, n + 1), beta_map(g, n))
            rhs = compose(hecke1_map(g, n), product_map(identity_map(curve(g)), abel_jacobi_map(g, n)))
            if lhs.h1_matrix != rhs.h1_matrix:
                bad.append({"n": n, "lhs": lhs.to_json(), "rhs": rhs.to_json()})
        s.add("abel_jacobi_square", _status(not bad), **({"counterexample": bad} if bad else {}))

    s.guard("abel_jacobi_square", square)
    return s.entries


# --- gagm ----------------------------------------------------------------------


def run_gagm(cfg: RunConfig) -> list[Entry]:
    s = _Suite("gagm")
    g = cfg.genus
    p = MultChar(curve(g), cfg.mult) if cfg.mult is not None else MultChar.trivial(curve(g))
    alpha = AddChar(curve(g), cfg.add) if cfg.add is not None else AddChar.zero(curve(g))
    lo, hi = cfg.effective_window
    state: dict = {}

    def system():
        sys = TriangularSystem(p, alpha)
        state["sys"] = sys
        cls = classify_connection(MatrixRep(curve(g), 2, _images(sys)))
        ok = cls.kind in ("unipotent", "gm_ga_triangular")
        s.add("classification", _status(ok), classification=cls.to_json())

    s.guard("classification", system)

    for model, expected in EXPECTED_ADMISSIBILITY.items():
        def adm(model=model, expected=expected):
            res = admissible_hecke_indices(model)
            ok = sorted(res.indices) == expected
            s.add(f"admissibility_{model}", _status(ok), admissibility=res.to_json(), expected=expected)

        s.guard(f"admissibility_{model}", adm)

    sys = state.get("sys")
    if sys is None:
        return s.entries

    def wedge():
        ok_e = exterior_square(sys.E) == p**2
        ok_c = exterior_square(sys.C).is_trivial()
        s.add("exterior_square", _status(ok_e and ok_c), wedge_E=_vals(exterior_square(sys.E).values), wedge_C_trivial=ok_c)

    s.guard("exterior_square", wedge)

    fam_box: dict = {}
    s.guard("candidate_family", lambda: fam_box.setdefault("fam", build_candidate_K(sys, (lo, hi))))
    fam = fam_box.get("fam")
    if fam is None:
        return s.entries
    s.add("candidate_family", "pass", members={str(d): fam[d].to_json() for d in fam.degrees})

    for d in range(lo, hi):
        def verdict(d=d):
            v = check_eigen_gagm(sys, fam, d)
            body = v.to_json()
            audit = body.pop("audit")
            if cfg.expect == "report_only":
                status = "report"
            else:
                status = _status(v.isomorphic == (cfg.expect == "isomorphic"))
            s.add("hecke2_verdict", status, d, expect=cfg.expect, verdict=body)
            s.add(
                "oracle_agreement",
                _status(v.oracle_agrees),
                d,
                engine=body["result"],
                oracle=body["oracle"],
            )
            for step in ("u_step", "p2_step", "composition"):
                st = audit[step]
                s.add(f"audit_{step}", _status(st["passed"]), d, step=st)
            f = audit["F_step"]
            s.add("audit_F_step", "report", d, step=f)
            s.add("audit_F_step_oracle", _status((f["result"] == "isomorphic") == (f["oracle"] == "isomorphic")), d)

        s.guard("hecke2_verdict", verdict, d)
    return s.entries


def _images(sys: TriangularSystem) -> tuple[ExactMatrix, ...]:
    return as_matrix_rep(sys.E).images


# --- classify ------------------------------------------------------------------


def run_classify(cfg: RunConfig) -> list[Entry]:
    s = _Suite("classify")
    g = cfg.genus
    images = cfg.images

    def rel():
        ok = check_relation(images, SurfaceGroup(g))
        s.add("surface_relation", _status(ok))

    s.guard("surface_relation", rel)

    def cls():
        rep = MatrixRep(curve(g), 2, images)
        s.add("classification", "report", classification=classify_connection(rep).to_json())

    s.guard("classification", cls)
    return s.entries


# --- selftest --------------------------------------------------------------------


def run_selftest(cfg: RunConfig) -> list[Entry]:
    s = _Suite("selftest")
    rng = random.Random(cfg.seed)

    def prop(name: str, samples: int, body: Callable[[], Any]):
        """body returns None on success or a counterexample dict."""

        def go():
            for k in range(samples):
                bad = body()
                if bad is not None:
                    s.add(name, "fail", samples=k + 1, counterexample=bad)
                    return
            s.add(name, "pass", samples=samples)

        s.guard(name, go)

    def field_axioms():
        a, b, c = (random_matrix(rng, 1)[0, 0] for _ in range(3))
        if a * (b + c) != a * b + a * c or (a * b) * c != a * (b * c):
            return {"a": a.to_json(), "b": b.to_json(), "c": c.to_json()}
        if not a.is_zero() and a * a.inverse() != 1:
            return {"a": a.to_json()}
        return None

    prop("scalar_field_axioms", 200, field_axioms)

    def det_mult():
        n = rng.choice((2, 3))
        a, b = random_matrix(rng, n), random_matrix(rng, n)
        if det(mat_mul(a, b)) != det(a) * det(b):
            return {"a": a.to_json(), "b": b.to_json()}
        return None

    prop("det_multiplicative", 100, det_mult)

    def jordan():
        a, b = random_2x2_pair(rng)
        if a.is_invertible() and b.is_invertible():
            rep_a = MatrixRep(curve(1), 2, (a, ExactMatrix.identity(2)))
            rep_b = MatrixRep(curve(1), 2, (b, ExactMatrix.identity(2)))
            if is_isomorphic(rep_a, rep_b).isomorphic != jordan_oracle_2x2(a, b):
                return {"a": a.to_json(), "b": b.to_json()}
        return None

    prop("isomorphism_vs_jordan_oracle", 150, jordan)

    def multi():
        g = rng.choice((1, 2))
        base = MatrixRep(curve(g), 2, tuple(_random_commuting_triangular(rng, 2 * g)))
        if rng.random() < 0.5:
            T = random_invertible(rng, 2)
            other = MatrixRep(base.space, 2, tuple(T @ m @ T.inverse for m in base.images))
        else:
            other = MatrixRep(curve(g), 2, tuple(_random_commuting_triangular(rng, 2 * g)))
        v = is_isomorphic(base, other)
        if v.isomorphic != brute_force_isomorphic(base.images, other.images, 2):
            return {"lhs": base.to_json(), "rhs": other.to_json()}
        return None

    prop("isomorphism_vs_bruteforce_oracle", 40, multi)

    def intertwiners():
        a, b = random_2x2_pair(rng)
        for T in intertwiner_space([a], [b]).basis:
            if T @ a != b @ T:
                return {"a": a.to_json(), "b": b.to_json()}
        sp = intertwiner_space([a], [b])
        T = find_invertible(sp)
        if T is not None and not (T.is_invertible() and sp.contains(T)):
            return {"a": a.to_json(), "b": b.to_json()}
        return None

    prop("intertwiner_reverification", 60, intertwiners)

    def relators():
        for g in range(1, 5):
            G = SurfaceGroup(g)
            if any(abelianize(relator(G), G)):
                return {"genus": g}
        w1, w2 = (_random_word(rng, 2) for _ in range(2))
        G = SurfaceGroup(2)
        lhs = abelianize(w1 * w2, G)
        rhs = tuple(x + y for x, y in zip(abelianize(w1, G), abelianize(w2, G)))
        return None if lhs == rhs else {"w1": str(w1), "w2": str(w2)}

    prop("abelianization", 50, relators)

    def gl1_eigen():
        g = rng.randint(1, 3)
        e = random_curve_char(rng, g)
        fam = build_eigensheaf(e)
        bad = [d for d in range(fam.window[0], fam.window[1]) if not check_eigen_gl1(e, fam, d)]
        return {"e": _vals(e.values), "degrees": bad} if bad else None

    prop("gl1_eigen_identity", 20, gl1_eigen)

    def beta():
        g, n = rng.randint(1, 4), rng.randint(1, 6)
        e = random_curve_char(rng, g)
        return None if beta_compat_check(e, n) else {"e": _vals(e.values), "n": n}

    prop("beta_compat", 30, beta)

    def unique():
        g = rng.randint(1, 2)
        e = random_curve_char(rng, g)
        if not uniqueness_check(e):
            return {"e": _vals(e.values)}
        fam = build_eigensheaf(e)
        d = rng.randint(fam.window[0], fam.window[1])
        i = rng.randrange(2 * g)
        vals = list(fam[d].values)
        vals[i] = vals[i] * 5
        bad = fam.with_member(d, MultChar(fam[d].space, tuple(vals)))
        if not bad.failing_degrees():
            return {"e": _vals(e.values), "perturbed_degree": d}
        return None

    prop("uniqueness_and_perturbation", 10, unique)

    def wedge():
        g = rng.randint(1, 3)
        P = random_curve_char(rng, g)
        C_alpha = random_add_char(rng, curve(g))
        C = Rank2Triangular(MultChar.trivial(curve(g)), C_alpha)
        E = tensor(C, P)
        return None if exterior_square(E) == (P**2) * exterior_square(C) else {"p": _vals(P.values)}

    prop("exterior_square_of_twist", 50, wedge)

    def gagm_zero():
        g = rng.randint(1, 2)
        sys = TriangularSystem(random_curve_char(rng, g), AddChar.zero(curve(g)))
        fam = build_candidate_K(sys, (0, 2))
        for d in (0, 1):
            v = check_eigen_gagm(sys, fam, d, audit=False)
            if not v.isomorphic or not v.oracle_agrees:
                return {"p": _vals(sys.p.values), "degree": d}
        return None

    prop("gagm_pure_twist_isomorphic", 6, gagm_zero)

    def gagm_oracle():
        g = rng.randint(1, 2)
        sys = TriangularSystem(random_curve_char(rng, g), random_add_char(rng, curve(g)))
        fam = build_candidate_K(sys, (0, 1))
        v = check_eigen_gagm(sys, fam, 0, audit=False)
        return None if v.oracle_agrees else {"p": _vals(sys.p.values), "alpha": _vals(sys.alpha.values)}

    prop("gagm_oracle_agreement", 6, gagm_oracle)
    return s.entries


def _random_commuting_triangular(rng: random.Random, k: int) -> list[ExactMatrix]:
    return [
        ExactMatrix.of([[c, c * x], [0, c]])
        for c, x in ((rng.choice(MULT_PALETTE), rng.choice(ADD_PALETTE)) for _ in range(k))
    ]


def _random_word(rng: random.Random, g: int) -> Word:
    toks = []
    for _ in range(rng.randint(0, 8)):
        ch = rng.choice("abAB")
        toks.append(f"{ch}{rng.randint(1, g)}")
    return Word.parse(" ".join(toks))


SUITES = {"gl1": run_gl1, "gagm": run_gagm, "classify": run_classify, "selftest": run_selftest}


def run(cfg: RunConfig) -> RunReport:
    report = RunReport(config=cfg.echo())
    try:
        report.entries = SUITES[cfg.scenario](cfg)
    except Exception as exc:  # a suite must still yield a report
        kind = "invariant" if isinstance(exc, AssertionError) else type(exc).__name__
        report.entries.append(Entry(cfg.scenario, "suite", "error", None, {"error_kind": kind, "message": str(exc)}))
    return report
