"""Triangular rank-two systems with commutative monodromy in Gm x Ga.

E = P (x) C with P rank one and C unipotent.  The candidate eigensheaf on
Pic^d X x C^g is K_d = L_d (x) A_d, where L is the rank-one eigensheaf of
P^2 and A_d transports the additive datum of C to every degree.  The
Hecke_2 identity is then tested exactly, and each step of the
u_d . p_2 . F factorization is audited separately.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .gl1 import build_eigensheaf
from .local_systems import (
    AddChar,
    IsoVerdict,
    MatrixRep,
    MultChar,
    Rank2Triangular,
    as_matrix_rep,
    diagonal_characters,
    exterior_square,
    external_product,
    is_isomorphic,
    pullback,
    tensor,
)
from .moduli import (
    F_map,
    F_map_homotopy_reading,
    abel_jacobi_map,
    compose,
    curve,
    ext_space,
    hecke2_map,
    invert_map,
    p2_map,
    sym_prod,
    translation_map,
    u_map,
)
from .oracle import brute_force_isomorphic
from .surface import SurfaceGroup, check_relation


@dataclass(frozen=True)
class TriangularSystem:
    p: MultChar
    alpha: AddChar

    def __post_init__(self):
        if self.p.space.kind != "curve" or self.p.space != self.alpha.space:
            raise ValueError("P and the additive datum must both live on the curve")
        rep = as_matrix_rep(self.E)
        if not check_relation(rep.images, SurfaceGroup(self.genus)):
            raise AssertionError("triangular system violates the surface relation")

    @property
    def genus(self) -> int:
        return self.p.space.genus

    @property
    def E(self) -> Rank2Triangular:
        return Rank2Triangular(self.p, self.alpha)

    @property
    def C(self) -> Rank2Triangular:
        return Rank2Triangular(MultChar.trivial(self.p.space), self.alpha)


# --- classification ---------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str  # "unipotent" | "gm_ga_triangular" | "out_of_scope"
    p: MultChar | None = None
    alpha: AddChar | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.p is not None:
            out["p"] = [v.to_json() for v in self.p.values]
        if self.alpha is not None:
            out["alpha"] = [v.to_json() for v in self.alpha.values]
        if self.reason:
            out["reason"] = self.reason
        return out


def classify_connection(r: MatrixRep) -> Classification:
    if r.size != 2 or r.space.kind != "curve":
        return Classification("out_of_scope", reason="need a rank-2 system on the curve")
    cs, xs = [], []
    for k, m in enumerate(r.images):
        if not m[1, 0].is_zero():
            return Classification("out_of_scope", reason=f"generator {k} is not upper triangular")
        if m[0, 0] != m[1, 1]:
            return Classification("out_of_scope", reason=f"generator {k} has unequal diagonal entries")
        cs.append(m[0, 0])
        xs.append(m[0, 1] / m[0, 0])
    alpha = AddChar(r.space, tuple(xs))
    p = MultChar(r.space, tuple(cs))
    if p.is_trivial():
        return Classification("unipotent", alpha=alpha)
    return Classification("gm_ga_triangular", p=p, alpha=alpha)


# --- which Hecke correspondences exist -----------------------------------------


BUNDLE_MODELS = {
    # rank, allowed degree predicate, description
    "rank1": (1, lambda deg: True, "line bundles, any degree"),
    "bunprime2": (2, lambda deg: deg % 2 == 0, "extensions of M1 by M1, degree 2 deg M1"),
    "bunprime": (2, lambda deg: deg == 0, "extensions of O by O, degree 0"),
}


@dataclass(frozen=True)
class Admissibility:
    model: str
    indices: frozenset[int]
    notes: dict[int, str]

    def to_json(self) -> dict:
        return {"model": self.model, "indices": sorted(self.indices), "notes": {str(k): v for k, v in sorted(self.notes.items())}}


def admissible_hecke_indices(model: str, degree_range: range = range(-6, 7)) -> Admissibility:
    """Quotient lengths i for which a modification M' of M stays in the model.

    M(-x) <= M' <= M with M/M' of length i, so deg M' = deg M - i, and
    i = rank forces M' = M(-x).
    """
    if model not in BUNDLE_MODELS:
        raise ValueError(f"unknown bundle model {model!r}")
    rank, allowed, _ = BUNDLE_MODELS[model]
    indices = set()
    notes = {}
    for i in range(1, 3):
        if i > rank:
            notes[i] = f"quotient of length {i} exceeds rank {rank}"
            continue
        pairs = [deg for deg in degree_range if allowed(deg) and allowed(deg - i)]
        if not pairs:
            notes[i] = f"deg M' = deg M - {i} leaves the model for every allowed deg M"
            continue
        indices.add(i)
        notes[i] = "forces M' = M(-x)" if i == rank else f"M(-x) < M' < M with deg M' = deg M - {i}"
    return Admissibility(model, frozenset(indices), notes)


# --- candidate eigensheaf ---------------------------------------------------------


@dataclass(frozen=True)
class GagmFamily:
    system: TriangularSystem
    window: tuple[int, int]
    members: dict[int, Rank2Triangular]
    additive: dict[int, AddChar]

    def __getitem__(self, d: int) -> Rank2Triangular:
        return self.members[d]

    @property
    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)


def additive_part(alpha: AddChar, d: int) -> AddChar:
    """A_d on Pic^d x C^g: alpha read on Pic^1 through Abel-Jacobi, then translated to degree d."""
    g = alpha.space.genus
    on_pic1 = pullback(alpha.on(sym_prod(g, 1)), invert_map(abel_jacobi_map(g, 1)))
    a1 = external_product(on_pic1, AddChar.zero(ext_space(g)))
    if d == 1:
        return a1
    return pullback(a1, invert_map(translation_map(g, 1, d - 1)))


def build_candidate_K(sys: TriangularSystem, window: tuple[int, int]) -> GagmFamily:
    g = sys.genus
    rank_one = build_eigensheaf(sys.p**2, window)
    members, additive = {}, {}
    for d in range(window[0], window[1] + 1):
        L_d = external_product(rank_one[d], MultChar.trivial(ext_space(g)))
        A_d = additive_part(sys.alpha, d)
        members[d] = tensor(L_d, A_d)
        additive[d] = A_d
    return GagmFamily(sys, window, members, additive)


# --- the Hecke_2 check ------------------------------------------------------------


def triangular_offdiagonal(rep: MatrixRep, indices) -> list:
    """x/c for each image c*[[1, x], [0, 1]]; None where the image has another shape."""
    out = []
    for k in indices:
        m = rep.images[k]
        if m[1, 0].is_zero() and m[0, 0] == m[1, 1]:
            out.append(m[0, 1] / m[0, 0])
        else:
            out.append(None)
    return out


def obstruction_character(lhs: MatrixRep, rhs: MatrixRep, g: int) -> AddChar | None:
    """Additive discrepancy between the two sides on the curve generators."""
    curve_gens = range(2 * g)
    a = triangular_offdiagonal(lhs, curve_gens)
    b = triangular_offdiagonal(rhs, curve_gens)
    if any(x is None for x in a + b):
        return None
    return AddChar(curve(g), tuple(x - y for x, y in zip(a, b)))


def semisimplified_match(lhs: MatrixRep, rhs: MatrixRep) -> bool | None:
    """Compare only the diagonal characters, as multisets."""
    dl, dr = diagonal_characters(lhs), diagonal_characters(rhs)
    if dl is None or dr is None:
        return None
    return Counter(c.values for c in dl) == Counter(c.values for c in dr)


@dataclass(frozen=True)
class StepResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


@dataclass(frozen=True)
class ProofAudit:
    degree: int
    u_step: StepResult
    p2_step: StepResult
    F_step: StepResult
    composition: StepResult

    def to_json(self) -> dict:
        return {
            "u_step": self.u_step.to_json(),
            "p2_step": self.p2_step.to_json(),
            "F_step": self.F_step.to_json(),
            "composition": self.composition.to_json(),
        }


@dataclass(frozen=True)
class HeckeVerdict:
    degree: int
    verdict: IsoVerdict
    obstruction: AddChar | None
    semisimplified: bool | None
    oracle_isomorphic: bool
    audit: ProofAudit | None = None

    @property
    def isomorphic(self) -> bool:
        return self.verdict.isomorphic

    @property
    def oracle_agrees(self) -> bool:
        return self.oracle_isomorphic == self.verdict.isomorphic

    def to_json(self) -> dict:
        out: dict = {"degree": self.degree, "result": "isomorphic" if self.isomorphic else "not_isomorphic"}
        if self.verdict.witness is not None:
            out["witness"] = self.verdict.witness.to_json()
        if self.verdict.certificate is not None:
            out["certificate"] = [b.to_json() for b in self.verdict.certificate.basis]
        if not self.isomorphic and self.obstruction is not None:
            out["obstruction"] = [v.to_json() for v in self.obstruction.values]
        out["semisimplified_match"] = self.semisimplified
        out["oracle"] = "isomorphic" if self.oracle_isomorphic else "not_isomorphic"
        out["oracle_agrees"] = self.oracle_agrees
        if self.audit is not None:
            out["audit"] = self.audit.to_json()
        return out


def hecke2_sides(sys: TriangularSystem, fam: GagmFamily, d: int) -> tuple[MatrixRep, MatrixRep]:
    g = sys.genus
    lhs = pullback(as_matrix_rep(fam[d + 1]), hecke2_map(g, d))
    rhs = external_product(as_matrix_rep(exterior_square(sys.E)), as_matrix_rep(fam[d]))
    return lhs, rhs


def check_eigen_gagm(sys: TriangularSystem, fam: GagmFamily, d: int, audit: bool = True) -> HeckeVerdict:
    lhs, rhs = hecke2_sides(sys, fam, d)
    oracle = brute_force_isomorphic(lhs.images, rhs.images, lhs.size)
    v = is_isomorphic(lhs, rhs)
    obstruction = None if v.isomorphic else obstruction_character(lhs, rhs, sys.genus)
    return HeckeVerdict(
        degree=d,
        verdict=v,
        obstruction=obstruction,
        semisimplified=semisimplified_match(lhs, rhs),
        oracle_isomorphic=oracle,
        audit=audit_factorization(sys, fam, d) if audit else None,
    )


def _iso_detail(v: IsoVerdict, lhs: MatrixRep, rhs: MatrixRep, g: int) -> dict:
    detail = v.to_json()
    detail["oracle"] = "isomorphic" if brute_force_isomorphic(lhs.images, rhs.images, lhs.size) else "not_isomorphic"
    if not v.isomorphic:
        obs = obstruction_character(lhs, rhs, g)
        if obs is not None:
            detail["obstruction"] = [x.to_json() for x in obs.values]
        detail["semisimplified_match"] = semisimplified_match(lhs, rhs)
    return detail


def audit_factorization(sys: TriangularSystem, fam: GagmFamily, d: int) -> ProofAudit:
    """Check H2_d = u_d . p_2 . F step by step on the additive part."""
    g = sys.genus
    A_d, A_next = fam.additive[d], fam.additive[d + 1]

    u = u_map(g, d)
    u_ok = pullback(A_next, u) == A_d
    u_step = StepResult("u_d^* A_(d+1) = A_d", u_ok)

    p2 = p2_map(g, d)
    trivial_curve = MatrixRep.trivial(curve(g), 1)
    boxed = external_product(trivial_curve, as_matrix_rep(A_d))
    p2_ok = as_matrix_rep(pullback(A_d, p2)) == boxed
    p2_step = StepResult("O_X [x] A_d = p_2^* A_d", p2_ok)

    F = F_map(g, d)
    pulled = pullback(boxed, F)
    v = is_isomorphic(pulled, boxed)
    detail = _iso_detail(v, pulled, boxed, g)
    homotopy = pullback(boxed, F_map_homotopy_reading(g, d))
    detail["homotopy_reading_isomorphic"] = is_isomorphic(homotopy, boxed).isomorphic
    detail["F_h1_matrix"] = [list(r) for r in F.h1_matrix]
    F_step = StepResult("F^*(O_X [x] A_d) = O_X [x] A_d", v.isomorphic, detail)

    composed = compose(u, compose(p2, F))
    via_homotopy = compose(u, compose(p2, F_map_homotopy_reading(g, d)))
    h2 = hecke2_map(g, d)
    composition = StepResult(
        "u_d . p_2 . F = H2_d on H1",
        composed.h1_matrix == h2.h1_matrix and composed.source == h2.source and composed.target == h2.target,
        {
            "composed": composed.to_json()["h1_matrix"],
            "hecke2": h2.to_json()["h1_matrix"],
            "homotopy_reading_matches": via_homotopy.h1_matrix == h2.h1_matrix,
        },
    )
    return ProofAudit(d, u_step, p2_step, F_step, composition)


def run_gagm(sys: TriangularSystem, window: tuple[int, int]) -> tuple[GagmFamily, list[HeckeVerdict]]:
    fam = build_candidate_K(sys, window)
    verdicts = [check_eigen_gagm(sys, fam, d) for d in range(window[0], window[1])]
    return fam, verdicts


__all__ = [
    "Admissibility",
    "Classification",
    "GagmFamily",
    "HeckeVerdict",
    "ProofAudit",
    "TriangularSystem",
    "additive_part",
    "admissible_hecke_indices",
    "audit_factorization",
    "build_candidate_K",
    "check_eigen_gagm",
    "classify_connection",
    "hecke2_sides",
    "obstruction_character",
    "run_gagm",
    "semisimplified_match",
]
