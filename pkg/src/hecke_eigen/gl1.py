"""Hecke eigensheaves for rank-one systems on the curve.

K_d lives on Pic^d X.  For d > 2g-2 it is transferred from the symmetric
power on Sym^d X through the Abel-Jacobi isomorphism on pi_1; below that it
is obtained by descending recursion, splitting H1_d^* K_{d+1} into a curve
part and a Pic^d part and checking the curve part against E by comparing
the two orders of adding two points.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

from .local_systems import (
    MultChar,
    decompose_external_rank1,
    external_product,
    pullback,
    sym_power,
)
from .moduli import (
    abel_jacobi_map,
    beta_map,
    compose,
    curve,
    hecke1_map,
    identity_map,
    invert_map,
    les_conclusion,
    pic,
    product_map,
    swap_first_two,
)


class DecompositionMismatch(ValueError):
    """The curve factor of H1^* K_{d+1} is not E: the input was not an eigensheaf restriction."""


class InvariantViolation(AssertionError):
    """Two independent constructions disagree."""


def default_window(g: int) -> tuple[int, int]:
    return (-2, 2 * g + 2)


@dataclass(frozen=True)
class EigensheafFamily:
    source: MultChar
    window: tuple[int, int]
    members: dict[int, MultChar]
    provenance: dict[int, str] = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return self.source.space.genus

    @property
    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def __getitem__(self, d: int) -> MultChar:
        return self.members[d]

    def with_member(self, d: int, k: MultChar) -> "EigensheafFamily":
        members = dict(self.members)
        members[d] = k
        return replace(self, members=members)

    def failing_degrees(self) -> list[int]:
        return [d for d in self.degrees if d + 1 in self.members and not check_eigen_gl1(self.source, self, d)]

    def validate(self) -> None:
        missing = [d for d in self.degrees if d not in self.members]
        if missing:
            raise InvariantViolation(f"degrees {missing} missing from family")
        bad = self.failing_degrees()
        if bad:
            raise InvariantViolation(f"Hecke relation fails at degrees {bad}")

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "window": list(self.window),
            "members": {
                str(d): {"values": [v.to_json() for v in self.members[d].values], "provenance": self.provenance.get(d)}
                for d in sorted(self.members)
            },
        }


def direct_transfer(e: MultChar, d: int) -> MultChar:
    """K_d from the symmetric power, valid when Sym^d X -> Pic^d X is a pi_1 isomorphism."""
    g = e.space.genus
    les = les_conclusion(g, d)
    if not les.is_iso:
        raise ValueError(f"no pi_1 transfer in degree {d} for genus {g}: {les.evidence['reason']}")
    return pullback(sym_power(e, d), invert_map(abel_jacobi_map(g, d)))


def closed_form(e: MultChar, d: int) -> MultChar:
    """K_d forced by the eigen-equations at b = 0: the values of E, read on Pic^d."""
    return MultChar(pic(e.space.genus, d), e.values)


def two_point_map(g: int, d: int):
    """f: X x X x Pic^d -> Pic^(d+2), (x, y, L) -> L(x + y), via y first then x."""
    return compose(hecke1_map(g, d + 1), product_map(identity_map(curve(g)), hecke1_map(g, d)), name=f"f_{d}")


def descend_step(k_next: MultChar, e: MultChar, k_next2: MultChar | None = None) -> MultChar:
    """K_d from K_{d+1}.

    When K_{d+2} is supplied, the route-one expansion of f^* K_{d+2} is
    checked against it as well.
    """
    if k_next.space.kind != "pic":
        raise ValueError("k_next must live on a Pic component")
    g, d = e.space.genus, k_next.space.degree - 1
    split = pullback(k_next, hecke1_map(g, d))
    f_part, k_d = decompose_external_rank1(split)

    f1 = two_point_map(g, d)
    f2 = compose(f1, swap_first_two(f1.source), name=f"f_{d}[swapped]")
    if f1.h1_matrix != f2.h1_matrix:
        raise InvariantViolation("adding two points is not symmetric on H1")
    route1 = external_product(e, f_part, k_d)
    route2 = external_product(f_part, e, k_d)
    if k_next2 is not None and pullback(k_next2, f1) != route1:
        raise DecompositionMismatch(f"K_{d + 2} and K_{d + 1} do not satisfy the Hecke relation")
    if route1 != route2:
        raise DecompositionMismatch(
            f"curve factor {[str(v) for v in f_part.values]} differs from E {[str(v) for v in e.values]}"
        )
    return k_d


def build_eigensheaf(e: MultChar, window: tuple[int, int] | None = None) -> EigensheafFamily:
    if e.space.kind != "curve":
        raise ValueError("E must be a character on the curve")
    g = e.space.genus
    lo, hi = window if window is not None else default_window(g)
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    first_direct = 2 * g - 1

    work: dict[int, MultChar] = {}
    prov: dict[int, str] = {}
    for d in range(max(lo, first_direct), hi + 1):
        work[d] = direct_transfer(e, d)
        prov[d] = "direct-transfer"
    if lo < first_direct:
        # the recursion starts from K_{2g-1}, K_{2g} even if they sit above the window
        for d in (first_direct, first_direct + 1):
            work.setdefault(d, direct_transfer(e, d))
        for d in range(first_direct - 1, lo - 1, -1):
            work[d] = descend_step(work[d + 1], e, work[d + 2])
            prov[d] = "descended"

    fam = EigensheafFamily(e, (lo, hi), {d: work[d] for d in range(lo, hi + 1)}, {d: prov[d] for d in range(lo, hi + 1)})
    fam.validate()
    for d in fam.degrees:
        if fam[d] != closed_form(e, d):
            raise InvariantViolation(f"degree {d}: construction disagrees with the closed form")
    return fam


def eigen_gl1_sides(e: MultChar, fam: EigensheafFamily, d: int) -> tuple[MultChar, MultChar]:
    g = e.space.genus
    lhs = pullback(fam[d + 1], hecke1_map(g, d))
    rhs = external_product(e, fam[d])
    return lhs, rhs


def check_eigen_gl1(e: MultChar, fam: EigensheafFamily, d: int) -> bool:
    lhs, rhs = eigen_gl1_sides(e, fam, d)
    return lhs == rhs


# --- uniqueness ------------------------------------------------------------


def eigen_equations(g: int, window: tuple[int, int]) -> tuple[list[list[int]], list[int | None]]:
    """Monomial system for the unknown values eta_d[i], d in the window.

    Row k says prod_u x_u^{A[k][u]} equals E's value at curve generator
    ``consts[k]``, or 1 when ``consts[k]`` is None.  Unknown (d, i) is
    column (d - lo) * 2g + i.
    """
    lo, hi = window
    n = 2 * g
    rows: list[list[int]] = []
    consts: list[int | None] = []
    for d in range(lo, hi):
        m = hecke1_map(g, d)
        for j in range(2 * n):
            row = [0] * ((hi - lo + 1) * n)
            for i, x in enumerate(m.column(j)):
                row[(d + 1 - lo) * n + i] += x
            if j < n:
                consts.append(j)
            else:
                row[(d - lo) * n + (j - n)] -= 1
                consts.append(None)
            rows.append(row)
    return rows, consts


def elementary_divisors(a: list[list[int]], ncols: int) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    m = [list(r) for r in a]
    nrows = len(m)
    divisors = []
    t = 0
    while t < min(nrows, ncols):
        nz = [(abs(m[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if m[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        m[t], m[pi] = m[pi], m[t]
        for r in m:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = m[t][t]
            done = True
            for i in range(t + 1, nrows):
                q = m[i][t] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, ncols):
                q = m[t][j] // p
                if q:
                    for r in m:
                        r[j] -= q * r[t]
                if m[t][j]:
                    done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols) if m[i][j] % p), None)
                if bad is None:
                    break
                m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(m[i][t]), i, t) for i in range(t, nrows) if m[i][t]]
            cands += [(abs(m[t][j]), t, j) for j in range(t, ncols) if m[t][j]]
            _, pi, pj = min(cands)
            m[t], m[pi] = m[pi], m[t]
            for r in m:
                r[t], r[pj] = r[pj], r[t]
        divisors.append(abs(m[t][t]))
        t += 1
    return divisors


@lru_cache(maxsize=None)
def _unimodular_system(g: int, window: tuple[int, int]) -> bool:
    """Full column rank with all elementary divisors 1; depends only on (g, window)."""
    rows, _ = eigen_equations(g, window)
    ncols = (window[1] - window[0] + 1) * 2 * g
    divs = elementary_divisors(rows, ncols)
    return len(divs) == ncols and all(x == 1 for x in divs)


def uniqueness_check(e: MultChar, window: tuple[int, int] | None = None) -> bool:
    """The eigen-equations on the window have exactly one solution, namely build_eigensheaf(e).

    Over C^* the solution set of x^A = c is a torsor under Hom(coker A^T, C^*),
    so it is a single point exactly when A has full column rank with all
    elementary divisors 1.  The constructed family is then checked to be
    that point.
    """
    g = e.space.genus
    window = window if window is not None else default_window(g)
    if not _unimodular_system(g, window):
        return False
    rows, consts = eigen_equations(g, window)
    ncols = (window[1] - window[0] + 1) * 2 * g
    fam = build_eigensheaf(e, window)
    lo = window[0]
    n = 2 * g
    flat = [fam[lo + u // n].values[u % n] for u in range(ncols)]
    for row, c in zip(rows, consts):
        val = flat[0] ** 0
        for u, x in enumerate(row):
            if x:
                val = val * flat[u] ** x
        if val != (e.values[c] if c is not None else 1):
            return False
    return True


def beta_compat_check(e: MultChar, n: int) -> bool:
    g = e.space.genus
    lhs = pullback(sym_power(e, n + 1), beta_map(g, n))
    rhs = external_product(e, sym_power(e, n))
    return lhs == rhs
