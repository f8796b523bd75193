"""Symbolic spaces and the maps between them, tracked through first homology.

A space knows its H1 rank and the kind of its fundamental group.  A map
carries the integer matrix it induces on H1 (rows index the target basis,
columns the source basis).  Bases are fixed by convention: the curve basis
is (a1, b1, ..., ag, bg), and the basis of every Pic^d is the Abel-Jacobi
image of the curve basis, so Abel-Jacobi and translations act as identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


class ConditionNotMet(ValueError):
    """A degree hypothesis (n > 2g - 2) does not hold."""


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SpaceModel:
    kind: str  # curve | symprod | pic | ext | product
    genus: int
    degree: int | None = None
    parts: tuple["SpaceModel", ...] = ()

    def __post_init__(self):
        if self.kind not in ("curve", "symprod", "pic", "ext", "product"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if self.kind == "symprod" and (self.degree is None or self.degree < 1):
            raise ValueError("symmetric product needs degree >= 1")
        if self.kind == "pic" and self.degree is None:
            raise ValueError("Pic needs a degree")
        if self.kind == "product" and any(p.kind == "product" for p in self.parts):
            raise ValueError("use product() to build flattened products")

    @property
    def h1_rank(self) -> int:
        if self.kind == "product":
            return sum(p.h1_rank for p in self.parts)
        if self.kind == "ext":
            return 0
        return 2 * self.genus

    @property
    def pi1_kind(self) -> str:
        if self.kind == "curve":
            return "surface-group"
        if self.kind == "symprod":
            return "surface-group" if self.degree == 1 else "free-abelian"
        if self.kind == "pic":
            return "free-abelian"
        if self.kind == "ext":
            return "trivial"
        kinds = {p.pi1_kind for p in self.parts}
        if "surface-group" in kinds:
            return "surface-group"
        return "free-abelian" if "free-abelian" in kinds else "trivial"

    def factors(self) -> tuple["SpaceModel", ...]:
        return self.parts if self.kind == "product" else (self,)

    def block_offsets(self) -> list[int]:
        offs, acc = [], 0
        for p in self.factors():
            offs.append(acc)
            acc += p.h1_rank
        return offs

    def label(self) -> str:
        g = self.genus
        if self.kind == "curve":
            return f"X[g={g}]"
        if self.kind == "symprod":
            return f"Sym^{self.degree}X[g={g}]"
        if self.kind == "pic":
            return f"Pic^{self.degree}X[g={g}]"
        if self.kind == "ext":
            return f"C^{g}"
        return " x ".join(p.label() for p in self.parts)

    def __str__(self) -> str:
        return self.label()


def curve(g: int) -> SpaceModel:
    return SpaceModel("curve", g)


def sym_prod(g: int, n: int) -> SpaceModel:
    return SpaceModel("symprod", g, n)


def pic(g: int, d: int) -> SpaceModel:
    return SpaceModel("pic", g, d)


def ext_space(g: int) -> SpaceModel:
    return SpaceModel("ext", g)


def product(*spaces: SpaceModel) -> SpaceModel:
    parts: list[SpaceModel] = []
    for s in spaces:
        parts.extend(s.factors())
    if len(parts) == 1:
        return parts[0]
    if len({p.genus for p in parts}) != 1:
        raise ValueError("all factors must share a genus")
    return SpaceModel("product", parts[0].genus, None, tuple(parts))


def _identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _zeros(r: int, c: int) -> IntMatrix:
    return tuple(tuple(0 for _ in range(c)) for _ in range(r))


def hstack(*blocks: IntMatrix) -> IntMatrix:
    rows = len(blocks[0])
    return tuple(tuple(x for b in blocks for x in b[i]) for i in range(rows))


def vstack(*blocks: IntMatrix) -> IntMatrix:
    return tuple(row for b in blocks for row in b)


def int_matmul(a: IntMatrix, b: IntMatrix, inner: int) -> IntMatrix:
    cols = len(b[0]) if b else 0
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)) for i in range(len(a)))


@dataclass(frozen=True)
class MapModel:
    name: str
    source: SpaceModel
    target: SpaceModel
    h1_matrix: IntMatrix
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.h1_matrix)
        r, c = self.target.h1_rank, self.source.h1_rank
        # a rank-0 target still has a well-defined (empty) matrix
        if len(m) != r or any(len(row) != c for row in m):
            raise ShapeMismatch(
                f"{self.name}: h1 matrix must be {r}x{c} for {self.source} -> {self.target}"
            )
        object.__setattr__(self, "h1_matrix", m)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.source.h1_rank:
            raise ShapeMismatch("class has wrong length")
        return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in self.h1_matrix)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.h1_matrix)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.label(),
            "target": self.target.label(),
            "h1_matrix": [list(r) for r in self.h1_matrix],
        }


def compose(outer: MapModel, inner: MapModel, name: str | None = None) -> MapModel:
    """outer after inner."""
    if inner.target != outer.source:
        raise ShapeMismatch(f"cannot compose {outer.name} after {inner.name}: {inner.target} != {outer.source}")
    mat = int_matmul(outer.h1_matrix, inner.h1_matrix, inner.target.h1_rank)
    if outer.target.h1_rank and not mat:
        mat = _zeros(outer.target.h1_rank, inner.source.h1_rank)
    return MapModel(name or f"{outer.name}.{inner.name}", inner.source, outer.target, mat)


def identity_map(space: SpaceModel) -> MapModel:
    return MapModel(f"id[{space}]", space, space, _identity(space.h1_rank))


def product_map(*maps: MapModel) -> MapModel:
    """Factorwise product map, block diagonal on H1."""
    src = product(*(m.source for m in maps))
    tgt = product(*(m.target for m in maps))
    rows: list[tuple[int, ...]] = []
    col_off = 0
    total = src.h1_rank
    for m in maps:
        c = m.source.h1_rank
        for row in m.h1_matrix:
            rows.append((0,) * col_off + row + (0,) * (total - col_off - c))
        col_off += c
    return MapModel(" x ".join(m.name for m in maps), src, tgt, tuple(rows))


def projection(space: SpaceModel, keep: Sequence[int], name: str = "proj") -> MapModel:
    """Projection of a product onto the factors with the given indices."""
    fs = space.factors()
    offs = space.block_offsets()
    tgt = product(*(fs[i] for i in keep))
    rows = []
    for i in keep:
        for k in range(fs[i].h1_rank):
            rows.append(tuple(int(j == offs[i] + k) for j in range(space.h1_rank)))
    return MapModel(name, space, tgt, tuple(rows))


def swap_first_two(space: SpaceModel) -> MapModel:
    fs = space.factors()
    if len(fs) < 2 or fs[0].h1_rank != fs[1].h1_rank:
        raise ShapeMismatch("swap needs two leading factors of equal rank")
    r = fs[0].h1_rank
    perm = list(range(r, 2 * r)) + list(range(r)) + list(range(2 * r, space.h1_rank))
    rows = tuple(tuple(int(j == perm[i]) for j in range(space.h1_rank)) for i in range(space.h1_rank))
    tgt = product(fs[1], fs[0], *fs[2:])
    return MapModel("swap12", space, tgt, rows)


def invert_map(m: MapModel, name: str | None = None) -> MapModel:
    """Inverse of a map whose H1 matrix is unimodular."""
    n = m.source.h1_rank
    if m.target.h1_rank != n:
        raise ShapeMismatch(f"{m.name} is not square on H1")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.h1_matrix)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ShapeMismatch(f"{m.name} is singular on H1")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ShapeMismatch(f"{m.name} is not invertible over Z")
    return MapModel(name or f"inv({m.name})", m.target, m.source, tuple(tuple(int(x) for x in row) for row in inv))


# --- fibration bookkeeping -------------------------------------------------


def fiber_dimension(g: int, n: int) -> int:
    """Dimension of the projective-space fibres of Sym^n X -> Pic^n X."""
    if n <= 2 * g - 2:
        raise ConditionNotMet(f"need n > 2g-2 = {2 * g - 2}, got n = {n}")
    return n - g


@dataclass(frozen=True)
class LESConclusion:
    verdict: str  # "Iso" | "NotApplicable"
    evidence: dict

    @property
    def is_iso(self) -> bool:
        return self.verdict == "Iso"


def les_conclusion(g: int, n: int) -> LESConclusion:
    """Whether the homotopy sequence of Sym^n X -> Pic^n X identifies the two pi_1."""
    try:
        k = fiber_dimension(g, n)
    except ConditionNotMet as exc:
        return LESConclusion("NotApplicable", {"reason": str(exc)})
    evidence = {
        "fiber": f"P^{k}",
        "fiber_connected": True,
        "fiber_simply_connected": True,
        "base_aspherical": True,
        "base_universal_cover": f"C^{g}",
    }
    ok = evidence["fiber_connected"] and evidence["fiber_simply_connected"] and evidence["base_aspherical"]
    return LESConclusion("Iso" if ok else "NotApplicable", evidence)


# --- the maps --------------------------------------------------------------


def _sum_blocks(g: int, count: int) -> IntMatrix:
    return hstack(*([_identity(2 * g)] * count))


def abel_jacobi_map(g: int, n: int) -> MapModel:
    note = ("pi_1 isomorphism holds",) if les_conclusion(g, n).is_iso else ("map only; n <= 2g-2",)
    return MapModel(f"AJ_{n}", sym_prod(g, n), pic(g, n), _identity(2 * g), note)


def beta_map(g: int, n: int) -> MapModel:
    """X x Sym^n X -> Sym^(n+1) X, adding a point."""
    if n < 1:
        raise ValueError("beta_map needs n >= 1")
    return MapModel(f"beta_{n}", product(curve(g), sym_prod(g, n)), sym_prod(g, n + 1), _sum_blocks(g, 2))


def hecke1_map(g: int, d: int) -> MapModel:
    """X x Pic^d -> Pic^(d+1), L -> L(x)."""
    return MapModel(
        f"H1_{d}",
        product(curve(g), pic(g, d)),
        pic(g, d + 1),
        _sum_blocks(g, 2),
        ("rank 1: only Hecke_1 is nonempty and it forces M' = M(-x)",),
    )


def hecke2_map(g: int, d: int) -> MapModel:
    """X x Pic^d x C^g -> Pic^(d+1) x C^g, (x, M1, v) -> (M1(x), v)."""
    return MapModel(
        f"H2_{d}",
        product(curve(g), pic(g, d), ext_space(g)),
        product(pic(g, d + 1), ext_space(g)),
        _sum_blocks(g, 2),
    )


def translation_map(g: int, d: int, steps: int) -> MapModel:
    """Pic^d x C^g -> Pic^(d+steps) x C^g, tensoring with steps*[P0].

    Translation by a fixed class is homotopic to the identity on loops, so
    the matrix is the identity whatever the base point.
    """
    return MapModel(
        f"t[{d}->{d + steps}]",
        product(pic(g, d), ext_space(g)),
        product(pic(g, d + steps), ext_space(g)),
        _identity(2 * g),
    )


def u_map(g: int, d: int) -> MapModel:
    t = translation_map(g, d, 1)
    return MapModel(f"u_{d}", t.source, t.target, t.h1_matrix)


def F_map(g: int, d: int) -> MapModel:
    """(x, L, v) -> (x, L(x - P0), v).

    The loop t -> D(t) + x(t) - P0 has class [D] + AJ([x]), so the curve
    block is copied into the Pic block: (a, b) -> (a, a + b).
    """
    s = product(curve(g), pic(g, d), ext_space(g))
    n = 2 * g
    mat = vstack(hstack(_identity(n), _zeros(n, n)), hstack(_identity(n), _identity(n)))
    return MapModel(f"F_{d}", s, s, mat)


def F_map_homotopy_reading(g: int, d: int) -> MapModel:
    """F as the identity on H1, i.e. taking every loop L homotopic to F(L)."""
    s = product(curve(g), pic(g, d), ext_space(g))
    return MapModel(f"F_{d}[homotopy]", s, s, _identity(4 * g))


def p2_map(g: int, d: int) -> MapModel:
    s = product(curve(g), pic(g, d), ext_space(g))
    return projection(s, [1, 2], name=f"p2_{d}")
