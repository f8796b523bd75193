"""Local systems as monodromy data on the H1 basis of a space.

Every system in scope has commutative monodromy, so a representation is
stored as one image per H1 basis vector and pulled back along a map by
raising images to the integer powers in the map's H1 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    ExactScalar,
    MatrixSubspace,
    ScalarLike,
    find_invertible,
    intertwiner_space,
    kron,
    mat_mul,
    mat_pow,
)
from .moduli import MapModel, SpaceModel, curve, product, sym_prod


class SpaceMismatch(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


def _scalars(values: Sequence[ScalarLike]) -> tuple[ExactScalar, ...]:
    return tuple(ExactScalar.coerce(v) for v in values)


@dataclass(frozen=True)
class MultChar:
    """Rank-one system: a nonzero scalar per H1 basis vector."""

    space: SpaceModel
    values: tuple[ExactScalar, ...]

    def __post_init__(self):
        vals = _scalars(self.values)
        if len(vals) != self.space.h1_rank:
            raise SizeMismatch(f"{len(vals)} values for H1 rank {self.space.h1_rank} of {self.space}")
        if any(v.is_zero() for v in vals):
            raise ValueError("multiplicative character values must be nonzero")
        object.__setattr__(self, "values", vals)

    @classmethod
    def trivial(cls, space: SpaceModel) -> "MultChar":
        return cls(space, (ONE,) * space.h1_rank)

    def __mul__(self, other: "MultChar") -> "MultChar":
        _same_space(self.space, other.space)
        return MultChar(self.space, tuple(a * b for a, b in zip(self.values, other.values)))

    def __pow__(self, k: int) -> "MultChar":
        return MultChar(self.space, tuple(v**k for v in self.values))

    def is_trivial(self) -> bool:
        return all(v == ONE for v in self.values)

    def on(self, space: SpaceModel) -> "MultChar":
        """Same values read on another space with the same H1 rank."""
        return MultChar(space, self.values)

    def to_json(self) -> dict:
        return {"space": self.space.label(), "kind": "mult", "values": [v.to_json() for v in self.values]}


@dataclass(frozen=True)
class AddChar:
    """Homomorphism H1 -> (C, +)."""

    space: SpaceModel
    values: tuple[ExactScalar, ...]

    def __post_init__(self):
        vals = _scalars(self.values)
        if len(vals) != self.space.h1_rank:
            raise SizeMismatch(f"{len(vals)} values for H1 rank {self.space.h1_rank} of {self.space}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, space: SpaceModel) -> "AddChar":
        return cls(space, (ZERO,) * space.h1_rank)

    def __add__(self, other: "AddChar") -> "AddChar":
        _same_space(self.space, other.space)
        return AddChar(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "AddChar") -> "AddChar":
        _same_space(self.space, other.space)
        return AddChar(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def on(self, space: SpaceModel) -> "AddChar":
        return AddChar(space, self.values)

    def to_json(self) -> dict:
        return {"space": self.space.label(), "kind": "add", "values": [v.to_json() for v in self.values]}


@dataclass(frozen=True)
class Rank2Triangular:
    """gamma -> c(gamma) * [[1, alpha(gamma)], [0, 1]]."""

    c: MultChar
    alpha: AddChar

    def __post_init__(self):
        _same_space(self.c.space, self.alpha.space)

    @property
    def space(self) -> SpaceModel:
        return self.c.space

    def to_json(self) -> dict:
        return {"space": self.space.label(), "kind": "triangular", "c": self.c.to_json(), "alpha": self.alpha.to_json()}


def unipotent(x: ScalarLike) -> ExactMatrix:
    return ExactMatrix.of([[1, x], [0, 1]])


@dataclass(frozen=True)
class MatrixRep:
    space: SpaceModel
    size: int
    images: tuple[ExactMatrix, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        if len(imgs) != self.space.h1_rank:
            raise SizeMismatch(f"{len(imgs)} images for H1 rank {self.space.h1_rank}")
        for m in imgs:
            if m.shape != (self.size, self.size):
                raise SizeMismatch(f"image of shape {m.shape} in a rank-{self.size} system")
            if not m.is_invertible():
                raise ValueError("monodromy images must be invertible")
        for i, a in enumerate(imgs):
            for b in imgs[i + 1 :]:
                if mat_mul(a, b) != mat_mul(b, a):
                    raise ValueError("monodromy images must commute")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def trivial(cls, space: SpaceModel, size: int = 1) -> "MatrixRep":
        return cls(space, size, (ExactMatrix.identity(size),) * space.h1_rank)

    def to_json(self) -> dict:
        return {"space": self.space.label(), "size": self.size, "images": [m.to_json() for m in self.images]}


LocalSystem = Union[MultChar, AddChar, Rank2Triangular, MatrixRep]


def _same_space(a: SpaceModel, b: SpaceModel) -> None:
    if a != b:
        raise SpaceMismatch(f"{a} != {b}")


def as_matrix_rep(s: LocalSystem) -> MatrixRep:
    if isinstance(s, MatrixRep):
        return s
    if isinstance(s, MultChar):
        return MatrixRep(s.space, 1, tuple(ExactMatrix.of([[v]]) for v in s.values))
    if isinstance(s, AddChar):
        return MatrixRep(s.space, 2, tuple(unipotent(v) for v in s.values))
    if isinstance(s, Rank2Triangular):
        return MatrixRep(
            s.space, 2, tuple(unipotent(a).scale(c) for c, a in zip(s.c.values, s.alpha.values))
        )
    raise TypeError(f"not a local system: {type(s).__name__}")


def external_product(*systems: LocalSystem) -> LocalSystem:
    """Factorwise product on the product of the underlying spaces.

    Characters of the same kind stay characters (values concatenate);
    anything else is realized as a MatrixRep with Kronecker images.
    """
    if all(isinstance(s, MultChar) for s in systems):
        return MultChar(product(*(s.space for s in systems)), tuple(v for s in systems for v in s.values))
    if all(isinstance(s, AddChar) for s in systems):
        return AddChar(product(*(s.space for s in systems)), tuple(v for s in systems for v in s.values))
    reps = [as_matrix_rep(s) for s in systems]
    space = product(*(r.space for r in reps))
    images = []
    for k, r in enumerate(reps):
        left = ExactMatrix.identity(_prod(x.size for x in reps[:k]))
        right = ExactMatrix.identity(_prod(x.size for x in reps[k + 1 :]))
        for m in r.images:
            images.append(kron(kron(left, m), right))
    return MatrixRep(space, _prod(r.size for r in reps), tuple(images))


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def tensor(r: LocalSystem, s: LocalSystem) -> LocalSystem:
    _same_space(r.space, s.space)
    if isinstance(r, MultChar) and isinstance(s, MultChar):
        return r * s
    if isinstance(r, MultChar) and isinstance(s, (AddChar, Rank2Triangular)):
        r, s = s, r
    if isinstance(s, MultChar) and isinstance(r, AddChar):
        return Rank2Triangular(s, r)
    if isinstance(s, MultChar) and isinstance(r, Rank2Triangular):
        return Rank2Triangular(r.c * s, r.alpha)
    a, b = as_matrix_rep(r), as_matrix_rep(s)
    return MatrixRep(a.space, a.size * b.size, tuple(kron(x, y) for x, y in zip(a.images, b.images)))


def exterior_square(s: Union[Rank2Triangular, AddChar, MatrixRep]) -> MultChar:
    """Determinant character of a rank-2 system."""
    if isinstance(s, AddChar):
        return MultChar.trivial(s.space)
    if isinstance(s, Rank2Triangular):
        # det(c * U(a)) = c^2 * det U(a) = c^2
        return s.c**2
    if isinstance(s, MatrixRep) and s.size == 2:
        return MultChar(s.space, tuple(m.det() for m in s.images))
    raise TypeError("exterior square is implemented for rank-2 systems")


def _mult_pullback(values: Sequence[ExactScalar], m: MapModel) -> tuple[ExactScalar, ...]:
    out = []
    for j in range(m.source.h1_rank):
        v = ONE
        for i, e in enumerate(m.column(j)):
            if e:
                v = v * values[i] ** e
        out.append(v)
    return tuple(out)


def _add_pullback(values: Sequence[ExactScalar], m: MapModel) -> tuple[ExactScalar, ...]:
    out = []
    for j in range(m.source.h1_rank):
        v = ZERO
        for i, e in enumerate(m.column(j)):
            if e:
                v = v + values[i] * e
        out.append(v)
    return tuple(out)


def pullback(r: LocalSystem, m: MapModel) -> LocalSystem:
    _same_space(r.space, m.target)
    if isinstance(r, MultChar):
        return MultChar(m.source, _mult_pullback(r.values, m))
    if isinstance(r, AddChar):
        return AddChar(m.source, _add_pullback(r.values, m))
    if isinstance(r, Rank2Triangular):
        return Rank2Triangular(pullback(r.c, m), pullback(r.alpha, m))
    images = []
    for j in range(m.source.h1_rank):
        img = ExactMatrix.identity(r.size)
        for i, e in enumerate(m.column(j)):
            if e:
                img = mat_mul(img, mat_pow(r.images[i], e))
        images.append(img)
    return MatrixRep(m.source, r.size, tuple(images))


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: ExactMatrix | None = None
    certificate: MatrixSubspace | None = None

    def __bool__(self) -> bool:
        return self.isomorphic

    def to_json(self) -> dict:
        out: dict = {"result": "isomorphic" if self.isomorphic else "not_isomorphic"}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.certificate is not None:
            out["certificate"] = [b.to_json() for b in self.certificate.basis]
        return out


def is_isomorphic(r: LocalSystem, s: LocalSystem) -> IsoVerdict:
    """Exact simultaneous-conjugacy test.

    The witness T satisfies T r_i = s_i T for every generator.  A negative
    answer carries the intertwiner space, whose elements are all singular.
    """
    a, b = as_matrix_rep(r), as_matrix_rep(s)
    _same_space(a.space, b.space)
    if a.size != b.size:
        raise SizeMismatch(f"rank {a.size} against rank {b.size}")
    space = intertwiner_space(a.images, b.images, n=a.size)
    T = find_invertible(space)
    if T is None:
        return IsoVerdict(False, certificate=space)
    for x, y in zip(a.images, b.images):
        if mat_mul(T, x) != mat_mul(y, T):
            raise AssertionError("isomorphism witness failed re-verification")
    return IsoVerdict(True, witness=T)


def decompose_external_rank1(c: MultChar, split: int = 1) -> tuple[MultChar, MultChar]:
    """Split a character on F1 x ... x Fk into (first ``split`` factors, the rest)."""
    fs = c.space.factors()
    if len(fs) < 2 or not 0 < split < len(fs):
        raise SpaceMismatch(f"{c.space} is not a product to split at {split}")
    left, right = product(*fs[:split]), product(*fs[split:])
    k = left.h1_rank
    return MultChar(left, c.values[:k]), MultChar(right, c.values[k:])


def sym_power(e: MultChar, n: int) -> MultChar:
    """The symmetrized n-fold external power, read on Sym^n X through H1."""
    if e.space.kind != "curve":
        raise SpaceMismatch("symmetric powers are taken of systems on the curve")
    if n < 1:
        raise ValueError("n >= 1 required")
    return MultChar(sym_prod(e.space.genus, n), e.values)


def diagonal_characters(r: LocalSystem) -> tuple[MultChar, ...] | None:
    """Diagonal characters of an upper-triangular rep, i.e. its semisimplification.

    Returns None when some image is not upper triangular.
    """
    rep = as_matrix_rep(r)
    n = rep.size
    for m in rep.images:
        if any(not m[i, j].is_zero() for i in range(n) for j in range(i)):
            return None
    return tuple(MultChar(rep.space, tuple(m[k, k] for m in rep.images)) for k in range(n))


def on_curve(g: int, values: Sequence[ScalarLike], kind: str = "mult") -> LocalSystem:
    cls = MultChar if kind == "mult" else AddChar
    return cls(curve(g), tuple(values))
