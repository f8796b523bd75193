"""Exact Gaussian-rational scalars and small dense matrices.

Everything here is immutable.  Scalars live in Q(i) and are normalized on
construction, so ``==`` is semantic equality.  Matrices are tuples of
tuples of scalars; ``intertwiner_space`` and ``find_invertible`` are the
two pieces the isomorphism tester is built on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence, Union


class InvalidScalar(ZeroDivisionError):
    """Division by an exact zero."""


class SingularMatrix(ArithmeticError):
    pass


class DimensionMismatch(ValueError):
    pass


Rationalish = Union[int, Fraction]


@dataclass(frozen=True, slots=True)
class ExactScalar:
    """An element re + im*i of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        # Fraction already reduces; this only coerces ints and strings.
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x: "ScalarLike") -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars")
        return cls(Fraction(x), Fraction(0))

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "ExactScalar":
        if len(data) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
            raise ValueError(f"expected [re_num, re_den, im_num, im_den] integers, got {data!r}")
        rn, rd, im_n, im_d = data
        if rd <= 0 or im_d <= 0:
            raise ValueError(f"denominators must be positive, got {data!r}")
        return cls(Fraction(rn, rd), Fraction(im_n, im_d))

    def to_json(self) -> list[int]:
        return [self.re.numerator, self.re.denominator, self.im.numerator, self.im.denominator]

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ExactScalar":
        n = self.norm()
        if n == 0:
            raise InvalidScalar("inverse of zero")
        return ExactScalar(self.re / n, -self.im / n)

    def __add__(self, other: "ScalarLike") -> "ExactScalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other: "ScalarLike") -> "ExactScalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "ScalarLike") -> "ExactScalar":
        return ExactScalar.coerce(other) - self

    def __mul__(self, other: "ScalarLike") -> "ExactScalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: "ScalarLike") -> "ExactScalar":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: "ScalarLike") -> "ExactScalar":
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "ExactScalar":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ScalarLike = Union[ExactScalar, int, Fraction]

ZERO = ExactScalar(Fraction(0), Fraction(0))
ONE = ExactScalar(Fraction(1), Fraction(0))
I_UNIT = ExactScalar(Fraction(0), Fraction(1))


def _coerce_or_none(x) -> ExactScalar | None:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ExactScalar(Fraction(x), Fraction(0))
    return None


def scalar(re: Rationalish = 0, im: Rationalish = 0) -> ExactScalar:
    return ExactScalar(Fraction(re), Fraction(im))


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix over Q(i).

    ``inverse`` is computed once, checked against the identity in both
    orders, and cached; a matrix that has produced an inverse is therefore
    certified invertible.
    """

    entries: tuple[tuple[ExactScalar, ...], ...]
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __post_init__(self):
        ents = tuple(tuple(ExactScalar.coerce(x) for x in row) for row in self.entries)
        if ents and any(len(r) != len(ents[0]) for r in ents):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "entries", ents)
        object.__setattr__(self, "rows", len(ents))
        object.__setattr__(self, "cols", len(ents[0]) if ents else 0)

    @classmethod
    def of(cls, rows: Iterable[Iterable[ScalarLike]]) -> "ExactMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence[ScalarLike]) -> "ExactMatrix":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def scalar_matrix(cls, c: ScalarLike, n: int) -> "ExactMatrix":
        return cls.diag([c] * n)

    @classmethod
    def from_json(cls, data) -> "ExactMatrix":
        return cls(tuple(tuple(ExactScalar.from_json(x) for x in row) for row in data))

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> ExactScalar:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(-ONE)

    def scale(self, c: ScalarLike) -> "ExactMatrix":
        c = ExactScalar.coerce(c)
        return ExactMatrix(tuple(tuple(c * x for x in row) for row in self.entries))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def flatten(self) -> tuple[ExactScalar, ...]:
        return tuple(x for row in self.entries for x in row)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.flatten())

    def is_identity(self) -> bool:
        return self.is_square and self == ExactMatrix.identity(self.rows)

    def det(self) -> ExactScalar:
        return det(self)

    @cached_property
    def inverse(self) -> "ExactMatrix":
        return mat_inv(self)

    def is_invertible(self) -> bool:
        return self.is_square and not det(self).is_zero()

    def __pow__(self, k: int) -> "ExactMatrix":
        return mat_pow(self, k)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"ExactMatrix[{body}]"


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    bt = list(zip(*b.entries)) if b.rows else [() for _ in range(b.cols)]
    out = []
    for row in a.entries:
        out.append(tuple(reduce(lambda s, p: s + p[0] * p[1], zip(row, col), ZERO) for col in bt))
    return ExactMatrix(tuple(out))


def _row_echelon(rows: list[list[ExactScalar]]) -> tuple[list[list[ExactScalar]], list[int], int]:
    """In-place Gauss-Jordan to reduced row echelon form.

    Returns (rows, pivot_columns, number_of_row_swaps).
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    swaps = 0
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        p = next((i for i in range(r, n_rows) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            swaps += 1
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots, swaps


def det(a: ExactMatrix) -> ExactScalar:
    if not a.is_square:
        raise DimensionMismatch(f"determinant of non-square {a.shape} matrix")
    n = a.rows
    m = [list(row) for row in a.entries]
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def mat_inv(a: ExactMatrix) -> ExactMatrix:
    if not a.is_square:
        raise DimensionMismatch(f"inverse of non-square {a.shape} matrix")
    n = a.rows
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a.entries)]
    rows, pivots, _ = _row_echelon(aug)
    if [p for p in pivots if p < n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    inv = ExactMatrix(tuple(tuple(row[n:]) for row in rows))
    ident = ExactMatrix.identity(n)
    if mat_mul(a, inv) != ident or mat_mul(inv, a) != ident:
        raise AssertionError("inverse failed round-trip certification")
    return inv


def mat_pow(a: ExactMatrix, k: int) -> ExactMatrix:
    """Binary powering; negative exponents go through the certified inverse."""
    if not a.is_square:
        raise DimensionMismatch("power of non-square matrix")
    base = a if k >= 0 else a.inverse
    k = abs(k)
    result = ExactMatrix.identity(a.rows)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(
        tuple(
            tuple(a.entries[i][j] * b.entries[k][l] for j in range(a.cols) for l in range(b.cols))
            for i in range(a.rows)
            for k in range(b.rows)
        )
    )


def nullspace(rows: list[list[ExactScalar]], n_cols: int) -> list[list[ExactScalar]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(n_cols)] for j in range(n_cols)]
    rref, pivots, _ = _row_echelon([list(r) for r in rows])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n_cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -rref[r][f]
        basis.append(v)
    return basis


def rank(vectors: Sequence[Sequence[ExactScalar]]) -> int:
    if not vectors:
        return 0
    _, pivots, _ = _row_echelon([list(v) for v in vectors])
    return len(pivots)


@dataclass(frozen=True)
class MatrixSubspace:
    """A linear subspace of n x m matrices, given by an independent basis."""

    rows: int
    cols: int
    basis: tuple[ExactMatrix, ...]

    def __post_init__(self):
        for b in self.basis:
            if b.shape != (self.rows, self.cols):
                raise DimensionMismatch(f"basis element of shape {b.shape} in {self.rows}x{self.cols} space")
        if rank([b.flatten() for b in self.basis]) != len(self.basis):
            raise ValueError("subspace basis is linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence[ScalarLike]) -> ExactMatrix:
        if len(coeffs) != self.dim:
            raise DimensionMismatch("wrong number of coefficients")
        out = ExactMatrix.zeros(self.rows, self.cols)
        for c, b in zip(coeffs, self.basis):
            out = out + b.scale(c)
        return out

    def coordinates(self, m: ExactMatrix) -> tuple[ExactScalar, ...] | None:
        """Coefficients expressing ``m`` in the basis, or None if ``m`` is outside the span."""
        if m.shape != (self.rows, self.cols):
            return None
        k = self.dim
        cols = [b.flatten() for b in self.basis]
        target = m.flatten()
        aug = [[cols[j][i] for j in range(k)] + [target[i]] for i in range(len(target))]
        rref, pivots, _ = _row_echelon(aug)
        if k in pivots:
            return None
        coeffs = [ZERO] * k
        for r, p in enumerate(pivots):
            coeffs[p] = rref[r][k]
        return tuple(coeffs)

    def contains(self, m: ExactMatrix) -> bool:
        return self.coordinates(m) is not None

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "basis": [b.to_json() for b in self.basis]}


def intertwiner_space(lhs: Sequence[ExactMatrix], rhs: Sequence[ExactMatrix], n: int | None = None) -> MatrixSubspace:
    """All T with T @ lhs[i] == rhs[i] @ T for every i.

    ``n`` is only needed when both lists are empty.
    """
    if len(lhs) != len(rhs):
        raise DimensionMismatch(f"{len(lhs)} left images against {len(rhs)} right images")
    mats = list(lhs) + list(rhs)
    if mats:
        size = mats[0].rows
        if n is not None and n != size:
            raise DimensionMismatch(f"declared size {n} but images are {size}x{size}")
    elif n is None:
        raise DimensionMismatch("size must be given when there are no images")
    else:
        size = n
    for m in mats:
        if m.shape != (size, size):
            raise DimensionMismatch(f"image of shape {m.shape}, expected {size}x{size}")

    # unknown T[r][c] sits at column r*size + c
    eqs: list[list[ExactScalar]] = []
    nvar = size * size
    for L, R in zip(lhs, rhs):
        for r in range(size):
            for c in range(size):
                row = [ZERO] * nvar
                for k in range(size):
                    row[r * size + k] = row[r * size + k] + L.entries[k][c]
                    row[k * size + c] = row[k * size + c] - R.entries[r][k]
                if any(not x.is_zero() for x in row):
                    eqs.append(row)
    vecs = nullspace(eqs, nvar)
    basis = tuple(
        ExactMatrix(tuple(tuple(v[r * size + c] for c in range(size)) for r in range(size))) for v in vecs
    )
    for T in basis:
        for L, R in zip(lhs, rhs):
            if mat_mul(T, L) != mat_mul(R, T):
                raise AssertionError("intertwiner basis element fails re-verification")
    return MatrixSubspace(size, size, basis)


# Above this many grid points the determinant is expanded symbolically instead.
GRID_LIMIT = 5000


def find_invertible(space: MatrixSubspace) -> ExactMatrix | None:
    """An invertible element of the span, or None when every element is singular.

    det restricted to the span is a polynomial of degree n in dim(space)
    variables, so it vanishes on the whole grid {0..n}^k only if it is
    identically zero.  When the grid is too large the polynomial is
    expanded exactly and a nonvanishing grid point is located one
    coordinate at a time.
    """
    if space.rows != space.cols:
        return None
    n, k = space.rows, space.dim
    if k == 0:
        return None if n > 0 else ExactMatrix(())
    # cheap first guesses: the all-ones combination, then each basis element
    for coeffs in [(1,) * k] + [tuple(int(i == j) for i in range(k)) for j in range(k)]:
        T = space.combination(coeffs)
        if T.is_invertible():
            return _certified(T)
    if (n + 1) ** k <= GRID_LIMIT:
        for coeffs in itertools.product(range(n + 1), repeat=k):
            T = space.combination(coeffs)
            if T.is_invertible():
                return _certified(T)
        return None
    poly = determinant_polynomial(space)
    if not poly:
        return None
    point = _nonvanishing_point(poly, k, n)
    return _certified(space.combination(point))


def _certified(T: ExactMatrix) -> ExactMatrix:
    T.inverse  # noqa: B018 - forces round-trip certification
    return T


Monomial = tuple[int, ...]
Polynomial = dict[Monomial, ExactScalar]


def _poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, ZERO) + c1 * c2
    return {m: c for m, c in out.items() if not c.is_zero()}


def _poly_add(p: Polynomial, q: Polynomial, sign: int = 1) -> Polynomial:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, ZERO) + (c if sign > 0 else -c)
    return {m: c for m, c in out.items() if not c.is_zero()}


def determinant_polynomial(space: MatrixSubspace) -> Polynomial:
    """det(sum x_j B_j) as a polynomial in the coordinates x_j.

    Laplace expansion along rows, shared across column subsets, so the
    cost is O(n 2^n) polynomial products.
    """
    n, k = space.rows, space.dim
    entry: list[list[Polynomial]] = []
    for r in range(n):
        row = []
        for c in range(n):
            p: Polynomial = {}
            for j, B in enumerate(space.basis):
                x = B.entries[r][c]
                if not x.is_zero():
                    p[tuple(int(i == j) for i in range(k))] = x
            row.append(p)
        entry.append(row)
    # bottom-up: det of rows [r:] restricted to column set S, |S| = n - r
    by_cols: dict[int, Polynomial] = {0: {(0,) * k: ONE}}
    for r in range(n - 1, -1, -1):
        size = n - r
        nxt: dict[int, Polynomial] = {}
        for cols in itertools.combinations(range(n), size):
            mask = sum(1 << c for c in cols)
            acc: Polynomial = {}
            for pos, c in enumerate(cols):
                e = entry[r][c]
                if not e:
                    continue
                sub = by_cols.get(mask & ~(1 << c), {})
                if not sub:
                    continue
                acc = _poly_add(acc, _poly_mul(e, sub), 1 if pos % 2 == 0 else -1)
            nxt[mask] = acc
        by_cols = nxt
    return by_cols.get((1 << n) - 1, {})


def _poly_eval_partial(poly: Polynomial, var: int, value: int) -> Polynomial:
    out: Polynomial = {}
    for m, c in poly.items():
        e = m[var]
        m2 = m[:var] + (0,) + m[var + 1 :]
        out[m2] = out.get(m2, ZERO) + c * (value**e)
    return {m: c for m, c in out.items() if not c.is_zero()}


def _nonvanishing_point(poly: Polynomial, k: int, n: int) -> tuple[int, ...]:
    point = []
    for var in range(k):
        for v in range(n + 1):
            reduced = _poly_eval_partial(poly, var, v)
            if reduced:
                poly = reduced
                point.append(v)
                break
        else:
            raise AssertionError("nonzero polynomial vanished on a full coordinate grid")
    return tuple(point)
