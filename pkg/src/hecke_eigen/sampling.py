"""Seeded random draws from small Gaussian-rational palettes."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import ExactMatrix, ExactScalar, scalar
from .local_systems import AddChar, MultChar
from .moduli import SpaceModel, curve

MULT_PALETTE: tuple[ExactScalar, ...] = tuple(
    [scalar(k) for k in (1, -1, 2, -2, 3, -3)]
    + [scalar(0, 1), scalar(0, -1)]
    + [scalar(a, b) for a in (1, -1) for b in (1, -1)]
    + [scalar(Fraction(1, 2)), scalar(Fraction(-1, 2)), scalar(Fraction(2, 3)), scalar(2, 1)]
)
ADD_PALETTE: tuple[ExactScalar, ...] = (scalar(0),) + MULT_PALETTE
ENTRY_PALETTE: tuple[ExactScalar, ...] = tuple(scalar(k) for k in (-2, -1, 0, 1, 2)) + (scalar(0, 1), scalar(1, 1))


def random_mult_char(rng: random.Random, space: SpaceModel) -> MultChar:
    return MultChar(space, tuple(rng.choice(MULT_PALETTE) for _ in range(space.h1_rank)))


def random_add_char(rng: random.Random, space: SpaceModel, nonzero: bool = False) -> AddChar:
    while True:
        a = AddChar(space, tuple(rng.choice(ADD_PALETTE) for _ in range(space.h1_rank)))
        if not (nonzero and a.is_zero()):
            return a


def random_curve_char(rng: random.Random, g: int) -> MultChar:
    return random_mult_char(rng, curve(g))


def random_matrix(rng: random.Random, n: int, palette=ENTRY_PALETTE) -> ExactMatrix:
    return ExactMatrix(tuple(tuple(rng.choice(palette) for _ in range(n)) for _ in range(n)))


def random_invertible(rng: random.Random, n: int) -> ExactMatrix:
    while True:
        m = random_matrix(rng, n)
        if m.is_invertible():
            return m


def random_2x2_pair(rng: random.Random) -> tuple[ExactMatrix, ExactMatrix]:
    """A pair that is similar about half the time, with repeated eigenvalues well represented."""
    kind = rng.randrange(4)
    if kind == 0:
        return random_matrix(rng, 2), random_matrix(rng, 2)
    lam = rng.choice(MULT_PALETTE)
    if kind == 1:
        a = ExactMatrix.of([[lam, rng.choice(ADD_PALETTE)], [0, lam]])
        b = ExactMatrix.of([[lam, rng.choice(ADD_PALETTE)], [0, lam]])
    elif kind == 2:
        a = ExactMatrix.of([[lam, 0], [0, rng.choice(MULT_PALETTE)]])
        b = ExactMatrix.of([[rng.choice(MULT_PALETTE), 1], [0, lam]])
    else:
        a = random_matrix(rng, 2)
        b = a
    T = random_invertible(rng, 2)
    return a, T @ b @ T.inverse
