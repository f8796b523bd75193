import random

import sympy
from hypothesis import given, strategies as st

from hecke_eigen.exact import ExactMatrix, intertwiner_space
from hecke_eigen.oracle import brute_force_isomorphic, jordan_oracle_2x2, real_intertwiners
from hecke_eigen.sampling import random_2x2_pair, random_invertible


def M(rows):
    return ExactMatrix.of(rows)


def test_jordan_examples():
    assert jordan_oracle_2x2(M([[2, 0], [0, 3]]), M([[2, 1], [0, 3]]))
    assert not jordan_oracle_2x2(M([[1, 1], [0, 1]]), M([[1, 0], [0, 1]]))
    assert jordan_oracle_2x2(M([[1, 1], [0, 1]]), M([[1, 0], [5, 1]]))
    assert not jordan_oracle_2x2(M([[2, 0], [0, 3]]), M([[2, 0], [0, 2]]))


def test_brute_force_examples():
    assert not brute_force_isomorphic([M([[1, 1], [0, 1]])], [M([[1, 0], [0, 1]])], 2)
    assert brute_force_isomorphic([M([[2, 0], [0, 3]])], [M([[2, 1], [0, 3]])], 2)


def _sympy_intertwiner_dim(lhs, rhs, n):
    ts = sympy.symbols(f"t0:{n * n}")
    T = sympy.Matrix(n, n, ts)
    eqs = []
    for a, b in zip(lhs, rhs):
        A = sympy.Matrix(n, n, lambda i, j: sympy.Rational(a[i, j].re.numerator, a[i, j].re.denominator) + sympy.I * sympy.Rational(a[i, j].im.numerator, a[i, j].im.denominator))
        B = sympy.Matrix(n, n, lambda i, j: sympy.Rational(b[i, j].re.numerator, b[i, j].re.denominator) + sympy.I * sympy.Rational(b[i, j].im.numerator, b[i, j].im.denominator))
        eqs.extend(list(T * A - B * T))
    if not eqs:
        return n * n
    J = sympy.Matrix(eqs).jacobian(ts)
    return n * n - J.rank()


@given(st.integers(0, 2**32))
def test_intertwiner_dimensions_agree(seed):
    rng = random.Random(seed)
    a, b = random_2x2_pair(rng)
    space = intertwiner_space([a], [b], n=2)
    # the real split doubles the real dimension
    assert 2 * space.dim == len(real_intertwiners([a], [b], 2))
    assert space.dim == _sympy_intertwiner_dim([a], [b], 2)


@given(st.integers(0, 2**32))
def test_conjugates_are_isomorphic(seed):
    rng = random.Random(seed)
    a = random_invertible(rng, 2)
    T = random_invertible(rng, 2)
    assert jordan_oracle_2x2(a, T @ a @ T.inverse)
    assert brute_force_isomorphic([a], [T @ a @ T.inverse], 2)
