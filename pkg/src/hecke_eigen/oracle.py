"""Independent isomorphism oracles.

These deliberately share no linear algebra with ``exact``: the intertwiner
system is split into real and imaginary parts and solved over Q with plain
Fractions, and invertibility is decided by expanding the Leibniz
determinant symbolically.  A Jordan-form criterion covers single 2x2
generators.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .exact import ExactMatrix

Cx = tuple[Fraction, Fraction]


def _cx(m: ExactMatrix) -> list[list[Cx]]:
    return [[(x.re, x.im) for x in row] for row in m.entries]


def _rref_nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    out = []
    for f in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for k, p in enumerate(pivots):
            v[p] = -m[k][f]
        out.append(v)
    return out


def real_intertwiners(lhs: Sequence[ExactMatrix], rhs: Sequence[ExactMatrix], n: int) -> list[list[list[Cx]]]:
    """Q-basis of {T : T L_i = R_i T}, T = X + iY with X, Y rational."""
    # variable layout: X[r][c] -> r*n + c, Y[r][c] -> n*n + r*n + c
    nv = 2 * n * n
    eqs: list[list[Fraction]] = []
    for L, R in zip(lhs, rhs):
        lc, rc = _cx(L), _cx(R)
        for r in range(n):
            for c in range(n):
                re_row = [Fraction(0)] * nv
                im_row = [Fraction(0)] * nv
                # (T L)[r][c] = sum_k T[r][k] L[k][c]
                for k in range(n):
                    a, b = lc[k][c]
                    x, y = r * n + k, n * n + r * n + k
                    re_row[x] += a
                    re_row[y] -= b
                    im_row[x] += b
                    im_row[y] += a
                # (R T)[r][c] = sum_k R[r][k] T[k][c]
                for k in range(n):
                    a, b = rc[r][k]
                    x, y = k * n + c, n * n + k * n + c
                    re_row[x] -= a
                    re_row[y] += b
                    im_row[x] -= b
                    im_row[y] -= a
                eqs.append(re_row)
                eqs.append(im_row)
    basis = []
    for v in _rref_nullspace(eqs, nv):
        basis.append([[(v[r * n + c], v[n * n + r * n + c]) for c in range(n)] for r in range(n)])
    return basis


def _cmul(a: Cx, b: Cx) -> Cx:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def leibniz_det_is_zero(basis: list[list[list[Cx]]], n: int) -> bool:
    """Whether det(sum c_j B_j) vanishes identically in the c_j."""
    k = len(basis)
    if k == 0:
        return n > 0
    total: dict[tuple[int, ...], Cx] = {}
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        poly: dict[tuple[int, ...], Cx] = {(0,) * k: (Fraction(sign), Fraction(0))}
        for row in range(n):
            lin = {}
            for j, B in enumerate(basis):
                z = B[row][perm[row]]
                if z != (0, 0):
                    lin[tuple(int(t == j) for t in range(k))] = z
            new: dict[tuple[int, ...], Cx] = {}
            for m1, c1 in poly.items():
                for m2, c2 in lin.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    p = _cmul(c1, c2)
                    old = new.get(m, (Fraction(0), Fraction(0)))
                    new[m] = (old[0] + p[0], old[1] + p[1])
            poly = new
            if not poly:
                break
        for m, c in poly.items():
            old = total.get(m, (Fraction(0), Fraction(0)))
            total[m] = (old[0] + c[0], old[1] + c[1])
    return all(c == (0, 0) for c in total.values())


def brute_force_isomorphic(lhs: Sequence[ExactMatrix], rhs: Sequence[ExactMatrix], n: int) -> bool:
    return not leibniz_det_is_zero(real_intertwiners(lhs, rhs, n), n)


def jordan_oracle_2x2(a: ExactMatrix, b: ExactMatrix) -> bool:
    """Similarity of two 2x2 matrices from trace, determinant and scalar-ness.

    Similarity over an extension field implies similarity over the base, so
    no eigenvalues need to exist in Q(i).
    """
    ta = a[0, 0] + a[1, 1]
    tb = b[0, 0] + b[1, 1]
    da = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    db = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    if ta != tb or da != db:
        return False
    disc = ta * ta - da * 4
    if not disc.is_zero():
        return True  # distinct eigenvalues: both diagonalizable
    scalar_a = a[0, 1].is_zero() and a[1, 0].is_zero() and a[0, 0] == a[1, 1]
    scalar_b = b[0, 1].is_zero() and b[1, 0].is_zero() and b[0, 0] == b[1, 1]
    return scalar_a == scalar_b
