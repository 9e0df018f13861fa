"""Small exact matrix helpers over ints, Fractions or RealAlgebraic entries."""

from __future__ import annotations

from fractions import Fraction


def mat_vec(m, v):
    return [sum((a * b for a, b in zip(row, v)), 0 * v[0]) if v else 0 for row in m]


def mat_mul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0 * row[0]) for col in cols] for row in a]


def identity(n, one=1):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_pow(m, k):
    result = identity(len(m), m[0][0] - m[0][0] + 1)
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def det(m):
    """Determinant by Gaussian elimination with exact pivots."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    result = a[0][0] - a[0][0] + 1
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if a[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return result - result
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = Fraction(1, p) if isinstance(p, int) else 1 / p
        for row in range(col + 1, n):
            f = a[row][col]
            if f != 0:
                f = f * inv
                a[row] = [x - f * y for x, y in zip(a[row], a[col])]
    return result
