"""Schur-Cohn region membership, boundary surfaces, the odot product and
cyclotomic cycle-sum tests."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .core import ParamVector
from .errors import OutOfRange, UnsupportedDimension
from .exactnum import as_element
from .linalg import det


@dataclass(frozen=True)
class SchurCohnVerdict:
    inside: bool
    determinants: list

    def to_json(self):
        return {"inside": self.inside, "determinants": [str(v) for v in self.determinants]}


def schur_cohn_matrix(r, k):
    """The 2(k+1) x 2(k+1) block matrix whose determinant is tested for k < d."""
    d = r.d
    zero = r.field.element([0])
    one = r.field.element([1])
    n = k + 1

    def lead(i):
        # coefficients 1, r_{d-1}, r_{d-2}, ... of the monic end
        return one if i == 0 else (r.coords[d - i] if i <= d else zero)

    def tail(i):
        return r.coords[i] if i < d else zero

    m = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            if i >= j:
                m[i][j] = lead(i - j)
                m[n + i][j] = tail(i - j)
            if j >= i:
                m[i][n + j] = tail(j - i)
                m[n + i][n + j] = lead(j - i)
    return m


def schur_cohn_contains(r):
    """Exact test that every root of the characteristic polynomial has modulus < 1."""
    dets = [det(schur_cohn_matrix(r, k)) for k in range(r.d)]
    return SchurCohnVerdict(all(v > 0 for v in dets), dets)


def schur_cohn_explicit(r):
    """Closed-form inequalities for d <= 3."""
    c = r.coords
    if r.d == 1:
        return abs(c[0]) < 1
    if r.d == 2:
        x, y = c
        return abs(x) < 1 and abs(y) < x + 1
    if r.d == 3:
        x, y, z = c
        return abs(x) < 1 and abs(y - x * z) < 1 - x * x and abs(x + z) < y + 1
    raise UnsupportedDimension(f"explicit formulas exist for d <= 3, got d = {r.d}")


def schur_transform_class(coeffs):
    """'inside', 'outside' or 'degenerate' for the zeros of a real polynomial.

    Runs the Schur transform recursion; 'degenerate' means some step met
    |a_0| = |a_n|, which happens when a zero could sit on the unit circle.
    """
    p = poly.trim([as_element(c) for c in coeffs])
    while len(p) > 1:
        a0, an = p[0], p[-1]
        if abs(a0) == abs(an):
            return "degenerate"
        if abs(a0) > abs(an):
            return "outside"
        rev = p[::-1]
        t = [an * x - a0 * y for x, y in zip(p, rev)]
        p = poly.trim(t[1:])
    return "inside"


def odot(r, s):
    """Parameter whose characteristic polynomial is chi_r * chi_s."""
    if not isinstance(s, ParamVector):
        s = ParamVector(s) if len(s) else None
    if s is None or s.d == 0:
        return r
    prod = poly.mul(r.char_poly(), s.char_poly())
    return ParamVector(prod[:-1])


def v_transform(s, seq):
    """(x_n) -> (s_0 x_n + ... + s_{q-1} x_{n+q-1} + x_{n+q}), as long as the input allows."""
    s = [int(c) for c in s]
    q = len(s)
    coeffs = s + [1]
    return [sum(c * seq[n + k] for k, c in enumerate(coeffs)) for n in range(len(seq) - q)]


def v_transform_matrix(s, p):
    """The p x (p+q) integer matrix U with rows shifted copies of (s_0, ..., s_{q-1}, 1)."""
    s = [int(c) for c in s]
    q = len(s)
    return [[0] * i + s + [1] + [0] * (p - 1 - i) for i in range(p)]


SURFACES = ("E1", "Eminus1", "EC")


def boundary_parameterization(surface, s, t):
    """Points of the three boundary pieces of the d = 3 Schur-Cohn region."""
    s, t = as_element(s), as_element(t)
    if surface in ("E1", "Eminus1"):
        if not (-1 <= s <= 1 and -1 <= t <= 1):
            raise OutOfRange("need -1 <= s, t <= 1")
        if surface == "E1":
            return ParamVector([s, s + t + s * t, s * t + t + 1])
        return ParamVector([-s, s - t - s * t, s * t + t - 1])
    if surface == "EC":
        if not (-2 < s < 2 and -1 <= t <= 1):
            raise OutOfRange("need -2 < s < 2 and -1 <= t <= 1")
        return ParamVector([t, s * t + 1, s + t])
    raise ValueError(f"unknown surface {surface!r}; expected one of {SURFACES}")


@dataclass(frozen=True)
class CyclotomicSpec:
    indices: tuple

    def product(self):
        out = [1]
        for m in self.indices:
            out = poly.mul(out, poly.cyclotomic(m))
        return [int(c) for c in out]


def cyclotomic_factorization(p):
    """Indices of distinct cyclotomic factors if p is exactly their product."""
    rest = [Fraction(c) for c in poly.trim(p)]
    n = len(rest) - 1
    if n < 0 or rest[-1] != 1 or any(c.denominator != 1 for c in rest):
        return None
    if n == 0:
        return CyclotomicSpec(())
    found = []
    for m in range(1, 2 * n * n + 3):
        if poly.euler_phi(m) > len(rest) - 1:
            continue
        q, rem = poly.divmod_poly(rest, poly.cyclotomic(m))
        if rem:
            continue
        _, rem2 = poly.divmod_poly(q, poly.cyclotomic(m))
        if not rem2 and len(q) > 1:
            return None
        found.append(m)
        rest = q
        if len(rest) == 1:
            break
    if rest != [1]:
        return None
    return CyclotomicSpec(tuple(found))


def cycle_sum_test(cycle, p):
    """True when the cycle-sum predicate for the p-th roots of unity vanishes."""
    if p < 1:
        raise ValueError("p must be positive")
    cycle = list(cycle)
    if len(cycle) % p:
        return True
    return not poly.mod(cycle, poly.cyclotomic(p))
