"""Dense univariate polynomials over the rationals.

A polynomial is a list of coefficients from the constant term upwards,
so ``[-1, -1, 1]`` is X^2 - X - 1.  Coefficients may be ints or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(trim(p)) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q):
    return add(p, [-c for c in q])


def scale(p, c):
    return trim([c * x for x in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_poly(p, q):
    """Quotient and remainder of p by q over the rationals."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(p)]
    lead = Fraction(q[-1])
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return [], r
    quot = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k] / lead
        quot[k - dq] = c
        if c:
            for j in range(dq + 1):
                r[k - dq + j] -= c * q[j]
    return trim(quot), trim(r[:dq])


def mod(p, q):
    return divmod_poly(p, q)[1]


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def monic(p):
    p = trim(p)
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def primitive(p):
    """Integer primitive multiple of p with positive leading coefficient."""
    p = [Fraction(c) for c in trim(p)]
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def gcd_poly(p, q):
    p, q = trim(p), trim(q)
    while q:
        p, q = q, mod(p, q)
    return monic(p) if p else []


def inverse_mod(a, m):
    """Inverse of a modulo m over the rationals (extended Euclid)."""
    r0, r1 = trim(m), trim(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        quot, rem = divmod_poly(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quot, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    return scale(mod(s0, m), Fraction(1) / Fraction(r0[0]))


def sturm_sequence(p):
    seq = [trim(p), derivative(p)]
    while seq[-1] and degree(seq[-1]) > 0:
        rem = mod(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-c for c in rem])
    return [s for s in seq if s]


def _sign_changes(values):
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p, lo, hi):
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes([evaluate(s, lo) for s in seq]) - _sign_changes([evaluate(s, hi) for s in seq])


def count_roots_closed(p, lo, hi):
    extra = 1 if evaluate(p, lo) == 0 else 0
    return count_roots(p, lo, hi) + extra


def root_bound(p):
    """Cauchy bound: every complex root has modulus below this integer."""
    p = monic(p)
    return int(1 + max(abs(c) for c in p[:-1])) + 1 if len(p) > 1 else 1


def isolate_real_roots(p):
    """Disjoint rational intervals (lo, hi], each holding exactly one real root."""
    p = primitive(p)
    sq = primitive(divmod_poly(p, gcd_poly(p, derivative(p)))[0]) if degree(p) > 1 else p
    bound = root_bound(sq)
    out = []
    stack = [(Fraction(-bound), Fraction(bound))]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(sq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def rational_roots(p):
    """All rational roots of an integer polynomial."""
    p = primitive(p)
    roots = set()
    if not p:
        return roots
    while p and p[0] == 0:
        roots.add(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    a0, an = abs(p[0]), abs(p[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if evaluate(p, cand) == 0:
                    roots.add(cand)
    return roots


def _divisors(n):
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def is_irreducible(p):
    """Irreducibility over the rationals of a nonconstant integer polynomial."""
    p = primitive(p)
    n = len(p) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    if rational_roots(p):
        return False
    if n <= 3:
        return True
    import sympy

    x = sympy.Symbol("x")
    return bool(sympy.Poly(list(reversed(p)), x).is_irreducible)


def euler_phi(n):
    result, m, k = n, n, 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _cyclotomic(n):
    p = [-1] + [0] * (n - 1) + [1]
    for k in range(1, n):
        if n % k == 0:
            p, rem = divmod_poly(p, list(_cyclotomic(k)))
            assert not rem
    return tuple(int(c) for c in p)


def cyclotomic(n):
    """The n-th cyclotomic polynomial as an integer coefficient list."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    return list(_cyclotomic(n))


def to_text(p):
    return "[" + ",".join(str(c) for c in p) + "]"
