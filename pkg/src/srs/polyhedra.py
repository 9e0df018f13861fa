"""Exact feasibility of mixed strict / non-strict linear systems.

Fourier-Motzkin elimination over the rationals.  A strict inequality stays
strict after combination with anything, so half-open sets are handled without
any epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd


@dataclass(frozen=True)
class Inequality:
    """coeffs . x + const > 0 (strict) or >= 0."""

    coeffs: tuple
    const: Fraction
    strict: bool

    def holds(self, x):
        v = sum((c * xi for c, xi in zip(self.coeffs, x)), self.const)
        return v > 0 if self.strict else v >= 0

    def relaxed(self):
        return Inequality(self.coeffs, self.const, False)

    def to_text(self, names=None):
        names = names or [f"r{i}" for i in range(len(self.coeffs))]
        terms = [f"{c}*{n}" for c, n in zip(self.coeffs, names) if c]
        lhs = " + ".join(terms) if terms else "0"
        return f"{lhs} + {self.const} {'>' if self.strict else '>='} 0"


def integer_row(q):
    """Integer row (coeffs..., const) with the same sign as q, scaled by a positive factor."""
    vals = [Fraction(c) for c in q.coeffs] + [Fraction(q.const)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    return tuple(int(v * den) for v in vals)


def _normalize_rows(rows):
    """Keep the tightest row per direction; None if some row is contradictory.

    A row (a_1..a_n, b, strict) means a . x + b > 0 (strict) or >= 0.
    """
    best = {}
    for row, strict in rows:
        coeffs, const = row[:-1], row[-1]
        g = 0
        for c in coeffs:
            g = gcd(g, c)
        if g == 0:
            if const < 0 or (strict and const == 0):
                return None
            continue
        key = tuple(c // g for c in coeffs)
        # compare const / g exactly: tighter means smaller
        old = best.get(key)
        if old is None:
            best[key] = (const, g, strict)
            continue
        oc, og, ostrict = old
        lhs, rhs = const * og, oc * g
        if lhs < rhs or (lhs == rhs and strict and not ostrict):
            best[key] = (const, g, strict)
    out = []
    for key in sorted(best):
        const, g, strict = best[key]
        # scale row to integer coefficients key and const/g rounded exactly
        if const % g == 0:
            out.append((key + (const // g,), strict))
        else:
            out.append((tuple(c * g for c in key) + (const,), strict))
    return out


def _eliminate(system, var):
    pos, neg, rest = [], [], []
    for row, strict in system:
        c = row[var]
        (pos if c > 0 else neg if c < 0 else rest).append((row, strict))
    out = list(rest)
    for p, ps in pos:
        for n, ns in neg:
            a, b = -n[var], p[var]
            out.append((tuple(a * x + b * y for x, y in zip(p, n)), ps or ns))
    return out


def _solve(ineqs, nvars):
    return solve_rows([(integer_row(q), q.strict) for q in ineqs], nvars)


def solve_rows(rows, nvars):
    """Elimination history for integer rows (coeffs..., const), strict flag; None when infeasible."""
    system = _normalize_rows(rows)
    if system is None:
        return None
    history = []
    remaining = list(range(nvars))
    while remaining:
        def cost(v):
            npos = sum(1 for row, _ in system if row[v] > 0)
            nneg = sum(1 for row, _ in system if row[v] < 0)
            return npos * nneg - npos - nneg
        var = min(remaining, key=cost)
        remaining.remove(var)
        history.append((var, system))
        system = _normalize_rows(_eliminate(system, var))
        if system is None:
            return None
    return history


def feasible(ineqs, nvars):
    return _solve(ineqs, nvars) is not None


def sample_point(ineqs, nvars):
    """A rational point satisfying every inequality, or None."""
    return point_from_history(_solve(ineqs, nvars), nvars)


def point_from_history(history, nvars):
    if history is None:
        return None
    x = [Fraction(0)] * nvars
    for var, system in reversed(history):
        lo = hi = None
        lo_strict = hi_strict = False
        for row, strict in system:
            c = row[var]
            if c == 0:
                continue
            rest = row[-1] + sum(row[i] * x[i] for i in range(nvars) if i != var)
            bound = Fraction(-rest) / c
            if c > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        if lo is not None and hi is not None:
            x[var] = lo if lo == hi else (lo + hi) / 2
        elif lo is not None:
            x[var] = lo + 1 if lo_strict else lo
        elif hi is not None:
            x[var] = hi - 1 if hi_strict else hi
    return x


def _rank(vectors):
    rows = [list(map(Fraction, v)) for v in vectors]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _normal(points):
    """A nonzero normal of the hyperplane through d affinely independent points."""
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    d = len(base)
    # null space of diffs via cofactor expansion on an appended unit row
    from .linalg import det

    normal = []
    for i in range(d):
        minor = [[row[j] for j in range(d) if j != i] for row in diffs]
        normal.append((-1) ** i * (det(minor) if minor else Fraction(1)))
    return normal


def hull_inequalities(vertices):
    """Facet inequalities of a full-dimensional hull, else None."""
    pts = [tuple(Fraction(c) for c in v) for v in vertices]
    d = len(pts[0])
    if len(pts) <= d or _rank([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) < d:
        return None
    facets = {}
    for subset in combinations(pts, d):
        if _rank([[a - b for a, b in zip(p, subset[0])] for p in subset[1:]] or [[0] * d]) < d - 1:
            continue
        n = _normal(list(subset))
        if not any(n):
            continue
        off = -sum(a * b for a, b in zip(n, subset[0]))
        vals = [sum(a * b for a, b in zip(n, p)) + off for p in pts]
        if all(v >= 0 for v in vals):
            q = Inequality(tuple(n), off, False)
        elif all(v <= 0 for v in vals):
            q = Inequality(tuple(-c for c in n), -off, False)
        else:
            continue
        facets[(q.coeffs, q.const)] = q
    return list(facets.values())


def in_hull_system(constraints, vertices):
    """Rewrite constraints on r as a system whose solutions are points of conv(vertices).

    Returns (system, nvars, to_point) where to_point maps a solution back to r.
    """
    pts = [tuple(Fraction(c) for c in v) for v in vertices]
    d = len(pts[0])
    facets = hull_inequalities(pts) if len(pts) > d + 1 else None
    if facets is not None:
        return list(constraints) + facets, d, lambda x: list(x)
    # barycentric coordinates lambda_1..lambda_{k-1}, lambda_0 = 1 - sum
    k = len(pts)
    base = pts[0]
    dirs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    system = []
    for q in constraints:
        coeffs = tuple(sum(c * dv for c, dv in zip(q.coeffs, dvec)) for dvec in dirs)
        const = q.const + sum(c * b for c, b in zip(q.coeffs, base))
        system.append(Inequality(coeffs, const, q.strict))
    for i in range(k - 1):
        system.append(Inequality(tuple(Fraction(int(j == i)) for j in range(k - 1)), Fraction(0), False))
    system.append(Inequality(tuple(Fraction(-1) for _ in range(k - 1)), Fraction(1), False))

    def to_point(lam):
        return [b + sum(l * dv[i] for l, dv in zip(lam, dirs)) for i, b in enumerate(base)]

    return system, k - 1, to_point
