"""The shift radix system map, its preimages, orbits and digit streams."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from .errors import FieldMismatch, ZeroLeadingCoefficient
from .exactnum import QQ, RealAlgebraic, as_element, ceil, floor, frac
from .linalg import mat_vec


class ParamVector:
    """Parameter r = (r_0, ..., r_{d-1}) with all entries in one number field.

    ``rounding_offset`` is 0 for the plain map and 1/2 for the symmetric one.
    """

    __slots__ = ("coords", "field", "rounding_offset", "_rows", "_den", "_off", "_inv_r0")

    def __init__(self, coords, field=None, rounding_offset=0):
        elems = [as_element(c) for c in coords]
        if field is None:
            field = QQ
            for e in elems:
                if not e.field.is_rational and not e.is_rational():
                    if field is QQ:
                        field = e.field
                    elif e.field != field:
                        raise FieldMismatch(f"{field.spec()} vs {e.field.spec()}")
        self.field = field
        self.coords = tuple(e.in_field(field) for e in elems)
        offset = Fraction(rounding_offset)
        if offset not in (0, Fraction(1, 2)):
            raise ValueError("rounding offset must be 0 or 1/2")
        self.rounding_offset = offset
        self._compile()
        self._inv_r0 = None

    def _compile(self):
        den = self.rounding_offset.denominator
        for c in self.coords:
            den = den * c.scaled()[1] // gcd(den, c.scaled()[1])
        n = self.field.degree
        rows = []
        for i in range(n):
            rows.append(tuple(int(c.coeffs[i] * den) for c in self.coords))
        self._rows = tuple(rows)
        self._den = den
        self._off = int(self.rounding_offset * den)

    @classmethod
    def of(cls, *coords, rounding_offset=0):
        return cls(coords, rounding_offset=rounding_offset)

    @property
    def d(self):
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, ParamVector)
            and self.coords == other.coords
            and self.rounding_offset == other.rounding_offset
        )

    def __hash__(self):
        return hash((self.coords, self.rounding_offset))

    def __repr__(self):
        inner = ", ".join(str(c) for c in self.coords)
        tag = ", symmetric" if self.rounding_offset else ""
        return f"ParamVector(({inner}){tag})"

    def is_rational(self):
        return all(c.is_rational() for c in self.coords)

    def symmetric(self):
        return ParamVector(self.coords, self.field, Fraction(1, 2))

    def char_poly(self):
        """Coefficients of X^d + r_{d-1} X^{d-1} + ... + r_0, constant term first."""
        return list(self.coords) + [self.field.element([1])]

    def dot(self, z):
        acc = self.field.element([0])
        for c, x in zip(self.coords, z):
            if x:
                acc = acc + c * x
        return acc

    def floor_dot(self, z):
        """floor(r . z + offset), computed on integer numerators."""
        rows = self._rows
        if len(rows) == 1:
            acc = self._off
            for m, x in zip(rows[0], z):
                acc += m * x
            return acc // self._den
        nums = [sum(m * x for m, x in zip(row, z)) for row in rows]
        nums[0] += self._off
        return self.field.floor_scaled(nums, self._den)

    def inv_r0(self):
        if self._inv_r0 is None:
            if self.coords[0] == 0:
                raise ZeroLeadingCoefficient("r_0 = 0 has no finite preimages")
            self._inv_r0 = self.coords[0].inverse()
        return self._inv_r0


def as_param(r):
    return r if isinstance(r, ParamVector) else ParamVector(r)


def tau(r, z):
    """One step of the shift radix system map."""
    return tuple(z[1:]) + (-r.floor_dot(z),)


def tau_inverse(r, x):
    """All z with tau(r, z) == x, sorted by first entry."""
    if r.coords[0] == 0:
        raise ZeroLeadingCoefficient("r_0 = 0 has no finite preimages")
    d = r.d
    x = tuple(x)
    # c = r_1 x_0 + ... + r_{d-1} x_{d-2} + x_{d-1} + offset
    c = r.field.element([x[-1] + r.rounding_offset])
    for j in range(1, d):
        if x[j - 1]:
            c = c + r.coords[j] * x[j - 1]
    inv = r.inv_r0()
    a = -c * inv
    b = (1 - c) * inv
    if r.coords[0].sign() > 0:
        lo, hi = ceil(a), ceil(b) - 1
    else:
        lo, hi = floor(b) + 1, floor(a)
    tail = x[:-1]
    return [(z0,) + tail for z0 in range(lo, hi + 1)]


@dataclass(frozen=True)
class OrbitResult:
    status: str
    preperiod: int
    period: int
    cycle: list
    steps_taken: int
    certificate: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "status": self.status,
            "preperiod": self.preperiod,
            "period": self.period,
            "cycle": [list(p) for p in self.cycle],
            "steps": self.steps_taken,
        }


PERIODIC = "Periodic"
ESCAPED = "Escaped"
UNKNOWN = "Unknown"


def sup_norm(z):
    return max((abs(v) for v in z), default=0)


def orbit(r, z, max_steps, escape_norm=None):
    """Iterate tau until a state repeats, escape is certified, or the cap is hit.

    Escape needs the sup-norm above ``escape_norm`` and the last d norm
    changes to be strict increases.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    z = tuple(z)
    d = len(z)
    seen = {z: 0}
    path = [z]
    floor_dot = r.floor_dot
    norms = [sup_norm(z)] if escape_norm is not None else None
    for step in range(1, max_steps + 1):
        z = z[1:] + (-floor_dot(z),)
        first = seen.get(z)
        if first is not None:
            return OrbitResult(PERIODIC, first, step - first, path[first:], step)
        seen[z] = step
        path.append(z)
        if norms is not None:
            n = sup_norm(z)
            norms.append(n)
            if len(norms) > d + 1:
                del norms[0]
            if n > escape_norm and len(norms) == d + 1 and all(a < b for a, b in zip(norms, norms[1:])):
                return OrbitResult(ESCAPED, 0, 0, [], step, list(norms))
    return OrbitResult(UNKNOWN, 0, 0, [], max_steps)


def orbit_sequence(r, z, length):
    """The entries of z followed by the new last entry of each iterate, length terms in all."""
    z = tuple(z)
    seq = list(z[:length])
    while len(seq) < length:
        z = tau(r, z)
        seq.append(z[-1])
    return seq


@dataclass(frozen=True)
class SrsRepresentation:
    digits: list
    finite_at: int | None


def srs_representation(r, z, length):
    """Digits v_k = {r . tau^(k-1)(z) + offset} for k = 1..length."""
    if length < 1:
        raise ValueError("length must be positive")
    z = tuple(z)
    digits = []
    finite_at = 0 if not any(z) else None
    for k in range(1, length + 1):
        digits.append(frac(r.dot(z) + r.rounding_offset))
        z = tau(r, z)
        if finite_at is None and not any(z):
            finite_at = k
    return SrsRepresentation(digits, finite_at)


def companion_matrix(r):
    d = r.d
    zero, one = r.field.element([0]), r.field.element([1])
    rows = [[one if j == i + 1 else zero for j in range(d)] for i in range(d - 1)]
    rows.append([-c for c in r.coords])
    return rows


def check_radix_identity(r, z, n):
    """Compare R^n z with tau^n(z) - sum_k R^(n-k) (0, ..., 0, v_k - offset)."""
    if n < 1:
        raise ValueError("n must be positive")
    mat = companion_matrix(r)
    zero = r.field.element([0])
    lhs = [zero + v for v in z]
    acc = [zero] * r.d
    cur = tuple(z)
    for _ in range(n):
        lhs = mat_vec(mat, lhs)
        v = frac(r.dot(cur) + r.rounding_offset) - r.rounding_offset
        acc = mat_vec(mat, acc)
        acc[-1] = acc[-1] + v
        cur = tau(r, cur)
    rhs = [c - a for c, a in zip(cur, acc)]
    return all(a == b for a, b in zip(lhs, rhs))


def verify_periodic(r, z, result):
    """Recompute tau^(pre+per)(z) == tau^pre(z) and minimality from scratch."""
    if result.status != PERIODIC:
        return False
    cur = tuple(z)
    for _ in range(result.preperiod):
        cur = tau(r, cur)
    start = cur
    for k in range(1, result.period + 1):
        cur = tau(r, cur)
        if cur == start:
            return k == result.period
    return False
