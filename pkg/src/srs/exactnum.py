"""Exact arithmetic in real number fields Q(theta).

A field is fixed by an irreducible integer polynomial and a rational interval
isolating one real root theta.  Elements are coefficient vectors in the power
basis 1, theta, ..., theta^(n-1).  Signs and floors are decided by enclosing
theta in dyadic intervals that shrink until the answer is certain.  That always
terminates because a non-rational element can never equal an integer.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

from . import poly
from .errors import FieldMismatch, NoSignChange, NotIsolating, ParseError, Reducible


def _lcm(a, b):
    return a * b // gcd(a, b)


class NumberField:
    """Q(theta) for an isolated real root theta of an irreducible polynomial."""

    def __init__(self, min_poly, root_interval):
        p = poly.primitive(min_poly)
        if len(p) < 2:
            raise ValueError("minimal polynomial must be nonconstant")
        lo, hi = (Fraction(v) for v in root_interval)
        if not lo < hi:
            raise ValueError("root interval needs lo < hi")
        count = poly.count_roots_closed(p, lo, hi)
        if count != 1:
            raise NotIsolating(f"interval ({lo}, {hi}) holds {count} roots of {poly.to_text(p)}")
        s_lo, s_hi = poly.evaluate(p, lo), poly.evaluate(p, hi)
        if s_lo == 0 or s_hi == 0 or (s_lo > 0) == (s_hi > 0):
            raise NoSignChange(f"{poly.to_text(p)} has no sign change on ({lo}, {hi})")
        if not poly.is_irreducible(p):
            raise Reducible(f"{poly.to_text(p)} is reducible over Q")
        self.min_poly = tuple(p)
        self.degree = len(p) - 1
        self.root_interval = (lo, hi)
        self._monic = poly.monic(p)
        self._sign_lo = 1 if s_lo > 0 else -1
        # memo tables; they never change the meaning of the field
        self._finest = (lo, hi)
        self._pow_cache = {}
        self._reduce_table = self._build_reduce_table()

    def _build_reduce_table(self):
        n = self.degree
        table = []
        cur = [Fraction(0)] * (n - 1) + [Fraction(1)]  # theta^(n-1)
        for _ in range(max(n - 1, 0)):
            # multiply by theta and reduce
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [c - top * m for c, m in zip(cur, self._monic[:-1])]
            table.append(tuple(cur))
        return table

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField) or self.min_poly != other.min_poly:
            return False
        if self.degree == 1:
            return True
        lo = max(self.root_interval[0], other.root_interval[0])
        hi = min(self.root_interval[1], other.root_interval[1])
        return lo <= hi and poly.count_roots_closed(self.min_poly, lo, hi) == 1

    def __hash__(self):
        return hash(self.min_poly) if self.degree > 1 else hash(1)

    def __repr__(self):
        return f"NumberField({self.spec()})"

    def spec(self):
        lo, hi = self.root_interval
        return f"poly={poly.to_text(self.min_poly)};root=({lo},{hi})"

    @property
    def is_rational(self):
        return self.degree == 1

    def gen(self):
        if self.degree == 1:
            return self.element([-Fraction(self.min_poly[0], self.min_poly[1])])
        return self.element([0, 1])

    def element(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        return RealAlgebraic(self, tuple(coeffs))

    def _reduce(self, coeffs):
        n = self.degree
        if n == 1:
            return [poly.evaluate(coeffs, -Fraction(self.min_poly[0], self.min_poly[1]))]
        out = list(coeffs[:n]) + [Fraction(0)] * max(0, n - len(coeffs))
        for k in range(n, len(coeffs)):
            c = coeffs[k]
            if not c:
                continue
            # theta^k = theta^(n-1) * theta^(k-n+1)
            row = self._power_row(k)
            for i in range(n):
                out[i] += c * row[i]
        return out

    def _power_row(self, k):
        n = self.degree
        while len(self._reduce_table) < k - n + 1:
            cur = list(self._reduce_table[-1])
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [c - top * m for c, m in zip(cur, self._monic[:-1])]
            self._reduce_table.append(tuple(cur))
        return self._reduce_table[k - n]

    # certified enclosures of theta

    def root_enclosure(self, bits):
        """Rational (lo, hi) containing theta with hi - lo <= 2^-bits."""
        if self.degree == 1:
            v = -Fraction(self.min_poly[0], self.min_poly[1])
            return v, v
        lo, hi = self._finest
        target = Fraction(1, 1 << bits) if bits >= 0 else Fraction(1 << -bits)
        if hi - lo <= target:
            return lo, hi
        p = self.min_poly
        while hi - lo > target:
            mid = (lo + hi) / 2
            s = poly.evaluate(p, mid)
            if (s > 0) == (self._sign_lo > 0):
                lo = mid
            else:
                hi = mid
        self._finest = (lo, hi)
        return lo, hi

    def power_bounds(self, bits):
        """Integers (lows, highs) with lows[i] <= theta^i * 2^bits <= highs[i]."""
        cached = self._pow_cache.get(bits)
        if cached is not None:
            return cached
        n = self.degree
        lo, hi = self.root_enclosure(4)
        mag = max(abs(lo), abs(hi), Fraction(1))
        extra = n * (int(mag).bit_length() + 1) + n.bit_length() + 4
        lo, hi = self.root_enclosure(bits + extra)
        # keep the enclosure away from zero so odd/even powers are monotone
        while lo <= 0 <= hi:
            extra += 8
            lo, hi = self.root_enclosure(bits + extra)
        scale = 1 << bits
        lows, highs = [scale], [scale]
        plo, phi = Fraction(1), Fraction(1)
        for _ in range(1, n):
            cands = (plo * lo, plo * hi, phi * lo, phi * hi)
            plo, phi = min(cands), max(cands)
            lows.append((plo.numerator * scale) // plo.denominator)
            highs.append(-((-phi.numerator * scale) // phi.denominator))
        result = (tuple(lows), tuple(highs))
        self._pow_cache[bits] = result
        return result

    def _bounds_scaled(self, nums, bits):
        lows, highs = self.power_bounds(bits)
        s_lo = s_hi = 0
        for c, a, b in zip(nums, lows, highs):
            if c > 0:
                s_lo += c * a
                s_hi += c * b
            elif c < 0:
                s_lo += c * b
                s_hi += c * a
        return s_lo, s_hi

    @staticmethod
    def _start_bits(nums):
        width = max(abs(c) for c in nums).bit_length() + 48
        bits = 64
        while bits < width:
            bits *= 2
        return bits

    def floor_scaled(self, nums, den):
        """Floor of (sum nums[i] theta^i) / den for integers nums and den > 0."""
        if self.degree == 1 or not any(nums[1:]):
            return nums[0] // den
        bits = self._start_bits(nums)
        while True:
            s_lo, s_hi = self._bounds_scaled(nums, bits)
            q = den << bits
            f_lo = s_lo // q
            if f_lo == s_hi // q:
                return f_lo
            bits *= 2

    def sign_scaled(self, nums):
        if self.degree == 1 or not any(nums[1:]):
            return (nums[0] > 0) - (nums[0] < 0)
        bits = self._start_bits(nums)
        while True:
            s_lo, s_hi = self._bounds_scaled(nums, bits)
            if s_lo > 0:
                return 1
            if s_hi < 0:
                return -1
            bits *= 2

    def enclose_scaled(self, nums, den, precision):
        if self.degree == 1 or not any(nums[1:]):
            v = Fraction(nums[0], den)
            return v, v
        bits = max(self._start_bits(nums), precision + 8)
        while True:
            s_lo, s_hi = self._bounds_scaled(nums, bits)
            q = den << bits
            if Fraction(s_hi - s_lo, q) <= Fraction(1, 1 << precision):
                return Fraction(s_lo, q), Fraction(s_hi, q)
            bits *= 2


QQ = NumberField([0, 1], (-1, 1))


def field_make(min_poly, root_interval):
    """Validated field handle; every degree-one polynomial yields QQ."""
    field = NumberField(min_poly, root_interval)
    if field.degree == 1:
        return QQ
    return field


def _is_rational_value(x):
    return isinstance(x, (int, Fraction))


class RealAlgebraic:
    """An element c_0 + c_1 theta + ... of a NumberField; immutable."""

    __slots__ = ("field", "coeffs", "_scaled")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._scaled = None

    @classmethod
    def rational(cls, value):
        return cls(QQ, (Fraction(value),))

    def scaled(self):
        """(integer numerators, common denominator) of the coefficients."""
        if self._scaled is None:
            den = 1
            for c in self.coeffs:
                den = _lcm(den, c.denominator)
            self._scaled = (tuple(c.numerator * (den // c.denominator) for c in self.coeffs), den)
        return self._scaled

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.coeffs[0]

    def in_field(self, field):
        """Re-express this element in a larger field (rationals embed anywhere)."""
        if field == self.field:
            return self if field is self.field else RealAlgebraic(field, self.coeffs)
        if self.is_rational():
            return field.element([self.coeffs[0]])
        raise FieldMismatch(f"element of {self.field.spec()} is not in {field.spec()}")

    def _unify(self, other):
        if isinstance(other, RealAlgebraic):
            if other.field is self.field:
                return self.field, self.coeffs, other.coeffs
            if self.field == other.field:
                return self.field, self.coeffs, other.coeffs
            if other.field.degree == 1 or other.is_rational():
                return self.field, self.coeffs, self.field.element([other.coeffs[0]]).coeffs
            if self.field.degree == 1 or self.is_rational():
                return other.field, other.field.element([self.coeffs[0]]).coeffs, other.coeffs
            raise FieldMismatch(f"{self.field.spec()} vs {other.field.spec()}")
        if _is_rational_value(other):
            return self.field, self.coeffs, self.field.element([other]).coeffs
        return None

    def __add__(self, other):
        u = self._unify(other)
        if u is None:
            return NotImplemented
        f, a, b = u
        return RealAlgebraic(f, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return RealAlgebraic(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        u = self._unify(other)
        if u is None:
            return NotImplemented
        f, a, b = u
        return RealAlgebraic(f, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        u = self._unify(other)
        if u is None:
            return NotImplemented
        f, a, b = u
        if f.degree == 1:
            return RealAlgebraic(f, (a[0] * b[0],))
        if not any(b[1:]):
            return RealAlgebraic(f, tuple(x * b[0] for x in a))
        if not any(a[1:]):
            return RealAlgebraic(f, tuple(a[0] * y for y in b))
        prod = [Fraction(0)] * (2 * f.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return RealAlgebraic(f, tuple(f._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.coeffs):
            raise ZeroDivisionError("division by zero in number field")
        f = self.field
        if self.is_rational():
            return f.element([1 / self.coeffs[0]])
        inv = poly.inverse_mod(list(self.coeffs), list(f._monic))
        return f.element(inv)

    def __truediv__(self, other):
        u = self._unify(other)
        if u is None:
            return NotImplemented
        f, a, b = u
        return RealAlgebraic(f, a) * RealAlgebraic(f, b).inverse()

    def __rtruediv__(self, other):
        u = self._unify(other)
        if u is None:
            return NotImplemented
        f, a, b = u
        return RealAlgebraic(f, b) * RealAlgebraic(f, a).inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.element([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self):
        nums, _ = self.scaled()
        return self.field.sign_scaled(nums)

    def __eq__(self, other):
        try:
            u = self._unify(other)
        except FieldMismatch:
            return False
        if u is None:
            return NotImplemented
        return u[1] == u[2]

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def _cmp(self, other):
        diff = self - other
        if diff is NotImplemented:
            raise TypeError(f"cannot compare RealAlgebraic with {type(other).__name__}")
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __floor__(self):
        return floor(self)

    def __float__(self):
        lo, hi = embed_float(self, 60)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"RealAlgebraic({format_element(self)})"

    def __str__(self):
        return format_element(self)


def as_element(x, field=None):
    """Coerce ints, Fractions, strings and elements into a RealAlgebraic."""
    if isinstance(x, RealAlgebraic):
        return x if field is None else x.in_field(field)
    if isinstance(x, str):
        x = Fraction(x)
    value = RealAlgebraic.rational(x)
    return value if field is None else value.in_field(field)


def floor(x):
    """Largest integer n with n <= x."""
    if _is_rational_value(x):
        return x.__floor__()
    nums, den = x.scaled()
    return x.field.floor_scaled(nums, den)


def ceil(x):
    return -floor(-x)


def frac(x):
    """x - floor(x), which lies in [0, 1)."""
    return x - floor(x)


def compare(x, y):
    """-1, 0 or 1 as x is less than, equal to or greater than y."""
    if isinstance(x, RealAlgebraic) and isinstance(y, RealAlgebraic):
        if x.field is not y.field and x.field != y.field:
            if not (x.is_rational() or y.is_rational()):
                raise FieldMismatch(f"{x.field.spec()} vs {y.field.spec()}")
    if _is_rational_value(x):
        x = RealAlgebraic.rational(x)
    return (x - y).sign()


def embed_float(x, precision):
    """Rational interval of width at most 2^-precision containing x."""
    if precision < 1:
        raise ValueError("precision must be at least one bit")
    if _is_rational_value(x):
        v = Fraction(x)
        return v, v
    nums, den = x.scaled()
    return x.field.enclose_scaled(nums, den, precision)


# text syntax

_FIELD_RE = re.compile(r"^\s*poly\s*=\s*\[([^\]]*)\]\s*;\s*root\s*=\s*\(([^,]+),([^)]+)\)\s*$")


def parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def parse_field(text):
    """Parse "poly=[c0,...,cn];root=(lo,hi)"."""
    if text is None or text.strip() in ("", "Q", "QQ"):
        return QQ
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError(f"bad field syntax: {text!r}")
    coeffs = [parse_rational(c) for c in m.group(1).split(",")]
    return field_make(coeffs, (parse_rational(m.group(2)), parse_rational(m.group(3))))


def parse_element(text, field=QQ):
    """Parse "[c0,c1,...]" in the given field, or a plain rational."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(f"bad element syntax: {text!r}")
        inner = text[1:-1].strip()
        coeffs = [parse_rational(c) for c in inner.split(",")] if inner else []
        if len(coeffs) > field.degree and field.degree == 1 and any(coeffs[1:]):
            raise ParseError(f"element {text!r} needs a field of degree {len(coeffs)}")
        return field.element(coeffs)
    return field.element([parse_rational(text)])


def format_element(x):
    if _is_rational_value(x):
        return str(Fraction(x))
    if x.is_rational():
        return str(x.coeffs[0])
    return "[" + ",".join(str(c) for c in x.coeffs) + "]"
