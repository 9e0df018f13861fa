"""Orbit experiments on the boundary of the Schur-Cohn region.

Salem quartics and the orbit of (1,0,0), a grid over the complex-root
surface E_C, discretized rotations, and the (1, phi^2, phi^2) Zeckendorf
classes.  Every periodic record is re-verified by direct recomputation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from . import poly
from .conjugacy import BetaSystem
from .core import ESCAPED, PERIODIC, UNKNOWN, ParamVector, orbit, sup_norm, tau, verify_periodic
from .errors import NotSalem, OutOfRange
from .exactnum import as_element, field_make, format_element
from .regions import boundary_parameterization

GOLDEN = field_make([-1, -1, 1], (1, 2))


@dataclass
class PeriodRecord:
    parameter: tuple
    status: str
    preperiod: int
    period: int
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "parameter": [format_element(as_element(p)) if not isinstance(p, str) else p for p in self.parameter],
            "status": self.status,
            "preperiod": self.preperiod,
            "period": self.period,
        }
        out.update(self.extra)
        return out


def _record(parameter, r, start, max_steps, escape_norm=None, **extra):
    res = orbit(r, start, max_steps, escape_norm)
    if res.status == PERIODIC and not verify_periodic(r, start, res):
        raise AssertionError(f"periodic orbit failed re-verification for {parameter}")
    if res.status != PERIODIC:
        extra.setdefault("steps", res.steps_taken)
    return PeriodRecord(tuple(parameter), res.status, res.preperiod, res.period, extra)


# Salem quartics


class SalemQuartic:
    """X^4 + b1 X^3 + b2 X^2 + b1 X + 1 with an exact Salem certificate."""

    def __init__(self, b1, b2):
        self.b1, self.b2 = int(b1), int(b2)
        self.poly = (1, self.b1, self.b2, self.b1, 1)
        self.is_salem, self.reason = self._certify()

    def trace_poly(self):
        # X + 1/X = Y turns the quartic into Y^2 + b1 Y + (b2 - 2)
        return [self.b2 - 2, self.b1, 1]

    def _certify(self):
        g = self.trace_poly()
        bound = poly.root_bound(g) + 1
        above = poly.count_roots(g, 2, bound)
        inside = poly.count_roots(g, -2, 2) - (1 if poly.evaluate(g, 2) == 0 else 0)
        if above != 1:
            return False, "trace polynomial has no root above 2"
        if inside != 1:
            return False, "trace polynomial has no root in (-2, 2)"
        if not poly.is_irreducible(list(self.poly)):
            return False, "quartic is reducible"
        return True, ""

    def beta_system(self):
        if not self.is_salem:
            raise NotSalem(f"({self.b1}, {self.b2}): {self.reason}")
        bound = poly.root_bound(list(self.poly)) + 1
        return BetaSystem(self.poly, (1, bound))

    def __repr__(self):
        return f"SalemQuartic({self.b1}, {self.b2})"


def salem_case(b1, b2, floor_beta):
    """(case label, expected period) from the case analysis on floor(beta)."""
    if floor_beta == -b1 + 1:
        return ("i.a", 9) if b2 == 2 * b1 - 1 else ("i.b", 5)
    if floor_beta == -b1:
        return "ii", 3
    if floor_beta == -b1 - 1:
        return "iii", 4
    if floor_beta == -b1 - 2:
        top = -b1 - 3
        c = {k: Fraction(-2 * b1 - 2) - Fraction(-b1 - 3, k) for k in range(1, top + 1)}
        for k in range(2, top + 1):
            if c[k - 1] < b2 <= c[k]:
                return f"iv.k={k}", 2 * k + 2
        return "iv.none", None
    return "none", None


def salem_expansion_of_one(q, max_steps=100_000):
    """Orbit of (1,0,0) under tau_r for the Salem parameter of q."""
    if not isinstance(q, SalemQuartic):
        q = SalemQuartic(*q)
    bs = q.beta_system()
    floor_beta = bs.alphabet[-1]
    case, expected = salem_case(q.b1, q.b2, floor_beta)
    rec = _record((q.b1, q.b2), bs.r, (1, 0, 0), max_steps, floor_beta=floor_beta, case=case, expected=expected)
    rec.extra["conforms"] = rec.status == PERIODIC and rec.period == expected
    return rec


def salem_grid_scan(b1_range, b2_range, max_steps=100_000):
    """Every certified Salem quartic in the grid, compared with the case analysis."""
    out = []
    for b1 in b1_range:
        for b2 in b2_range:
            q = SalemQuartic(b1, b2)
            if not q.is_salem:
                out.append(PeriodRecord((b1, b2), "Skipped", 0, 0, {"reason": q.reason}))
                continue
            out.append(salem_expansion_of_one(q, max_steps))
    return out


def salem_mismatches(records):
    return [r for r in records if r.status != "Skipped" and not r.extra.get("conforms")]


def salem_orbit(min_poly, max_steps, root_interval=None):
    """Orbit of (1,0,...,0) for the parameter attached to a Salem minimal polynomial."""
    if root_interval is None:
        root_interval = (1, poly.root_bound(list(min_poly)) + 1)
    bs = BetaSystem(min_poly, root_interval)
    start = (1,) + (0,) * (bs.d - 1)
    return _record(tuple(min_poly), bs.r, start, max_steps)


BOYD_DEGREE6 = (1, -3, -1, -7, -1, -3, 1)


# the surface E_C


def grid_values(lo, hi, steps, open_ends=True):
    """Exact rational grid; cell midpoints when open_ends, else endpoints included."""
    lo, hi = Fraction(lo), Fraction(hi)
    if open_ends:
        return [lo + (hi - lo) * Fraction(2 * i + 1, 2 * steps) for i in range(steps)]
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(i, steps - 1) for i in range(steps)]


def ec_heatmap(s_grid, t_grid, max_steps, escape_norm=None):
    """Orbit of (1,0,0) for r = (t, st + 1, s + t) on every grid point."""
    out = []
    for t in t_grid:
        for s in s_grid:
            r = boundary_parameterization("EC", s, t)
            out.append(_record((s, t), r, (1, 0, 0), max_steps, escape_norm))
    return out


def records_csv(records, columns=("parameter", "status", "preperiod", "period")):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    extra_keys = sorted({k for r in records for k in r.extra})
    w.writerow(["p" + str(i) for i in range(len(records[0].parameter))] + list(columns[1:]) + extra_keys if records else list(columns))
    for r in records:
        j = r.to_json()
        w.writerow(j["parameter"] + [j["status"], j["preperiod"], j["period"]] + [_cell(r.extra.get(k)) for k in extra_keys])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


# discretized rotations


def rotation_orbit(lam, z, max_steps):
    """Orbit of z under tau_(1, lambda), i.e. a_{n+1} = -floor(a_{n-1} + lambda a_n)."""
    lam = as_element(lam)
    if not abs(lam) < 2:
        raise OutOfRange(f"need |lambda| < 2, got {lam}")
    r = ParamVector([lam.field.element([1]), lam], lam.field)
    return _record((lam,), r, tuple(z), max_steps)


# the Zeckendorf classes of (1, phi^2, phi^2)


def zeckendorf_digits(n):
    """{j: 1} with n = sum F_j over the chosen j, F_2 = 1, F_3 = 2, no two adjacent."""
    if n < 0:
        raise ValueError("n must be non-negative")
    fib = [0, 1, 1]
    while fib[-1] <= n:
        fib.append(fib[-1] + fib[-2])
    digits = {}
    j = len(fib) - 1
    while n and j >= 2:
        if fib[j] <= n:
            digits[j] = 1
            n -= fib[j]
            j -= 2
        else:
            j -= 1
    return digits


def zeckendorf_class(digits):
    """Class name and expected behaviour from the digits at F_2, F_3, F_4."""
    z2, z3, z4 = (digits.get(j, 0) for j in (2, 3, 4))
    if z2 == 0 and z3 == 0:
        return "divergent", None
    if z2 == 0 and z3 == 1:
        return "period-30", 30
    if z4 == 0:
        return "period-30", 30
    return "period-70", 70


def zeckendorf_parameter():
    phi2 = GOLDEN.element([1, 1])
    return ParamVector([GOLDEN.element([1]), phi2, phi2], GOLDEN)


def growth_certificate(r, start, steps, limit=64):
    """(step, sup-norm) at each new norm record along the first steps iterations."""
    z = tuple(start)
    best = sup_norm(z)
    records = [(0, best)]
    for k in range(1, steps + 1):
        z = tau(r, z)
        n = sup_norm(z)
        if n > best:
            best = n
            records.append((k, n))
    return records[-limit:]


def zeckendorf_experiment(z2_values, max_steps, escape_norm=None):
    r = zeckendorf_parameter()
    out = []
    for z2 in z2_values:
        digits = zeckendorf_digits(z2)
        cls, expected = zeckendorf_class(digits)
        rec = _record((z2,), r, (0, 0, z2), max_steps, escape_norm)
        rec.extra.update(
            digits=sorted(digits),
            cls=cls,
            expected=expected,
        )
        if cls == "divergent":
            rec.extra["conforms"] = rec.status in (ESCAPED, UNKNOWN)
        else:
            rec.extra["conforms"] = rec.status == PERIODIC and rec.period == expected
        if rec.status != PERIODIC:
            rec.extra["growth"] = [list(p) for p in growth_certificate(r, (0, 0, z2), min(max_steps, rec.extra["steps"]))]
        out.append(rec)
    return out
