"""SRS tiles as depth-n preimage clouds, purely periodic points and tile transports.

The tile of x is the limit of R(r)^n tau_r^-n(x).  Every cloud carries a
certified sup-norm Hausdorff bound to that limit.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import ParamVector, companion_matrix, tau, tau_inverse
from .errors import (
    IoError,
    NotExpanding,
    NotMonic,
    PointBudgetExceeded,
    PrecisionInsufficient,
    UnsupportedDimension,
)
from .exactnum import as_element, embed_float, format_element
from .linalg import mat_mul, mat_vec
from .regions import schur_cohn_contains
from .witness import require_schur_cohn

BOUND_BITS = 64


def _upper(x):
    """Rational upper bound of a field element."""
    return embed_float(as_element(x), BOUND_BITS)[1]


def _lower(x):
    return embed_float(as_element(x), BOUND_BITS)[0]


def _col_norm_upper(col):
    return max(_upper(abs(c)) for c in col)


def _row_sum_norm(m):
    """Exact sup-norm operator norm of a matrix."""
    return max(sum((abs(c) for c in row), 0 * row[0]) for row in m)


class ContractionData:
    """Powers of R(r) and a certified geometric tail bound.

    tail(n) bounds sum_{j >= n} ||R^j e_d||_inf from above, with k the least
    power such that ||R^k||_inf < 1.
    """

    def __init__(self, r, max_power=10_000):
        require_schur_cohn(r)
        self.r = r
        self.R = companion_matrix(r)
        d = r.d
        power = self.R
        k = 1
        while not _row_sum_norm(power) < 1:
            power = mat_mul(power, self.R)
            k += 1
            if k > max_power:
                raise PointBudgetExceeded(f"no contracting power of R(r) up to {max_power}")
        self.k = k
        self.qbound = _upper(_row_sum_norm(power))
        one, zero = r.field.element([1]), r.field.element([0])
        self._cols = [[one if i == d - 1 else zero for i in range(d)]]
        self._col_norms = [_col_norm_upper(self._cols[0])]

    def col_norm(self, j):
        while len(self._cols) <= j:
            self._cols.append(mat_vec(self.R, self._cols[-1]))
            self._col_norms.append(_col_norm_upper(self._cols[-1]))
        return self._col_norms[j]

    def tail(self, n):
        head = sum(self.col_norm(n + i) for i in range(self.k))
        return head / (1 - self.qbound)

    def ball_bound(self):
        return self.tail(0)


def ball_bound(r):
    """Certified upper bound for sum_{j >= 0} ||R(r)^j e_d||_inf."""
    return ContractionData(r).ball_bound()


@dataclass
class TileCloud:
    r: ParamVector
    center: tuple
    depth: int
    points: frozenset
    hausdorff_bound: Fraction

    def sorted_points(self):
        return sorted(self.points, key=_point_key)

    def to_json(self):
        return {
            "center": list(self.center),
            "depth": self.depth,
            "hausdorff_bound": str(self.hausdorff_bound),
            "points": [[format_element(c) for c in p] for p in self.sorted_points()],
        }


def _point_key(p):
    return tuple(float(c) for c in p) + tuple(format_element(c) for c in p)


def preimage_layer(r, xs, max_points=None):
    out = set()
    for x in xs:
        out.update(tau_inverse(r, x))
        if max_points is not None and len(out) > max_points:
            raise PointBudgetExceeded(f"preimage set exceeds {max_points} points")
    return out


def tile_cloud(r, x, depth, max_points=1_000_000, contraction=None):
    """R(r)^n tau_r^-n(x) for n = depth, exactly."""
    require_schur_cohn(r)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    data = contraction or ContractionData(r)
    x = tuple(x)
    layer = {x}
    for _ in range(depth):
        layer = preimage_layer(r, layer, max_points)
    mat = _power(data.R, depth, r)
    pts = frozenset(tuple(mat_vec(mat, y)) for y in layer)
    return TileCloud(r, x, depth, pts, data.tail(depth))


def _power(m, n, r):
    d = len(m)
    one, zero = r.field.element([1]), r.field.element([0])
    acc = [[one if i == j else zero for j in range(d)] for i in range(d)]
    for _ in range(n):
        acc = mat_mul(m, acc)
    return acc


def purely_periodic_points(r, max_points=5_000_000):
    """All z with tau^p(z) = z for some p >= 1; they lie in the certified ball."""
    data = ContractionData(r)
    bound = int(data.ball_bound())
    d = r.d
    if (2 * bound + 1) ** d > max_points:
        raise PointBudgetExceeded(f"ball of radius {bound} in dimension {d} exceeds {max_points} points")
    # 0: unknown, 1: on stack, 2: done and not periodic, 3: periodic
    state = {}
    periodic = set()
    rng = range(-bound, bound + 1)
    for start in product(rng, repeat=d):
        if start in state:
            continue
        path, pos = [], {}
        z = start
        while True:
            if z in pos:
                periodic.update(path[pos[z]:])
                break
            if z in state or max(abs(v) for v in z) > bound:
                break
            pos[z] = len(path)
            path.append(z)
            z = tau(r, z)
        for p in path:
            state[p] = 3 if p in periodic else 2
    return sorted(periodic)


@dataclass
class TileInterval:
    """Enclosures [lo] and [hi] of the endpoints of a one-dimensional tile."""

    center: int
    depth: int
    lo: tuple
    hi: tuple
    points: int

    @property
    def length(self):
        return ((self.hi[0] + self.hi[1]) - (self.lo[0] + self.lo[1])) / 2

    def length_bounds(self):
        return max(Fraction(0), self.hi[0] - self.lo[1]), self.hi[1] - self.lo[0]

    def to_json(self):
        return {
            "center": self.center,
            "depth": self.depth,
            "lo": [str(v) for v in self.lo],
            "hi": [str(v) for v in self.hi],
            "length": str(self.length),
        }


def tile_interval(r, x, depth, max_points=1_000_000, contraction=None):
    if not isinstance(r, ParamVector):
        r = ParamVector([r])
    if r.d != 1:
        raise UnsupportedDimension("tile intervals need d = 1")
    cloud = tile_cloud(r, (x,), depth, max_points, contraction)
    vals = [p[0] for p in cloud.points]
    lo_v = _lower(min(vals))
    hi_v = _upper(max(vals))
    h = cloud.hausdorff_bound
    return TileInterval(x, depth, (lo_v - h, lo_v + h), (hi_v - h, hi_v + h), len(vals))


def covering_degree_sample(r, probe, depth):
    """Number of tiles whose depth-n cloud, inflated by the Hausdorff bound, holds the probe.

    This is an upper estimate of the covering degree at the probe and uses
    floating point for the scaled points.
    """
    data = ContractionData(r)
    d = r.d
    probe = [float(v) for v in probe]
    if len(probe) != d:
        raise ValueError(f"probe needs {d} coordinates")
    h = float(data.tail(depth))
    tails = [float(data.tail(k)) for k in range(depth + 1)]
    mats = []
    m = [[1.0 if i == j else 0.0 for j in range(d)] for i in range(d)]
    Rf = [[float(c) for c in row] for row in data.R]
    for _ in range(depth + 1):
        mats.append(m)
        m = [[sum(Rf[i][t] * m[t][j] for t in range(d)) for j in range(d)] for i in range(d)]

    def dist(k, y):
        mk = mats[k]
        return max(abs(sum(mk[i][j] * y[j] for j in range(d)) - probe[i]) for i in range(d))

    reach = tails[0] + h
    ranges = [range(int(p - reach) - 1, int(p + reach) + 2) for p in probe]
    count = 0
    for x in product(*ranges):
        if dist(0, x) > reach:
            continue
        frontier = [x]
        for k in range(1, depth + 1):
            nxt = []
            slack = tails[k] - tails[depth] + h + 1e-12
            for y in frontier:
                for w in tau_inverse(r, y):
                    if dist(k, w) <= slack:
                        nxt.append(w)
            frontier = nxt
            if not frontier:
                break
        if frontier:
            count += 1
    return count


# transports


def _mp():
    import mpmath

    return mpmath


def conjugate_roots(r, precision):
    """Roots of chi_r: real ones ascending, then one of each complex pair with Im > 0."""
    mp = _mp()
    ctx = mp.mp.clone() if hasattr(mp.mp, "clone") else mp.mp
    ctx.prec = precision
    coeffs = [_mp_value(ctx, c, precision) for c in reversed(r.char_poly())]
    try:
        roots = ctx.polyroots(coeffs, maxsteps=200, extraprec=precision)
    except ctx.NoConvergence as exc:
        raise PrecisionInsufficient(str(exc)) from exc
    roots = [ctx.mpc(z) for z in roots]
    tiny = ctx.mpf(2) ** (-(precision // 2))
    sep = ctx.mpf(2) ** (-(precision // 4))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < sep:
                raise PrecisionInsufficient("conjugate roots are not separated at this precision")
    real, cplx = [], []
    for z in roots:
        if abs(z.imag) <= tiny:
            real.append(z.real)
        elif abs(z.imag) < sep:
            raise PrecisionInsufficient("cannot tell real and complex conjugates apart")
        elif z.imag > 0:
            cplx.append(z)
    return ctx, sorted(real), sorted(cplx, key=lambda z: (z.real, z.imag))


def _mp_value(ctx, x, precision):
    lo, hi = embed_float(as_element(x), precision + 8)
    mid = (lo + hi) / 2
    return ctx.mpf(mid.numerator) / mid.denominator


def transport_matrix(bs, precision=53):
    """U (R(r) - beta I) as an mpmath matrix."""
    ctx, U, M = transport_matrices(bs, precision)
    return ctx, M


def transport_matrices(bs, precision=53):
    """(context, U, U (R(r) - beta I)) with U built from the conjugate quotients."""
    r = bs.r
    d = r.d
    ctx, real, cplx = conjugate_roots(r, precision)
    chi = [_mp_value(ctx, c, precision) for c in r.char_poly()]

    def quotient(root):
        # chi / (X - root): coefficients q_0..q_{d-2}
        q = [None] * d
        q[d - 1] = ctx.mpf(1)
        for j in range(d - 1, 0, -1):
            q[j - 1] = chi[j] + root * q[j]
        return q[: d - 1]

    rows = []
    for b in real:
        rows.append([*quotient(b), ctx.mpf(1)])
    for z in cplx:
        q = quotient(z)
        rows.append([ctx.re(c) for c in q] + [ctx.mpf(1)])
        rows.append([ctx.im(c) for c in q] + [ctx.mpf(0)])
    if len(rows) != d:
        raise PrecisionInsufficient("root classification does not match the degree")
    U = ctx.matrix(rows)
    beta = _mp_value(ctx, bs.beta, precision)
    Rm = ctx.matrix([[_mp_value(ctx, c, precision) for c in row] for row in companion_matrix(r)])
    return ctx, U, U * (Rm - beta * ctx.eye(d))


def transport_center(bs, x, precision=53):
    """U (tau_r(x) - beta x), which equals the conjugate embedding of {r x}."""
    ctx, U, _ = transport_matrices(bs, precision)
    v = [a - bs.beta * b for a, b in zip(tau(bs.r, x), x)]
    w = U * ctx.matrix([_mp_value(ctx, c, precision) for c in v])
    return tuple(float(w[i]) for i in range(bs.d))


def beta_tile_transport(bs, cloud, precision=53):
    """U (R(r) - beta I) applied to the cloud; floating point output."""
    if cloud.r != bs.r:
        raise ValueError("cloud was computed for a different parameter")
    ctx, M = transport_matrix(bs, precision)
    d = bs.d
    out = []
    for p in cloud.sorted_points():
        v = ctx.matrix([_mp_value(ctx, c, precision) for c in p])
        w = M * v
        out.append(tuple(float(w[i]) for i in range(d)))
    return out


def conjugate_embedding(bs, gamma, precision=53):
    """Xi_beta(gamma): gamma evaluated at the conjugates of beta other than beta."""
    ctx, real, cplx = conjugate_roots(bs.r, precision)
    coeffs = [_mp_value(ctx, c, precision) for c in as_element(gamma).in_field(bs.field).coeffs]

    def ev(z):
        acc = 0
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    out = [float(ev(b)) for b in real]
    for z in cplx:
        v = ev(z)
        out.extend([float(ctx.re(v)), float(ctx.im(v))])
    return tuple(out)


def v_matrix(P):
    """Upper unipotent Toeplitz matrix with first row (1, a_{d-1}, ..., a_1)."""
    a = [int(c) for c in P]
    d = len(a) - 1
    return [[1 if i == j else (a[d - (j - i)] if j > i else 0) for j in range(d)] for i in range(d)]


def _check_self_affine(P):
    a = [Fraction(c) for c in P]
    if a[-1] != 1 or any(c.denominator != 1 for c in a):
        raise NotMonic("self-affine transport needs a monic integer polynomial")
    if a[0] == 0:
        raise NotExpanding("a_0 = 0 gives a root at 0")
    d = len(a) - 1
    r = ParamVector([Fraction(1) / a[0]] + [a[d - j] / a[0] for j in range(1, d)])
    if not schur_cohn_contains(r).inside:
        raise NotExpanding("some root of the polynomial has modulus <= 1")
    return r


def self_affine_parameter(P):
    return _check_self_affine(P)


def self_affine_transport(P, cloud):
    """V applied to a cloud of the parameter attached to P, exactly."""
    r = _check_self_affine(P)
    if cloud.r != r:
        raise ValueError("cloud was computed for a different parameter")
    V = v_matrix(P)
    return frozenset(tuple(mat_vec(V, list(p))) for p in cloud.points)


def v_inverse(P):
    V = v_matrix(P)
    d = len(V)
    inv = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    # back substitution on a unit upper triangular matrix
    for i in range(d - 1, -1, -1):
        for j in range(i + 1, d):
            f = V[i][j]
            if f:
                inv[i] = [a - f * b for a, b in zip(inv[i], inv[j])]
    return [[int(c) for c in row] for row in inv]


# output


def _cloud_items(obj):
    items = obj if isinstance(obj, (list, tuple)) else [obj]
    return list(items)


def _float30(x):
    lo, hi = embed_float(as_element(x), 30)
    return float((lo + hi) / 2)


def render(obj, fmt):
    """Text of a cloud, interval, or list of them in csv, json or svg."""
    items = _cloud_items(obj)
    if fmt == "json":
        data = [it.to_json() for it in items]
        return json.dumps(data[0] if len(data) == 1 and not isinstance(obj, (list, tuple)) else data, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if items and isinstance(items[0], TileInterval):
            w.writerow(["center", "depth", "lo_min", "lo_max", "hi_min", "hi_max"])
        elif items:
            w.writerow(["tile"] + [f"x{i}" for i in range(items[0].r.d)])
        for k, it in enumerate(items):
            if isinstance(it, TileInterval):
                w.writerow([it.center, it.depth, *map(str, it.lo), *map(str, it.hi)])
            else:
                for p in it.sorted_points():
                    w.writerow([k, *(format_element(c) for c in p)])
        return buf.getvalue()
    if fmt == "svg":
        return _svg(items)
    raise ValueError(f"unknown format {fmt!r}")


def _svg(items):
    pts = []
    segs = []
    for k, it in enumerate(items):
        if isinstance(it, TileInterval):
            segs.append((k, float(it.lo[0]), float(it.hi[1])))
            continue
        if it.r.d > 2:
            raise UnsupportedDimension("svg output needs d <= 2")
        for p in it.sorted_points():
            xy = [_float30(c) for c in p]
            pts.append((k, xy[0], xy[1] if len(xy) > 1 else 0.0))
    xs = [p[1] for p in pts] + [s[1] for s in segs] + [s[2] for s in segs]
    ys = [p[2] for p in pts] + [float(s[0]) for s in segs]
    if not xs:
        xs, ys = [0.0], [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    size = 800
    scale = (size - 20) / span

    def sx(v):
        return 10 + (v - x0) * scale

    def sy(v):
        return size - 10 - (v - y0) * scale

    palette = ["#1b4f72", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65"]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for k, x, y in pts:
        lines.append(f'<circle cx="{sx(x):.3f}" cy="{sy(y):.3f}" r="1" fill="{palette[k % len(palette)]}"/>')
    for k, a, b in segs:
        y = sy(float(k))
        lines.append(
            f'<line x1="{sx(a):.3f}" y1="{y:.3f}" x2="{sx(b):.3f}" y2="{y:.3f}" '
            f'stroke="{palette[k % len(palette)]}" stroke-width="2"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit(obj, fmt, path):
    text = render(obj, fmt)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return path
