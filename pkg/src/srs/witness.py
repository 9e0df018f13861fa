"""Finiteness decisions through witness sets and witness graphs, and certified
descriptions of the finiteness region inside a convex parameter hull."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import networkx as nx

from .core import ParamVector, tau
from .errors import CycleCountExceeded, NotInSchurCohn, SizeExceeded, UnsupportedDimension
from .exactnum import ceil, floor
from .polyhedra import Inequality, integer_row, hull_inequalities, point_from_history, solve_rows
from .regions import cycle_sum_test, schur_cohn_contains

DEFAULT_MAX_WITNESS = 200_000


def unit_vectors(d):
    out = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        out.append(tuple(e))
        e[i] = -1
        out.append(tuple(e))
    return out


def _neg(z):
    return tuple(-v for v in z)


def boundary_certificate(r):
    """A nonzero cycle for parameters with chi_r(1) = 0 or chi_r(-1) = 0."""
    d = r.d
    total = sum(r.coords, r.field.element([0]))
    if total == -1:
        return {"kind": "fixed point", "cycle": [[1] * d]}
    alt = sum(((-1) ** j * c for j, c in enumerate(r.coords)), r.field.element([0]))
    if alt == -((-1) ** d):
        a = [(-1) ** j for j in range(d)]
        b = [-v for v in a]
        return {"kind": "2-cycle", "cycle": [a, b]}
    return None


def require_schur_cohn(r):
    if not schur_cohn_contains(r).inside:
        cert = boundary_certificate(r)
        details = {"certificate": cert} if cert else {}
        raise NotInSchurCohn(f"{r} is not in the open Schur-Cohn region", **details)


@dataclass(frozen=True)
class WitnessSet:
    points: frozenset

    def __len__(self):
        return len(self.points)

    def __contains__(self, z):
        return z in self.points


def witness_set_point(r, max_size=DEFAULT_MAX_WITNESS):
    """Closure of the signed unit vectors under tau and z -> -tau(-z)."""
    require_schur_cohn(r)
    seen = set(unit_vectors(r.d))
    frontier = sorted(seen)
    while frontier:
        new = []
        for z in frontier:
            for w in (tau(r, z), _neg(tau(r, _neg(z)))):
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        if len(seen) > max_size:
            raise SizeExceeded(f"witness set exceeds {max_size} points")
        frontier = new
    return WitnessSet(frozenset(seen))


@dataclass(frozen=True)
class VectorCycle:
    """Integer cycle a_0..a_{L-1}; its points are the d-windows read cyclically."""

    entries: tuple
    d: int

    def points(self):
        L = len(self.entries)
        return [tuple(self.entries[(j + i) % L] for i in range(self.d)) for j in range(L)]

    def is_zero(self):
        return not any(self.entries)

    def to_json(self):
        return [list(p) for p in self.points()]

    @classmethod
    def from_points(cls, pts):
        pts = list(pts)
        k = min(range(len(pts)), key=lambda i: pts[i])
        pts = pts[k:] + pts[:k]
        return cls(tuple(p[0] for p in pts), len(pts[0]))


@dataclass(frozen=True)
class FinitenessResult:
    finite: bool
    cycle: VectorCycle | None
    witnesses: int

    def __bool__(self):
        return self.finite


def _functional_cycles(succ, start_points):
    """Cycles of the map succ reachable from start_points, in canonical form."""
    state = {}
    cycles = []
    for s in sorted(start_points):
        path, pos = [], {}
        z = s
        while z not in state and z not in pos:
            pos[z] = len(path)
            path.append(z)
            z = succ(z)
        if z in pos:
            cycles.append(VectorCycle.from_points(path[pos[z]:]))
        for p in path:
            state[p] = True
    return cycles


def decide_finiteness(r, max_size=DEFAULT_MAX_WITNESS):
    """Whether every integer vector reaches 0; a nonzero cycle certifies 'no'."""
    w = witness_set_point(r, max_size)
    cycles = _functional_cycles(lambda z: tau(r, z), w.points)
    bad = sorted((c for c in cycles if not c.is_zero()), key=lambda c: (len(c.entries), c.points()))
    return FinitenessResult(not bad, bad[0] if bad else None, len(w))


def decide_Ddp(r, p, max_size=DEFAULT_MAX_WITNESS):
    """Every tau_r cycle met by the witness orbits passes the p-th cycle-sum test."""
    w = witness_set_point(r, max_size)
    cycles = _functional_cycles(lambda z: tau(r, z), w.points)
    return all(cycle_sum_test(c.entries, p) for c in cycles)


# region witness graphs


def _vertex_params(H):
    return [v if isinstance(v, ParamVector) else ParamVector(v) for v in H]


def region_bound_M(H_vertices, z):
    """max over the hull of -floor(r . z), attained at a vertex."""
    H = _vertex_params(H_vertices)
    return -floor(min(v.dot(z) for v in H))


@dataclass
class WitnessGraph:
    vertices: frozenset
    edges: dict = field(repr=False)
    d: int = 0


def witness_graph_region(H_vertices, max_size=DEFAULT_MAX_WITNESS):
    """Closure of the unit vectors under the set-valued successor map T."""
    H = _vertex_params(H_vertices)
    for v in H:
        require_schur_cohn(v)
    d = H[0].d
    edges = {}
    frontier = sorted(unit_vectors(d))
    seen = set(frontier)
    while frontier:
        new = []
        for z in frontier:
            values = [v.dot(z) for v in H]
            hi = -floor(min(values))
            lo = -ceil(max(values))
            succ = [z[1:] + (j,) for j in range(lo, hi + 1)]
            edges[z] = succ
            for w in succ:
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        if len(seen) > max_size:
            raise SizeExceeded(f"region witness graph exceeds {max_size} vertices")
        frontier = new
    return WitnessGraph(frozenset(seen), edges, d)


def enumerate_cycles(g, max_cycles=10_000):
    """All elementary cycles of the graph, canonically rotated and sorted."""
    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertices)
    for z, succ in g.edges.items():
        for w in succ:
            dg.add_edge(z, w)
    found = []
    for cyc in nx.simple_cycles(dg):
        found.append(VectorCycle.from_points(cyc))
        if len(found) > max_cycles:
            raise CycleCountExceeded(f"more than {max_cycles} elementary cycles")
    found.sort(key=lambda c: (len(c.entries), c.points()))
    return found


@dataclass(frozen=True)
class CutoutPolyhedron:
    """Parameters r for which the cycle is a periodic orbit of tau_r."""

    cycle: VectorCycle
    rows: tuple  # (window coefficients, next entry)

    def inequalities(self):
        out = []
        for coeffs, nxt in self.rows:
            c = tuple(Fraction(a) for a in coeffs)
            out.append(Inequality(c, Fraction(nxt), False))
            out.append(Inequality(tuple(-a for a in c), Fraction(1 - nxt), True))
        return out

    def contains(self, r):
        for coeffs, nxt in self.rows:
            v = r.dot(coeffs) + nxt
            if not (0 <= v < 1):
                return False
        return True

    def to_json(self):
        return [q.to_text() for q in self.inequalities()]


def cutout_polyhedron(pi, d=None):
    d = pi.d if d is None else d
    a = pi.entries
    L = len(a)
    rows = []
    for j in range(L):
        window = tuple(a[(i + j) % L] for i in range(d))
        rows.append((window, a[(j + d) % L]))
    return CutoutPolyhedron(pi, tuple(dict.fromkeys(rows)))


EMPTY, NONEMPTY, BOUNDARY_ONLY = "Empty", "NonEmpty", "BoundaryOnly"


def _hull_points(H_vertices):
    out = []
    for v in _vertex_params(H_vertices):
        if not v.is_rational():
            raise ValueError("hull vertices must be rational")
        out.append(tuple(c.to_fraction() for c in v.coords))
    return out


class HullSystem:
    """The hull of rational vertices, prepared once for many cut-out tests.

    Cut-out rows are rewritten over integer variables: r itself when the hull
    has a facet description, barycentric weights otherwise.
    """

    def __init__(self, H_vertices):
        pts = _hull_points(H_vertices)
        d = len(pts[0])
        if d > 3:
            raise UnsupportedDimension("exact elimination is limited to d <= 3")
        self.pts = pts
        self.d = d
        den = 1
        for p in pts:
            for c in p:
                den = den * c.denominator // gcd(den, c.denominator)
        self.den = den
        self.scaled = [tuple(int(c * den) for c in p) for p in pts]
        facets = hull_inequalities(pts) if len(pts) > d + 1 else None
        if facets is not None:
            self.barycentric = False
            self.nvars = d
            self.base_rows = [(integer_row(q), q.strict) for q in facets]
        else:
            self.barycentric = True
            k = len(pts) - 1
            self.nvars = k
            self.dirs = [tuple(a - b for a, b in zip(w, self.scaled[0])) for w in self.scaled[1:]]
            rows = [(tuple(int(j == i) for j in range(k)) + (0,), False) for i in range(k)]
            rows.append(((-1,) * k + (1,), False))
            self.base_rows = rows

    def row(self, coeffs, const, strict):
        """coeffs . r + const (> or >=) 0 with integer coeffs and const."""
        if not self.barycentric:
            return (tuple(coeffs) + (const,), strict)
        w0 = self.scaled[0]
        return (
            tuple(sum(a * b for a, b in zip(coeffs, dv)) for dv in self.dirs)
            + (const * self.den + sum(a * b for a, b in zip(coeffs, w0)),),
            strict,
        )

    def value_range(self, coeffs):
        vals = [sum(a * b for a, b in zip(coeffs, w)) for w in self.scaled]
        return min(vals), max(vals)

    def rows_for(self, p, relaxed=False):
        out = list(self.base_rows)
        for coeffs, nxt in p.rows:
            out.append(self.row(coeffs, nxt, False))
            out.append(self.row(tuple(-a for a in coeffs), 1 - nxt, not relaxed))
        return out

    def quick_empty(self, p):
        """True when a single cut-out row already misses the hull."""
        den = self.den
        for coeffs, nxt in p.rows:
            lo, hi = self.value_range(coeffs)
            # need 0 <= coeffs . r + nxt <= 1 somewhere on the hull
            if hi + nxt * den < 0 or lo + nxt * den > den:
                return True
        return False

    def to_point(self, x):
        if not self.barycentric:
            return list(x)
        base = self.pts[0]
        return [
            b + sum(Fraction(l) * dv[i] for l, dv in zip(x, self.dirs)) / self.den
            for i, b in enumerate(base)
        ]


def _as_hull(H):
    return H if isinstance(H, HullSystem) else HullSystem(H)


def intersect_with_region(p, H_vertices):
    """Empty, NonEmpty, or BoundaryOnly (meets the hull only where a strict row is tight)."""
    hull = _as_hull(H_vertices)
    if hull.quick_empty(p):
        return EMPTY
    if solve_rows(hull.rows_for(p), hull.nvars) is not None:
        return NONEMPTY
    if solve_rows(hull.rows_for(p, relaxed=True), hull.nvars) is not None:
        return BOUNDARY_ONLY
    return EMPTY


def sample_in_region(p, H_vertices):
    """A rational parameter in the cut-out polyhedron and the hull, or None."""
    hull = _as_hull(H_vertices)
    x = point_from_history(solve_rows(hull.rows_for(p), hull.nvars), hull.nvars)
    return None if x is None else ParamVector(hull.to_point(x))


# region descriptions

COMPLETE, SUBDIVIDED, INCONCLUSIVE = "Complete", "Subdivided", "Inconclusive"


@dataclass
class RegionDescription:
    vertices: list
    status: str
    cutouts: list = field(default_factory=list)
    children: list = field(default_factory=list)
    reason: str = ""

    def leaves(self):
        if self.status == SUBDIVIDED:
            out = []
            for c in self.children:
                out.extend(c.leaves())
            return out
        return [self]

    def to_json(self):
        cells = []
        for leaf in self.leaves():
            cell = {
                "vertices": [[str(c) for c in v] for v in leaf.vertices],
                "status": leaf.status,
                "cutouts": [{"cycle": pi.to_json(), "inequalities": poly.to_json()} for pi, poly in leaf.cutouts],
            }
            if leaf.reason:
                cell["reason"] = leaf.reason
            cells.append(cell)
        return {"cells": cells}


def _pruned_graph(g, H):
    """Keep only edges z -> z' realised by tau_r for some r in the hull."""
    edges = {}
    for z, succ in g.edges.items():
        values = [v.dot(z) for v in H]
        lo, hi = -floor(max(values)), -floor(min(values))
        edges[z] = [w for w in succ if lo <= w[-1] <= hi]
    return WitnessGraph(g.vertices, edges, g.d)


def _is_box(pts):
    d = len(pts[0])
    lows = [min(p[i] for p in pts) for i in range(d)]
    highs = [max(p[i] for p in pts) for i in range(d)]
    corners = {tuple(highs[i] if (m >> i) & 1 else lows[i] for i in range(d)) for m in range(1 << d)}
    return set(pts) == corners, lows, highs


def box_vertices(lows, highs):
    d = len(lows)
    return [tuple(highs[i] if (m >> i) & 1 else lows[i] for i in range(d)) for m in range(1 << d)]


def bisect_hull(pts):
    """Split along the longest edge: boxes into two boxes, simplices into two simplices."""
    is_box, lows, highs = _is_box(pts)
    if is_box:
        k = max(range(len(lows)), key=lambda i: (highs[i] - lows[i], -i))
        mid = (lows[k] + highs[k]) / 2
        h1, l2 = list(highs), list(lows)
        h1[k] = mid
        l2[k] = mid
        return [box_vertices(lows, h1), box_vertices(l2, highs)]
    if len(pts) == len(pts[0]) + 1:
        best = None
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                length = sum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
                if best is None or length > best[0]:
                    best = (length, i, j)
        _, i, j = best
        mid = tuple((a + b) / 2 for a, b in zip(pts[i], pts[j]))
        first = [mid if k == j else p for k, p in enumerate(pts)]
        second = [mid if k == i else p for k, p in enumerate(pts)]
        return [first, second]
    return None


def describe_cell(pts, max_witness=DEFAULT_MAX_WITNESS, max_cycles=10_000):
    """Describe one cell without subdividing; status Complete or a reason to split."""
    H = [ParamVector(p) for p in pts]
    for v in H:
        if not schur_cohn_contains(v).inside:
            return RegionDescription(pts, INCONCLUSIVE, reason=f"vertex {v} outside the Schur-Cohn region")
    try:
        g = witness_graph_region(H, max_witness)
        cycles = enumerate_cycles(_pruned_graph(g, H), max_cycles)
    except SizeExceeded as exc:
        return RegionDescription(pts, "split", reason=str(exc))
    except CycleCountExceeded as exc:
        return RegionDescription(pts, "split", reason=str(exc))
    cutouts = []
    hull = HullSystem(pts)
    for pi in cycles:
        if pi.is_zero():
            continue
        poly = cutout_polyhedron(pi, g.d)
        if intersect_with_region(poly, hull) == NONEMPTY:
            cutouts.append((pi, poly))
    return RegionDescription(pts, COMPLETE, cutouts)


def _describe_job(args):
    return describe_cell(*args)


def describe_region(H_vertices, max_witness=DEFAULT_MAX_WITNESS, max_cycles=10_000, max_depth=10, jobs=1):
    """Certified description of the finiteness region inside the hull.

    Cells whose witness graph or cycle count exceeds the budget are bisected
    along their longest edge, down to ``max_depth`` levels.
    """
    root_pts = _hull_points(H_vertices)
    jobs = int(os.environ.get("SRS_JOBS", jobs))
    root = RegionDescription(root_pts, SUBDIVIDED)
    pending = [(root, root_pts, 0)]
    results = {}
    while pending:
        args = [(pts, max_witness, max_cycles) for _, pts, _ in pending]
        if jobs > 1 and len(args) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                outs = list(pool.map(_describe_job, args))
        else:
            outs = [_describe_job(a) for a in args]
        nxt = []
        for (node, pts, depth), out in zip(pending, outs):
            if out.status != "split":
                results[id(node)] = out
                continue
            parts = bisect_hull(pts) if depth < max_depth else None
            if parts is None:
                results[id(node)] = RegionDescription(pts, INCONCLUSIVE, reason=out.reason)
                continue
            node.children = [RegionDescription(p, SUBDIVIDED) for p in parts]
            results[id(node)] = node
            for child, p in zip(node.children, parts):
                nxt.append((child, p, depth + 1))
        pending = nxt

    def assemble(node):
        res = results[id(node)]
        if res is node:
            node.children = [assemble(c) for c in node.children]
            return node
        return res

    return assemble(root)
