from fractions import Fraction
from itertools import product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import tau_plain
from srs.core import PERIODIC, ParamVector, orbit, tau
from srs.errors import CycleCountExceeded, NotInSchurCohn, SizeExceeded
from srs.exactnum import field_make
from srs.polyhedra import Inequality, feasible, hull_inequalities, sample_point
from srs.witness import (
    BOUNDARY_ONLY,
    COMPLETE,
    EMPTY,
    NONEMPTY,
    VectorCycle,
    WitnessGraph,
    _pruned_graph,
    bisect_hull,
    boundary_certificate,
    box_vertices,
    cutout_polyhedron,
    decide_Ddp,
    decide_finiteness,
    describe_region,
    enumerate_cycles,
    intersect_with_region,
    region_bound_M,
    sample_in_region,
    unit_vectors,
    witness_graph_region,
    witness_set_point,
)

F = Fraction
GOLDEN = field_make([-1, -1, 1], (1, 2))
FIVE_CYCLE = VectorCycle.from_points([(-1, -1), (-1, 1), (1, 2), (2, 1), (1, -1)])


# exact feasibility


def test_strict_and_weak_inequalities():
    x_pos = Inequality((F(1),), F(0), True)
    x_nonpos = Inequality((F(-1),), F(0), False)
    x_nonneg = Inequality((F(1),), F(0), False)
    assert not feasible([x_pos, x_nonpos], 1)
    assert sample_point([x_nonneg, x_nonpos], 1) == [0]
    assert feasible([x_pos], 1)
    pt = sample_point([x_pos, Inequality((F(-1),), F(1), True)], 1)
    assert 0 < pt[0] < 1


def test_hull_facets_of_a_square():
    facets = hull_inequalities(box_vertices([0, 0], [1, 1]))
    assert len(facets) == 4
    assert all(q.holds((F(1, 2), F(1, 2))) for q in facets)
    assert not all(q.holds((F(2), F(1, 2))) for q in facets)
    assert hull_inequalities([(0, 0), (1, 1), (2, 2)]) is None


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-6, 6), st.booleans()), min_size=1, max_size=6))
def test_feasibility_matches_grid_search(rows):
    ineqs = [Inequality((F(a), F(b)), F(c), s) for a, b, c, s in rows]
    pt = sample_point(ineqs, 2)
    grid = [F(i, 12) for i in range(-120, 121)]
    hit = any(all(q.holds((x, y)) for q in ineqs) for x, y in product(grid[::6], grid[::6]))
    if pt is not None:
        assert all(q.holds(pt) for q in ineqs)
    else:
        assert not hit


# witness sets and decisions


def test_unit_vectors_and_zero_parameter():
    assert sorted(unit_vectors(2)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    w = witness_set_point(ParamVector([0, 0]))
    assert set(w.points) == set(unit_vectors(2)) | {(0, 0), (0, 1), (0, -1)} | {(1, 0), (-1, 0)}


def test_witness_set_is_closed():
    r = ParamVector([F(9, 10), F(-11, 20)])
    w = witness_set_point(r)
    for z in unit_vectors(2):
        assert z in w
    for z in w.points:
        assert tau(r, z) in w
        assert tuple(-v for v in tau(r, tuple(-v for v in z))) in w
    for p in FIVE_CYCLE.points():
        assert p in w


def test_decide_examples():
    assert decide_finiteness(ParamVector([F(1, 2), 1])).finite
    res = decide_finiteness(ParamVector([F(-2, 3)]))
    assert not res.finite and res.cycle.entries == (1,)
    assert decide_finiteness(ParamVector([GOLDEN.gen() - 1])).finite
    with pytest.raises(NotInSchurCohn):
        decide_finiteness(ParamVector([1, 2]))
    with pytest.raises(SizeExceeded):
        witness_set_point(ParamVector([F(99, 100), F(-197, 100)]), max_size=10)


def test_boundary_certificates():
    cert = boundary_certificate(ParamVector([F(-1, 2), F(-1, 2)]))
    assert cert["kind"] == "fixed point"
    r = ParamVector([F(-1, 2), F(-1, 2)])
    assert tau(r, (1, 1)) == (1, 1)
    cert2 = boundary_certificate(ParamVector([F(1, 2), F(3, 2)]))
    assert cert2["kind"] == "2-cycle"
    a, b = (tuple(p) for p in cert2["cycle"])
    r2 = ParamVector([F(1, 2), F(3, 2)])
    assert tau(r2, a) == b and tau(r2, b) == a
    with pytest.raises(NotInSchurCohn) as info:
        decide_finiteness(r)
    assert info.value.to_json()["certificate"]["kind"] == "fixed point"


def test_decide_Ddp():
    assert decide_Ddp(ParamVector([F(1, 2), 1]), 1)
    # tau(z) = ceil(z / 2) for r = -1/2: the only nonzero cycle is <1>, of odd length
    assert decide_Ddp(ParamVector([F(-1, 2)]), 2)
    assert not decide_Ddp(ParamVector([F(-1, 2)]), 1)
    assert not decide_Ddp(ParamVector([F(-2, 3)]), 1)


def test_region_bound_M():
    r = ParamVector([F(1, 3), F(1, 2)])
    assert region_bound_M([r], (3, -5)) == 2 == tau(r, (3, -5))[-1]
    assert region_bound_M([ParamVector([0]), ParamVector([F(1, 2)])], (3,)) == 0


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_region_bound_M_dominates_grid(z):
    box = box_vertices([F(1, 4), F(-1, 2)], [F(1, 2), F(1, 4)])
    m = region_bound_M(box, z)
    grid = [(F(1, 4) + F(i, 40), F(-1, 2) + F(3 * j, 64)) for i in range(11) for j in range(17)]
    assert max(-((x * z[0] + y * z[1]).__floor__()) for x, y in grid) == m


def test_singleton_region_graph_matches_point_dynamics():
    r = ParamVector([F(9, 10), F(-11, 20)])
    g = witness_graph_region([r])
    for z, succ in g.edges.items():
        assert tau(r, z) in succ
    pruned = _pruned_graph(g, [r])
    for z, succ in pruned.edges.items():
        assert succ == [tau(r, z)]
    realised = enumerate_cycles(pruned)
    assert FIVE_CYCLE in realised
    for c in realised:
        pts = c.points()
        for a, b in zip(pts, pts[1:] + pts[:1]):
            assert tau_plain((F(9, 10), F(-11, 20)), a) == b
    # every tau_r cycle through a witness is among them
    for z in g.vertices:
        res = orbit(r, z, 1000)
        assert VectorCycle.from_points(res.cycle) in realised


def test_enumerate_cycles_planted():
    edges = {(0,): [(0,)], (1,): [(2,)], (2,): [(3,)], (3,): [(1,), (4,)], (4,): [(5,)], (5,): []}
    g = WitnessGraph(frozenset(edges), edges, 1)
    cycles = enumerate_cycles(g)
    assert [c.entries for c in cycles] == [(0,), (1, 2, 3)]
    with pytest.raises(CycleCountExceeded):
        enumerate_cycles(g, max_cycles=1)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 9), st.data())
def test_enumerate_cycles_matches_networkx_count(n, data):
    nodes = [(i,) for i in range(n)]
    edges = {v: sorted(set(data.draw(st.lists(st.sampled_from(nodes), max_size=3)))) for v in nodes}
    g = WitnessGraph(frozenset(nodes), edges, 1)
    dg = nx.DiGraph([(a, b) for a, bs in edges.items() for b in bs])
    # brute force: a cycle is a rotation class of a simple closed walk
    found = set()
    def dfs(path):
        for nxt in edges[path[-1]]:
            if nxt == path[0]:
                k = min(range(len(path)), key=lambda i: path[i])
                found.add(tuple(path[k:] + path[:k]))
            elif nxt not in path and nxt > path[0]:
                dfs(path + [nxt])
    for v in nodes:
        dfs([v])
    assert len(enumerate_cycles(g)) == len(found)
    assert len(found) == sum(1 for _ in nx.simple_cycles(dg))


def test_cutout_polyhedra():
    zero = cutout_polyhedron(VectorCycle((0,), 1))
    assert zero.contains(ParamVector([F(17, 3)]))
    one = cutout_polyhedron(VectorCycle((1,), 1))
    assert one.contains(ParamVector([-1])) and one.contains(ParamVector([F(-1, 2)]))
    assert not one.contains(ParamVector([0]))
    tri = cutout_polyhedron(FIVE_CYCLE, 2)
    bary = ParamVector([(F(2, 3) + 1 + F(4, 3)) / 3, (F(-1, 3) - 1 - F(2, 3)) / 3])
    assert tri.contains(bary)
    res = orbit(bary, (-1, -1), 50)
    assert res.status == PERIODIC and set(res.cycle) == set(FIVE_CYCLE.points())


def test_intersect_with_region():
    assert intersect_with_region(cutout_polyhedron(VectorCycle((0,), 1)), [(F(1, 4),), (F(1, 2),)]) == NONEMPTY
    one = cutout_polyhedron(VectorCycle((1,), 1))
    assert intersect_with_region(one, [(F(1, 4),), (F(1, 2),)]) == EMPTY
    # [-1, 0) meets [0, 1/2] only in its missing endpoint
    assert intersect_with_region(one, [(F(0),), (F(1, 2),)]) == BOUNDARY_ONLY
    tri = cutout_polyhedron(FIVE_CYCLE, 2)
    bary = ((F(2, 3) + 1 + F(4, 3)) / 3, (F(-1, 3) - 1 - F(2, 3)) / 3)
    assert intersect_with_region(tri, [bary]) == NONEMPTY


def test_describe_region_examples():
    quadrant = describe_region(box_vertices([F(1, 16), F(0)], [F(1, 8), F(1, 8)]))
    assert all(leaf.status == COMPLETE and not leaf.cutouts for leaf in quadrant.leaves())
    # around the origin the box reaches r_0 + r_1 < 0, where (1, 1) is a fixed point
    small = describe_region(box_vertices([F(-1, 8), F(-1, 8)], [F(1, 8), F(1, 8)]))
    assert [[pi.entries for pi, _ in leaf.cutouts] for leaf in small.leaves()] == [[(1,), (0, 1)]]
    assert tau(ParamVector([F(-1, 8), F(-1, 8)]), (1, 1)) == (1, 1)
    line = describe_region([(F(0),), (F(3, 4),)])
    assert all(leaf.status == COMPLETE and not leaf.cutouts for leaf in line.leaves())
    knuth = describe_region(box_vertices([F(1, 2) - F(1, 128), F(1) - F(1, 128)], [F(1, 2) + F(1, 128), F(1) + F(1, 128)]))
    assert all(not leaf.cutouts for leaf in knuth.leaves())


def test_describe_region_is_deterministic_and_sampled_points_cycle():
    box = box_vertices([F(3, 5), F(-9, 20)], [F(4, 5), F(-1, 4)])
    a = describe_region(box).to_json()
    b = describe_region(box).to_json()
    assert a == b
    for leaf in describe_region(box).leaves():
        for pi, poly in leaf.cutouts:
            r = sample_in_region(poly, leaf.vertices)
            res = orbit(r, pi.points()[0], 1000)
            assert res.status == PERIODIC and set(res.cycle) == set(pi.points())


def test_refinement_keeps_cutouts():
    box = box_vertices([F(3, 5), F(-9, 20)], [F(4, 5), F(-1, 4)])
    whole = {pi for leaf in describe_region(box).leaves() for pi, _ in leaf.cutouts}
    parts = set()
    for half in bisect_hull(box):
        parts |= {pi for leaf in describe_region(half).leaves() for pi, _ in leaf.cutouts}
    assert parts == whole


def test_bisect_simplex():
    tri = [(F(0), F(0)), (F(1, 2), F(0)), (F(0), F(1, 2))]
    a, b = bisect_hull(tri)
    assert len(a) == len(b) == 3
    assert (F(1, 4), F(1, 4)) in a and (F(1, 4), F(1, 4)) in b


def test_region_jobs_env_gives_same_answer(monkeypatch):
    box = box_vertices([F(3, 5), F(-9, 20)], [F(4, 5), F(-1, 4)])
    serial = describe_region(box, max_witness=200, max_depth=2).to_json()
    monkeypatch.setenv("SRS_JOBS", "2")
    parallel = describe_region(box, max_witness=200, max_depth=2).to_json()
    assert serial == parallel
