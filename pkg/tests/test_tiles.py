import json
from fractions import Fraction

import pytest

from oracles import periodic_points_brute
from srs.conjugacy import BetaSystem, phi_map
from srs.core import ParamVector, tau
from srs.errors import IoError, NotExpanding, NotMonic, UnsupportedDimension
from srs.linalg import mat_mul, mat_vec
from srs.tiles import (
    ContractionData,
    ball_bound,
    beta_tile_transport,
    conjugate_embedding,
    covering_degree_sample,
    emit,
    purely_periodic_points,
    render,
    self_affine_parameter,
    self_affine_transport,
    tile_cloud,
    tile_interval,
    transport_center,
    v_inverse,
    v_matrix,
)

KNUTH = ParamVector([Fraction(1, 2), 1])
DEGENERATE = ParamVector([Fraction(9, 10), Fraction(-11, 20)])


def test_degenerate_tiles_are_points():
    data = ContractionData(DEGENERATE)
    for x in [(-1, -1), (-1, 1), (1, 2), (2, 1), (1, -1)]:
        for depth in (0, 5, 12):
            cloud = tile_cloud(DEGENERATE, x, depth, contraction=data)
            assert len(cloud.points) == 1


def test_ball_bound_covers_brute_force_periodic_points():
    bound = ball_bound(DEGENERATE)
    assert bound > 0
    assert all(max(abs(v) for v in p) <= bound for p in periodic_points_brute((Fraction(9, 10), Fraction(-11, 20))))


def test_purely_periodic_points_small_cases():
    assert purely_periodic_points(ParamVector([0, 0])) == [(0, 0)]
    assert purely_periodic_points(KNUTH) == [(0, 0)]
    third = ParamVector([Fraction(-2, 3)])
    assert set(purely_periodic_points(third)) == set(periodic_points_brute((Fraction(-2, 3),)))
    assert {(0,), (1,)} <= set(purely_periodic_points(third))


def test_tail_bounds_decrease():
    data = ContractionData(KNUTH)
    tails = [data.tail(n) for n in range(20)]
    assert all(a >= b for a, b in zip(tails, tails[1:]))
    assert tails[0] == data.ball_bound()


def test_clouds_stay_within_the_hausdorff_bound():
    data = ContractionData(KNUTH)
    prev = tile_cloud(KNUTH, (0, 0), 0, contraction=data)
    for depth in range(1, 9):
        cloud = tile_cloud(KNUTH, (0, 0), depth, contraction=data)
        slack = data.tail(depth - 1)
        for p in cloud.points:
            assert min(max(abs(a - b) for a, b in zip(p, q)) for q in prev.points) <= slack
        prev = cloud


def test_tile_interval_one_half():
    r = ParamVector([Fraction(1, 2)])
    iv = tile_interval(r, 0, 14)
    lo, hi = iv.length_bounds()
    assert lo <= iv.length <= hi
    assert hi - lo <= 4 * ContractionData(r).tail(14)
    # neighbouring tiles T(0) and T(1) overlap in at most a point
    nxt = tile_interval(r, 1, 14)
    assert nxt.lo[1] >= iv.hi[0]
    with pytest.raises(UnsupportedDimension):
        tile_interval(KNUTH, 0, 2)


def test_covering_degree_knuth():
    # an upper estimate that tightens as the inflation shrinks
    counts = [covering_degree_sample(KNUTH, (0, 0), depth) for depth in (6, 10, 14)]
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] == 1
    assert covering_degree_sample(KNUTH, (0.1234, 0.0567), 18) == 1


def test_beta_transport_matches_conjugate_embedding():
    bs = BetaSystem([-1, -1, -1, 1], (1, 2))
    for x in [(0, 0), (1, 0), (3, -2), (-5, 7)]:
        got = transport_center(bs, x)
        want = conjugate_embedding(bs, phi_map(bs, x))
        assert all(abs(a - b) < 1e-9 for a, b in zip(got, want))
    cloud = tile_cloud(bs.r, (0, 0), 3)
    pts = beta_tile_transport(bs, cloud)
    assert len(pts) == len(cloud.points)
    with pytest.raises(ValueError):
        beta_tile_transport(bs, tile_cloud(KNUTH, (0, 0), 1))


def test_v_matrix_and_inverse():
    assert v_matrix([2, 2, 1]) == [[1, 2], [0, 1]]
    assert v_inverse([2, 2, 1]) == [[1, -2], [0, 1]]
    for P in ([3, 3, 3, 1], [5, 4, 1], [7, 1, -2, 4, 1]):
        V = v_matrix(P)
        d = len(V)
        assert mat_mul(V, v_inverse(P)) == [[int(i == j) for j in range(d)] for i in range(d)]


def test_self_affine_transport():
    P = [2, 2, 1]
    r = self_affine_parameter(P)
    assert r.coords == KNUTH.coords
    cloud = tile_cloud(r, (1, 0), 5)
    moved = self_affine_transport(P, cloud)
    V = v_matrix(P)
    assert moved == frozenset(tuple(mat_vec(V, list(p))) for p in cloud.points)
    with pytest.raises(NotMonic):
        self_affine_parameter([2, 2, 3])
    with pytest.raises(NotExpanding):
        self_affine_parameter([1, 0, 1])


def test_render_formats(tmp_path):
    cloud = tile_cloud(KNUTH, (0, 0), 4)
    data = json.loads(render(cloud, "json"))
    assert data["depth"] == 4 and len(data["points"]) == len(cloud.points)
    rows = render(cloud, "csv").splitlines()
    assert rows[0] == "tile,x0,x1" and len(rows) == len(cloud.points) + 1
    svg = render([cloud, tile_cloud(KNUTH, (1, 0), 4)], "svg")
    assert svg.startswith("<svg") and svg.count("<circle") == len(cloud.points) + len(tile_cloud(KNUTH, (1, 0), 4).points)
    iv = tile_interval(ParamVector([Fraction(-2, 3)]), 0, 6)
    assert render(iv, "csv").splitlines()[0] == "center,depth,lo_min,lo_max,hi_min,hi_max"
    assert "<line" in render(iv, "svg")
    with pytest.raises(ValueError):
        render(cloud, "png")
    target = tmp_path / "t.json"
    emit(cloud, "json", str(target))
    assert json.loads(target.read_text())["depth"] == 4
    with pytest.raises(IoError):
        emit(cloud, "json", str(tmp_path / "missing" / "t.json"))


def test_svg_rejects_three_dimensions():
    cloud = tile_cloud(ParamVector([Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]), (0, 0, 0), 1)
    with pytest.raises(UnsupportedDimension):
        render(cloud, "svg")


def test_nondegenerate_nearby_tile_grows():
    r = ParamVector([Fraction(4, 5), Fraction(-49, 50)])
    data = ContractionData(r)
    sizes = [len(tile_cloud(r, (0, 0), depth, contraction=data).points) for depth in (0, 4, 8)]
    assert sizes[0] == 1 and sizes[-1] > sizes[0]


def test_tau_moves_tile_centres():
    # the tile of tau(x) contains R times points of the tile of x
    data = ContractionData(KNUTH)
    x = (3, -1)
    cloud = tile_cloud(KNUTH, x, 3, contraction=data)
    image = tile_cloud(KNUTH, tau(KNUTH, x), 4, contraction=data)
    scaled = {tuple(mat_vec(data.R, list(p))) for p in cloud.points}
    assert scaled <= image.points
