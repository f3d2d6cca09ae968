import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pardelaunay.construction import (
    GeneralPositionError,
    GeneralPositionReport,
    augment_sentinels,
    build_graph,
    check_general_position,
    circumsquares,
    grid_voronoi_oracle,
    near_triangulation_check,
    proper_crossings,
    revalidate_witnesses,
)
from pardelaunay.geometry import DegenerateInputError, ShapeSpec, from_square_space, to_square_space
from pardelaunay.sampling import random_points

SQUARE = ShapeSpec(1.0, math.pi / 2)


def brute_edges(points, shape, tol=1e-9):
    """Independent exact oracle for the edge set.

    An empty square with i and j on its boundary can be shrunk to the
    smallest one, which spans the pair's bounding box along its longer axis
    and slides along the other.  Each other point strictly inside the long
    range blocks an open interval of slide positions; the edge exists iff
    some position stays free.
    """
    q = to_square_space(shape, points)
    n = len(q)
    found = set()
    for i in range(n):
        for j in range(i + 1, n):
            lo, hi = np.minimum(q[i], q[j]), np.maximum(q[i], q[j])
            ax = int(np.argmax(hi - lo))
            sh = 1 - ax
            t = hi[ax] - lo[ax]
            s_min, s_max = hi[sh] - t, lo[sh]
            others = [k for k in range(n) if k not in (i, j)
                      and lo[ax] + tol < q[k, ax] < hi[ax] - tol]
            blocks = [(q[k, sh] - t + tol, q[k, sh] - tol) for k in others]
            cands = [s_min, s_max] + [x for b in blocks for x in b if s_min <= x <= s_max]
            if any(not any(b0 < c < b1 for b0, b1 in blocks) for c in cands):
                found.add((i, j))
    return found


def test_general_position_examples():
    assert check_general_position([(0, 0), (1, 1)], SQUARE).ok
    rep = check_general_position([(0, 0), (0, 1)], SQUARE)
    assert not rep.ok and rep.violations[0][1] == "shared-u"
    s = ShapeSpec(2.0, 1.0)
    rep = check_general_position([(0, 0), tuple(s.short_vec)], s)
    assert [k for _, k in rep.violations] == ["shared-v"]
    rep = check_general_position([(0, 0.2), (0.4, 0), (1, 0.6), (0.7, 1)], SQUARE)
    assert any(k == "cocircular-square" for _, k in rep.violations)


def test_report_invariant():
    with pytest.raises(ValueError):
        GeneralPositionReport(True, [("x", "shared-u")])


def test_sentinels_single_point():
    aug = augment_sentinels([(0.0, 0.0)], SQUARE)
    assert aug.shape == (5, 2)
    d = np.max(np.abs(to_square_space(SQUARE, aug[1:]) - to_square_space(SQUARE, aug[0])), axis=1)
    assert (d >= 1e6 * 0.99).all()


def test_sentinels_far_from_unit_cloud(shape):
    rng = np.random.default_rng(3)
    sq = rng.uniform(0, 1, (20, 2))
    pts = from_square_space(shape, sq)
    aug = augment_sentinels(pts, shape, margin=1e6)
    q = to_square_space(shape, aug)
    assert np.allclose(aug[:20], pts)
    d = np.max(np.abs(q[20:, None, :] - q[None, :20, :]), axis=2)
    assert d.min() >= 1e5
    assert check_general_position(aug, shape).ok


def test_circumsquares_examples():
    sqs = circumsquares((0, 0), (1, 1), (0.5, 0))
    assert any(abs(w.corner.x) < 1e-12 and abs(w.corner.y) < 1e-12 and abs(w.side - 1) < 1e-12 for w in sqs)
    for p in [(0, 0), (2, 1), (1, 3)]:
        assert all(w.on_boundary(p) for w in circumsquares((0, 0), (2, 1), (1, 3)))
    assert circumsquares((0, 0), (2, 1), (1, 3))
    with pytest.raises(DegenerateInputError):
        circumsquares((0, 0), (0, 1), (0, 3))


def test_circumsquares_unit_square():
    sqs = circumsquares((0, 0.2), (1, 1), (0.5, 0))
    assert any(abs(w.corner.x) < 1e-12 and abs(w.corner.y) < 1e-12 and abs(w.side - 1) < 1e-12 for w in sqs)


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=3, unique=True))
def test_circumsquares_put_points_on_boundary(pts):
    q = np.array(pts)
    if min(abs(q[i, c] - q[j, c]) for i in range(3) for j in range(i + 1, 3) for c in (0, 1)) < 1e-6:
        return
    for w in circumsquares(*pts):
        assert w.side > 0
        for p in pts:
            assert w.on_boundary(p, tol=1e-7)


def test_two_points_single_edge():
    g = build_graph([(0, 0), (1, 0.3)], SQUARE)
    assert g.edge_set() == {(0, 1)}
    assert not revalidate_witnesses(g)


def test_three_point_example():
    g = build_graph([(0, 0), (1, 0.1), (0.5, 0.9)], SQUARE)
    assert g.edge_set() == {(0, 1), (0, 2), (1, 2)}
    assert len(g.triangles) == 1


def test_rejects_degenerate():
    with pytest.raises(GeneralPositionError) as exc:
        build_graph([(0, 0), (0, 1), (1, 2)], SQUARE)
    assert exc.value.report.violations


def test_matches_brute_force_oracle(shape):
    for seed in range(8):
        rng = np.random.default_rng([seed, 11])
        pts = random_points(rng, int(rng.integers(3, 9)), shape)
        assert build_graph(pts, shape).edge_set() == brute_edges(pts, shape)


def test_structure_random(shape):
    for seed in range(10):
        rng = np.random.default_rng([seed, 5])
        n = int(rng.integers(3, 30))
        pts = random_points(rng, n, shape)
        g = build_graph(pts, shape)
        assert not proper_crossings(g.points, [(i, j) for i, j, _ in g.edges])
        assert len(g.edges) <= 3 * n - 6
        assert not revalidate_witnesses(g)
        assert near_triangulation_check(g.augmented).ok
        es = [(i, j) for i, j, _ in g.edges]
        assert len(es) == len(set(es)) and all(i < j for i, j in es)


def test_point_inside_witness_removes_edge():
    pts = np.array([(0.0, 0.0), (1.0, 0.37), (2.1, 1.3), (0.4, 1.9)])
    g = build_graph(pts, SQUARE)
    i, j, w = g.edges[0]
    centre = from_square_space(SQUARE, [w.corner.x + w.side / 2, w.corner.y + w.side / 2])
    # any empty square through i and j would need to avoid the centre point
    g2 = build_graph(np.vstack([pts, centre + 1e-7]), SQUARE)
    if (i, j) in g2.edge_set():
        for a, b, w2 in g2.edges:
            if (a, b) == (i, j):
                assert not w2.contains_strictly(to_square_space(SQUARE, centre + 1e-7))


def test_affine_invariance(shape):
    rng = np.random.default_rng(17)
    pts = random_points(rng, 15, shape)
    g = build_graph(pts, shape)
    g_sq = build_graph(to_square_space(shape, pts), SQUARE)
    assert g.edge_set() == g_sq.edge_set()


def test_affine_emptiness_correspondence(shape):
    rng = np.random.default_rng(23)
    pts = rng.uniform(0, 5, (40, 2))
    q = to_square_space(shape, pts)
    for _ in range(50):
        corner = rng.uniform(0, 3, 2)
        side = rng.uniform(0.1, 2)
        in_sq = ((q > corner) & (q < corner + side)).all(axis=1)
        # parallelogram test in original coordinates: solve p = c + s*short + t*long
        c0 = from_square_space(shape, corner)
        basis = np.column_stack([shape.short_vec, shape.long_vec]) * side
        st_ = np.linalg.solve(basis, (pts - c0).T).T
        in_par = ((st_ > 0) & (st_ < 1)).all(axis=1)
        assert (in_sq == in_par).all()


def test_shrink_closure():
    """Any empty square holding two points certifies their edge."""
    rng = np.random.default_rng(2)
    pts = random_points(rng, 25, SQUARE)
    g = build_graph(pts, SQUARE)
    es = g.edge_set()
    for _ in range(300):
        corner = rng.uniform(0, 10, 2)
        side = rng.uniform(0.2, 4)
        closed = ((pts >= corner) & (pts <= corner + side)).all(axis=1)
        idx = np.flatnonzero(closed)
        if len(idx) == 2:
            assert tuple(idx) in es


def test_oracle_two_points():
    res = grid_voronoi_oracle([(0, 0), (1, 0.3)], SQUARE, 64)
    assert res.edges == {(0, 1)}


def test_oracle_rejects_low_resolution():
    with pytest.raises(ValueError):
        grid_voronoi_oracle([(0, 0), (1, 0.3)], SQUARE, 32)


def test_oracle_connected_on_clusters():
    rng = np.random.default_rng(9)
    pts = np.vstack([rng.normal(0, 0.01, (5, 2)), rng.normal(3, 0.01, (5, 2))])
    res = grid_voronoi_oracle(pts, SQUARE, 256)
    adj = {i: set() for i in range(10)}
    for i, j in res.edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, todo = {0}, [0]
    while todo:
        for w in adj[todo.pop()] - seen:
            seen.add(w)
            todo.append(w)
    assert len(seen) == 10


def test_oracle_agrees_on_small_sets():
    shape = ShapeSpec(2.0, 1.0)
    agree = 0
    for seed in range(10):
        rng = np.random.default_rng([seed, 8])
        pts = random_points(rng, 8, shape, min_sep_cells=10)
        agree += grid_voronoi_oracle(pts, shape, 1024).edges == build_graph(pts, shape).edge_set()
    assert agree >= 9
