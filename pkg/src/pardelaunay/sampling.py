"""Seeded random point sets and oracle diagnostics used by campaigns."""

from __future__ import annotations

import numpy as np

from .construction import DelaunayGraph, OracleResult, augmented_of, check_general_position
from .geometry import ShapeSpec, to_square_space

MAX_DRAWS = 1000


def random_points(rng: np.random.Generator, n: int, shape: ShapeSpec, box: float = 10.0,
                  min_sep_cells: float | None = None, resolution: int = 1024) -> np.ndarray:
    """Uniform points in ``[0, box]^2`` that are in general position.

    With ``min_sep_cells`` set, every pair is also at least that many oracle
    grid cells apart in square-space Chebyshev distance (cells as laid out by
    :func:`grid_voronoi_oracle` at ``resolution``).  Whole sets are redrawn
    until both conditions hold.
    """
    for _ in range(MAX_DRAWS):
        pts = rng.uniform(0.0, box, size=(n, 2))
        if min_sep_cells is not None and n >= 2:
            q = to_square_space(shape, pts)
            side = float(np.max(q.max(axis=0) - q.min(axis=0))) or 1.0
            cell = 2.0 * side / resolution
            cheb = np.max(np.abs(q[:, None, :] - q[None, :, :]), axis=2)
            np.fill_diagonal(cheb, np.inf)
            if cheb.min() < min_sep_cells * cell:
                continue
        if check_general_position(pts, shape).ok:
            return pts
    raise RuntimeError("could not draw a valid point set")


def _centre(w) -> np.ndarray:
    return np.array([w.corner.x + w.side / 2, w.corner.y + w.side / 2])


def voronoi_edge_length(aug: DelaunayGraph, i: int, j: int) -> float:
    """Square-space length estimate of the Voronoi edge dual to ``(i, j)``.

    Measured as the Chebyshev distance between the witness centres of the two
    triangles on the edge; the dual edge joins those two centres.
    """
    key = (min(i, j), max(i, j))
    cents = [_centre(w) for a, b, c, w in aug.triangles if key[0] in (a, b, c) and key[1] in (a, b, c)]
    if len(cents) < 2:
        return float("inf")
    return float(np.max(np.abs(cents[0] - cents[1])))


def _crossing_edges(points, edge, edges):
    p, q = points[edge[0]], points[edge[1]]

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    out = []
    for r, s in edges:
        if len({r, s, *edge}) < 4:
            continue
        a, b = points[r], points[s]
        if orient(p, q, a) * orient(p, q, b) < 0 and orient(a, b, p) * orient(a, b, q) < 0:
            out.append((r, s))
    return out


def oracle_diagnostics(graph: DelaunayGraph, oracle: OracleResult) -> list[dict]:
    """Explain each disagreement between ``graph`` and the raster oracle.

    An edge only in the graph is charged to its own dual Voronoi edge; an
    edge only in the oracle to the shortest dual edge among graph edges that
    cross it.  ``feature_cells`` is that length in oracle cells.
    """
    aug = augmented_of(graph)
    ours = graph.edge_set()
    out = []
    for e in sorted(ours - oracle.edges):
        length = voronoi_edge_length(aug, *e)
        out.append({"edge": list(e), "kind": "missing_in_oracle",
                    "feature_cells": length / oracle.cell})
    for e in sorted(oracle.edges - ours):
        cross = _crossing_edges(graph.points, e, sorted(ours))
        length = min((voronoi_edge_length(aug, *c) for c in cross), default=0.0)
        out.append({"edge": list(e), "kind": "extra_in_oracle",
                    "feature_cells": length / oracle.cell})
    return out
