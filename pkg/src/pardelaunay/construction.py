"""Exact construction of the parallelogram Delaunay graph.

Everything happens in square space, where homothets of the parallelogram are
axis-aligned squares.  A triple of points spans a Delaunay triangle exactly
when one of its circumsquares has an empty interior, so the graph is read off
the empty circumsquares of the point set augmented with four far sentinels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .geometry import BOUNDARY_TOL, DegenerateInputError, Point, ShapeSpec, from_square_space, to_square_space

DEFAULT_MARGIN = 1e6
N_SENTINELS = 4


class WitnessSquare(NamedTuple):
    """Square-space image of a homothet: SW corner and side length."""

    corner: Point
    side: float

    def contains_strictly(self, q, tol=BOUNDARY_TOL) -> bool:
        u0, v0 = self.corner
        t = self.side
        return u0 + tol < q[0] < u0 + t - tol and v0 + tol < q[1] < v0 + t - tol

    def on_boundary(self, q, tol=BOUNDARY_TOL) -> bool:
        u0, v0 = self.corner
        t = self.side
        closed = u0 - tol <= q[0] <= u0 + t + tol and v0 - tol <= q[1] <= v0 + t + tol
        return closed and not self.contains_strictly(q, tol)


@dataclass
class DelaunayGraph:
    """Vertices, witnessed edges and witnessed triangles.

    When ``n_sentinels`` is non-zero the last ``n_sentinels`` points are the
    far corner points added by :func:`augment_sentinels`.  A graph returned by
    :func:`build_graph` keeps its sentinel-augmented counterpart in
    ``augmented``.
    """

    points: np.ndarray
    edges: list
    triangles: list
    shape: ShapeSpec
    n_sentinels: int = 0
    augmented: "DelaunayGraph | None" = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def n_original(self) -> int:
        return len(self.points) - self.n_sentinels

    def edge_set(self) -> set:
        return {(i, j) for i, j, _ in self.edges}

    def square_points(self) -> np.ndarray:
        return to_square_space(self.shape, self.points)

    def triangle_witness(self, tri) -> WitnessSquare:
        key = tuple(sorted(tri))
        return self._triangle_index()[key]

    def _triangle_index(self) -> dict:
        idx = getattr(self, "_tri_idx", None)
        if idx is None:
            idx = {(i, j, k): w for i, j, k, w in self.triangles}
            self._tri_idx = idx
        return idx

    def adjacency(self) -> dict:
        adj = {i: set() for i in range(self.n)}
        for i, j, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass
class GeneralPositionReport:
    ok: bool
    violations: list

    def __post_init__(self):
        if self.ok != (not self.violations):
            raise ValueError("ok must be true exactly when there are no violations")


class GeneralPositionError(ValueError):
    def __init__(self, report: GeneralPositionReport):
        self.report = report
        shown = "; ".join(f"{kind} {desc}" for desc, kind in report.violations[:5])
        more = len(report.violations) - 5
        suffix = f" (+{more} more)" if more > 0 else ""
        super().__init__(f"points are not in general position: {shown}{suffix}")


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise DegenerateInputError("point coordinates must be finite")
    return pts


def _close_pairs(values: np.ndarray, tol: float) -> list:
    order = np.argsort(values, kind="stable")
    out = []
    for a in range(len(order)):
        b = a + 1
        while b < len(order) and values[order[b]] - values[order[a]] <= tol:
            i, j = sorted((int(order[a]), int(order[b])))
            out.append((i, j))
            b += 1
    return sorted(out)


def check_general_position(points, shape: ShapeSpec, tol: float = BOUNDARY_TOL,
                           limit: int = 1000) -> GeneralPositionReport:
    """Report pairs sharing a square-space coordinate and four-point squares.

    A pair sharing ``u`` lies on a line parallel to the long side; sharing
    ``v`` means a line parallel to the short side.  The square check lists
    triples with a circumsquare carrying a fourth point on its boundary; it
    runs only when the coordinates are distinct, and stops after ``limit``
    findings.
    """
    pts = _as_points(points)
    if len(pts) == 0:
        raise DegenerateInputError("need at least one point")
    q = to_square_space(shape, pts)
    violations = [((i, j), "shared-u") for i, j in _close_pairs(q[:, 0], tol)]
    violations += [((i, j), "shared-v") for i, j in _close_pairs(q[:, 1], tol)]
    if not violations and len(pts) >= 4:
        quads = kernels.boundary_quadruples(q[:, 0], q[:, 1], tol, limit)
        violations += [(tuple(int(x) for x in row), "cocircular-square") for row in quads]
    return GeneralPositionReport(ok=not violations, violations=violations)


def augment_sentinels(points, shape: ShapeSpec, margin: float = DEFAULT_MARGIN) -> np.ndarray:
    """Append four far points at the corners of a large homothet.

    In square space the sentinels sit at the corners of a square centred on
    the inputs' bounding square whose half-side is ``margin`` times the
    bounding side (side 1 when the inputs are a single point).  Each corner is
    nudged by a distinct multiple of ``1e-3`` of the big square's side so no
    two sentinels share a coordinate and the four are not on one square.
    """
    pts = _as_points(points)
    if len(pts) == 0:
        raise DegenerateInputError("need at least one point")
    if not margin > 1:
        raise ValueError("margin must exceed 1")
    q = to_square_space(shape, pts)
    lo, hi = q.min(axis=0), q.max(axis=0)
    side = float(np.max(hi - lo))
    if side <= 0:
        side = 1.0
    centre = (lo + hi) / 2.0
    half = margin * side
    d = 1e-3 * 2.0 * half
    x0, x1 = centre[0] - half, centre[0] + half
    y0, y1 = centre[1] - half, centre[1] + half
    corners = np.array([
        [x0, y0],
        [x1, y0 + d],
        [x1 + 2 * d, y1 + 3 * d],
        [x0 - 3 * d, y1],
    ])
    return np.vstack([pts, from_square_space(shape, corners)])


_SIDE_ROWS = {
    "left": ((1.0, 0.0, 0.0), 0),
    "right": ((1.0, 0.0, 1.0), 0),
    "bottom": ((0.0, 1.0, 0.0), 1),
    "top": ((0.0, 1.0, 1.0), 1),
}


def circumsquares(a, b, c, tol: float = BOUNDARY_TOL) -> list[WitnessSquare]:
    """All axis-aligned squares with ``a``, ``b`` and ``c`` on the boundary.

    Inputs are square-space points, not all on one axis-parallel line.  Each
    assignment of the points to three distinct sides gives a 3x3 linear
    system in the corner and side; solutions with positive side and every
    point inside its side segment are kept, duplicates removed.
    """
    pts = np.array([a, b, c], dtype=float).reshape(3, 2)
    for axis in (0, 1):
        if np.ptp(pts[:, axis]) <= tol:
            raise DegenerateInputError("circumsquares: the three points share a coordinate line")
    found: list[WitnessSquare] = []
    for sides in itertools.permutations(_SIDE_ROWS, 3):
        mat = np.array([_SIDE_ROWS[s][0] for s in sides])
        rhs = np.array([pts[i, _SIDE_ROWS[s][1]] for i, s in enumerate(sides)])
        u0, v0, t = np.linalg.solve(mat, rhs)
        if t <= tol:
            continue
        ok = True
        for i, s in enumerate(sides):
            along = pts[i, 1 - _SIDE_ROWS[s][1]]
            start = u0 if _SIDE_ROWS[s][1] == 1 else v0
            if not (start - tol <= along <= start + t + tol):
                ok = False
                break
        if not ok:
            continue
        sq = WitnessSquare(Point(float(u0), float(v0)), float(t))
        if not any(_same_square(sq, f, tol) for f in found):
            found.append(sq)
    return found


def _same_square(p: WitnessSquare, q: WitnessSquare, tol: float) -> bool:
    return (abs(p.corner[0] - q.corner[0]) <= tol and abs(p.corner[1] - q.corner[1]) <= tol
            and abs(p.side - q.side) <= tol)


def _pick(current, candidate):
    if current is None or candidate.side < current.side:
        return candidate
    return current


def build_augmented(points, shape: ShapeSpec, margin: float = DEFAULT_MARGIN) -> DelaunayGraph:
    """Delaunay graph of the sentinel-augmented set (sentinels last)."""
    aug = augment_sentinels(points, shape, margin)
    q = to_square_space(shape, aug)
    tris, squares = kernels.empty_squares(q[:, 0], q[:, 1], BOUNDARY_TOL)
    tri_w: dict = {}
    for (i, j, k), (u0, v0, t) in zip(tris.tolist(), squares.tolist()):
        tri_w[(i, j, k)] = _pick(tri_w.get((i, j, k)), WitnessSquare(Point(u0, v0), t))
    edge_w: dict = {}
    for (i, j, k), w in tri_w.items():
        for e in ((i, j), (i, k), (j, k)):
            edge_w[e] = _pick(edge_w.get(e), w)
    triangles = [(i, j, k, w) for (i, j, k), w in sorted(tri_w.items())]
    edges = [(i, j, w) for (i, j), w in sorted(edge_w.items())]
    return DelaunayGraph(aug, edges, triangles, shape, n_sentinels=N_SENTINELS)


def shrink_witness(p, q, outer: WitnessSquare | None) -> WitnessSquare:
    """Smallest square with ``p`` and ``q`` on its boundary, inside ``outer``.

    The square spans the bounding box of the two points along its longer
    axis and is slid along the other axis to stay within ``outer``, so it is
    empty whenever ``outer`` is.  Witnesses through far sentinels shrink to
    the scale of the input this way.
    """
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    t = float(np.max(hi - lo))
    corner = lo.copy()
    short = int(np.argmin(hi - lo))
    floor = hi[short] - t
    if outer is not None:
        floor = max(floor, (outer.corner.x, outer.corner.y)[short])
    corner[short] = min(floor, lo[short])
    return WitnessSquare(Point(float(corner[0]), float(corner[1])), t)


def build_graph(points, shape: ShapeSpec, check: bool = True, margin: float = DEFAULT_MARGIN) -> DelaunayGraph:
    """Parallelogram Delaunay graph of ``points``.

    Raises :class:`GeneralPositionError` when ``check`` is on and the points
    are degenerate.  The sentinel-augmented graph is attached as
    ``augmented``.
    """
    pts = _as_points(points)
    n = len(pts)
    if n < 2:
        raise DegenerateInputError("need at least two points")
    if check:
        report = check_general_position(pts, shape)
        if not report.ok:
            raise GeneralPositionError(report)
    aug = build_augmented(pts, shape, margin)
    q = to_square_space(shape, pts)
    if n == 2:
        edges = [(0, 1, shrink_witness(q[0], q[1], None))]
    else:
        edges = [(i, j, shrink_witness(q[i], q[j], w)) for i, j, w in aug.edges if j < n]
    triangles = [(i, j, k, w) for i, j, k, w in aug.triangles if k < n]
    return DelaunayGraph(pts, edges, triangles, shape, augmented=aug)


# ---------------------------------------------------------------------------
# structural checks


def augmented_of(graph: DelaunayGraph, margin: float = DEFAULT_MARGIN) -> DelaunayGraph:
    """The sentinel-augmented graph, rebuilt from the points if not attached."""
    if graph.augmented is not None:
        return graph.augmented
    if graph.n_sentinels:
        return graph
    graph.augmented = build_augmented(graph.points, graph.shape, margin)
    return graph.augmented


def proper_crossings(points, edges, eps: float = 1e-12) -> list:
    """Pairs of edges whose relative interiors cross."""
    pts = np.asarray(points, dtype=float)
    e = np.array([(i, j) for i, j, *_ in edges], dtype=np.int64).reshape(-1, 2)
    if len(e) < 2:
        return []
    p, r = pts[e[:, 0]], pts[e[:, 1]]
    scale = max(1.0, float(np.abs(pts).max())) ** 2

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    out = []
    for s in range(len(e) - 1):
        rest = slice(s + 1, None)
        shared = ((e[rest, 0] == e[s, 0]) | (e[rest, 0] == e[s, 1])
                  | (e[rest, 1] == e[s, 0]) | (e[rest, 1] == e[s, 1]))
        o1 = orient(p[s], r[s], p[rest])
        o2 = orient(p[s], r[s], r[rest])
        o3 = orient(p[rest], r[rest], p[s])
        o4 = orient(p[rest], r[rest], r[s])
        th = eps * scale
        cross = (((o1 > th) & (o2 < -th)) | ((o1 < -th) & (o2 > th))) & \
                (((o3 > th) & (o4 < -th)) | ((o3 < -th) & (o4 > th)))
        for t in np.nonzero(cross & ~shared)[0]:
            out.append((tuple(e[s]), tuple(e[s + 1 + t])))
    return out


def revalidate_witnesses(graph: DelaunayGraph, tol: float = BOUNDARY_TOL) -> list:
    """Edges whose stored witness fails against the graph's own point set."""
    q = graph.square_points()
    bad = []
    for i, j, w in graph.edges:
        u0, v0 = w.corner
        t = w.side
        inside = ((q[:, 0] > u0 + tol) & (q[:, 0] < u0 + t - tol)
                  & (q[:, 1] > v0 + tol) & (q[:, 1] < v0 + t - tol))
        if inside.any() or not (w.on_boundary(q[i], tol) and w.on_boundary(q[j], tol)):
            bad.append((i, j))
    return bad


@dataclass
class TriangulationCheck:
    ok: bool
    vertices: int
    edges: int
    triangles: int
    problems: list


def near_triangulation_check(aug: DelaunayGraph) -> TriangulationCheck:
    """Euler and face-count check for a sentinel-augmented graph.

    With the four sentinels as the convex hull, a triangulation on v points
    has 3v - 7 edges and 2v - 6 triangles; every edge borders two triangles
    except the four hull edges, which border one.
    """
    v = aug.n
    e = len(aug.edges)
    t = len(aug.triangles)
    problems = []
    if e != 3 * v - 7:
        problems.append(f"edge count {e} != 3v-7 = {3 * v - 7}")
    if t != 2 * v - 6:
        problems.append(f"triangle count {t} != 2v-6 = {2 * v - 6}")
    if v - e + (t + 1) != 2:
        problems.append("Euler characteristic is not 2")
    uses: dict = {}
    for i, j, k, _ in aug.triangles:
        for ed in ((i, j), (i, k), (j, k)):
            uses[ed] = uses.get(ed, 0) + 1
    first_sentinel = v - aug.n_sentinels
    hull = 0
    for ed, c in uses.items():
        if c == 1:
            hull += 1
            if min(ed) < first_sentinel:
                problems.append(f"edge {ed} borders one triangle but is not a hull edge")
        elif c != 2:
            problems.append(f"edge {ed} borders {c} triangles")
    if aug.n_sentinels and hull != aug.n_sentinels:
        problems.append(f"{hull} hull edges, expected {aug.n_sentinels}")
    return TriangulationCheck(not problems, v, e, t, problems)


# ---------------------------------------------------------------------------
# approximate oracle


class OracleResult(NamedTuple):
    edges: frozenset
    skipped: int
    cell: float


def grid_voronoi_oracle(points, shape: ShapeSpec, resolution: int = 1024,
                        tie_tol: float = 1e-12) -> OracleResult:
    """Delaunay edges read from a rasterised Chebyshev Voronoi diagram.

    The square-space bounding square is padded by half its side on every
    side and split into ``resolution`` x ``resolution`` cells.  Each cell
    centre is labelled with its nearest site under the L-infinity distance;
    sites whose cells touch across a cell side become an edge.  Cells with a
    tie within ``tie_tol`` are skipped and counted.  Resolution-limited.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    pts = _as_points(points)
    if len(pts) < 2:
        raise DegenerateInputError("need at least two points")
    q = to_square_space(shape, pts)
    lo, hi = q.min(axis=0), q.max(axis=0)
    side = float(np.max(hi - lo)) or 1.0
    centre = (lo + hi) / 2.0
    box = 2.0 * side
    cell = box / resolution
    axis = (np.arange(resolution) + 0.5) * cell - box / 2.0
    labels = np.empty((resolution, resolution), dtype=np.int64)
    skipped = 0
    rows = max(1, (1 << 22) // (resolution * len(q)))
    gx = centre[0] + axis
    for r0 in range(0, resolution, rows):
        gy = centre[1] + axis[r0:r0 + rows]
        dist = np.maximum(np.abs(gx[None, :, None] - q[None, None, :, 0]),
                          np.abs(gy[:, None, None] - q[None, None, :, 1]))
        part = np.partition(dist, 1, axis=2)
        lab = np.argmin(dist, axis=2)
        tie = part[..., 1] - part[..., 0] <= tie_tol
        lab[tie] = -1
        skipped += int(tie.sum())
        labels[r0:r0 + rows] = lab
    found = set()
    for a, b in ((labels[:, :-1], labels[:, 1:]), (labels[:-1, :], labels[1:, :])):
        mask = (a != b) & (a >= 0) & (b >= 0)
        pairs = np.stack([np.minimum(a[mask], b[mask]), np.maximum(a[mask], b[mask])], axis=1)
        found.update(map(tuple, np.unique(pairs, axis=0).tolist()))
    return OracleResult(frozenset(found), skipped, cell)
