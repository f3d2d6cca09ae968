"""Executable checks of the potential-based inequalities on concrete graphs.

For a pair ``(a, b)`` the triangles of the sentinel-augmented graph that cross
segment ab are walked from a to b.  Triangle ``T_i`` exits through the edge
``(h_i, l_i)`` with ``h_i`` above ab and ``l_i`` below it, both judged in the
pair's hat frame with ``a`` at the origin.  Sequences use 1-based indexing:
entry 0 holds ``a`` (``h_0 = l_0 = a``) and entry ``k`` holds ``b``.

Graph distances come from the augmented graph.  Its edges between original
points are exactly the edges of the plain graph, and sentinel detours are
never shorter.  Left-hand sides mix Euclidean path lengths with hat-unit
perimeter walks; hat basis vectors have unit length, so a walk along the
sides of a witness is also a Euclidean length.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import DistanceTable, shortest_path_table
from .construction import DelaunayGraph, augmented_of, build_graph
from .geometry import (
    DegenerateInputError,
    HatCoords,
    HatRect,
    Scenario,
    ScenarioFrame,
    ShapeSpec,
    classify_scenario,
    clockwise_perimeter_distance,
    from_square_space,
    gentle_edge,
    hat_coords,
    orient_pair,
)

LEMMA_TOL = 1e-9


class CrossingError(ValueError):
    pass


class PairIsEdgeError(CrossingError):
    """The pair is already adjacent, so there is no crossing sequence."""


@dataclass
class CrossingSequence:
    frame: ScenarioFrame
    pair: tuple
    triangles: list
    highs: list
    lows: list
    witnesses: list
    east_coords: list
    hat: np.ndarray = field(repr=False)
    dist: np.ndarray = field(repr=False)
    aspect: float = 1.0

    @property
    def k(self) -> int:
        return len(self.triangles)

    @property
    def L(self) -> float:
        return self.frame.L

    def coords(self, v: int) -> HatCoords:
        return HatCoords(float(self.hat[v, 0]), float(self.hat[v, 1]))

    @property
    def b_coords(self) -> HatCoords:
        return self.coords(self.pair[1])

    def d(self, u: int, v: int) -> float:
        return float(self.dist[u, v])

    def eastern(self, v: int, i: int) -> bool:
        """True if vertex ``v`` lies on the E side of the witness of ``T_i``."""
        return self.witnesses[i].on_side(self.coords(v), "E")


def _witness_rect(graph: DelaunayGraph, tri, frame: ScenarioFrame, origin) -> HatRect:
    w = graph.triangle_witness(tri)
    u0, v0 = w.corner
    t = w.side
    sq = np.array([[u0, v0], [u0 + t, v0], [u0, v0 + t], [u0 + t, v0 + t]])
    hc = hat_coords(frame, from_square_space(graph.shape, sq) - origin)
    lo, hi = hc.min(axis=0), hc.max(axis=0)
    return HatRect(frame, HatCoords(float(lo[0]), float(lo[1])), HatCoords(float(hi[0]), float(hi[1])))


def _triangle_maps(graph: DelaunayGraph):
    idx = getattr(graph, "_walk_maps", None)
    if idx is None:
        by_vertex, by_edge = {}, {}
        for i, j, k, _ in graph.triangles:
            tri = (i, j, k)
            for v in tri:
                by_vertex.setdefault(v, []).append(tri)
            for e in ((i, j), (i, k), (j, k)):
                by_edge.setdefault(e, []).append(tri)
        idx = (by_vertex, by_edge)
        graph._walk_maps = idx
    return idx


def crossing_sequence(aug: DelaunayGraph, a: int, b: int,
                      table: DistanceTable | None = None) -> CrossingSequence:
    """Triangles of ``aug`` crossed by segment ab, ordered from a to b.

    ``a`` and ``b`` are vertex indices; the pair is re-oriented so that the
    x-difference is positive.  Raises :class:`PairIsEdgeError` when ab is an
    edge of the graph.
    """
    pts = aug.points
    pa, pb, swapped = orient_pair(pts[a], pts[b])
    if swapped:
        a, b = b, a
    lo_e, hi_e = min(a, b), max(a, b)
    if (lo_e, hi_e) in aug.edge_set():
        raise PairIsEdgeError(f"({a}, {b}) is an edge")
    frame, (xb, yb) = classify_scenario(aug.shape, pa, pb)
    hat = hat_coords(frame, pts - pa)
    if table is None:
        table = shortest_path_table(aug)
    scale = max(1.0, abs(xb), abs(yb))

    def side(v):
        s = xb * hat[v, 1] - yb * hat[v, 0]
        if abs(s) <= 1e-12 * scale * max(1.0, abs(hat[v, 0]), abs(hat[v, 1])):
            raise DegenerateInputError(f"vertex {v} lies on segment ({a}, {b})")
        return s

    by_vertex, by_edge = _triangle_maps(aug)
    first = None
    for tri in by_vertex.get(a, []):
        u, v = (x for x in tri if x != a)
        su, sv = side(u), side(v)
        if su * sv >= 0:
            continue
        # where uv meets the line through a and b, as a multiple of b
        q = hat[u] + (hat[v] - hat[u]) * su / (su - sv)
        lam = (q[0] * xb + q[1] * yb) / (xb * xb + yb * yb)
        if lam > 0:
            first = (tri, (u, v) if su > 0 else (v, u))
            break
    if first is None:
        raise CrossingError(f"no triangle at {a} is crossed by segment ({a}, {b})")

    triangles, highs, lows = [first[0]], [a], [a]
    tri, (h, l) = first
    while True:
        highs.append(h)
        lows.append(l)
        key = (min(h, l), max(h, l))
        nxt = [t for t in by_edge[key] if t != tri]
        if len(nxt) != 1:
            raise CrossingError(f"edge {key} does not separate two triangles")
        tri = nxt[0]
        triangles.append(tri)
        w = next(x for x in tri if x != h and x != l)
        if w == b:
            break
        if side(w) > 0:
            h = w
        else:
            l = w
        if len(triangles) > 4 * aug.n:
            raise CrossingError("face walk did not reach b")
    highs.append(b)
    lows.append(b)

    witnesses = [None] + [_witness_rect(aug, t, frame, pa) for t in triangles]
    east = [0.0] + [r.hi.xh for r in witnesses[1:]]
    return CrossingSequence(frame, (a, b), triangles, highs, lows, witnesses, east,
                            hat, table.dist, aug.shape.aspect)


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class LemmaRow:
    instance: str
    pair: tuple
    lemma: str
    index: int
    lhs: float | None
    rhs: float | None
    holds: bool | None
    slack: float | None

    @property
    def skipped(self) -> bool:
        return self.holds is None

    def to_dict(self) -> dict:
        return {"instance": self.instance, "pair": list(self.pair), "lemma": self.lemma,
                "index": self.index, "lhs": self.lhs, "rhs": self.rhs,
                "holds": self.holds, "slack": self.slack}


def _row(seq, lemma, index, lhs, rhs, instance=""):
    lhs, rhs = float(lhs), float(rhs)
    return LemmaRow(instance, tuple(seq.pair), lemma, index, lhs, rhs,
                    lhs <= rhs + LEMMA_TOL, rhs - lhs)


def _skip(seq, lemma, index, instance=""):
    return LemmaRow(instance, tuple(seq.pair), lemma, index, None, None, None, None)


def has_potential(seq: CrossingSequence, i: int) -> tuple[bool, float, float]:
    a = seq.pair[0]
    h, l = seq.highs[i], seq.lows[i]
    rect = seq.witnesses[i]
    per = clockwise_perimeter_distance(rect, seq.coords(h), seq.coords(l))
    lhs = seq.d(a, h) + seq.d(a, l) + per
    rhs = (2 + 2 * seq.L) * seq.east_coords[i]
    return lhs <= rhs + LEMMA_TOL, lhs, rhs


def inductive_info(seq: CrossingSequence, i: int) -> tuple[bool, int | None]:
    if not 1 <= i < seq.k:
        raise IndexError(f"inductive_info needs 1 <= i < k, got {i}")
    h, l = seq.highs[i], seq.lows[i]
    ch, cl = seq.coords(h), seq.coords(l)
    if not gentle_edge(seq.frame, ch, cl):
        return False, None
    return True, (h if ch.xh > cl.xh else l)


def first_inductive(seq: CrossingSequence) -> int | None:
    for i in range(1, seq.k):
        if inductive_info(seq, i)[0]:
            return i
    return None


def check_lemma4(seq: CrossingSequence, instance: str = "") -> list[LemmaRow]:
    """Base case at ``P_1`` and propagation across non-inductive steps."""
    ok, lhs, rhs = has_potential(seq, 1)
    rows = [_row(seq, "lem4.base", 1, lhs, rhs, instance)]
    prev_ok = ok
    for i in range(1, seq.k):
        ok_next, lhs, rhs = has_potential(seq, i + 1)
        if prev_ok and not inductive_info(seq, i)[0]:
            rows.append(_row(seq, "lem4.step", i + 1, lhs, rhs, instance))
        else:
            rows.append(_skip(seq, "lem4.step", i + 1, instance))
        prev_ok = ok_next
    return rows


def check_lemma5(seq: CrossingSequence, i: int, instance: str = "") -> LemmaRow:
    ind, c = inductive_info(seq, i)
    if not ind or not has_potential(seq, i)[0] or not seq.eastern(c, i):
        return _skip(seq, "lem5", i, instance)
    return _row(seq, "lem5", i, seq.d(seq.pair[0], c), (1 + seq.L) * seq.coords(c).xh, instance)


def _maximal(seq, chain, j):
    if seq.eastern(chain[j], j):
        return [j]
    m = j
    while m >= 1 and not (m < j and seq.eastern(chain[m], m)):
        m -= 1
    return list(range(m, j + 1))


def maximal_paths(seq: CrossingSequence, j: int) -> tuple[list, list]:
    """Sequence indices of the maximal high and low paths ending at ``j``."""
    if not 1 <= j <= seq.k:
        raise IndexError(f"maximal_paths needs 1 <= j <= k, got {j}")
    return _maximal(seq, seq.highs, j), _maximal(seq, seq.lows, j)


def check_lemma7(seq: CrossingSequence, j: int, instance: str = "") -> list[LemmaRow]:
    high, low = maximal_paths(seq, j)
    hi_s, hi_e = seq.highs[high[0]], seq.highs[j]
    lo_s, lo_e = seq.lows[low[0]], seq.lows[j]
    cs, ce = seq.coords(hi_s), seq.coords(hi_e)
    rows = [_row(seq, "lem7.high", j, seq.d(hi_s, hi_e), (ce.xh - cs.xh) + (ce.yh - cs.yh), instance)]
    cs, ce = seq.coords(lo_s), seq.coords(lo_e)
    rows.append(_row(seq, "lem7.low", j, seq.d(lo_s, lo_e), (ce.xh - cs.xh) + (cs.yh - ce.yh), instance))
    return rows


def crossing_case(seq: CrossingSequence) -> tuple[str, int | None]:
    j = first_inductive(seq)
    if j is None:
        return "1", None
    c = inductive_info(seq, j)[1]
    wide = seq.frame.scenario in (Scenario.S2, Scenario.S3)
    if c == seq.highs[j]:
        return ("2a" if wide else "2c"), j
    return ("2b" if wide else "2d"), j


def check_crossing_lemma(seq: CrossingSequence, instance: str = "") -> LemmaRow:
    A = seq.aspect
    ct = abs(math.cos(seq.frame.theta))
    xb, yb = seq.b_coords
    a = seq.pair[0]
    case, j = crossing_case(seq)
    if case == "1":
        L = seq.L
        return _row(seq, "crossing.1", seq.k, seq.d(a, seq.pair[1]),
                    (L + math.sqrt(1 + L * L + 2 * L * ct)) * xb + yb, instance)
    wide_coef = A + math.sqrt(1 + A * A + 2 * A * ct)
    tall_coef = 1 + math.sqrt(1 + 1 / (A * A) + 2 * ct / A)
    if case in ("2a", "2c"):
        c = seq.highs[j]
        xc, yc = seq.coords(c)
        if case == "2a":
            return _row(seq, "crossing.2a", j, seq.d(a, c) + (yc - yb), wide_coef * xc, instance)
        return _row(seq, "crossing.2c", j, seq.d(a, c) + A * (yc - yb), tall_coef * xc, instance)
    c = seq.lows[j]
    xc, yc = seq.coords(c)
    if case == "2b":
        return _row(seq, "crossing.2b", j, seq.d(a, c) - yc, wide_coef * xc, instance)
    return _row(seq, "crossing.2d", j, seq.d(a, c) - A * yc, tall_coef * xc, instance)


def _reached(seq, v, high: bool, tol) -> bool:
    xb, yb = seq.b_coords
    x, y = seq.coords(v)
    gap = (y - yb) if high else (yb - y)
    return seq.L * (xb - x) >= gap - tol and gap >= -tol


def check_lemma9(seq: CrossingSequence, i: int, instance: str = "") -> list[LemmaRow]:
    """Edges of the high (low) chain after a far inductive point.

    An edge ``(h_m, h_{m+1})`` passes when ``h_m`` is on the N side and
    ``h_{m+1}`` on the E side of the witness of ``T_{m+1}``, which makes it
    go east and down in hat coordinates.  The low chain mirrors this with
    the S side, going east and up.  ``lhs`` is the worst signed violation
    among those conditions and ``rhs`` is zero.
    """
    if not 1 < i < seq.k:
        return [_skip(seq, "lem9", i, instance)]
    ind, c = inductive_info(seq, i)
    if not ind:
        return [_skip(seq, "lem9", i, instance)]
    xb, yb = seq.b_coords
    xc, yc = seq.coords(c)
    L = seq.L
    high = c == seq.highs[i]
    gap = (yc - yb) if high else (yb - yc)
    if not 0 < L * (xb - xc) < gap:
        return [_skip(seq, "lem9.high" if high else "lem9.low", i, instance)]
    chain = seq.highs if high else seq.lows
    name = "lem9.high" if high else "lem9.low"
    tol = LEMMA_TOL * max(1.0, abs(xb), abs(yb))
    j = next(m for m in range(i + 1, seq.k + 1) if _reached(seq, chain[m], high, tol))
    rows = []
    for m in range(i, j):
        u, v = chain[m], chain[m + 1]
        if u == v:
            continue
        rect = seq.witnesses[m + 1]
        cu, cv = seq.coords(u), seq.coords(v)
        level = rect.hi.yh if high else rect.lo.yh
        worst = max(
            cu.xh - cv.xh,
            (cv.yh - cu.yh) if high else (cu.yh - cv.yh),
            abs(cu.yh - level) - rect.tol(),
            abs(cv.xh - rect.hi.xh) - rect.tol(),
        )
        rows.append(_row(seq, name, m + 1, worst, 0.0, instance))
    return rows


# ---------------------------------------------------------------- campaigns

@dataclass
class LemmaReport:
    instance: str
    rows: list

    @property
    def checked(self) -> list:
        return [r for r in self.rows if not r.skipped]

    @property
    def violations(self) -> list:
        return [r for r in self.rows if r.holds is False]

    @property
    def ok(self) -> bool:
        return not self.violations

    def min_slack(self) -> float:
        vals = [r.slack for r in self.checked]
        return min(vals) if vals else math.inf

    def to_jsonl(self, dumps=json.dumps) -> str:
        return "".join(dumps(r.to_dict()) + "\n" for r in self.rows)


def box_is_empty(seq_frame: ScenarioFrame, hat: np.ndarray, a: int, b: int) -> bool:
    """True if the closed hat box spanned by a and b holds no other vertex."""
    xb, yb = hat[b]
    tol = LEMMA_TOL * max(1.0, abs(xb), abs(yb))
    inside = ((hat[:, 0] >= -tol) & (hat[:, 0] <= xb + tol)
              & (hat[:, 1] >= -tol) & (hat[:, 1] <= yb + tol))
    inside[[a, b]] = False
    return not inside.any()


def verify_pair(aug: DelaunayGraph, a: int, b: int, table: DistanceTable,
                instance: str = "") -> list[LemmaRow] | None:
    """All checks for one pair, or None when the pair does not qualify."""
    try:
        seq = crossing_sequence(aug, a, b, table)
    except PairIsEdgeError:
        return None
    if not box_is_empty(seq.frame, seq.hat, *seq.pair):
        return None
    rows = check_lemma4(seq, instance)
    for i in range(1, seq.k):
        rows.append(check_lemma5(seq, i, instance))
    for j in range(1, seq.k + 1):
        rows.extend(check_lemma7(seq, j, instance))
    rows.append(check_crossing_lemma(seq, instance))
    for i in range(2, seq.k):
        rows.extend(check_lemma9(seq, i, instance))
    return rows


def verify_graph(graph: DelaunayGraph, instance: str = "") -> LemmaReport:
    """Run every check on every qualifying pair of original points.

    Rows are ordered by pair, then lemma, then index.
    """
    aug = augmented_of(graph)
    table = shortest_path_table(aug)
    n = graph.n_original
    rows = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            got = verify_pair(aug, i, j, table, instance)
            if got:
                rows.extend(got)
    rows.sort(key=lambda r: (r.pair, r.lemma, r.index))
    return LemmaReport(instance, rows)


def verify_points(points, shape: ShapeSpec, instance: str = "") -> LemmaReport:
    return verify_graph(build_graph(points, shape), instance)
