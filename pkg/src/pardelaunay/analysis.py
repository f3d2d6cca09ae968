"""Graph distances, measured spanning ratios and the closed-form bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .construction import DelaunayGraph
from .geometry import Scenario, ShapeSpec, classify_scenario, orient_pair

DOMINANCE_TOL = 1e-12


class DisconnectedGraphError(ValueError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"no path between vertices {pair[0]} and {pair[1]}")


class DistanceTable(NamedTuple):
    dist: np.ndarray
    pred: np.ndarray

    def reachable(self, i: int, j: int) -> bool:
        return bool(np.isfinite(self.dist[i, j]))

    def path(self, i: int, j: int) -> list[int]:
        if not self.reachable(i, j):
            return []
        out = [j]
        while out[-1] != i:
            out.append(int(self.pred[i, out[-1]]))
        return out[::-1]


def shortest_path_table(graph: DelaunayGraph) -> DistanceTable:
    """All-pairs shortest paths with Euclidean edge weights.

    Unreachable pairs carry ``inf`` distance and predecessor ``-9999``.
    """
    n = graph.n
    if not graph.edges:
        dist = np.full((n, n), np.inf)
        np.fill_diagonal(dist, 0.0)
        return DistanceTable(dist, np.full((n, n), -9999))
    e = np.array([(i, j) for i, j, _ in graph.edges])
    w = np.linalg.norm(graph.points[e[:, 0]] - graph.points[e[:, 1]], axis=1)
    mat = csr_matrix((w, (e[:, 0], e[:, 1])), shape=(n, n))
    dist, pred = dijkstra(mat, directed=False, return_predecessors=True)
    # dijkstra relaxes in floating point from each source independently
    dist = np.minimum(dist, dist.T)
    return DistanceTable(dist, pred)


def bound_h(shape: ShapeSpec) -> float:
    """Worst-case spanning ratio of the parallelogram Delaunay graph."""
    a, t = shape.aspect, shape.angle
    c = math.cos(t)
    r = 1 + a * a + 2 * a * c
    return math.sqrt(2) * math.sqrt(r + (a + c) * math.sqrt(r)) / math.sin(t)


def _root(a: float, theta: float) -> float:
    return math.sqrt(1 + a * a + 2 * a * abs(math.cos(theta)))


def _theta(shape: ShapeSpec, theta: float | None) -> float:
    return math.pi - shape.angle if theta is None else theta


def f23(shape: ShapeSpec, r: float, theta: float | None = None) -> float:
    """Ratio bound for scenarios 2 and 3 as a function of r = yh/xh.

    ``theta`` defaults to the scenario-2 value pi - theta0.
    """
    th = _theta(shape, theta)
    a = shape.aspect
    return (a + _root(a, th) + r) / math.sqrt(1 + r * r + 2 * r * math.cos(th))


def f14(shape: ShapeSpec, r: float, theta: float | None = None) -> float:
    """Ratio bound for scenarios 1 and 4; ``theta`` defaults to pi - theta0."""
    th = _theta(shape, theta)
    a = shape.aspect
    return (a + _root(a, th) + a * a * r) / (a * math.sqrt(1 + r * r + 2 * r * math.cos(th)))


def f23_argmax(shape: ShapeSpec, theta: float | None = None) -> float:
    th = _theta(shape, theta)
    a, c = shape.aspect, math.cos(th)
    q = _root(a, th)
    return (-c * q - a * c + 1) / (q + a - c)


def f14_argmax(shape: ShapeSpec, theta: float | None = None) -> float:
    th = _theta(shape, theta)
    a, c = shape.aspect, math.cos(th)
    q = _root(a, th)
    return (-c * q + a * a - a * c) / (q - a * a * c + a)


def f23_star(shape: ShapeSpec, theta: float | None = None) -> float:
    """Closed-form value of f23 at its stationary point."""
    th = _theta(shape, theta)
    a, c = shape.aspect, math.cos(th)
    q = _root(a, th)
    return math.sqrt(2) * math.sqrt(1 + a * a + a * (abs(c) - c) + (a - c) * q) / math.sin(th)


def f14_star(shape: ShapeSpec, theta: float | None = None) -> float:
    th = _theta(shape, theta)
    a, c = shape.aspect, math.cos(th)
    q = _root(a, th)
    inner = (1 + a * a) ** 2 + 2 * a * (abs(c) - a * a * c) + 2 * a * (1 - a * c) * q
    return math.sqrt(inner) / (a * math.sin(th))


@dataclass(frozen=True)
class BoundCandidates:
    f23_at_zero: float
    f23_limit: float
    f23_star: float
    f23_argmax: float
    f14_at_zero: float
    f14_limit: float
    f14_star: float
    f14_argmax: float
    global_: float

    def to_dict(self) -> dict:
        return {
            "f23_at_zero": self.f23_at_zero,
            "f23_limit": self.f23_limit,
            "f23_star": self.f23_star,
            "f23_argmax": self.f23_argmax,
            "f14_at_zero": self.f14_at_zero,
            "f14_limit": self.f14_limit,
            "f14_star": self.f14_star,
            "f14_argmax": self.f14_argmax,
            "global": self.global_,
        }


def bound_candidates(shape: ShapeSpec) -> BoundCandidates:
    """The candidate maxima of f23 and f14 at theta = pi - theta0.

    Raises ``ArithmeticError`` if the dominance relations the global bound
    relies on fail for this shape.
    """
    bc = BoundCandidates(
        f23_at_zero=f23(shape, 0.0),
        f23_limit=1.0,
        f23_star=f23_star(shape),
        f23_argmax=f23_argmax(shape),
        f14_at_zero=f14(shape, 0.0),
        f14_limit=shape.aspect,
        f14_star=f14_star(shape),
        f14_argmax=f14_argmax(shape),
        global_=0.0,
    )
    cands = [bc.f23_at_zero, bc.f23_limit, bc.f23_star, bc.f14_at_zero, bc.f14_limit, bc.f14_star]
    tol = DOMINANCE_TOL * max(1.0, bc.f23_star)
    failed = [name for name, ok in (
        ("f23* >= A", bc.f23_star >= shape.aspect - tol),
        ("f23* >= f14*", bc.f23_star >= bc.f14_star - tol),
        ("f23(0) >= f14(0)", bc.f23_at_zero >= bc.f14_at_zero - tol),
        ("f23* >= f23(0)", bc.f23_star >= bc.f23_at_zero - tol),
    ) if not ok]
    if failed:
        raise ArithmeticError(f"dominance fails for {shape}: {', '.join(failed)}")
    return BoundCandidates(**{**bc.__dict__, "global_": max(cands)})


def per_pair_bound(shape: ShapeSpec, a, b) -> float:
    """Upper bound on the graph distance between ``a`` and ``b``.

    Scenarios 2 and 3 use ``(A + sqrt(1 + A^2 + 2A|cos t|)) xh + yh``;
    scenarios 1 and 4 use ``(1 + sqrt(1 + 1/A^2 + 2|cos t|/A)) xh + A yh``.
    """
    a, b, _ = orient_pair(a, b)
    frame, (xh, yh) = classify_scenario(shape, a, b)
    A = shape.aspect
    ct = abs(math.cos(frame.theta))
    if frame.scenario in (Scenario.S2, Scenario.S3):
        return (A + math.sqrt(1 + A * A + 2 * A * ct)) * xh + yh
    return (1 + math.sqrt(1 + 1 / (A * A) + 2 * ct / A)) * xh + A * yh


class PairRatio(NamedTuple):
    pair: tuple
    d_graph: float
    d_euclid: float
    ratio: float
    scenario: int
    per_pair_bound: float


@dataclass
class RatioReport:
    max_ratio: float
    argmax_pair: tuple
    per_pair: list

    def to_dict(self, shape: ShapeSpec | None = None) -> dict:
        out = {
            "max_ratio": self.max_ratio,
            "argmax_pair": list(self.argmax_pair),
            "per_pair": [
                {"pair": list(p.pair), "d_graph": p.d_graph, "d_euclid": p.d_euclid,
                 "ratio": p.ratio, "scenario": p.scenario, "per_pair_bound": p.per_pair_bound}
                for p in self.per_pair
            ],
        }
        if shape is not None:
            out["bound"] = bound_h(shape)
        return out


def spanning_ratio(graph: DelaunayGraph, table: DistanceTable | None = None) -> RatioReport:
    """Exact spanning ratio over all pairs of original points."""
    if table is None:
        table = shortest_path_table(graph)
    n = graph.n_original
    pts = graph.points
    per_pair = []
    best, arg = 1.0, (0, 1) if n >= 2 else (0, 0)
    for i in range(n - 1):
        for j in range(i + 1, n):
            dg = float(table.dist[i, j])
            if not math.isfinite(dg):
                raise DisconnectedGraphError((i, j))
            de = float(np.hypot(*(pts[j] - pts[i])))
            ratio = dg / de
            oa, ob, _ = orient_pair(pts[i], pts[j])
            frame, _ = classify_scenario(graph.shape, oa, ob)
            per_pair.append(PairRatio((i, j), dg, de, ratio, int(frame.scenario),
                                      per_pair_bound(graph.shape, pts[i], pts[j])))
            if ratio > best:
                best, arg = ratio, (i, j)
    return RatioReport(best, arg, per_pair)
