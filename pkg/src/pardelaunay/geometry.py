"""Shape, coordinate frames and region predicates for parallelogram homothets.

The parallelogram has a vertical long side of length ``A`` and a short side
of unit length leaning by ``theta0`` from the vertical.  Every homothet of it
maps to an axis-aligned square under :attr:`ShapeSpec.square_map`, which is
how the construction module works.  The lemma checks instead use one of four
oblique "hat" frames in which the parallelogram reads as an axis-aligned
rectangle of width 1 and height ``L``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# Absolute tolerance for on-boundary predicates, in square-space units.
BOUNDARY_TOL = 1e-9
MIN_ANGLE = 1e-6


class DegenerateInputError(ValueError):
    """Two points coincide, or some other input has no meaningful answer."""


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ShapeSpec:
    aspect: float
    angle: float
    square_map: np.ndarray = field(init=False, repr=False, compare=False)
    inverse_map: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a, t = float(self.aspect), float(self.angle)
        if not math.isfinite(a) or a < 1.0:
            raise ValueError(f"aspect must be finite and >= 1, got {self.aspect!r}")
        if not math.isfinite(t) or t < MIN_ANGLE or t > math.pi / 2 + 1e-15:
            raise ValueError(f"angle must lie in [{MIN_ANGLE}, pi/2], got {self.angle!r}")
        s, c = math.sin(t), math.cos(t)
        m = np.array([[a, 0.0], [-c, s]]) / (a * s)
        inv = np.array([[s, 0.0], [c, a]])
        object.__setattr__(self, "aspect", a)
        object.__setattr__(self, "angle", t)
        object.__setattr__(self, "square_map", m)
        object.__setattr__(self, "inverse_map", inv)

    @property
    def short_vec(self) -> np.ndarray:
        return np.array([math.sin(self.angle), math.cos(self.angle)])

    @property
    def long_vec(self) -> np.ndarray:
        return np.array([0.0, self.aspect])


def to_square_space(shape: ShapeSpec, p) -> np.ndarray:
    """Map point(s) ``p`` (shape ``(2,)`` or ``(n, 2)``) into square space."""
    return np.asarray(p, dtype=float) @ shape.square_map.T


def from_square_space(shape: ShapeSpec, q) -> np.ndarray:
    return np.asarray(q, dtype=float) @ shape.inverse_map.T


class Scenario(enum.IntEnum):
    S1 = 1
    S2 = 2
    S3 = 3
    S4 = 4


@dataclass(frozen=True)
class ScenarioFrame:
    scenario: Scenario
    xhat: tuple
    yhat: tuple
    theta: float
    slope_ratio: float

    @property
    def L(self) -> float:
        return self.slope_ratio

    @property
    def basis(self) -> np.ndarray:
        """Columns are ``xhat`` and ``yhat``."""
        return np.array([self.xhat, self.yhat], dtype=float).T


class HatCoords(NamedTuple):
    xh: float
    yh: float


def scenario_frame(shape: ShapeSpec, scenario: Scenario) -> ScenarioFrame:
    s, c = math.sin(shape.angle), math.cos(shape.angle)
    a = shape.aspect
    short = (s, c)
    table = {
        Scenario.S1: ((0.0, -1.0), short, math.pi - shape.angle, 1.0 / a),
        Scenario.S2: (short, (0.0, -1.0), math.pi - shape.angle, a),
        Scenario.S3: (short, (0.0, 1.0), shape.angle, a),
        Scenario.S4: ((0.0, 1.0), short, shape.angle, 1.0 / a),
    }
    xhat, yhat, theta, slope = table[Scenario(scenario)]
    return ScenarioFrame(Scenario(scenario), xhat, yhat, theta, slope)


def breakpoints(shape: ShapeSpec) -> tuple[float, float, float]:
    s, c = math.sin(shape.angle), math.cos(shape.angle)
    return (c - shape.aspect) / s, c / s, (c + shape.aspect) / s


def hat_coords(frame: ScenarioFrame, vec) -> np.ndarray:
    """Solve ``vec = xh*xhat + yh*yhat``; works row-wise on ``(n, 2)`` input."""
    vec = np.asarray(vec, dtype=float)
    sol = np.linalg.solve(frame.basis, vec.T if vec.ndim == 2 else vec)
    return sol.T if vec.ndim == 2 else sol


def orient_pair(a, b) -> tuple[np.ndarray, np.ndarray, bool]:
    """Order a pair so that the x-difference is positive.

    A vertical pair is ordered bottom to top.  Returns ``(a, b, swapped)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a[0] == b[0] and a[1] == b[1]:
        raise DegenerateInputError("coincident points")
    if b[0] < a[0] or (b[0] == a[0] and b[1] < a[1]):
        return b, a, True
    return a, b, False


def classify_scenario(shape: ShapeSpec, a, b) -> tuple[ScenarioFrame, HatCoords]:
    """Pick the scenario frame for the pair and return hat coordinates of b - a.

    The pair must already be oriented (see :func:`orient_pair`).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dx, dy = b - a
    if dx == 0 and dy == 0:
        raise DegenerateInputError("coincident points")
    if dx < 0 or (dx == 0 and dy < 0):
        raise ValueError("pair is not oriented; call orient_pair first")
    b1, b2, b3 = breakpoints(shape)
    if dx == 0:
        sc = Scenario.S4
    else:
        slope = dy / dx
        if slope <= b1:
            sc = Scenario.S1
        elif slope <= b2:
            sc = Scenario.S2
        elif slope <= b3:
            sc = Scenario.S3
        else:
            sc = Scenario.S4
    frame = scenario_frame(shape, sc)
    xh, yh = hat_coords(frame, b - a)
    return frame, HatCoords(float(xh), float(yh))


def hat_norm(frame: ScenarioFrame, c) -> float:
    xh, yh = c
    return math.sqrt(max(xh * xh + yh * yh + 2.0 * xh * yh * math.cos(frame.theta), 0.0))


def gentle_edge(frame: ScenarioFrame, u, v) -> bool:
    return abs(v[1] - u[1]) <= frame.L * abs(v[0] - u[0])


@dataclass(frozen=True)
class HatRect:
    frame: ScenarioFrame
    lo: HatCoords
    hi: HatCoords

    def __post_init__(self):
        if self.lo.xh > self.hi.xh or self.lo.yh > self.hi.yh:
            raise ValueError("HatRect corners out of order")

    @property
    def width(self) -> float:
        return self.hi.xh - self.lo.xh

    @property
    def height(self) -> float:
        return self.hi.yh - self.lo.yh

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.width + self.height)

    def tol(self) -> float:
        scale = max(1.0, abs(self.lo.xh), abs(self.lo.yh), abs(self.hi.xh), abs(self.hi.yh))
        return BOUNDARY_TOL * scale

    def side_of(self, p) -> str | None:
        """Name the side ('N', 'E', 'S', 'W') that ``p`` lies on, or None.

        Corners resolve to the side that comes first clockwise from NW.
        """
        x, y = p
        tol = self.tol()
        inx = self.lo.xh - tol <= x <= self.hi.xh + tol
        iny = self.lo.yh - tol <= y <= self.hi.yh + tol
        if not (inx and iny):
            return None
        if abs(y - self.hi.yh) <= tol and x < self.hi.xh - tol:
            return "N"
        if abs(x - self.hi.xh) <= tol and y > self.lo.yh - tol:
            return "E" if y > self.lo.yh + tol else "S"
        if abs(y - self.lo.yh) <= tol:
            return "S" if x > self.lo.xh + tol else "W"
        if abs(x - self.lo.xh) <= tol:
            return "W"
        return None

    def on_side(self, p, side: str) -> bool:
        """True if ``p`` lies on ``side``, corners counting for both sides."""
        x, y = p
        tol = self.tol()
        if side in ("N", "S"):
            level = self.hi.yh if side == "N" else self.lo.yh
            return abs(y - level) <= tol and self.lo.xh - tol <= x <= self.hi.xh + tol
        level = self.hi.xh if side == "E" else self.lo.xh
        return abs(x - level) <= tol and self.lo.yh - tol <= y <= self.hi.yh + tol

    def contains_strictly(self, p) -> bool:
        x, y = p
        tol = self.tol()
        return (self.lo.xh + tol < x < self.hi.xh - tol) and (self.lo.yh + tol < y < self.hi.yh - tol)

    def _arc_position(self, p) -> float:
        side = self.side_of(p)
        if side is None:
            raise ValueError(f"point {tuple(p)} is not on the rectangle boundary")
        x, y = p
        w, h = self.width, self.height
        if side == "N":
            return min(max(x - self.lo.xh, 0.0), w)
        if side == "E":
            return w + min(max(self.hi.yh - y, 0.0), h)
        if side == "S":
            return w + h + min(max(self.hi.xh - x, 0.0), w)
        return 2.0 * w + h + min(max(y - self.lo.yh, 0.0), h)


def clockwise_perimeter_distance(rect: HatRect, start, end) -> float:
    """Length walked clockwise along ``rect`` from ``start`` to ``end``.

    Measured in hat units: a rectangle of width w and height L*w has
    perimeter (2 + 2L)*w.
    """
    s0 = rect._arc_position(start)
    s1 = rect._arc_position(end)
    d = s1 - s0
    per = rect.perimeter
    if abs(d) <= rect.tol():
        return 0.0
    return d if d > 0 else d + per


class Region(enum.Enum):
    A = "RegionA"
    B = "RegionB"
    C = "RegionC"


def region_partition(frame: ScenarioFrame, a, b, p, aspect: float) -> Region:
    """Split the box P(a, b) into the three regions used when it is non-empty.

    ``a``, ``b`` and ``p`` are hat coordinates in ``frame``.  For scenarios 1
    and 4 the region conditions overlap; the first matching label in the
    order A, C, B wins.
    """
    (xa, ya), (xb, yb), (xp, yp) = a, b, p
    tol = BOUNDARY_TOL * max(1.0, abs(xb - xa), abs(yb - ya))
    if not (xa - tol <= xp <= xb + tol and ya - tol <= yp <= yb + tol):
        raise ValueError("point lies outside P(a, b)")
    A = aspect
    if frame.scenario in (Scenario.S2, Scenario.S3):
        if A * (xp - xa) < yp - ya:
            return Region.A
        if A * (xb - xp) < yb - yp:
            return Region.C
        return Region.B
    if A * (xb - xp) >= yb - yp:
        return Region.A
    if A * (xp - xa) >= yp - ya:
        return Region.C
    return Region.B
