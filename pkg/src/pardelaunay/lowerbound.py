"""Two-column point families whose Delaunay graph approaches the worst case."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import f23_argmax
from .construction import check_general_position
from .geometry import Scenario, ShapeSpec, scenario_frame

MAX_RETRIES = 10


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class WorstCaseParams:
    shape: ShapeSpec
    n: int = 200
    alpha: float = 1.0
    beta: float | None = None
    epsilon: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.beta is None:
            object.__setattr__(self, "beta", self.alpha * f23_argmax(self.shape))
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", 1e-6 * self.alpha)
        if not 0 < self.epsilon <= 1e-3 * self.alpha:
            raise ValueError("epsilon must lie in (0, 1e-3 * alpha]")


def predicted_ratio(shape: ShapeSpec, alpha: float, beta: float) -> float:
    """Limit of the family's a-to-b stretch as the perturbation vanishes."""
    a, c = shape.aspect, math.cos(shape.angle)
    num = alpha * (a + math.sqrt(1 + a * a + 2 * a * abs(c))) + beta
    return num / math.sqrt(alpha * alpha + beta * beta - 2 * alpha * beta * c)


def _columns(params: WorstCaseParams) -> np.ndarray:
    frame = scenario_frame(params.shape, Scenario.S2)
    xh, yh = np.array(frame.xhat), np.array(frame.yhat)
    a, al, be = params.shape.aspect, params.alpha, params.beta
    m = params.n // 2
    t = np.linspace(0.0, 1.0, m)
    # hat coordinates of both columns, a = origin and b = alpha*xhat + beta*yhat
    p_hat = np.stack([np.zeros(m), t * (be + al * a)], axis=1)
    q_hat = np.stack([np.full(m, al), be + t * (-al * a - be)], axis=1)
    basis = np.stack([xh, yh], axis=1)
    return np.concatenate([p_hat @ basis.T, q_hat @ basis.T])


def generate_worst_case(params: WorstCaseParams) -> np.ndarray:
    """Points p_1..p_m followed by q_1..q_m, with p_1 = a and q_1 = b.

    Both columns lean the same way: the lower a point sits, the further right
    it is pushed, by ``epsilon * rank / n`` plus a seeded jitter of at most
    ``epsilon / (10 n)``.  Column Q is climbed from b upward, so its shift
    decreases with its index.  A draw that violates general position is
    redrawn from a new sub-seed.
    """
    base = _columns(params)
    m = params.n // 2
    eps, n = params.epsilon, params.n
    idx = np.concatenate([np.arange(m), np.arange(m)[::-1]])
    seeds = np.random.SeedSequence(params.seed).spawn(MAX_RETRIES)
    for sub in seeds:
        rng = np.random.default_rng(sub)
        jitter = rng.uniform(-1.0, 1.0, size=n) * eps / (10 * n)
        pts = base.copy()
        pts[:, 0] += eps * idx / n + jitter
        if check_general_position(pts, params.shape).ok:
            return pts
    raise GenerationError(f"no general-position draw after {MAX_RETRIES} attempts")


def endpoints(params: WorstCaseParams) -> tuple[int, int]:
    """Indices of a and b in the generated list."""
    return 0, params.n // 2
