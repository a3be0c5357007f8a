"""Rate-limited secrecy capacity over a sampled single-letter rate curve.

Each input distribution p_X gives a point (I(X;Z), I(X;Y) - I(X;Z)): the
randomness it consumes and the secrecy rate it yields. Time sharing over an
auxiliary U with two values realizes any chord between two points, so the
capacity at a randomness budget is the upper concave envelope of the curve,
maximized over costs within the budget.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .info import (
    DiscreteDistribution,
    WiretapChannel,
    channel_mutual_information_batch,
    renyi2,
    simplex_grid,
)

LESS_CAPABLE_SLACK = 1e-9


@dataclass(frozen=True)
class RateCurvePoint:
    randomness_cost: float
    secrecy_gain: float
    input: DiscreteDistribution


@dataclass(frozen=True)
class Envelope:
    """Upper concave envelope as a vertex list with strictly increasing costs."""

    costs: np.ndarray
    gains: np.ndarray
    inputs: tuple[DiscreteDistribution, ...]

    def __len__(self) -> int:
        return self.costs.size

    def __call__(self, x):
        """Piecewise-linear evaluation; constant continuation past the last vertex."""
        return np.interp(x, self.costs, self.gains)

    @property
    def peak(self) -> int:
        # first maximal vertex: the cheapest optimum
        return int(np.argmax(self.gains))


@dataclass(frozen=True)
class CapacityResult:
    rate: float
    lam: float
    inputs: tuple[DiscreteDistribution, DiscreteDistribution]
    randomness_used: float
    constraint_active: bool
    budget: float
    grid_resolution: int


def _curve_arrays(ch: WiretapChannel, grid_resolution: int):
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    grid = simplex_grid(ch.nx, grid_resolution)
    i_y = channel_mutual_information_batch(grid, ch.main)
    i_z = channel_mutual_information_batch(grid, ch.eavesdropper)
    gain = i_y - i_z
    if gain.min() < -LESS_CAPABLE_SLACK:
        warnings.warn(
            f"eavesdropper channel is not less capable on the grid "
            f"(worst I(X;Y)-I(X;Z) = {gain.min():.3g}); results describe the "
            "prefix-free expression only",
            stacklevel=3,
        )
    return grid, i_z, gain


def rate_curve(ch: WiretapChannel, grid_resolution: int) -> list[RateCurvePoint]:
    grid, cost, gain = _curve_arrays(ch, grid_resolution)
    return [
        RateCurvePoint(float(c), float(g), DiscreteDistribution(p))
        for c, g, p in zip(cost, gain, grid)
    ]


def _upper_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Indices of the upper hull vertices, left to right (monotone chain)."""
    # ascending x; for equal x the highest y first, then grid order
    order = np.lexsort((np.arange(x.size), -y, x))
    hull: list[int] = []
    for i in order:
        if hull and x[hull[-1]] == x[i]:
            continue  # lower point at an already-seen cost
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(int(i))
    return hull


def upper_concave_envelope(points) -> Envelope:
    points = list(points)
    if not points:
        raise ValueError("envelope of an empty point set")
    x = np.array([p.randomness_cost for p in points])
    y = np.array([p.secrecy_gain for p in points])
    idx = _upper_hull(x, y)
    return Envelope(
        costs=x[idx].copy(),
        gains=y[idx].copy(),
        inputs=tuple(points[i].input for i in idx),
    )


def _envelope_from_channel(ch: WiretapChannel, grid_resolution: int) -> Envelope:
    grid, cost, gain = _curve_arrays(ch, grid_resolution)
    idx = _upper_hull(cost, gain)
    return Envelope(
        costs=cost[idx].copy(),
        gains=gain[idx].copy(),
        inputs=tuple(DiscreteDistribution(grid[i]) for i in idx),
    )


def maximize_on_envelope(env: Envelope, budget: float, grid_resolution: int = 0) -> CapacityResult:
    """Best envelope value at cost <= budget, as a two-point time-sharing mixture."""
    if budget < 0 or math.isnan(budget):
        raise ValueError(f"randomness budget must be nonnegative, got {budget}")
    xs, ys = env.costs, env.gains
    if budget < xs[0]:
        raise ValueError(f"budget {budget} below the cheapest input cost {xs[0]}")
    p = env.peak
    if budget >= xs[p]:
        v = env.inputs[p]
        return CapacityResult(float(ys[p]), 1.0, (v, v), float(xs[p]), False, budget, grid_resolution)
    a = int(np.searchsorted(xs, budget, side="right")) - 1
    if xs[a] == budget:
        v = env.inputs[a]
        return CapacityResult(float(ys[a]), 1.0, (v, v), float(xs[a]), True, budget, grid_resolution)
    lam = float((xs[a + 1] - budget) / (xs[a + 1] - xs[a]))
    rate = lam * ys[a] + (1.0 - lam) * ys[a + 1]
    used = lam * xs[a] + (1.0 - lam) * xs[a + 1]
    return CapacityResult(
        float(rate),
        lam,
        (env.inputs[a], env.inputs[a + 1]),
        float(used),
        True,
        budget,
        grid_resolution,
    )


def secrecy_capacity(
    ch: WiretapChannel, randomness_budget: float = math.inf, grid_resolution: int = 200
) -> CapacityResult:
    """Secrecy capacity when the encoder's randomness rate is capped at the budget (bits/use).

    ``math.inf`` gives the unconstrained value max I(X;Y) - I(X;Z).
    """
    if randomness_budget < 0 or math.isnan(randomness_budget):
        raise ValueError(f"randomness budget must be nonnegative, got {randomness_budget}")
    env = _envelope_from_channel(ch, grid_resolution)
    return maximize_on_envelope(env, randomness_budget, grid_resolution)


def achievable_rate_renyi(
    ch: WiretapChannel,
    u_r: DiscreteDistribution,
    n: int,
    grid_resolution: int = 200,
    margin: float = 1e-9,
) -> float:
    """Secrecy rate reachable with unprocessed randomization weights ``u_r`` at block length n.

    The randomness budget is the collision entropy rate R2(u_r)/n, reduced
    by ``margin`` so that the strict inequality on I(X;Z|U) is respected.
    """
    if n < 1:
        raise ValueError("block length must be at least 1")
    budget = renyi2(u_r) / n - margin
    if budget < 0:
        return 0.0
    return secrecy_capacity(ch, budget, grid_resolution).rate
