"""Classical profit maximization over the linear demand model.

Three routes to the optimal price, used both as comparison baselines and
as verification oracles for the learned policy:

- analytic: the profit parabola's vertex in closed form, clamped to the
  allowed interval;
- grid search: exhaustive evaluation over a price grid (the brute-force
  oracle);
- line search: derivative-free golden-section maximization, standing in
  for a generic numeric optimizer.

Profit ``(p - c) * demand(p)`` is quadratic in price while demand is
positive and identically zero beyond the zero-demand price, so it is
unimodal on any interval that starts below that point; the golden
section's bracketing logic relies on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .domain import PriceGrid, ProductSpec, demand, reward, zero_demand_price

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


class Method(Enum):
    ANALYTIC = "Analytic"
    GRID_SEARCH = "GridSearch"
    LINE_SEARCH = "LineSearch"


@dataclass(frozen=True)
class Optimum:
    price: float
    demand: float
    profit: float
    method: Method
    clamped: bool


def profit_at(spec: ProductSpec, price: float, multiplier: float = 1.0) -> float:
    return reward(spec, price, demand(spec, price, multiplier))


def _check_bounds(bounds: tuple[float, float]) -> tuple[float, float]:
    lo, hi = bounds
    if lo <= 0 or lo >= hi:
        raise ValueError(f"need 0 < lo < hi, got {bounds!r}")
    return lo, hi


def analytic_optimum(
    spec: ProductSpec, bounds: tuple[float, float], multiplier: float = 1.0
) -> Optimum:
    """Closed-form maximizer of the profit parabola, clamped.

    The unconstrained vertex is ``c/2 + p0 * (e - 1) / (2e)``; the usable
    interval is the given bounds intersected with the zero-demand price,
    beyond which the parabola formula no longer describes profit.
    """
    if spec.elasticity >= 0:
        raise ValueError("analytic optimum requires elasticity < 0")
    lo, hi = _check_bounds(bounds)
    vertex = spec.unit_cost / 2.0 + spec.base_price * (spec.elasticity - 1.0) / (
        2.0 * spec.elasticity
    )
    hi_eff = min(hi, zero_demand_price(spec))
    price = min(max(vertex, lo), hi_eff)
    d = demand(spec, price, multiplier)
    return Optimum(price, d, reward(spec, price, d), Method.ANALYTIC, clamped=price != vertex)


def grid_search_optimum(
    spec: ProductSpec, grid: PriceGrid, multiplier: float = 1.0
) -> Optimum:
    """Exhaustive profit evaluation over the grid; lowest-price tiebreak.

    The result is flagged clamped when the maximizer sits on either grid
    endpoint, meaning the grid span (not the curve) decided it.
    """
    best_i = 0
    best = profit_at(spec, grid[0], multiplier)
    for i in range(1, len(grid)):
        p = profit_at(spec, grid[i], multiplier)
        if p > best:
            best = p
            best_i = i
    price = grid[best_i]
    d = demand(spec, price, multiplier)
    return Optimum(
        price,
        d,
        reward(spec, price, d),
        Method.GRID_SEARCH,
        clamped=best_i in (0, len(grid) - 1),
    )


def line_search_optimum(
    spec: ProductSpec,
    bounds: tuple[float, float],
    multiplier: float = 1.0,
    tolerance: float = 1e-4,
) -> Optimum:
    """Golden-section maximization of profit over the bounds.

    Deterministic iteration count chosen up front so the final bracket is
    narrower than ``tolerance``; the bracket midpoint is returned.  On a
    flat (clipped-demand) stretch the shrinking bracket still terminates
    and the midpoint's profit is no worse than both endpoints'.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    lo, hi = _check_bounds(bounds)

    a, b = lo, hi
    h = b - a
    if h > tolerance:
        n = int(math.ceil(math.log(tolerance / h) / math.log(_INV_PHI)))
        c = a + _INV_PHI_SQ * h
        d_pt = a + _INV_PHI * h
        fc = profit_at(spec, c, multiplier)
        fd = profit_at(spec, d_pt, multiplier)
        for _ in range(n - 1):
            if fc > fd:
                b = d_pt
                d_pt = c
                fd = fc
                h = _INV_PHI * h
                c = a + _INV_PHI_SQ * h
                fc = profit_at(spec, c, multiplier)
            else:
                a = c
                c = d_pt
                fc = fd
                h = _INV_PHI * h
                d_pt = a + _INV_PHI * h
                fd = profit_at(spec, d_pt, multiplier)
        if fc > fd:
            b = d_pt
        else:
            a = c

    price = (a + b) / 2.0
    d = demand(spec, price, multiplier)
    clamped = (price - lo) <= tolerance or (hi - price) <= tolerance
    return Optimum(price, d, reward(spec, price, d), Method.LINE_SEARCH, clamped=clamped)
