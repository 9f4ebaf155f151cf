"""Distance from the type-fair benchmark: mean relative deviation and sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .allocate import (
    Allocation,
    shapley_allocation,
    stable_allocation,
    _xi_bound_raw,
)
from .errors import XiOutOfRange, ZeroShapleyPayoff
from .game import Fleet, SavingsParams
from .stability import in_core


@dataclass(frozen=True)
class DeviationPoint:
    xi: float
    delta: float
    in_core: bool


@dataclass(frozen=True)
class DeviationCurve:
    points: tuple[DeviationPoint, ...]

    def deltas(self) -> list[float]:
        return [p.delta for p in self.points]


def mean_relative_deviation(x: Allocation, phi: Allocation) -> float:
    """Average of |phi_i - x_i| / phi_i across trucks."""
    if len(x.payoffs) != len(phi.payoffs):
        raise ValueError("allocations index different fleets")
    if any(p <= 1e-12 for p in phi.payoffs):
        raise ZeroShapleyPayoff("benchmark payoff is zero for some truck")
    n = len(phi.payoffs)
    return sum(abs(p - q) / p for p, q in zip(phi.payoffs, x.payoffs)) / n


def deviation_curve(
    fleet: Fleet, params: SavingsParams, xi_grid: Sequence[float]
) -> DeviationCurve:
    """Deviation from the type-fair payoff and core verdict along a xi grid.

    On the certified interval (0, xi*] of a fleet where the ratio core
    condition fails, the deviation decreases strictly and bottoms out at
    xi*; points beyond the bound are reported as-is for inspection.
    """
    if not xi_grid:
        raise ValueError("empty xi grid")
    if any(not 0.0 < xi <= 1.0 for xi in xi_grid):
        raise XiOutOfRange("grid points must lie in (0, 1]")
    if any(b <= a for a, b in zip(xi_grid, xi_grid[1:])):
        raise ValueError("grid must be strictly increasing")
    phi = shapley_allocation(fleet, params)
    points = []
    for xi in xi_grid:
        x = stable_allocation(fleet, params, xi)
        delta = mean_relative_deviation(x, phi)
        member = in_core(x, fleet, params).is_member
        points.append(DeviationPoint(xi, delta, member))
    return DeviationCurve(tuple(points))


def default_xi_grid(fleet: Fleet, params: SavingsParams, n: int = 60) -> list[float]:
    """Evenly spaced grid from 0.002 up to the instance's xi*."""
    xi_star = _xi_bound_raw(fleet.composition(), params)
    start = 0.002 if xi_star > 0.002 else xi_star / n
    step = (xi_star - start) / (n - 1)
    return [start + i * step for i in range(n)]
