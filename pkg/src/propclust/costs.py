"""Social cost and metric distortion of individual candidates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audits import _candidate_positions
from .instances import MetricInstance


@dataclass(frozen=True)
class CostProfile:
    """Social cost of every candidate plus the cost-minimizing one."""

    costs: tuple[float, ...]
    optimum: int
    optimum_cost: float

    def to_dict(self) -> dict:
        return {
            "costs": list(self.costs),
            "optimum": self.optimum,
            "optimum_cost": self.optimum_cost,
        }


def social_cost(instance: MetricInstance, point: int) -> float:
    """Sum of agent distances to a candidate."""
    (pos,) = _candidate_positions(instance, [point])
    return float(instance.agent_candidate[:, pos].sum())


def cost_profile(instance: MetricInstance) -> CostProfile:
    costs = instance.agent_candidate.sum(axis=0)
    best = int(costs.argmin())
    return CostProfile(
        costs=tuple(float(c) for c in costs),
        optimum=instance.candidates[best],
        optimum_cost=float(costs[best]),
    )


def distortion(instance: MetricInstance, point: int) -> float:
    """Social cost of `point` relative to the best candidate.

    At least 1, with equality at the cost optimum; 0/0 counts as 1 and a
    positive cost against a zero optimum as +inf.  Numerator and denominator
    come from the same cost vector so the ratio can never dip below 1.
    """
    (pos,) = _candidate_positions(instance, [point])
    profile = cost_profile(instance)
    cost = profile.costs[pos]
    if profile.optimum_cost == 0.0:
        return 1.0 if cost == 0.0 else float("inf")
    return cost / profile.optimum_cost
