"""Brute-force audit oracles.

Each oracle computes the *tight* approximation factor of an outcome by
explicit enumeration, plus a witness whenever the factor certifies a
violation.  Factors use ratio conventions chosen to represent the defining
strict inequality exactly:

    d(i, c) = 0 and d(i, W) > 0   ->  ratio +inf   (deviation at any factor)
    d(i, c) = 0 and d(i, W) = 0   ->  ratio 0      (can never deviate)

Proportionality factors are clamped below at 1: the definitions quantify
over factors alpha >= 1, so a sub-1 raw value means no group deviates at
all.  The plurality value is clamped above at 1 for the mirror reason.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .instances import MetricInstance

SUBSET_ENUMERATION_LIMIT = 1 << 20


class EnumerationLimitError(ValueError):
    """Raised when a brute-force audit would enumerate too many subsets."""


@dataclass(frozen=True)
class Witness:
    """Concrete deviation certifying a factor: the group, where it goes,
    and each member's improvement ratio."""

    agents: tuple[int, ...]
    candidates: tuple[int, ...]
    ratios: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class AuditReport:
    factor: float
    witness: Witness | None
    params: dict

    def to_dict(self) -> dict:
        out = {
            "factor": "inf" if math.isinf(self.factor) else self.factor,
            "witness": None,
            "params": self.params,
        }
        if self.witness is not None:
            out["witness"] = {
                "agents": list(self.witness.agents),
                "candidates": list(self.witness.candidates),
                "ratios": ["inf" if math.isinf(r) else r for r in self.witness.ratios],
            }
        return out


def _candidate_positions(instance: MetricInstance, ids) -> list[int]:
    lookup = {c: j for j, c in enumerate(instance.candidates)}
    positions = []
    for c in ids:
        if c not in lookup:
            raise ValueError(f"point {c} is not a candidate of this instance")
        positions.append(lookup[c])
    return positions


def _ratio_column(numerators: np.ndarray, denominators: np.ndarray) -> np.ndarray:
    zero = denominators == 0.0
    safe = np.where(zero, 1.0, denominators)
    return np.where(zero, np.where(numerators > 0.0, np.inf, 0.0), numerators / safe)


def _top_group(ratios: np.ndarray, size: int) -> np.ndarray:
    """Positions of the `size` largest ratios, ties broken by agent position."""
    order = np.lexsort((np.arange(len(ratios)), -ratios))
    return np.sort(order[:size])


def min_alpha_proportional(instance: MetricInstance, centers, ell: int) -> AuditReport:
    """Tight group-proportionality factor of a center set.

    The factor is max(1, max over candidates c of the ell-th largest ratio
    d(i, W) / d(i, c)); the centers satisfy alpha-approximate proportionality
    at group size ell exactly for alpha >= factor.  A witness (the deviating
    group of size ell and its target) is attached whenever factor > 1.
    """
    centers = list(centers)
    if not centers:
        raise ValueError("center set must be nonempty")
    cols = _candidate_positions(instance, centers)
    n = instance.n_agents
    if not 1 <= ell <= n:
        raise ValueError(f"ell={ell} outside 1..{n}")
    dist = instance.agent_candidate
    dist_to_set = dist[:, cols].min(axis=1)

    raw, best_col = _kernels.alpha_scan(dist_to_set, dist, int(ell))
    factor = max(1.0, raw)
    witness = None
    if raw > 1.0:
        ratios = _ratio_column(dist_to_set, dist[:, best_col])
        group = _top_group(ratios, ell)
        witness = Witness(
            agents=tuple(instance.agents[i] for i in group),
            candidates=(instance.candidates[best_col],),
            ratios=tuple(float(ratios[i]) for i in group),
        )
    return AuditReport(factor, witness, {"ell": int(ell)})


def beta_plurality_value(instance: MetricInstance, point: int) -> AuditReport:
    """Largest beta for which `point` is a beta-plurality point.

    For each rival q the point survives exactly the beta values up to the
    ceil(n/2)-th largest ratio d(i, q) / d(i, p); the value is the minimum
    over rivals, clamped into [0, 1].  Agents coincident with p count for p
    against every rival (ratio +inf).  When the value drops below 1 the
    witness holds the strongest rival and the majority preferring it.
    """
    (pos,) = _candidate_positions(instance, [point])
    dist = instance.agent_candidate
    n, m = dist.shape
    params = {"point": int(point)}
    if m == 1:
        return AuditReport(1.0, None, params)

    t = (n + 1) // 2
    to_point = dist[:, pos]
    zero = to_point == 0.0
    safe = np.where(zero, 1.0, to_point)
    ratios = np.where(zero[:, None], np.inf, dist / safe[:, None])
    per_rival = np.partition(ratios, n - t, axis=0)[n - t]
    per_rival[pos] = np.inf
    rival = int(per_rival.argmin())
    raw = float(per_rival[rival])
    value = min(1.0, raw)

    witness = None
    if value < 1.0:
        # the floor(n/2)+1 agents most in favor of the rival
        order = np.lexsort((np.arange(n), ratios[:, rival]))
        group = np.sort(order[: n - t + 1])
        witness = Witness(
            agents=tuple(instance.agents[i] for i in group),
            candidates=(instance.candidates[rival],),
            ratios=tuple(float(ratios[i, rival]) for i in group),
        )
    return AuditReport(value, witness, params)


def is_beta_plurality(instance: MetricInstance, point: int, beta: float) -> bool:
    """Whether at least half the agents weakly prefer `point` (scaled by beta)
    against every candidate.  Exact integer count comparison, no tolerance."""
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must be in (0, 1]")
    (pos,) = _candidate_positions(instance, [point])
    dist = instance.agent_candidate
    n = dist.shape[0]
    scaled = beta * dist[:, pos]
    counts = (scaled[:, None] <= dist).sum(axis=0)
    return bool((2 * counts >= n).all())


def _droop_deviation_exists(instance: MetricInstance, pos: int, alpha: float) -> bool:
    # a strict majority block (floor(n/2) + 1 agents) improving by > alpha
    dist = instance.agent_candidate
    n = dist.shape[0]
    to_point = dist[:, pos]
    counts = (alpha * dist < to_point[:, None]).sum(axis=0)
    return bool((counts >= n // 2 + 1).any())


@dataclass(frozen=True)
class EquivalenceCounterexample:
    beta: float
    plurality_point: bool
    deviation_exists: bool


def verify_equivalence(instance: MetricInstance, point: int, beta_grid) -> EquivalenceCounterexample | None:
    """Check, beta by beta, that the plurality condition for `point` matches
    the absence of a majority-quota group deviation at factor 1/beta.

    Both sides are evaluated directly from their definitions (counting
    agents), not through the audited values, so the strict/non-strict
    boundary semantics are compared faithfully.  Returns the first failing
    beta, or None when the equivalence holds on the whole grid.
    """
    (pos,) = _candidate_positions(instance, [point])
    for beta in beta_grid:
        if not 0.0 < beta <= 1.0:
            raise ValueError("beta grid values must be in (0, 1]")
        left = is_beta_plurality(instance, point, beta)
        right = not _droop_deviation_exists(instance, pos, 1.0 / beta)
        if left != right:
            return EquivalenceCounterexample(float(beta), left, right)
    return None


def _subset_sizes(n: int, m: int, ell: int, q: int, max_group_size: int) -> list[int]:
    top = min(max_group_size, m, n // ell if ell <= n else 0)
    return [s for s in range(max(q, 1), top + 1) if s * ell <= n]


def min_alpha_q_core(
    instance: MetricInstance,
    centers,
    ell: int,
    q: int,
    max_group_size: int | None = None,
) -> AuditReport:
    """Tight factor for membership in the quota q-core, by full enumeration.

    Deviations move a group of at least |C'| * ell agents to a candidate set
    C' with q <= |C'| <= max_group_size, comparing q-th closest distances on
    both sides.  Checking group size exactly |C'| * ell loses nothing:
    a larger multiplier only demands a bigger group.  With q = 1 and
    max_group_size = 1 this reproduces min_alpha_proportional bit for bit.
    """
    centers = list(centers)
    if not centers:
        raise ValueError("center set must be nonempty")
    cols = _candidate_positions(instance, centers)
    if not 1 <= q <= len(cols):
        raise ValueError(f"q={q} outside 1..{len(cols)}")
    if ell < 1:
        raise ValueError("ell must be at least 1")
    dist = instance.agent_candidate
    n, m = dist.shape
    if max_group_size is None:
        max_group_size = n // ell

    sizes = _subset_sizes(n, m, ell, q, max_group_size)
    total = sum(math.comb(m, s) for s in sizes)
    if total > SUBSET_ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"core audit would enumerate {total} candidate subsets "
            f"(limit {SUBSET_ENUMERATION_LIMIT}); rerun on a smaller instance "
            f"or with a smaller max_group_size"
        )

    dist_q_to_set = np.partition(dist[:, cols], q - 1, axis=1)[:, q - 1]
    params = {"ell": int(ell), "q": int(q), "max_group_size": int(max_group_size)}

    best = -np.inf
    best_subset: tuple[int, ...] | None = None
    for s in sizes:
        subsets = np.array(list(itertools.combinations(range(m), s)), dtype=np.int64)
        val, row = _kernels.qcore_scan(dist_q_to_set, dist, subsets, int(q), int(ell))
        if val > best:
            best = val
            best_subset = tuple(int(c) for c in subsets[row])

    factor = max(1.0, best)
    witness = None
    if best > 1.0 and best_subset is not None:
        block = dist[:, list(best_subset)]
        dq = np.partition(block, q - 1, axis=1)[:, q - 1]
        ratios = _ratio_column(dist_q_to_set, dq)
        group = _top_group(ratios, len(best_subset) * ell)
        witness = Witness(
            agents=tuple(instance.agents[i] for i in group),
            candidates=tuple(instance.candidates[c] for c in best_subset),
            ratios=tuple(float(ratios[i]) for i in group),
        )
    return AuditReport(factor, witness, params)
