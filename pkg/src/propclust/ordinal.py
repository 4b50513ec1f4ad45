"""Ordinal-information rules and representation checkers.

Profiles hold one strict ranking per agent (rank 1 = closest).  Profiles
derived from a metric instance break exact distance ties by ascending
candidate index, so derivation is deterministic.  The checkers quantify over
*every* sufficiently large cohesive subgroup, reduced to equivalent counting
form: a committee fails rank-JR when some rank-r-cohesive pool contains ell
agents none of whom has a winner within rank r, and fails rank-PJR when mu*ell
cohesive agents pool fewer than mu reachable winners.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .audits import SUBSET_ENUMERATION_LIMIT, EnumerationLimitError
from .instances import MetricInstance, Quota


@dataclass(eq=False)
class OrdinalProfile:
    """n strict rankings over m candidates; ranks[i, c] is in 1..m."""

    ranks: np.ndarray
    agent_ids: tuple[int, ...] = ()
    candidate_ids: tuple[int, ...] = ()

    def __post_init__(self):
        self.ranks = np.asarray(self.ranks, dtype=np.int64)
        if self.ranks.ndim != 2:
            raise ValueError("ranks must be a (agents, candidates) matrix")
        n, m = self.ranks.shape
        if n < 1 or m < 1:
            raise ValueError("need at least one agent and one candidate")
        expected = np.arange(1, m + 1)
        if not (np.sort(self.ranks, axis=1) == expected).all():
            raise ValueError("every agent's ranks must be a permutation of 1..m")
        if not self.agent_ids:
            self.agent_ids = tuple(range(n))
        if not self.candidate_ids:
            self.candidate_ids = tuple(range(m))
        if len(self.agent_ids) != n or len(self.candidate_ids) != m:
            raise ValueError("id tuples must match the rank matrix shape")
        self.ranks.setflags(write=False)

    @property
    def n_agents(self) -> int:
        return self.ranks.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.ranks.shape[1]

    def agent_position(self, agent_id: int) -> int:
        try:
            return self.agent_ids.index(agent_id)
        except ValueError:
            raise ValueError(f"unknown agent id {agent_id}") from None

    def candidate_position(self, candidate_id: int) -> int:
        try:
            return self.candidate_ids.index(candidate_id)
        except ValueError:
            raise ValueError(f"unknown candidate id {candidate_id}") from None

    def rank_of(self, agent_id: int, candidate_id: int) -> int:
        return int(self.ranks[self.agent_position(agent_id), self.candidate_position(candidate_id)])


def derive_profile(instance: MetricInstance) -> OrdinalProfile:
    """Rank candidates by nondecreasing distance, ties to the lower index."""
    dist = instance.agent_candidate
    order = np.argsort(dist, axis=1, kind="stable")
    ranks = np.argsort(order, axis=1) + 1
    return OrdinalProfile(
        ranks=ranks, agent_ids=instance.agents, candidate_ids=instance.candidates
    )


def profile_from_dict(data: dict) -> OrdinalProfile:
    """Accept {"ranks": [[...], ...]} with 0-based ranks per candidate."""
    ranks = np.asarray(data["ranks"], dtype=np.int64) + 1
    return OrdinalProfile(ranks=ranks)


def profile_to_dict(profile: OrdinalProfile) -> dict:
    return {"ranks": (profile.ranks - 1).tolist()}


# --- plurality veto ---------------------------------------------------------


@dataclass(frozen=True)
class VetoTranscript:
    """Initial plurality scores, the n veto events in order, and the winner
    (the candidate hit by the final veto)."""

    initial_scores: tuple[int, ...]
    events: tuple[tuple[int, int], ...]
    winner: int

    def to_dict(self) -> dict:
        return {
            "initial_scores": list(self.initial_scores),
            "events": [list(e) for e in self.events],
            "winner": self.winner,
        }


def plurality_veto(profile: OrdinalProfile, agent_order) -> VetoTranscript:
    """Plurality scores, then one veto per agent in `agent_order`.

    Each agent decrements their least-preferred candidate among those whose
    score is still positive.  Scores sum to n and reach zero after exactly n
    vetoes; the candidate receiving the last veto wins.
    """
    order = [profile.agent_position(a) for a in agent_order]
    n, m = profile.ranks.shape
    if sorted(order) != list(range(n)):
        raise ValueError("agent_order must be a permutation of the agents")

    scores = np.bincount(np.argmin(profile.ranks, axis=1), minlength=m)
    initial = tuple(int(s) for s in scores)
    events = []
    for i in order:
        positive = scores > 0
        row = np.where(positive, profile.ranks[i], 0)
        target = int(row.argmax())
        scores[target] -= 1
        events.append((profile.agent_ids[i], profile.candidate_ids[target]))
    return VetoTranscript(initial, tuple(events), events[-1][1])


# --- representation checkers ------------------------------------------------


@dataclass(frozen=True)
class RankJRWitness:
    rank: int
    candidate: int
    agents: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"rank": self.rank, "candidate": self.candidate, "agents": list(self.agents)}


def check_rank_jr(profile: OrdinalProfile, winners, ell: int) -> RankJRWitness | None:
    """Find a cohesive, unrepresented group, or None if none exists.

    A violation is a rank r and candidate c such that at least ell agents
    rank c within r while having no winner within r; any ell of them witness
    the failure, so the full uncovered group is returned.  Scans r ascending
    then candidate index ascending for a deterministic witness.
    """
    winners = list(winners)
    if not winners:
        raise ValueError("winner set must be nonempty")
    wcols = [profile.candidate_position(w) for w in winners]
    if ell < 1:
        raise ValueError("ell must be at least 1")
    ranks = profile.ranks
    n, m = ranks.shape
    for r in range(1, m + 1):
        within = ranks <= r
        covered = within[:, wcols].any(axis=1)
        uncovered = within & ~covered[:, None]
        counts = uncovered.sum(axis=0)
        hits = np.nonzero(counts >= ell)[0]
        if hits.size:
            c = int(hits[0])
            group = np.nonzero(uncovered[:, c])[0]
            return RankJRWitness(
                rank=r,
                candidate=profile.candidate_ids[c],
                agents=tuple(profile.agent_ids[i] for i in group),
            )
    return None


@dataclass(frozen=True)
class RankPJRWitness:
    rank: int
    mu: int
    candidates: tuple[int, ...]
    agents: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "mu": self.mu,
            "candidates": list(self.candidates),
            "agents": list(self.agents),
        }


def check_rank_pjr(
    profile: OrdinalProfile, winners, ell: int, max_mu: int | None = None
) -> RankPJRWitness | None:
    """Scaled-cohesion representation check, by subset enumeration.

    For each multiplier mu up to max_mu (capped at floor(n / ell), beyond
    which no group is large enough), each rank r, and each candidate subset
    C' of size mu, the agents ranking all of C' within r must collectively
    reach at least mu winners within rank r.  The returned witness is the
    first violation in (rank, mu, C') order: the cohesive agents whose pooled
    winner coverage fits in mu-1 winners.  At mu = 1 this coincides with
    check_rank_jr.
    """
    winners = list(winners)
    if not winners:
        raise ValueError("winner set must be nonempty")
    wcols = [profile.candidate_position(w) for w in winners]
    if ell < 1:
        raise ValueError("ell must be at least 1")
    ranks = profile.ranks
    n, m = ranks.shape
    k = len(wcols)
    cap = min(n // ell, m)  # a bigger multiplier has no group or candidate set
    max_mu = cap if max_mu is None else min(max_mu, cap)
    if max_mu < 1:
        return None

    total = sum(math.comb(m, mu) for mu in range(1, max_mu + 1))
    if total > SUBSET_ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"rank-PJR check would enumerate {total} candidate subsets "
            f"(limit {SUBSET_ENUMERATION_LIMIT}); rerun on a smaller instance "
            f"or with a smaller max_mu"
        )

    winner_ranks = np.ascontiguousarray(ranks[:, wcols])
    best: tuple[int, int, tuple[int, ...], int] | None = None  # (r, mu, subset, tmask)
    for mu in range(1, max_mu + 1):
        subsets = np.array(list(itertools.combinations(range(m), mu)), dtype=np.int64)
        t_masks = np.array(
            [sum(1 << w for w in combo) for combo in itertools.combinations(range(k), min(mu - 1, k))],
            dtype=np.int64,
        )
        r, row, tt = _kernels.pjr_scan(ranks, winner_ranks, subsets, t_masks, int(ell), int(mu))
        if r >= 0 and (best is None or r < best[0]):
            best = (r, mu, tuple(int(c) for c in subsets[row]), int(t_masks[tt]))

    if best is None:
        return None
    r, mu, subset, t_mask = best
    within = ranks[:, list(subset)] <= r
    members = within.all(axis=1)
    covered_mask = ((ranks[:, wcols] <= r) * (1 << np.arange(k, dtype=np.int64))).sum(axis=1)
    group = np.nonzero(members & ((covered_mask & ~t_mask) == 0))[0]
    return RankPJRWitness(
        rank=r,
        mu=mu,
        candidates=tuple(profile.candidate_ids[c] for c in subset),
        agents=tuple(profile.agent_ids[i] for i in group),
    )


# --- expanding approvals ----------------------------------------------------


def ear(profile: OrdinalProfile, k: int, quota: Quota) -> tuple[int, ...]:
    """Expanding approvals: elect candidates as the rank threshold grows.

    Agents start with weight 1.  At each rank r, while some unelected
    candidate carries at least quota.ell supporter weight within rank r, the
    lowest-indexed one is elected and exactly ell weight is removed from its
    supporters in proportion to their current weights.  Agents not yet
    represented within rank r never lose weight, which is what makes the
    output pass check_rank_jr at the same quota.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ell = quota.ell
    ranks = profile.ranks
    n, m = ranks.shape
    weights = np.ones(n)
    elected = np.zeros(m, dtype=bool)
    chosen: list[int] = []
    for r in range(1, m + 1):
        within = ranks <= r
        within_f = within.astype(np.float64)
        while True:
            totals = weights @ within_f
            totals[elected] = -1.0
            eligible = np.nonzero(totals >= ell)[0]
            if eligible.size == 0:
                break
            c = int(eligible[0])
            elected[c] = True
            chosen.append(c)
            supporters = within[:, c]
            pool = float(totals[c])
            weights[supporters] -= ell * weights[supporters] / pool
    return tuple(profile.candidate_ids[c] for c in chosen)
