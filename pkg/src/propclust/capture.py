"""Ball-growing greedy capture clustering.

Balls grow around every candidate simultaneously.  The moment a candidate's
ball holds at least `ell` unassigned agents it opens and captures them; open
centers keep absorbing any unassigned agent their ball reaches.  The smooth
growth is discretized into events at the sorted candidate-agent distances;
simultaneous events resolve by candidate index (the earlier candidate may
deny a later one its quorum), and agents tied at the same radius are
captured as one batch, which makes the outcome invariant under agent
relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import MetricInstance, Quota


@dataclass(frozen=True)
class Clustering:
    """Selected centers with the agent assignment produced by the capture run.

    `opening_radii[c]` is the ball radius at which center c captured its
    founding agents (diagnostic only).  `coverage_fallback` marks the corner
    case where the quota exceeds n and a single covering center was opened
    instead.
    """

    centers: tuple[int, ...]
    assignment: dict[int, int]
    opening_radii: dict[int, float]
    coverage_fallback: bool = False

    def to_dict(self) -> dict:
        return {
            "centers": list(self.centers),
            "assignment": {str(a): c for a, c in self.assignment.items()},
            "opening_radii": {str(c): r for c, r in self.opening_radii.items()},
            "coverage_fallback": self.coverage_fallback,
        }


def greedy_capture(
    instance: MetricInstance, k: int, quota: Quota, tiebreak: str = "index"
) -> Clustering:
    """Run greedy capture with group-size threshold quota.ell.

    Returns at most floor(n / ell) centers, hence at most k whenever
    ell > n / (k + 1).  Once fewer than ell agents remain unassigned no new
    center can open, so the stragglers go to their nearest open center
    (ties to the lower candidate index), which is exactly where continued
    ball growth would have put them.  If the quota exceeds n the process
    would open nothing; we open the single candidate that covers all agents
    at the smallest radius and flag the result.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ell = quota.ell
    if ell < 1:
        raise ValueError("quota must be at least 1")
    if tiebreak != "index":
        raise ValueError(f"unknown tie-break policy {tiebreak!r}")

    dist = instance.agent_candidate  # (n, m)
    n, m = dist.shape

    if ell > n:
        # no ball can ever hold ell agents: open one covering center
        cover_radii = dist.max(axis=0)
        best = int(cover_radii.argmin())
        center = instance.candidates[best]
        return Clustering(
            centers=(center,),
            assignment={a: center for a in instance.agents},
            opening_radii={center: float(cover_radii[best])},
            coverage_fallback=True,
        )

    # events: every distinct (radius, candidate) pair, in lexicographic order
    radius_flat = dist.T.ravel()  # candidate-major
    cand_flat = np.repeat(np.arange(m), n)
    order = np.lexsort((cand_flat, radius_flat))

    unassigned = np.ones(n, dtype=bool)
    is_open = np.zeros(m, dtype=bool)
    assignment = np.full(n, -1, dtype=np.int64)
    opened: list[int] = []
    opening_radii: dict[int, float] = {}
    remaining = n

    last_event = (-1.0, -1)
    for idx in order:
        radius = radius_flat[idx]
        cand = int(cand_flat[idx])
        if (radius, cand) == last_event:
            continue  # same ball state: agents at equal radius batch together
        last_event = (radius, cand)

        in_ball = unassigned & (dist[:, cand] <= radius)
        if is_open[cand]:
            captured = in_ball
        elif int(in_ball.sum()) >= ell:
            is_open[cand] = True
            opened.append(cand)
            opening_radii[instance.candidates[cand]] = float(radius)
            captured = in_ball
        else:
            continue

        hit = int(captured.sum())
        if hit:
            unassigned[captured] = False
            assignment[captured] = cand
            remaining -= hit
            if remaining == 0:
                break
            if remaining < ell:
                break  # no further center can open; mop up below

    if remaining > 0:
        open_cols = np.nonzero(is_open)[0]
        for i in np.nonzero(unassigned)[0]:
            best = open_cols[int(dist[i, open_cols].argmin())]
            assignment[i] = best

    centers = tuple(instance.candidates[c] for c in opened)
    return Clustering(
        centers=centers,
        assignment={
            instance.agents[i]: instance.candidates[int(assignment[i])] for i in range(n)
        },
        opening_radii=opening_radii,
        coverage_fallback=False,
    )
