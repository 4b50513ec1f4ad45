"""Metric instances, quotas, and distance primitives.

An instance is a finite metric space over "points", each of which may act as
an agent (a voter to be served), a candidate (eligible to be opened/elected),
or both.  Geometry is either explicit coordinates under a tagged norm, or a
full symmetric distance matrix.  Instances are immutable after construction
and all operations here are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import EPS_METRIC

NORMS = ("l1", "l2", "linf")


def _pairwise(coords: np.ndarray, norm: str) -> np.ndarray:
    diff = np.abs(coords[:, None, :] - coords[None, :, :])
    if norm == "l1":
        return diff.sum(axis=2)
    if norm == "l2":
        return np.sqrt((diff * diff).sum(axis=2))
    if norm == "linf":
        return diff.max(axis=2)
    raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")


@dataclass(eq=False)
class MetricInstance:
    """Agents and candidates embedded in a finite metric space.

    `agents` and `candidates` are index tuples into the shared point list;
    a point may appear in both.  `pairwise[a, b]` holds the distance between
    any two points; `agent_candidate` is the agents-by-candidates view used
    by every rule and audit.
    """

    kind: str  # "euclidean" | "matrix"
    agents: tuple[int, ...]
    candidates: tuple[int, ...]
    coords: np.ndarray | None = None
    norm: str | None = None
    matrix: np.ndarray | None = None
    pairwise: np.ndarray = field(init=False, repr=False)
    agent_candidate: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind == "euclidean":
            if self.coords is None or self.norm is None:
                raise ValueError("euclidean instance needs coords and norm")
            if self.norm not in NORMS:
                raise ValueError(f"unknown norm {self.norm!r}")
            self.coords = np.asarray(self.coords, dtype=np.float64)
            if self.coords.ndim != 2:
                raise ValueError("coords must be a (points, dim) array")
            self.pairwise = _pairwise(self.coords, self.norm)
        elif self.kind == "matrix":
            if self.matrix is None:
                raise ValueError("matrix instance needs a distance matrix")
            self.matrix = np.asarray(self.matrix, dtype=np.float64)
            if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
                raise ValueError("distance matrix must be square")
            self.pairwise = self.matrix
        else:
            raise ValueError(f"unknown instance kind {self.kind!r}")

        p = self.pairwise.shape[0]
        self.agents = tuple(int(a) for a in self.agents)
        self.candidates = tuple(int(c) for c in self.candidates)
        if len(self.agents) < 1 or len(self.candidates) < 1:
            raise ValueError("need at least one agent and one candidate")
        for pid in (*self.agents, *self.candidates):
            if not 0 <= pid < p:
                raise ValueError(f"point id {pid} out of range for {p} points")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent ids")
        if len(set(self.candidates)) != len(self.candidates):
            raise ValueError("duplicate candidate ids")

        self.agent_candidate = np.ascontiguousarray(
            self.pairwise[np.ix_(self.agents, self.candidates)]
        )
        for arr in (self.pairwise, self.agent_candidate):
            arr.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)

    @property
    def n_points(self) -> int:
        return self.pairwise.shape[0]

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def n_candidates(self) -> int:
        return len(self.candidates)


def euclidean_instance(coords, agents, candidates, norm="l2") -> MetricInstance:
    return MetricInstance(
        kind="euclidean",
        agents=tuple(agents),
        candidates=tuple(candidates),
        coords=np.asarray(coords, dtype=np.float64),
        norm=norm,
    )


def matrix_instance(matrix, agents, candidates) -> MetricInstance:
    return MetricInstance(
        kind="matrix",
        agents=tuple(agents),
        candidates=tuple(candidates),
        matrix=np.asarray(matrix, dtype=np.float64),
    )


def distance(instance: MetricInstance, a: int, b: int) -> float:
    """Distance between two point ids."""
    p = instance.n_points
    if not (0 <= a < p and 0 <= b < p):
        raise ValueError(f"unknown point id in ({a}, {b}); instance has {p} points")
    return float(instance.pairwise[a, b])


@dataclass(frozen=True)
class MetricViolation:
    """Worst metric-axiom failure found by `validate_metric`.

    `kind` is "triangle" (d(x,z) > d(x,y)+d(y,z)), "diagonal" (d(x,x) != 0)
    or "negative" (d(x,y) < 0); `slack` is the magnitude of the failure.
    """

    kind: str
    triple: tuple[int, int, int]
    slack: float


def validate_metric(instance: MetricInstance) -> MetricViolation | None:
    """Check the metric axioms on a matrix-form instance.

    Returns None when every axiom holds within EPS_METRIC, otherwise the
    worst violation.  Euclidean instances validate trivially.  A matrix that
    is not symmetric is rejected outright (asymmetry is a malformed input,
    not a measurable violation).  Distinct points at distance zero are
    accepted: everything downstream only needs symmetry and the triangle
    inequality.
    """
    if instance.kind == "euclidean":
        return None
    d = instance.matrix
    if not np.allclose(d, d.T, rtol=0.0, atol=EPS_METRIC):
        raise ValueError("distance matrix is not symmetric")

    worst: MetricViolation | None = None

    neg = d.min()
    if neg < -EPS_METRIC:
        x, y = np.unravel_index(int(d.argmin()), d.shape)
        worst = MetricViolation("negative", (int(x), int(y), int(y)), float(-neg))

    diag = np.abs(np.diag(d))
    if diag.max() > EPS_METRIC and (worst is None or diag.max() > worst.slack):
        x = int(diag.argmax())
        worst = MetricViolation("diagonal", (x, x, x), float(diag.max()))

    # slack[x, y, z] = d(x, z) - d(x, y) - d(y, z)
    slack = d[:, None, :] - d[:, :, None] - d[None, :, :]
    top = slack.max()
    if top > EPS_METRIC and (worst is None or top > worst.slack):
        x, y, z = np.unravel_index(int(slack.argmax()), slack.shape)
        worst = MetricViolation("triangle", (int(x), int(y), int(z)), float(top))

    return worst


def q_distance(instance: MetricInstance, agent: int, centers, q: int) -> float:
    """Distance from an agent to its q-th closest member of a candidate set."""
    centers = list(centers)
    if not 1 <= q <= len(centers):
        raise ValueError(f"q={q} outside 1..{len(centers)}")
    p = instance.n_points
    if not 0 <= agent < p:
        raise ValueError(f"unknown agent id {agent}")
    for c in centers:
        if not 0 <= c < p:
            raise ValueError(f"unknown candidate id {c}")
    dists = instance.pairwise[agent, centers]
    return float(np.partition(dists, q - 1)[q - 1])


@dataclass(frozen=True)
class Quota:
    """Integral group-size threshold with its provenance."""

    ell: int
    source: str = "custom"

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("quota must be at least 1")
        if self.source not in ("hare", "droop", "custom"):
            raise ValueError(f"unknown quota source {self.source!r}")


def hare_quota(n: int, k: int) -> Quota:
    """ceil(n / k), the classical per-seat share rounded up to an integer."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return Quota(-(-n // k), "hare")


def droop_quota(n: int, k: int) -> Quota:
    """floor(n / (k + 1)) + 1, the smallest integer threshold such that k + 1
    disjoint groups of that size cannot all exist."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return Quota(n // (k + 1) + 1, "droop")


def resolve_quota(policy, n: int, k: int) -> Quota:
    """Turn a quota policy ("hare" | "droop" | integer) into a Quota."""
    if isinstance(policy, Quota):
        return policy
    if policy == "hare":
        return hare_quota(n, k)
    if policy == "droop":
        return droop_quota(n, k)
    try:
        ell = int(policy)
    except (TypeError, ValueError):
        raise ValueError(f"quota policy {policy!r} is not hare/droop/an integer") from None
    return Quota(ell, "custom")


# --- JSON interface -------------------------------------------------------
#
# {
#   "kind": "euclidean" | "matrix",
#   "norm": "l1" | "l2" | "linf",        (euclidean only)
#   "points": [[x, y, ...], ...],        (euclidean only)
#   "matrix": [[...], ...],              (matrix only)
#   "agents": [point indices],
#   "candidates": [point indices]
# }


def instance_to_dict(instance: MetricInstance) -> dict:
    out: dict = {
        "kind": instance.kind,
        "agents": list(instance.agents),
        "candidates": list(instance.candidates),
    }
    if instance.kind == "euclidean":
        out["norm"] = instance.norm
        out["points"] = instance.coords.tolist()
    else:
        out["matrix"] = instance.matrix.tolist()
    return out


def instance_from_dict(data: dict) -> MetricInstance:
    kind = data.get("kind")
    if kind == "euclidean":
        return euclidean_instance(
            data["points"], data["agents"], data["candidates"], data.get("norm", "l2")
        )
    if kind == "matrix":
        return matrix_instance(data["matrix"], data["agents"], data["candidates"])
    raise ValueError(f"unknown instance kind {kind!r}")


def dump_instance(instance: MetricInstance) -> str:
    """Canonical JSON text; identical instances serialize byte-identically."""
    return json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":")) + "\n"


def save_instance(instance: MetricInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_instance(instance))


def load_instance(path) -> MetricInstance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))
