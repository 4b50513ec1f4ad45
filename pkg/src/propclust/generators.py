"""Seeded instance generators for the audit corpus.

All randomness flows through numpy's default_rng (PCG64), so a GenSpec
reproduces the same instance bit for bit.  Candidates default to the agent
locations, with extra sampled locations only when m exceeds n.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .instances import MetricInstance, _pairwise, euclidean_instance, matrix_instance

FAMILIES = (
    "euclidean_uniform",
    "euclidean_clustered",
    "random_metric",
    "line_paper",
    "triangle",
)


@dataclass(frozen=True)
class GenSpec:
    """Serializable recipe for one instance."""

    family: str
    n: int = 1
    m: int | None = None
    dim: int = 2
    norm: str = "l2"
    seed: int = 0
    blobs: int = 3
    spread: float = 0.08

    def to_dict(self) -> dict:
        return asdict(self)


def spec_from_dict(data: dict) -> GenSpec:
    known = {f: data[f] for f in GenSpec.__dataclass_fields__ if f in data}
    return GenSpec(**known)


def _coords(spec: GenSpec, rng: np.random.Generator, points: int) -> np.ndarray:
    if spec.family == "euclidean_clustered":
        if spec.blobs < 1 or spec.spread < 0:
            raise ValueError("need blobs >= 1 and spread >= 0")
        centers = rng.random((spec.blobs, spec.dim))
        labels = rng.integers(0, spec.blobs, points)
        return centers[labels] + rng.normal(0.0, spec.spread, (points, spec.dim))
    return rng.random((points, spec.dim))


def generate(spec: GenSpec) -> MetricInstance:
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; expected one of {FAMILIES}")
    if spec.family == "line_paper":
        return _line_paper(spec)
    if spec.family == "triangle":
        return _triangle(spec)

    n = spec.n
    m = n if spec.m is None else spec.m
    if n < 1 or m < 1 or spec.dim < 1:
        raise ValueError("need n >= 1, m >= 1, dim >= 1")
    rng = np.random.default_rng(spec.seed)
    coords = _coords(spec, rng, max(n, m))
    agents = tuple(range(n))
    candidates = tuple(range(m))
    if spec.family == "random_metric":
        return matrix_instance(_pairwise(coords, spec.norm), agents, candidates)
    return euclidean_instance(coords, agents, candidates, spec.norm)


def _line_paper(spec: GenSpec) -> MetricInstance:
    """n/2 - 1 agents at 0 and n/2 + 1 agents at 1, candidates at 0 and 1."""
    n = spec.n
    if n < 4 or n % 2 != 0:
        raise ValueError("line_paper needs an even n of at least 4")
    if spec.m not in (None, 2):
        raise ValueError("line_paper has exactly the two candidate locations")
    at_zero = n // 2 - 1
    coords = [[0.0]] * at_zero + [[1.0]] * (n - at_zero)
    return euclidean_instance(coords, range(n), (0, at_zero), "l2")


def _triangle(spec: GenSpec) -> MetricInstance:
    """Three agents at unit-equilateral-triangle vertices, candidates too.

    Stored as a distance matrix: float coordinates cannot express the
    height exactly, and the unit side lengths should be exact.
    """
    if spec.n not in (1, 3) or spec.m not in (None, 3):
        raise ValueError("triangle is a fixed 3-point instance")
    sides = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    return matrix_instance(sides, (0, 1, 2), (0, 1, 2))
