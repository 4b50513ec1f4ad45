import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from conftest import line_instance, random_shortest_path_instance
from propclust import cost_profile, distortion, euclidean_instance, social_cost


def test_social_cost_line(paper_line):
    at_zero, at_one = paper_line.candidates
    assert social_cost(paper_line, at_zero) == 6.0
    assert social_cost(paper_line, at_one) == 4.0


def test_social_cost_all_coincident():
    inst = line_instance(2, 2, 2, candidates=[0])
    assert social_cost(inst, 0) == 0.0


def test_social_cost_single_agent():
    inst = line_instance(0, 2.5, candidates=[1])
    assert social_cost(inst, 1) == 2.5


def test_social_cost_unknown_point():
    inst = line_instance(0, 1, candidates=[0])
    with pytest.raises(ValueError):
        social_cost(inst, 1)


def test_distortion_line(paper_line):
    at_zero, at_one = paper_line.candidates
    assert distortion(paper_line, at_zero) == 1.5
    assert distortion(paper_line, at_one) == 1.0


def test_distortion_infinite_against_free_optimum():
    inst = euclidean_instance([[3.0], [3.0], [0.0]], agents=(0, 1), candidates=(0, 2))
    assert math.isinf(distortion(inst, 2))
    assert distortion(inst, 0) == 1.0


def test_distortion_zero_over_zero():
    inst = line_instance(1, 1, candidates=[0, 1])
    assert distortion(inst, 0) == 1.0


def test_cost_profile_optimum(paper_line):
    profile = cost_profile(paper_line)
    assert profile.optimum == paper_line.candidates[1]
    assert profile.optimum_cost == 4.0
    assert profile.costs == (6.0, 4.0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_distortion_at_least_one_and_matches_oracle(seed):
    inst = random_shortest_path_instance(seed)
    profile = cost_profile(inst)
    for p in inst.candidates:
        value = distortion(inst, p)
        assert value >= 1.0
        # summation order differs between numpy and the sequential oracle
        assert value == pytest.approx(oracle.distortion(inst, p), rel=1e-12)
        assert social_cost(inst, p) == pytest.approx(oracle.social_cost(inst, p), rel=1e-12)
    assert distortion(inst, profile.optimum) == 1.0
