import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from conftest import line_instance, random_shortest_path_instance
from propclust import (
    Quota,
    distance,
    droop_quota,
    dump_instance,
    euclidean_instance,
    hare_quota,
    instance_from_dict,
    instance_to_dict,
    matrix_instance,
    q_distance,
    resolve_quota,
    validate_metric,
)


def test_distance_l2_triangle():
    inst = euclidean_instance([[0.0, 0.0], [3.0, 4.0]], (0, 1), (0, 1))
    assert distance(inst, 0, 1) == 5.0
    assert distance(inst, 1, 0) == 5.0


def test_distance_identity():
    inst = line_instance(0, 2, 7)
    for p in range(3):
        assert distance(inst, p, p) == 0.0


def test_distance_matrix_lookup():
    mat = np.zeros((6, 6))
    mat[2, 5] = mat[5, 2] = 7.5
    inst = matrix_instance(mat, range(6), range(6))
    assert distance(inst, 2, 5) == 7.5


def test_distance_unknown_id():
    inst = line_instance(0, 1)
    with pytest.raises(ValueError):
        distance(inst, 0, 9)


@pytest.mark.parametrize("norm,expected", [("l1", 7.0), ("l2", 5.0), ("linf", 4.0)])
def test_norms(norm, expected):
    inst = euclidean_instance([[0.0, 0.0], [3.0, 4.0]], (0, 1), (0, 1), norm)
    assert distance(inst, 0, 1) == expected


def test_validate_triangle_violation():
    mat = [[0, 1, 10], [1, 0, 1], [10, 1, 0]]
    violation = validate_metric(matrix_instance(mat, range(3), range(3)))
    assert violation is not None
    assert violation.kind == "triangle"
    assert violation.triple == (0, 1, 2)
    assert violation.slack == pytest.approx(8.0)


def test_validate_euclidean_derived_ok():
    rng = np.random.default_rng(3)
    coords = rng.random((7, 3))
    diffs = np.abs(coords[:, None, :] - coords[None, :, :])
    mat = np.sqrt((diffs**2).sum(axis=2))
    assert validate_metric(matrix_instance(mat, range(7), range(7))) is None


def test_validate_zero_matrix_is_pseudometric():
    inst = matrix_instance(np.zeros((4, 4)), range(4), range(4))
    assert validate_metric(inst) is None


def test_validate_asymmetric_is_input_error():
    mat = [[0.0, 1.0], [2.0, 0.0]]
    inst = matrix_instance(mat, (0, 1), (0, 1))
    with pytest.raises(ValueError):
        validate_metric(inst)


def test_validate_euclidean_trivial():
    assert validate_metric(line_instance(0, 5, 100)) is None


def test_q_distance_examples():
    inst = line_instance(0, 1, 3, 7)
    assert q_distance(inst, 0, [1, 2, 3], 2) == 3.0
    assert q_distance(inst, 0, [1, 2, 3], 1) == 1.0
    inst2 = line_instance(5, 5, 9)
    assert q_distance(inst2, 0, [1, 2], 1) == 0.0


def test_q_distance_out_of_range():
    inst = line_instance(0, 1, 2)
    with pytest.raises(ValueError):
        q_distance(inst, 0, [1, 2], 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_q_distance_monotone_in_q(seed):
    inst = random_shortest_path_instance(seed)
    centers = list(inst.candidates)
    for i in inst.agents:
        values = [q_distance(inst, i, centers, q) for q in range(1, len(centers) + 1)]
        assert values == sorted(values)
        assert values[0] == oracle.dist_to_set(inst, i, centers)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_q_distance_triangle_transfer(seed):
    inst = random_shortest_path_instance(seed)
    centers = list(inst.candidates)
    tol = 1e-9
    for q in range(1, len(centers) + 1):
        for i in inst.agents:
            for j in inst.agents:
                lhs = q_distance(inst, i, centers, q)
                rhs = distance(inst, i, j) + q_distance(inst, j, centers, q)
                assert lhs <= rhs + tol


def test_quota_examples():
    assert droop_quota(10, 2).ell == 4
    assert hare_quota(10, 2).ell == 5
    assert droop_quota(3, 1).ell == 2


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 500), st.integers(1, 20))
def test_quota_properties(n, k):
    droop = droop_quota(n, k).ell
    hare = hare_quota(n, k).ell
    assert droop > n / (k + 1)
    assert n - k * droop < droop
    assert hare >= n / k
    assert hare >= droop  # ceil(n/k) can never undercut the droop threshold


def test_quota_validation():
    with pytest.raises(ValueError):
        hare_quota(0, 3)
    with pytest.raises(ValueError):
        Quota(0)
    assert resolve_quota("hare", 10, 2).ell == 5
    assert resolve_quota("droop", 10, 2).ell == 4
    assert resolve_quota(7, 10, 2).ell == 7
    with pytest.raises(ValueError):
        resolve_quota("median", 10, 2)


def test_point_with_both_roles():
    inst = line_instance(0, 1, 2, candidates=[1])
    assert inst.agents == (0, 1, 2)
    assert inst.candidates == (1,)
    assert inst.agent_candidate.shape == (3, 1)


def test_instance_requires_agents_and_candidates():
    with pytest.raises(ValueError):
        euclidean_instance([[0.0]], (), (0,))
    with pytest.raises(ValueError):
        matrix_instance([[0.0, 1.0, 2.0]], (0,), (1,))  # non-square


def test_json_round_trip():
    inst = line_instance(0, 0.5, 2, candidates=[0, 2])
    data = json.loads(dump_instance(inst))
    back = instance_from_dict(data)
    assert back.kind == "euclidean"
    assert back.agents == inst.agents
    assert back.candidates == inst.candidates
    assert np.array_equal(back.pairwise, inst.pairwise)
    assert dump_instance(back) == dump_instance(inst)

    mat = random_shortest_path_instance(5)
    again = instance_from_dict(instance_to_dict(mat))
    assert np.array_equal(again.pairwise, mat.pairwise)


def test_instances_are_read_only():
    inst = line_instance(0, 1)
    with pytest.raises(ValueError):
        inst.pairwise[0, 1] = 3.0
