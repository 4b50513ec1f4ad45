import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from conftest import line_instance, random_euclidean, random_shortest_path_instance
from propclust import (
    OrdinalProfile,
    Quota,
    beta_plurality_value,
    check_rank_jr,
    check_rank_pjr,
    derive_profile,
    distortion,
    droop_quota,
    ear,
    euclidean_instance,
    hare_quota,
    min_alpha_proportional,
    plurality_veto,
    profile_from_dict,
    profile_to_dict,
)
from propclust.bounds import (
    EPS_CMP,
    RANK_JR_PROPORTIONALITY_BOUND,
    VETO_DISTORTION_BOUND,
    VETO_PLURALITY_BOUND,
)


def profile(rows, **kwargs):
    return OrdinalProfile(ranks=np.array(rows), **kwargs)


def random_profile(seed, n_max=8, m_max=5):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    return profile([rng.permutation(m) + 1 for _ in range(n)])


# --- profile derivation -----------------------------------------------------


def test_derive_ranks_by_distance():
    inst = line_instance(0, 3, 1, 2, candidates=[1, 2, 3])
    prof = derive_profile(inst)
    assert prof.rank_of(0, 2) == 1
    assert prof.rank_of(0, 3) == 2
    assert prof.rank_of(0, 1) == 3


def test_derive_tie_breaks_to_lower_candidate():
    inst = line_instance(5, 0, 0, 0, 4, 0, 0, 6, candidates=[4, 7])
    prof = derive_profile(inst)
    # agent 0 at location 5 is equidistant from candidates 4 and 7
    assert prof.rank_of(0, 4) == 1
    assert prof.rank_of(0, 7) == 2


def test_derive_coincident_candidate_first():
    inst = line_instance(2, 0, 2, candidates=[1, 2])
    prof = derive_profile(inst)
    assert prof.rank_of(0, 2) == 1


def test_profile_validation():
    with pytest.raises(ValueError):
        profile([[1, 1]])
    with pytest.raises(ValueError):
        profile([[1, 2], [2, 3]])


def test_profile_json_round_trip():
    prof = profile([[2, 1, 3], [1, 2, 3]])
    back = profile_from_dict(profile_to_dict(prof))
    assert np.array_equal(back.ranks, prof.ranks)


# --- plurality veto ---------------------------------------------------------


def test_veto_majority_example():
    prof = profile([[1, 2], [1, 2], [2, 1]])
    transcript = plurality_veto(prof, [0, 1, 2])
    assert transcript.initial_scores == (2, 1)
    assert transcript.events == ((0, 1), (1, 0), (2, 0))
    assert transcript.winner == 0


def test_veto_unanimous_any_order():
    prof = profile([[3, 1, 2]] * 4)
    for order in itertools.permutations(range(4)):
        assert plurality_veto(prof, order).winner == 1


def test_veto_single_agent():
    prof = profile([[2, 3, 1]])
    transcript = plurality_veto(prof, [0])
    assert transcript.winner == 2
    assert transcript.initial_scores == (0, 0, 1)


def test_veto_requires_permutation():
    prof = profile([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        plurality_veto(prof, [0, 0])


def test_veto_scores_conserved():
    prof = random_profile(11)
    transcript = plurality_veto(prof, list(prof.agent_ids))
    assert sum(transcript.initial_scores) == prof.n_agents
    assert len(transcript.events) == prof.n_agents
    assert transcript.winner == transcript.events[-1][1]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_veto_winner_is_good_plurality_point_all_orders(seed):
    inst = random_euclidean(seed, n_max=5, m_max=4)
    prof = derive_profile(inst)
    winners = {
        plurality_veto(prof, order).winner
        for order in itertools.permutations(prof.agent_ids)
    }
    for w in winners:
        assert beta_plurality_value(inst, w).factor >= VETO_PLURALITY_BOUND - EPS_CMP
        assert distortion(inst, w) <= VETO_DISTORTION_BOUND + EPS_CMP


# --- rank-JR ----------------------------------------------------------------


def test_rank_jr_witness_example():
    prof = profile([[2, 3, 1], [2, 3, 1], [1, 2, 3], [1, 2, 3]])
    witness = check_rank_jr(prof, [0], 2)
    assert witness is not None
    assert (witness.rank, witness.candidate) == (1, 2)
    assert witness.agents == (0, 1)
    assert check_rank_jr(prof, [0, 2], 2) is None


def test_rank_jr_unanimous():
    prof = profile([[1, 2, 3]] * 5)
    for ell in range(1, 6):
        assert check_rank_jr(prof, [0], ell) is None


def test_rank_jr_counts_uncovered_subgroups():
    # candidate 0 is ranked within 2 by all four agents and agent 3 sees the
    # winner by then, but the three uncovered agents still form a cohesive
    # group of size ell on their own
    prof = profile([[1, 2, 3, 4], [2, 1, 3, 4], [2, 3, 1, 4], [2, 3, 4, 1]])
    witness = check_rank_jr(prof, [3], 3)
    assert witness is not None
    assert (witness.rank, witness.candidate) == (2, 0)
    assert witness.agents == (0, 1, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3))
def test_rank_jr_agrees_with_subset_oracle(seed, ell, committee_size):
    prof = random_profile(seed, n_max=6, m_max=4)
    committee_size = min(committee_size, prof.n_candidates)
    for winners in itertools.combinations(range(prof.n_candidates), committee_size):
        ok = check_rank_jr(prof, winners, ell) is None
        assert ok == oracle.rank_jr_holds(prof, winners, ell)


# --- rank-PJR ---------------------------------------------------------------


def test_rank_pjr_witness_example():
    prof = profile([[1, 2, 3, 4], [1, 2, 4, 3], [1, 2, 3, 4], [1, 2, 4, 3]])
    witness = check_rank_pjr(prof, [0, 2], 2)
    assert witness is not None
    assert witness.rank == 2
    assert witness.mu == 2
    assert witness.candidates == (0, 1)
    assert witness.agents == (0, 1, 2, 3)
    assert check_rank_pjr(prof, [0, 1], 2) is None


def test_rank_pjr_mu_one_matches_jr():
    for seed in range(60):
        prof = random_profile(seed)
        rng = np.random.default_rng(seed + 7)
        size = int(rng.integers(1, prof.n_candidates + 1))
        winners = sorted(rng.choice(prof.n_candidates, size=size, replace=False).tolist())
        ell = int(rng.integers(1, prof.n_agents + 1))
        jr = check_rank_jr(prof, winners, ell)
        pjr = check_rank_pjr(prof, winners, ell, max_mu=1)
        assert (jr is None) == (pjr is None)
        if jr is not None:
            assert pjr.rank == jr.rank
            assert pjr.candidates == (jr.candidate,)
            assert pjr.agents == jr.agents


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 2))
def test_rank_pjr_agrees_with_subset_oracle(seed, ell):
    prof = random_profile(seed, n_max=6, m_max=4)
    k = min(2, prof.n_candidates)
    max_mu = prof.n_agents // ell
    for winners in itertools.combinations(range(prof.n_candidates), k):
        ok = check_rank_pjr(prof, winners, ell) is None
        assert ok == oracle.rank_pjr_holds(prof, winners, ell, max(1, max_mu))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_rank_pjr_implies_rank_jr(seed):
    prof = random_profile(seed)
    rng = np.random.default_rng(seed + 13)
    size = int(rng.integers(1, prof.n_candidates + 1))
    winners = sorted(rng.choice(prof.n_candidates, size=size, replace=False).tolist())
    ell = int(rng.integers(1, prof.n_agents + 1))
    if check_rank_pjr(prof, winners, ell) is None:
        assert check_rank_jr(prof, winners, ell) is None


# --- expanding approvals ----------------------------------------------------


def test_ear_two_blocks():
    prof = profile([[2, 3, 1], [2, 3, 1], [1, 2, 3], [1, 2, 3]])
    winners = ear(prof, 2, hare_quota(4, 2))
    assert set(winners) == {0, 2}
    assert check_rank_jr(prof, winners, 2) is None


def test_ear_unanimous():
    prof = profile([[1, 2, 3]] * 5)
    assert ear(prof, 1, Quota(5)) == (0,)


def test_ear_majority_top():
    prof = profile([[1, 2, 3], [1, 3, 2], [2, 1, 3]])
    assert ear(prof, 1, droop_quota(3, 1)) == (0,)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from(["hare", "droop"]))
def test_ear_soundness(seed, k, policy):
    inst = random_euclidean(seed, n_max=10, m_max=7)
    prof = derive_profile(inst)
    n = prof.n_agents
    quota = hare_quota(n, k) if policy == "hare" else droop_quota(n, k)
    winners = ear(prof, k, quota)
    assert len(winners) <= k
    if winners:
        assert check_rank_jr(prof, winners, quota.ell) is None
        report = min_alpha_proportional(inst, winners, quota.ell)
        assert report.factor <= RANK_JR_PROPORTIONALITY_BOUND + EPS_CMP


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_rank_jr_committees_are_proportional(seed, k):
    # the bound holds for every committee passing the check, not just EAR's
    inst = random_shortest_path_instance(seed, n_max=7, m_max=5)
    prof = derive_profile(inst)
    n, m = prof.n_agents, prof.n_candidates
    k = min(k, m)
    ell = droop_quota(n, k).ell
    for winners in itertools.combinations(inst.candidates, k):
        if check_rank_jr(prof, winners, ell) is None:
            factor = min_alpha_proportional(inst, winners, ell).factor
            assert factor <= RANK_JR_PROPORTIONALITY_BOUND + EPS_CMP
