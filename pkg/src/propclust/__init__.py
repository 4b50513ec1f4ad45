"""Proportional clustering, plurality points, and metric distortion.

Rules (greedy capture, expanding approvals, plurality veto) paired with
exact brute-force audit oracles that certify their approximation guarantees
on concrete instances.
"""

from . import bounds
from ._kernels import BACKEND as KERNEL_BACKEND
from .audits import (
    AuditReport,
    EnumerationLimitError,
    EquivalenceCounterexample,
    Witness,
    beta_plurality_value,
    is_beta_plurality,
    min_alpha_proportional,
    min_alpha_q_core,
    verify_equivalence,
)
from .capture import Clustering, greedy_capture
from .costs import CostProfile, cost_profile, distortion, social_cost
from .generators import GenSpec, generate, spec_from_dict
from .instances import (
    MetricInstance,
    MetricViolation,
    Quota,
    distance,
    droop_quota,
    dump_instance,
    euclidean_instance,
    hare_quota,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    matrix_instance,
    q_distance,
    resolve_quota,
    save_instance,
    validate_metric,
)
from .ordinal import (
    OrdinalProfile,
    RankJRWitness,
    RankPJRWitness,
    VetoTranscript,
    check_rank_jr,
    check_rank_pjr,
    derive_profile,
    ear,
    plurality_veto,
    profile_from_dict,
    profile_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "Clustering",
    "CostProfile",
    "EnumerationLimitError",
    "EquivalenceCounterexample",
    "GenSpec",
    "KERNEL_BACKEND",
    "MetricInstance",
    "MetricViolation",
    "OrdinalProfile",
    "Quota",
    "RankJRWitness",
    "RankPJRWitness",
    "VetoTranscript",
    "Witness",
    "beta_plurality_value",
    "bounds",
    "check_rank_jr",
    "check_rank_pjr",
    "cost_profile",
    "derive_profile",
    "distance",
    "distortion",
    "droop_quota",
    "dump_instance",
    "ear",
    "euclidean_instance",
    "generate",
    "greedy_capture",
    "hare_quota",
    "instance_from_dict",
    "instance_to_dict",
    "is_beta_plurality",
    "load_instance",
    "matrix_instance",
    "min_alpha_proportional",
    "min_alpha_q_core",
    "plurality_veto",
    "profile_from_dict",
    "profile_to_dict",
    "q_distance",
    "resolve_quota",
    "save_instance",
    "social_cost",
    "spec_from_dict",
    "validate_metric",
    "verify_equivalence",
]
