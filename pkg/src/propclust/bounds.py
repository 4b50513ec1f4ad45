"""Approximation guarantees and numeric tolerances used throughout the toolkit.

The bound constants are the worst-case factors the implemented rules are
guaranteed to achieve; the audit oracles certify them empirically on concrete
instances.
"""

import math

# Greedy capture: proportionality factor on arbitrary metrics / Euclidean l2.
GREEDY_CAPTURE_METRIC_BOUND = 1.0 + math.sqrt(2.0)
GREEDY_CAPTURE_EUCLIDEAN_BOUND = 2.0

# Any committee passing the rank-JR check (EAR output in particular) is
# proportional up to this factor.
RANK_JR_PROPORTIONALITY_BOUND = 2.0 + math.sqrt(5.0)

# Plurality veto: the winner is a beta-plurality point for beta at least this,
# and its distortion is at most 3 (the Condorcet-winner distortion bound).
VETO_PLURALITY_BOUND = math.sqrt(5.0) - 2.0
VETO_DISTORTION_BOUND = 3.0

# Any committee passing the rank-PJR check sits in the quota q-core up to this.
RANK_PJR_CORE_BOUND = 4.0 + math.sqrt(13.0)

# Absolute tolerance for metric-axiom validation.
EPS_METRIC = 1e-9

# Comparison tolerance when asserting audited factors against bounds.
EPS_CMP = 1e-12
