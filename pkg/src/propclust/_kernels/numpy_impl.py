"""Pure-numpy kernel fallback.

Must stay observably identical to the numba backend: same ratio conventions
(0/0 -> 0, x/0 -> inf), same order statistics, and first-encountered argmax
on ties.
"""

import numpy as np

# cap on the (subsets x agents) work buffer of a single qcore_scan block
_CHUNK = 2048


def _ratios(numerators, denominators):
    zero = denominators == 0.0
    num = np.broadcast_to(numerators, denominators.shape)
    safe = np.where(zero, 1.0, denominators)
    return np.where(zero, np.where(num > 0.0, np.inf, 0.0), num / safe)


def alpha_scan(dist_to_set, dist_matrix, ell):
    """Largest ell-th order statistic of d(i, W) / d(i, c) over candidates c.

    Returns (value, candidate column); first column wins ties.
    """
    n = dist_matrix.shape[0]
    ratios = _ratios(dist_to_set[:, None], dist_matrix)
    per_candidate = np.partition(ratios, n - ell, axis=0)[n - ell]
    col = int(per_candidate.argmax())
    return float(per_candidate[col]), col


def qcore_scan(dist_q_to_set, dist_matrix, subsets, q, ell):
    """Best deviation value over a batch of same-size candidate subsets.

    For each subset C' (row of `subsets`, size s) the value is the
    (s*ell)-th largest ratio d_q(i, W) / d_q(i, C') over agents i, where
    d_q(i, C') is the q-th smallest distance from i into C'.  The caller
    guarantees s*ell <= n.  Returns (value, subset row); first row wins ties.
    """
    n = dist_matrix.shape[0]
    s = subsets.shape[1]
    need = s * ell
    best = -np.inf
    best_row = -1
    for start in range(0, subsets.shape[0], _CHUNK):
        block = subsets[start : start + _CHUNK]
        dq = np.partition(dist_matrix[:, block], q - 1, axis=2)[:, :, q - 1]
        ratios = _ratios(dist_q_to_set[:, None], dq)
        vals = np.partition(ratios, n - need, axis=0)[n - need]
        row = int(vals.argmax())
        if vals[row] > best:
            best = float(vals[row])
            best_row = start + row
    return best, best_row


def pjr_scan(ranks, winner_ranks, subsets, t_masks, ell, mu):
    """First rank-PJR violation for cohesive groups around `mu`-sized subsets.

    Scans ranks r ascending, then subsets in row order.  A subset C' violates
    at rank r when at least mu*ell agents rank all of C' within r while their
    pooled winner coverage fits inside one of the `t_masks` winner bitmasks
    (each of size mu-1, so fewer than mu winners are reachable).  Returns
    (r, subset row, mask row), or (-1, -1, -1) when no violation exists.
    """
    n, m = ranks.shape
    k = winner_ranks.shape[1]
    need = mu * ell
    weights = 1 << np.arange(k, dtype=np.int64)
    for r in range(1, m + 1):
        cohesive = (ranks[:, subsets] <= r).all(axis=2)  # (n, S)
        counts = cohesive.sum(axis=0)
        candidates = np.nonzero(counts >= need)[0]
        if candidates.size == 0:
            continue
        agent_mask = ((winner_ranks <= r) * weights).sum(axis=1)  # (n,)
        for j in candidates:
            members = cohesive[:, j]
            for tt in range(t_masks.shape[0]):
                inside = (agent_mask & ~t_masks[tt]) == 0
                if int((members & inside).sum()) >= need:
                    return r, int(j), tt
    return -1, -1, -1
