"""JIT-compiled kernels; the default backend.

Semantics mirror numpy_impl exactly, loop for loop: identical ratio
conventions, order statistics, and tie-breaking.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def alpha_scan(dist_to_set, dist_matrix, ell):
    n, m = dist_matrix.shape
    best = -np.inf
    best_col = -1
    ratios = np.empty(n)
    for c in range(m):
        for i in range(n):
            den = dist_matrix[i, c]
            num = dist_to_set[i]
            if den == 0.0:
                ratios[i] = np.inf if num > 0.0 else 0.0
            else:
                ratios[i] = num / den
        val = np.partition(ratios, n - ell)[n - ell]
        if val > best:
            best = val
            best_col = c
    return best, best_col


@njit(cache=True)
def qcore_scan(dist_q_to_set, dist_matrix, subsets, q, ell):
    n = dist_matrix.shape[0]
    rows, s = subsets.shape
    need = s * ell
    best = -np.inf
    best_row = -1
    buf = np.empty(s)
    ratios = np.empty(n)
    for j in range(rows):
        for i in range(n):
            for t in range(s):
                buf[t] = dist_matrix[i, subsets[j, t]]
            den = np.partition(buf, q - 1)[q - 1]
            num = dist_q_to_set[i]
            if den == 0.0:
                ratios[i] = np.inf if num > 0.0 else 0.0
            else:
                ratios[i] = num / den
        val = np.partition(ratios, n - need)[n - need]
        if val > best:
            best = val
            best_row = j
    return best, best_row


@njit(cache=True)
def pjr_scan(ranks, winner_ranks, subsets, t_masks, ell, mu):
    n, m = ranks.shape
    k = winner_ranks.shape[1]
    rows, width = subsets.shape
    need = mu * ell
    members = np.empty(n, np.bool_)
    agent_mask = np.empty(n, np.int64)
    for r in range(1, m + 1):
        for i in range(n):
            mask = 0
            for w in range(k):
                if winner_ranks[i, w] <= r:
                    mask |= 1 << w
            agent_mask[i] = mask
        for j in range(rows):
            count = 0
            for i in range(n):
                ok = True
                for t in range(width):
                    if ranks[i, subsets[j, t]] > r:
                        ok = False
                        break
                members[i] = ok
                if ok:
                    count += 1
            if count < need:
                continue
            for tt in range(t_masks.shape[0]):
                good = 0
                for i in range(n):
                    if members[i] and (agent_mask[i] & ~t_masks[tt]) == 0:
                        good += 1
                if good >= need:
                    return r, j, tt
    return -1, -1, -1
