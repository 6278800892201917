"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same results; the package
picks one at import time (see ``occamlab.kernels``).
"""

from itertools import combinations

import numpy as np


def _signed_len(v):
    return 2 + 2 * int(abs(v)).bit_length()


def threshold_layer(input_tts, npoints, weights, base_lens, best_len, best_row,
                    best_theta, row_offset):
    """Fold every (weight row, threshold) gate over ``input_tts`` into the best tables.

    A table entry is replaced only by a strictly shorter encoding, so among
    equal lengths the first one enumerated wins. Enumeration order is row-major
    then ascending threshold.
    """
    weights = np.asarray(weights, dtype=np.int64)
    nrows = weights.shape[0]
    if nrows == 0:
        return
    tts = np.asarray(input_tts, dtype=np.int64)
    bits = (tts[:, None] >> np.arange(npoints)) & 1          # d x P
    values = weights @ bits                                    # R x P
    lo = np.minimum(weights, 0).sum(axis=1)
    hi = np.maximum(weights, 0).sum(axis=1)
    pow2 = np.int64(1) << np.arange(npoints, dtype=np.int64)
    t_min, t_max = int(lo.min()), int(hi.max()) + 1
    span = t_max - t_min + 1
    rows = np.arange(nrows, dtype=np.int64)
    all_tt, all_len, all_order, all_theta = [], [], [], []
    for theta in range(t_min, t_max + 1):
        ok = (lo <= theta) & (theta <= hi + 1)
        if not ok.any():
            continue
        tt = ((values[ok] >= theta) * pow2).sum(axis=1)
        all_tt.append(tt)
        all_len.append(np.asarray(base_lens, dtype=np.int64)[ok] + _signed_len(theta))
        all_order.append(rows[ok] * span + (theta - t_min))
        all_theta.append(np.full(int(ok.sum()), theta, dtype=np.int64))
    tt = np.concatenate(all_tt)
    length = np.concatenate(all_len)
    order = np.concatenate(all_order)
    theta = np.concatenate(all_theta)
    idx = np.lexsort((order, length, tt))
    tt, length, order, theta = tt[idx], length[idx], order[idx], theta[idx]
    first = np.ones(len(tt), dtype=bool)
    first[1:] = tt[1:] != tt[:-1]
    tt, length, order, theta = tt[first], length[first], order[first], theta[first]
    better = length < best_len[tt]
    tt = tt[better]
    best_len[tt] = length[better]
    best_row[tt] = row_offset + order[better] // span
    best_theta[tt] = theta[better]


def vc_dimension(concepts, k):
    """Largest d such that some d-subset of the k domain points is shattered."""
    concepts = np.unique(np.asarray(concepts, dtype=np.int64))
    if k > 24:
        raise ValueError("domain too large for exhaustive shattering")
    if len(concepts) == 0:
        return 0
    upper = 0
    while upper < k and (1 << (upper + 1)) <= len(concepts):
        upper += 1
    for d in range(upper, 0, -1):
        for subset in combinations(range(k), d):
            mask = sum(1 << i for i in subset)
            if len(np.unique(concepts & mask)) == 1 << d:
                return d
    return 0


def max_overlap(a, b):
    """Longest proper suffix of ``a`` that is also a prefix of ``b``."""
    for length in range(min(len(a), len(b)) - 1, 0, -1):
        if a.endswith(b[:length]):
            return length
    return 0
