# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. ``_kernels_py`` holds the reference versions."""

from libc.stdlib cimport free, malloc


cdef inline long _bitlen(long v) nogil:
    cdef long b = 0
    while v:
        b += 1
        v >>= 1
    return b


cdef inline long _signed_len(long v) nogil:
    if v < 0:
        v = -v
    return 2 + 2 * _bitlen(v)


def threshold_layer(long long[::1] input_tts, int npoints,
                    long long[:, ::1] weights, long long[::1] base_lens,
                    long long[::1] best_len, long long[::1] best_row,
                    long long[::1] best_theta, long long row_offset):
    """Fold every (weight row, threshold) gate over ``input_tts`` into the best tables.

    A table entry is replaced only by a strictly shorter encoding, so among
    equal lengths the first one enumerated wins.
    """
    cdef Py_ssize_t nrows = weights.shape[0], d = weights.shape[1]
    cdef Py_ssize_t r, k, p
    cdef long long v[64]
    cdef long long lo, hi, w, theta, tt, length
    if npoints > 64:
        raise ValueError("at most 64 points")
    with nogil:
        for r in range(nrows):
            lo = 0
            hi = 0
            for k in range(d):
                w = weights[r, k]
                if w < 0:
                    lo += w
                else:
                    hi += w
            for p in range(npoints):
                v[p] = 0
                for k in range(d):
                    if (input_tts[k] >> p) & 1:
                        v[p] += weights[r, k]
            for theta in range(lo, hi + 2):
                tt = 0
                for p in range(npoints):
                    if v[p] >= theta:
                        tt |= (<long long>1) << p
                length = base_lens[r] + _signed_len(theta)
                if length < best_len[tt]:
                    best_len[tt] = length
                    best_row[tt] = row_offset + r
                    best_theta[tt] = theta


def vc_dimension(long long[::1] concepts, int k):
    """Largest d such that some d-subset of the k domain points is shattered."""
    cdef Py_ssize_t nc = concepts.shape[0], i
    cdef int d, upper, distinct, found = 0
    cdef long long S, c, limit, lowbit, ripple, proj
    cdef unsigned int stamp = 0
    cdef unsigned int *seen
    if k > 24:
        raise ValueError("domain too large for exhaustive shattering")
    if nc == 0:
        return 0
    # at least 2^d distinct concepts are needed to shatter d points
    upper = 0
    while upper < k and (<long long>1 << (upper + 1)) <= nc:
        upper += 1
    seen = <unsigned int *>malloc(sizeof(unsigned int) * (<size_t>1 << k))
    if seen == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(<Py_ssize_t>1 << k):
                seen[i] = 0
            limit = (<long long>1) << k
            for d in range(upper, 0, -1):
                if found:
                    break
                S = ((<long long>1) << d) - 1
                while S < limit:
                    stamp += 1
                    distinct = 0
                    for i in range(nc):
                        proj = concepts[i] & S
                        if seen[proj] != stamp:
                            seen[proj] = stamp
                            distinct += 1
                            if distinct == (1 << d):
                                break
                    if distinct == (1 << d):
                        found = d
                        break
                    # Gosper's hack: next subset with the same popcount
                    lowbit = S & -S
                    ripple = S + lowbit
                    S = (((ripple ^ S) >> 2) // lowbit) | ripple
        return found
    finally:
        free(seen)


def max_overlap(str a, str b):
    """Longest proper suffix of ``a`` that is also a prefix of ``b``."""
    cdef bytes ab = a.encode("latin-1"), bb = b.encode("latin-1")
    cdef const unsigned char *x = ab
    cdef const unsigned char *y = bb
    cdef Py_ssize_t la = len(ab), lb = len(bb), i, q, cap
    cdef Py_ssize_t *fail
    if la == 0 or lb == 0:
        return 0
    cap = la - 1 if la < lb else lb - 1
    if cap <= 0:
        return 0
    fail = <Py_ssize_t *>malloc(sizeof(Py_ssize_t) * lb)
    if fail == NULL:
        raise MemoryError()
    with nogil:
        fail[0] = 0
        q = 0
        for i in range(1, lb):
            while q > 0 and y[i] != y[q]:
                q = fail[q - 1]
            if y[i] == y[q]:
                q += 1
            fail[i] = q
        q = 0
        for i in range(la - cap, la):
            while q > 0 and (x[i] != y[q] or q >= cap):
                q = fail[q - 1]
            if x[i] == y[q] and q < cap:
                q += 1
    free(fail)
    return q
