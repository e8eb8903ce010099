# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled spill-subset sweep; see _kernel_py for the contract."""

from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

IMPLEMENTATION = "compiled"


cdef struct Tables:
    int n
    int rows
    long long *w
    unsigned long long *live
    unsigned long long *chad
    long long *costs


cdef int _load(Tables *t, int n, object weights, object live, object chad) except -1:
    cdef int i
    cdef unsigned long long full
    t.n = n
    t.rows = len(live)
    t.w = <long long *> malloc(n * sizeof(long long))
    t.live = <unsigned long long *> malloc(t.rows * sizeof(unsigned long long))
    t.chad = <unsigned long long *> malloc(t.rows * sizeof(unsigned long long))
    t.costs = <long long *> malloc((1ULL << n) * sizeof(long long))
    if not t.w or not t.live or not t.chad or not t.costs:
        _unload(t)
        raise MemoryError()
    for i in range(n):
        t.w[i] = weights[i]
    for i in range(t.rows):
        t.live[i] = live[i]
        t.chad[i] = chad[i]
    return 0


cdef void _unload(Tables *t):
    free(t.w)
    free(t.live)
    free(t.chad)
    free(t.costs)


cdef void _fill_costs(Tables *t) nogil:
    cdef unsigned long long mask, low
    cdef int bit
    t.costs[0] = 0
    for mask in range(1, 1ULL << t.n):
        low = mask & (~mask + 1)
        bit = __builtin_popcountll(low - 1)
        t.costs[mask] = t.costs[mask ^ low] + t.w[bit]


cdef bint _feasible(Tables *t, unsigned long long mask, long long r, bint holes) nogil:
    cdef int i
    cdef long long p
    cdef unsigned long long keep = ((1ULL << t.n) - 1) & ~mask
    for i in range(t.rows):
        p = __builtin_popcountll(t.live[i] & keep)
        if holes:
            p += __builtin_popcountll(t.chad[i] & mask)
        if p > r:
            return False
    return True


def sweep(int n, weights, live, chad, long long r, bint holes):
    """Minimum-cost feasible subset: (cost, mask), or (None, None)."""
    cdef Tables t
    cdef unsigned long long mask, best_mask = 0
    cdef long long best_cost = -1
    _load(&t, n, weights, live, chad)
    try:
        with nogil:
            _fill_costs(&t)
            for mask in range(1ULL << n):
                if best_cost >= 0 and t.costs[mask] >= best_cost:
                    continue
                if _feasible(&t, mask, r, holes):
                    best_cost = t.costs[mask]
                    best_mask = mask
    finally:
        _unload(&t)
    if best_cost < 0:
        return None, None
    return best_cost, best_mask


def sweep_all(int n, weights, live, chad, long long r, bint holes,
              long long target_cost, long long cap):
    """All feasible subsets of exactly target_cost: (masks, truncated)."""
    cdef Tables t
    cdef unsigned long long mask
    out = []
    _load(&t, n, weights, live, chad)
    try:
        with nogil:
            _fill_costs(&t)
        for mask in range(1ULL << n):
            if t.costs[mask] != target_cost:
                continue
            if _feasible(&t, mask, r, holes):
                out.append(mask)
                if len(out) >= cap:
                    return out, True
    finally:
        _unload(&t)
    return out, False
