"""Pure-Python spill-subset sweep; same contract as the compiled kernel.

Masks are ints over the variable order chosen by the caller, weights are
pre-scaled nonnegative ints. `live` / `chad` are per-constraint-row
bitmasks (callers deduplicate identical rows). A subset S is feasible at
target r when, for every row,

    popcount(live & ~S) [+ popcount(chad & S) with holes]  <=  r.
"""

IMPLEMENTATION = "pure"


def _costs(n, weights):
    costs = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        costs[mask] = costs[mask ^ low] + weights[low.bit_length() - 1]
    return costs


def _feasible(mask, live, chad, r, holes, full):
    keep = full & ~mask
    if holes:
        for lv, ch in zip(live, chad):
            if (lv & keep).bit_count() + (ch & mask).bit_count() > r:
                return False
    else:
        for lv in live:
            if (lv & keep).bit_count() > r:
                return False
    return True


def sweep(n, weights, live, chad, r, holes):
    """Minimum-cost feasible subset: (cost, mask), or (None, None)."""
    full = (1 << n) - 1
    costs = _costs(n, weights)
    best_cost = None
    best_mask = None
    for mask in range(1 << n):
        c = costs[mask]
        if best_cost is not None and c >= best_cost:
            continue
        if _feasible(mask, live, chad, r, holes, full):
            best_cost = c
            best_mask = mask
    return best_cost, best_mask


def sweep_all(n, weights, live, chad, r, holes, target_cost, cap):
    """All feasible subsets of exactly target_cost, ascending, capped.

    Returns (masks, truncated).
    """
    full = (1 << n) - 1
    costs = _costs(n, weights)
    out = []
    for mask in range(1 << n):
        if costs[mask] != target_cost:
            continue
        if _feasible(mask, live, chad, r, holes, full):
            out.append(mask)
            if len(out) >= cap:
                return out, True
    return out, False
