"""Left-to-right DP on spilled variables: holes, target Maxlive - k.

State at a sample: the set of spilled variables live there (an extra
set). In any optimal solution that set never exceeds 2(h+k) variables:
inside a maximal stretch where more than h+k spilled variables are live,
a wholly-contained spilled variable could be unspilled and still fit,
contradicting optimality, so every spilled variable crosses one of the
two boundaries and each side contributes at most h+k. The cardinality
cap therefore preserves exactness while keeping the state family
polynomial for fixed h and k.
"""

from __future__ import annotations

from itertools import combinations
from math import lcm

from .errors import BudgetExceededError, InfeasibleError, WrongShapeError
from .model import HOLES, LINEAR, SpillSolution, pressure

DEFAULT_STATE_BUDGET = 10_000_000


def extra_set_dp(instance, k, state_budget=DEFAULT_STATE_BUDGET):
    """Minimum-weight spill set with l'(p) <= Maxlive - k under holes."""
    if instance.shape != LINEAR:
        raise WrongShapeError("extra_set_dp handles linear codes only")
    if not instance.code_backed:
        raise WrongShapeError("extra_set_dp needs a code-backed instance")
    if k < 1:
        raise ValueError("decrement k must be >= 1")

    omega = instance.omega
    r = omega - k
    cap = 2 * (instance.h + k)
    order = instance.var_order()
    bit = {v: i for i, v in enumerate(order)}
    scale = lcm(*(instance.variables[v].weight.denominator for v in order)) if order else 1
    w = [int(instance.variables[v].weight * scale) for v in order]

    # Compress runs of identical (live, chad) sample columns; the matching
    # constraint between equal columns is the identity.
    cols = []
    prev = None
    for s, live, chad in zip(instance.samples, instance.live_at, instance.chads_at):
        lm = 0
        for v in live:
            lm |= 1 << bit[v]
        cm = 0
        for v in chad:
            cm |= 1 << bit[v]
        if (lm, cm) != prev:
            cols.append((s, lm, cm))
            prev = (lm, cm)

    def mask_weight(mask):
        t = 0
        while mask:
            low = mask & -mask
            t += w[low.bit_length() - 1]
            mask ^= low
        return t

    steps = 0
    cells = 0
    layers = []  # per column: {state mask -> (cost, prev state mask)}
    prev_live = 0
    prev_layer = {}
    first = True
    for (pt, mom), lm, cm in cols:
        need = lm.bit_count() - r  # minimum relief this column requires
        groups = {}
        if not first:
            for state, (cost, _) in prev_layer.items():
                steps += 1
                key = state & lm
                cur = groups.get(key)
                if cur is None or cost < cur[0]:
                    groups[key] = (cost, state)
        universe = sorted(b for b in range(len(order)) if lm >> b & 1)
        layer = {}
        for size in range(max(0, need), min(cap, len(universe)) + 1):
            for combo in combinations(universe, size):
                steps += 1
                e = 0
                for b in combo:
                    e |= 1 << b
                if (e & ~cm).bit_count() < need:
                    continue
                if first:
                    layer[e] = (mask_weight(e), None)
                else:
                    hit = groups.get(e & prev_live)
                    if hit is None:
                        continue
                    cost0, pstate = hit
                    layer[e] = (cost0 + mask_weight(e & ~prev_live), pstate)
        if not layer:
            raise InfeasibleError(
                f"no extra set of size <= {cap} reaches pressure {r} "
                f"at point {pt} ({mom} moment)", witness=(pt, mom))
        cells += len(layer)
        if cells > state_budget:
            raise BudgetExceededError(
                f"extra-set DP exceeded {state_budget} states "
                f"(cap {cap} over {len(order)} variables); use the exact oracle")
        layers.append(layer)
        prev_layer = layer
        prev_live = lm
        first = False

    best_state = None
    best = None
    for state, (cost, _) in prev_layer.items():
        if best is None or cost < best:
            best = cost
            best_state = state

    spilled_mask = 0
    state = best_state
    for layer in reversed(layers):
        spilled_mask |= state
        state = layer[state][1]
    spilled = frozenset(order[b] for b in range(len(order)) if spilled_mask >> b & 1)
    return SpillSolution(
        spilled=spilled,
        cost=instance.cost_of(spilled),
        achieved_omega=pressure(instance, spilled, HOLES).max_pressure,
        algorithm="dp-extra",
        steps=steps,
        mode=HOLES,
    )
