"""Fixed-register dynamic programs over the dominance tree.

State at a sample point: the *kept* subset of its live set (a fitting
set). Bottom-up, each parent state combines, per child, the best child
state that agrees with it on the variables they share; live ranges are
connected subtrees, so children's private variables never interact.
With holes the fitting predicate additionally counts the chads of
everything spilled, which only shrinks the state families.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceededError, InfeasibleError, UnsupportedModeError
from .model import (
    DEF,
    HOLES,
    LINEAR,
    NOHOLES,
    USE,
    SpillSolution,
    pressure,
)

DEFAULT_STATE_BUDGET = 10_000_000


def _sample_children(instance):
    """Child lists over sample indices: (p,use)->(p,def)->(c,use)..."""
    pos = instance.sample_pos
    children = [[] for _ in instance.samples]
    for p in instance.point_order:
        children[pos[(p, USE)]].append(pos[(p, DEF)])
        for c in instance.children.get(p, ()):
            children[pos[(p, DEF)]].append(pos[(c, USE)])
    return children


def _solve_fitting(instance, k, holes, state_budget):
    if k < 0:
        raise ValueError("register count k must be >= 0")
    if holes and not instance.code_backed:
        raise UnsupportedModeError(
            "fitting_set_dp_holes needs a code-backed instance (chads)")
    mode = HOLES if holes else NOHOLES
    algo = "dp-fit-holes" if holes else "dp-fit"

    if instance.omega <= k:
        return SpillSolution(frozenset(), Fraction(0), instance.omega,
                             algo, 0, mode=mode)

    if holes:
        for (pt, mom), chads in zip(instance.samples, instance.chads_at):
            if len(chads) > k:
                raise InfeasibleError(
                    f"even the full spill leaves pressure {len(chads)} > {k} "
                    f"at point {pt} ({mom} moment)", witness=(pt, mom))

    weights = {v: var.weight for v, var in instance.variables.items()}
    children = _sample_children(instance)
    live = instance.live_at
    chad = instance.chads_at
    steps = 0
    cells = 0

    # tables[i]: {kept frozenset -> (cost, backptrs)}; backptrs pair child
    # sample index with the chosen child state.
    tables = [None] * len(instance.samples)
    for i in reversed(range(len(instance.samples))):
        groups = []
        for c in children[i]:
            g = {}
            for fc, (cost_c, _) in tables[c].items():
                key = fc & live[i]
                cur = g.get(key)
                if cur is None or cost_c > cur[1]:
                    g[key] = (fc, cost_c)
            groups.append((c, g))

        table = {}
        universe = sorted(live[i])
        base_chads = chad[i] if holes else frozenset()
        for size in range(min(k, len(universe)) + 1):
            for combo in combinations(universe, size):
                steps += 1
                f = frozenset(combo)
                if holes and size + len(base_chads - f) > k:
                    continue
                cost = sum((weights[v] for v in f), Fraction(0))
                back = []
                dead = False
                for c, g in groups:
                    steps += 1
                    hit = g.get(f & live[c])
                    if hit is None:
                        dead = True
                        break
                    fc, cost_c = hit
                    cost += cost_c - sum((weights[v] for v in f & live[c]),
                                         Fraction(0))
                    back.append((c, fc))
                if dead:
                    continue
                table[f] = (cost, tuple(back))
        if not table:
            pt, mom = instance.samples[i]
            raise InfeasibleError(
                f"no fitting set admits a consistent completion at point {pt} "
                f"({mom} moment)", witness=(pt, mom))
        cells += len(table)
        if cells > state_budget:
            raise BudgetExceededError(
                f"fitting-set DP exceeded {state_budget} states; use "
                "weighted_optimal for linear instances or the exact oracle")
        tables[i] = table

    root = 0
    best_f = None
    best = None
    for f, (cost, _) in tables[root].items():
        if best is None or cost > best:
            best = cost
            best_f = f

    kept = set()
    stack = [(root, best_f)]
    while stack:
        i, f = stack.pop()
        kept |= f
        for c, fc in tables[i][f][1]:
            stack.append((c, fc))
    spilled = frozenset(instance.variables) - kept
    return SpillSolution(
        spilled=spilled,
        cost=instance.cost_of(spilled),
        achieved_omega=pressure(instance, spilled, mode).max_pressure,
        algorithm=algo,
        steps=steps,
        mode=mode,
    )


def fitting_set_dp(instance, k, state_budget=DEFAULT_STATE_BUDGET):
    """Minimum-weight spill set with Maxlive <= k, without holes.

    Works on trees and linear codes alike (a chain is a tree); exact for
    any chordal instance of this toolkit.
    """
    return _solve_fitting(instance, k, holes=False, state_budget=state_budget)


def fitting_set_dp_holes(instance, k, state_budget=DEFAULT_STATE_BUDGET):
    """As fitting_set_dp, under hole semantics (spilled uses/defs still
    occupy a register at their instruction)."""
    return _solve_fitting(instance, k, holes=True, state_budget=state_budget)
