"""Seeded random instance builders shared by the test suite."""

import random

from spillkit.model import LINEAR, TREE, Instance, Instruction, Point, validate


def random_linear_ranges(rng, n_max=12, m_max=20, w_max=1):
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    ranges = {}
    weights = {}
    for i in range(n):
        a, b = rng.randint(1, m), rng.randint(1, m)
        if a > b:
            a, b = b, a
        ranges[f"v{i}"] = range(a, b + 1)
        weights[f"v{i}"] = rng.randint(1, w_max)
    pts = sorted({p for r in ranges.values() for p in r})
    inst = Instance.from_ranges(LINEAR, [Point(p) for p in pts], ranges, weights)
    assert not validate(inst)
    return inst


def random_tree_points(rng, p_max):
    npts = rng.randint(1, p_max)
    pts = [Point(1)]
    for pid in range(2, npts + 1):
        pts.append(Point(pid, rng.randint(1, pid - 1)))
    return pts


def random_tree_ranges(rng, n_max=12, p_max=15, w_max=20):
    pts = random_tree_points(rng, p_max)
    children = {}
    for p in pts:
        if p.parent is not None:
            children.setdefault(p.parent, []).append(p.id)
    n = rng.randint(1, n_max)
    ranges = {}
    weights = {}
    for i in range(n):
        top = rng.randint(1, len(pts))
        sel = {top}
        frontier = [top]
        while frontier:
            q = frontier.pop()
            for c in children.get(q, ()):
                if rng.random() < 0.5:
                    sel.add(c)
                    frontier.append(c)
        ranges[f"v{i}"] = sel
        weights[f"v{i}"] = rng.randint(1, w_max)
    inst = Instance.from_ranges(TREE, pts, ranges, weights)
    assert not validate(inst)
    return inst


def random_tree_code(rng, n_max=8, p_max=10, w_max=20, livein_p=0.25):
    pts = random_tree_points(rng, p_max)
    npts = len(pts)
    children = {}
    for p in pts:
        if p.parent is not None:
            children.setdefault(p.parent, []).append(p.id)

    def descendants(d):
        out = []
        stack = list(children.get(d, ()))
        while stack:
            q = stack.pop()
            out.append(q)
            stack.extend(children.get(q, ()))
        return out

    uses_at = {p.id: set() for p in pts}
    defs_at = {p.id: set() for p in pts}
    weights = {}
    livein = set()
    for i in range(rng.randint(1, n_max)):
        vid = f"v{i}"
        weights[vid] = rng.randint(1, w_max)
        if rng.random() < livein_p:
            livein.add(vid)
            pool = [p.id for p in pts]
        else:
            d = rng.randint(1, npts)
            defs_at[d].add(vid)
            pool = descendants(d)
        if pool:
            for u in rng.sample(pool, rng.randint(0, min(2, len(pool)))):
                if vid not in defs_at[u]:
                    uses_at[u].add(vid)
    instrs = [Instruction(p.id, frozenset(uses_at[p.id]), frozenset(defs_at[p.id]))
              for p in pts if uses_at[p.id] or defs_at[p.id]]
    inst = Instance.from_code(TREE, pts, instrs, weights, livein=livein)
    assert not validate(inst)
    return inst


def random_linear_code(rng, h, n_max=10, m_max=14, w_max=20,
                       livein_p=0.35, liveout_p=0.25):
    """Linear SSA code whose simultaneous-chad count is exactly h.

    The first point uses exactly h live-in variables, pinning h from
    below; every other instruction stays within h uses and h defs.
    """
    n = rng.randint(max(1, h), n_max)
    m = rng.randint(2, m_max)
    uses_at = {p: set() for p in range(1, m + 1)}
    defs_at = {p: set() for p in range(1, m + 1)}
    weights = {}
    livein = set()
    liveout = set()
    for i in range(n):
        vid = f"v{i}"
        weights[vid] = rng.randint(1, w_max)
        if i < h or rng.random() < livein_p:
            livein.add(vid)
            d = 0
        else:
            cands = [p for p in range(1, m + 1) if len(defs_at[p]) < h]
            if not cands:
                livein.add(vid)
                d = 0
            else:
                d = rng.choice(cands)
                defs_at[d].add(vid)
        if i < h:
            uses_at[1].add(vid)  # the h-pinning instruction
        else:
            lo = d + 1
            if lo <= m:
                for u in rng.sample(range(lo, m + 1),
                                    rng.randint(0, min(2, m - lo + 1))):
                    if len(uses_at[u]) < h and vid not in defs_at[u]:
                        uses_at[u].add(vid)
        if rng.random() < liveout_p:
            liveout.add(vid)
    instrs = [Instruction(p, frozenset(uses_at[p]), frozenset(defs_at[p]))
              for p in range(1, m + 1) if uses_at[p] or defs_at[p]]
    inst = Instance.from_code(LINEAR, [Point(p) for p in range(1, m + 1)],
                              instrs, weights, livein=livein, liveout=liveout)
    assert not validate(inst)
    assert inst.h == h, (inst.h, h)
    return inst


def seeded(seed):
    return random.Random(seed)
