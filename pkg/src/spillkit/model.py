"""Programs, live ranges, hole/chad semantics, and register pressure.

Instances come in two flavours. Code-backed instances carry instructions
(uses/defs per point) from which live ranges and chads are derived; they
support both pressure modes. Pure range instances give each variable's
covered points directly and only support the without-holes mode.

Every program point is sampled twice, a use moment followed by a def
moment: an instruction first reads its operands, then writes its results,
so a variable born at a point never overlaps one dying there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import MalformedCodeError, UnsupportedModeError

USE = "use"
DEF = "def"

LINEAR = "linear"
TREE = "tree"

NOHOLES = "noholes"
HOLES = "holes"


def check_mode(mode):
    if mode not in (NOHOLES, HOLES):
        raise ValueError(f"unknown pressure mode {mode!r}")
    return mode


@dataclass(frozen=True)
class Point:
    id: int
    parent: Optional[int] = None


@dataclass(frozen=True)
class Instruction:
    at: int
    uses: frozenset
    defs: frozenset


@dataclass(frozen=True)
class LiveRange:
    kind: str  # "interval" | "subtree"
    points: frozenset


@dataclass(frozen=True)
class Variable:
    id: str
    weight: Fraction
    range: LiveRange
    chads: frozenset  # of (point id, USE|DEF)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    detail: str

    def __str__(self):
        return f"[{self.code}] {self.subject}: {self.detail}"


@dataclass(frozen=True)
class PressureProfile:
    samples: tuple  # of (point id, moment)
    values: tuple  # of int, parallel to samples
    mode: str

    @property
    def max_pressure(self):
        return max(self.values) if self.values else 0

    def at(self, point, moment):
        return self.values[self.samples.index((point, moment))]


@dataclass(frozen=True)
class SpillSolution:
    spilled: frozenset
    cost: Optional[Fraction]
    achieved_omega: Optional[int]
    algorithm: str
    steps: int
    mode: str = NOHOLES
    feasible: bool = True
    proven_optimal: bool = True


class Instance:
    """An immutable spill-everywhere instance with precomputed liveness.

    Do not mutate after construction; solvers assume all derived tables
    (sample order, per-sample live sets, chads, omega, h) are frozen.
    """

    def __init__(self, shape, points, variables, instructions=None,
                 livein=frozenset(), liveout=frozenset(), code_backed=False):
        self.shape = shape
        self.points = tuple(points)
        self.variables = dict(variables)  # id -> Variable
        self.instructions = tuple(instructions) if instructions is not None else None
        self.livein = frozenset(livein)
        self.liveout = frozenset(liveout)
        self.code_backed = code_backed
        self._index()

    # -- construction -------------------------------------------------

    @classmethod
    def from_code(cls, shape, points, instructions, weights,
                  livein=(), liveout=()):
        """Build a code-backed instance; ranges and chads are derived.

        `weights` maps every variable id to its spill cost. Structural
        problems (double definition, use outside the definition's scope)
        do not raise here: construction is tolerant so that validate()
        can report them as data.
        """
        points = tuple(points)
        instructions = tuple(instructions)
        livein = frozenset(livein)
        liveout = frozenset(liveout)
        order, children = _point_structure(shape, points)

        def_at = {}
        uses_at = {}  # var -> sorted list of point ids
        for ins in instructions:
            for v in ins.defs:
                def_at.setdefault(v, ins.at)
            for v in ins.uses:
                uses_at.setdefault(v, []).append(ins.at)

        variables = {}
        for vid in sorted(weights):
            w = Fraction(weights[vid])
            rng, chads = _derive_range(
                shape, vid, def_at.get(vid), uses_at.get(vid, []),
                vid in livein, vid in liveout, order, children)
            kind = "interval" if shape == LINEAR else "subtree"
            variables[vid] = Variable(vid, w, LiveRange(kind, frozenset(rng)),
                                      frozenset(chads))
        return cls(shape, points, variables, instructions, livein, liveout,
                   code_backed=True)

    @classmethod
    def from_ranges(cls, shape, points, ranges, weights):
        """Build a pure range instance: `ranges` maps id -> iterable of points."""
        kind = "interval" if shape == LINEAR else "subtree"
        variables = {}
        for vid in sorted(ranges):
            w = Fraction(weights[vid])
            variables[vid] = Variable(vid, w, LiveRange(kind, frozenset(ranges[vid])),
                                      frozenset())
        return cls(shape, points, variables, code_backed=False)

    # -- derived tables -----------------------------------------------

    def _index(self):
        order, children = _point_structure(self.shape, self.points)
        self.point_order = order  # point ids, chain order or DFS preorder
        self.children = children  # point id -> tuple of child ids
        self.point_pos = {p: i for i, p in enumerate(order)}
        self.parent_of = {p.id: p.parent for p in self.points}

        # Two samples per point, use moment first.
        self.samples = tuple((p, m) for p in order for m in (USE, DEF))
        self.sample_pos = {s: i for i, s in enumerate(self.samples)}

        live = [set() for _ in self.samples]
        chad = [set() for _ in self.samples]
        for v in self.variables.values():
            for s in self._live_samples(v):
                live[self.sample_pos[s]].add(v.id)
            for c in v.chads:
                chad[self.sample_pos[c]].add(v.id)
        self.live_at = tuple(frozenset(s) for s in live)
        self.chads_at = tuple(frozenset(s) for s in chad)

        self.omega = max((len(s) for s in self.live_at), default=0)
        self.h = 0
        if self.instructions:
            self.h = max(max(len(i.uses), len(i.defs)) for i in self.instructions)
        self.instr_at = {}
        for ins in self.instructions or ():
            self.instr_at.setdefault(ins.at, ins)

    def _live_samples(self, v):
        """Sample points covered by v's range under the two-moment model."""
        pts = v.range.points
        if not self.code_backed:
            for p in pts:
                yield (p, USE)
                yield (p, DEF)
            return
        use_pts = [p for p, m in v.chads if m == USE]
        def_pt = next((p for p, m in v.chads if m == DEF), None)
        if self.shape == LINEAR:
            spos = self.sample_pos
            if def_pt is not None:
                s0 = spos[(def_pt, DEF)]
            elif v.id in self.livein:
                s0 = 0
            elif use_pts:
                s0 = min(spos[(p, USE)] for p in use_pts)
            else:
                return
            if v.id in self.liveout:
                s1 = len(self.samples) - 1
            elif use_pts:
                s1 = max(spos[(p, USE)] for p in use_pts)
            else:
                s1 = s0
            if s1 < s0:
                s0, s1 = s1, s0  # malformed code, tolerated for validate()
            for i in range(s0, s1 + 1):
                yield self.samples[i]
        else:
            kids = self.children
            for p in pts:
                if p != def_pt:
                    yield (p, USE)
                if any(c in pts for c in kids.get(p, ())):
                    yield (p, DEF)
                elif p == def_pt and len(pts) == 1:
                    # defined, never used: alive only at its def moment
                    yield (p, DEF)

    # -- convenience --------------------------------------------------

    @property
    def n_vars(self):
        return len(self.variables)

    @property
    def n_points(self):
        return len(self.points)

    def var_order(self):
        return sorted(self.variables)

    def weight(self, vid):
        return self.variables[vid].weight

    def cost_of(self, spilled):
        return sum((self.variables[v].weight for v in spilled), Fraction(0))

    def unweighted(self):
        weights = {v.weight for v in self.variables.values()}
        return len(weights) <= 1

    def declarative_key(self):
        """Structure used for round-trip equality of parsed instances."""
        return (
            self.shape, self.code_backed, self.points,
            tuple(sorted(self.instructions or (),
                         key=lambda i: self.point_pos.get(i.at, -1))) if self.code_backed else None,
            tuple(sorted(self.livein)), tuple(sorted(self.liveout)),
            tuple(sorted((v.id, v.weight, v.range) for v in self.variables.values())),
        )

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.declarative_key() == other.declarative_key()

    def __hash__(self):
        return hash(self.declarative_key())

    def __repr__(self):
        return (f"Instance({self.shape}, m={self.n_points}, n={self.n_vars}, "
                f"omega={self.omega}, h={self.h})")


def _point_structure(shape, points):
    """Validate nothing; just produce a usable order and child map."""
    ids = [p.id for p in points]
    children = {p.id: [] for p in points}
    if shape == LINEAR:
        order = sorted(ids)
        for a, b in zip(order, order[1:]):
            children[a].append(b)
    else:
        roots = [p.id for p in points if p.parent is None]
        for p in points:
            if p.parent is not None and p.parent in children:
                children[p.parent].append(p.id)
        for c in children.values():
            c.sort()
        order = []
        seen = set()
        stack = sorted(roots, reverse=True)
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            order.append(p)
            stack.extend(reversed(children[p]))
        order.extend(i for i in sorted(ids) if i not in seen)  # orphans, tolerated
    return order, {k: tuple(v) for k, v in children.items()}


def _derive_range(shape, vid, def_pt, use_pts, is_livein, is_liveout,
                  order, children):
    """Range points + chads for one variable of a code-backed instance."""
    pos = {p: i for i, p in enumerate(order)}
    chads = set()
    if def_pt is not None:
        chads.add((def_pt, DEF))
    for u in use_pts:
        chads.add((u, USE))

    if shape == LINEAR:
        if def_pt is not None:
            start = def_pt
        elif is_livein:
            start = order[0] if order else None
        elif use_pts:
            start = min(use_pts, key=pos.get)  # tolerated; validate() flags it
        else:
            return set(), chads
        if is_liveout and order:
            end = order[-1]
        elif use_pts:
            end = max(use_pts, key=pos.get)
        else:
            end = start
        lo, hi = pos[start], pos[end]
        if hi < lo:
            lo, hi = hi, lo
        return {order[i] for i in range(lo, hi + 1)}, chads

    # Tree: union of paths from the definition (or root) to each use.
    parent = {}
    for p, kids in children.items():
        for c in kids:
            parent[c] = p
    if def_pt is not None:
        top = def_pt
    elif is_livein and order:
        top = order[0]
    elif use_pts:
        top = min(use_pts, key=pos.get)
    else:
        return set(), chads
    rng = {top}
    for u in use_pts:
        path = [u]
        q = u
        while q != top and q in parent:
            q = parent[q]
            path.append(q)
        if path[-1] == top:
            rng.update(path)
        else:
            rng.add(u)  # unreachable use, kept so validate() can flag it
    return rng, chads


# ---------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------

def validate(instance):
    """Check every structural invariant; violations are data, not errors."""
    out = []
    bad = lambda code, subj, detail: out.append(Violation(code, subj, detail))

    ids = [p.id for p in instance.points]
    if not ids:
        bad("points", "<instance>", "instance has no points")
    if len(set(ids)) != len(ids):
        bad("points", "<instance>", "duplicate point ids")

    if instance.shape == LINEAR:
        for p in instance.points:
            if p.parent is not None:
                bad("shape", f"point {p.id}", "linear code points take no parent")
    elif instance.shape == TREE:
        roots = [p for p in instance.points if p.parent is None]
        if len(roots) != 1:
            bad("shape", "<instance>",
                f"tree code needs exactly one root, found {len(roots)}")
        known = set(ids)
        for p in instance.points:
            if p.parent is not None and p.parent not in known:
                bad("shape", f"point {p.id}", f"unknown parent {p.parent}")
        if len(instance.point_order) != len(ids) and len(set(ids)) == len(ids):
            missing = set(ids) - set(instance.point_order[:len(set(ids))])
            bad("shape", "<instance>", "points do not form a single rooted tree")
    else:
        bad("shape", "<instance>", f"unknown shape {instance.shape!r}")

    known_pts = set(ids)
    known_vars = set(instance.variables)

    for v in instance.variables.values():
        if v.weight <= 0:
            bad("weight", v.id, f"weight {v.weight} is not > 0")
        if not v.range.points:
            bad("range", v.id, "empty live range")
        if not v.range.points <= known_pts:
            bad("range", v.id, "range mentions unknown points")
        for (p, m) in v.chads:
            if p not in v.range.points:
                bad("chad", v.id, f"chad at point {p} lies outside the range")
        if v.range.points and v.range.points <= known_pts:
            if instance.shape == LINEAR:
                idxs = sorted(instance.point_pos[p] for p in v.range.points)
                if idxs != list(range(idxs[0], idxs[-1] + 1)):
                    bad("range", v.id, "interval range is not contiguous")
            else:
                if not _connected_subtree(v.range.points, instance.parent_of):
                    bad("range", v.id, "subtree range is not connected")

    if instance.code_backed:
        seen_at = set()
        def_of = {}
        for ins in instance.instructions:
            if ins.at not in known_pts:
                bad("instr", f"point {ins.at}", "instruction at unknown point")
                continue
            if ins.at in seen_at:
                bad("instr", f"point {ins.at}", "multiple instructions at one point")
            seen_at.add(ins.at)
            if ins.uses & ins.defs:
                bad("instr", f"point {ins.at}",
                    f"uses and defs overlap: {sorted(ins.uses & ins.defs)}")
            for v in ins.uses | ins.defs:
                if v not in known_vars:
                    bad("instr", f"point {ins.at}", f"undeclared variable {v}")
            for v in ins.defs:
                if v in def_of:
                    bad("ssa", v, f"defined at {def_of[v]} and again at {ins.at}")
                else:
                    def_of[v] = ins.at
                if v in instance.livein:
                    bad("ssa", v, "live-in variable must not be defined")
        for v in instance.livein | instance.liveout:
            if v not in known_vars:
                bad("livein/liveout", v, "undeclared variable")
        if instance.liveout and instance.shape == TREE:
            bad("liveout", "<instance>", "liveout is only defined for linear codes")

        # dominance: every use sits at or below (after) its definition
        for ins in instance.instructions:
            for v in ins.uses:
                if v not in known_vars:
                    continue
                d = def_of.get(v)
                if d is None:
                    if v not in instance.livein:
                        bad("dominance", v,
                            f"used at {ins.at} but never defined and not live-in")
                    continue
                if instance.shape == LINEAR:
                    if instance.point_pos.get(ins.at, -1) <= instance.point_pos.get(d, -1):
                        bad("dominance", v, f"use at {ins.at} precedes definition at {d}")
                else:
                    if not _dominates(d, ins.at, instance.parent_of):
                        bad("dominance", v,
                            f"use at {ins.at} is outside the subtree of definition {d}")
    else:
        if instance.livein or instance.liveout:
            bad("livein/liveout", "<instance>", "range instances take no livein/liveout")
    return out


def _connected_subtree(pts, parent_of):
    tops = [p for p in pts if parent_of.get(p) not in pts]
    return len(tops) == 1


def _dominates(anc, node, parent_of):
    q = node
    seen = set()
    while q is not None and q not in seen:
        if q == anc:
            return True
        seen.add(q)
        q = parent_of.get(q)
    return False


def live_ranges(instance):
    """Mapping variable id -> LiveRange for a validated code-backed instance."""
    if not instance.code_backed:
        raise MalformedCodeError("live_ranges needs a code-backed instance")
    problems = [v for v in validate(instance) if v.code in ("dominance", "ssa")]
    if problems:
        raise MalformedCodeError("; ".join(map(str, problems)))
    return {vid: v.range for vid, v in instance.variables.items()}


def pressure(instance, spilled, mode):
    """Per-sample register pressure after spilling `spilled` under `mode`."""
    check_mode(mode)
    spilled = frozenset(spilled)
    unknown = spilled - set(instance.variables)
    if unknown:
        raise ValueError(f"unknown spilled variables: {sorted(unknown)}")
    if mode == HOLES and not instance.code_backed:
        raise UnsupportedModeError("hole semantics need a code-backed instance")
    values = []
    for live, chads in zip(instance.live_at, instance.chads_at):
        p = len(live - spilled)
        if mode == HOLES:
            p += len(chads & spilled)
        values.append(p)
    return PressureProfile(instance.samples, tuple(values), mode)


def interference_graph(instance):
    """Adjacency sets: edge iff two live ranges share a sample point."""
    adj = {v: set() for v in instance.variables}
    for live in instance.live_at:
        for a in live:
            adj[a].update(live)
    for v, nb in adj.items():
        nb.discard(v)
    return adj


def perfect_elimination_order(adj):
    """Maximum-cardinality search; returns a PEO or None if not chordal."""
    order = []
    weight = {v: 0 for v in adj}
    remaining = set(adj)
    while remaining:
        v = max(sorted(remaining), key=lambda u: weight[u])
        order.append(v)
        remaining.discard(v)
        for u in adj[v]:
            if u in remaining:
                weight[u] += 1
    order.reverse()  # elimination order: earlier vertices eliminated first
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if not later:
            continue
        pivot = min(later, key=pos.get)
        for u in later:
            if u != pivot and u not in adj[pivot]:
                return None
    return order


def is_chordal(instance):
    """(True, witness elimination order) or (False, None)."""
    order = perfect_elimination_order(interference_graph(instance))
    return (order is not None), order
