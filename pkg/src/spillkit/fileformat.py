"""Line-oriented instance format: parser, canonical serializer, and the
source-problem format consumed by the reduction generators.

    format spill-v1
    kind linear|tree|ranges
    point <id> [parent <id>]
    instr <point> uses <ids|-> defs <ids|->
    livein <ids|->
    liveout <ids|->
    var <id> weight <int|num/den> [span <a>..<b> | points <ids>]
    # comment

Rationals are written as num/den; no floating point appears anywhere so
optimality comparisons stay exact. serialize() emits records sorted
(points, then live-in/out, instructions, variables) and is byte-stable.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .model import LINEAR, TREE, Instance, Instruction, Point, validate
from .reductions import CoverInstance, GraphInstance, X3CInstance

FORMAT_TAG = "spill-v1"
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def _name(tok, line):
    if not _NAME.match(tok):
        raise ParseError(f"bad identifier {tok!r}", line)
    return tok


def _int(tok, line, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", line) from None


def _weight(tok, line):
    try:
        if "/" in tok:
            num, den = tok.split("/", 1)
            w = Fraction(int(num), int(den))
        else:
            w = Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", line) from None
    if w <= 0:
        raise ParseError(f"weight must be positive, got {tok}", line)
    return w


def _csv(tok, line):
    if tok == "-":
        return []
    return [_name(t, line) for t in tok.split(",") if t != ""]


def _records(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        yield lineno, body.split()


def parse(text):
    """Parse instance text; raises ParseError with a location on any
    syntactic or semantic problem, otherwise returns a valid Instance."""
    kind = None
    points = []
    point_lines = {}
    instrs = []
    livein = None
    liveout = None
    var_rows = []  # (line, id, weight, span|None, points|None)
    seen_format = False

    for line, toks in _records(text):
        rec, args = toks[0], toks[1:]
        if not seen_format:
            if rec != "format" or args != [FORMAT_TAG]:
                raise ParseError(f"expected 'format {FORMAT_TAG}' first", line)
            seen_format = True
            continue
        if rec == "format":
            raise ParseError("duplicate format record", line)
        elif rec == "kind":
            if kind is not None:
                raise ParseError("duplicate kind record", line)
            if len(args) != 1 or args[0] not in ("linear", "tree", "ranges"):
                raise ParseError("kind must be linear, tree or ranges", line)
            kind = args[0]
        elif rec == "point":
            if len(args) == 1:
                pid, parent = _int(args[0], line, "point id"), None
            elif len(args) == 3 and args[1] == "parent":
                pid, parent = _int(args[0], line, "point id"), _int(args[2], line, "parent id")
            else:
                raise ParseError("point takes: <id> [parent <id>]", line)
            if pid in point_lines:
                raise ParseError(f"duplicate point {pid}", line)
            point_lines[pid] = line
            points.append(Point(pid, parent))
        elif rec == "instr":
            if len(args) != 5 or args[1] != "uses" or args[3] != "defs":
                raise ParseError("instr takes: <point> uses <ids|-> defs <ids|->", line)
            at = _int(args[0], line, "point id")
            instrs.append((line, Instruction(at, frozenset(_csv(args[2], line)),
                                             frozenset(_csv(args[4], line)))))
        elif rec == "livein":
            if livein is not None:
                raise ParseError("duplicate livein record", line)
            if len(args) != 1:
                raise ParseError("livein takes one id list", line)
            livein = frozenset(_csv(args[0], line))
        elif rec == "liveout":
            if liveout is not None:
                raise ParseError("duplicate liveout record", line)
            if len(args) != 1:
                raise ParseError("liveout takes one id list", line)
            liveout = frozenset(_csv(args[0], line))
        elif rec == "var":
            if len(args) < 3 or args[1] != "weight":
                raise ParseError("var takes: <id> weight <w> [span a..b | points ids]", line)
            vid = _name(args[0], line)
            w = _weight(args[2], line)
            span = pts = None
            rest = args[3:]
            if rest:
                if rest[0] == "span" and len(rest) == 2:
                    m = re.match(r"^(-?\d+)\.\.(-?\d+)$", rest[1])
                    if not m:
                        raise ParseError(f"bad span {rest[1]!r}", line)
                    span = (int(m.group(1)), int(m.group(2)))
                elif rest[0] == "points" and len(rest) == 2:
                    pts = [_int(t, line, "point id") for t in rest[1].split(",") if t]
                else:
                    raise ParseError("var trailer must be 'span a..b' or 'points ids'", line)
            var_rows.append((line, vid, w, span, pts))
        else:
            raise ParseError(f"unknown record kind {rec!r}", line)

    if not seen_format:
        raise ParseError("empty input: missing format record", 1)
    if kind is None:
        raise ParseError("missing kind record", 1)
    if not points:
        raise ParseError("instance declares no points", 1)

    seen_vars = set()
    for line, vid, *_ in var_rows:
        if vid in seen_vars:
            raise ParseError(f"duplicate var {vid}", line)
        seen_vars.add(vid)

    if kind in ("linear", "tree"):
        shape = LINEAR if kind == "linear" else TREE
        if kind == "linear":
            for p in points:
                if p.parent is not None:
                    raise ParseError("linear points take no parent",
                                     point_lines[p.id])
        weights = {}
        for line, vid, w, span, pts in var_rows:
            if span is not None or pts is not None:
                raise ParseError("span/points only appear in ranges instances", line)
            weights[vid] = w
        inst = Instance.from_code(shape, points, [i for _, i in instrs], weights,
                                  livein=livein or frozenset(),
                                  liveout=liveout or frozenset())
    else:
        if livein is not None or liveout is not None:
            raise ParseError("ranges instances take no livein/liveout", 1)
        if instrs:
            raise ParseError("ranges instances take no instructions", instrs[0][0])
        is_tree = any(p.parent is not None for p in points)
        shape = TREE if is_tree else LINEAR
        known = {p.id for p in points}
        ranges = {}
        weights = {}
        for line, vid, w, span, pts in var_rows:
            if span is not None:
                if is_tree:
                    raise ParseError("span is for linear ranges; use points", line)
                lo, hi = span
                cover = sorted(p for p in known if lo <= p <= hi)
                if not cover:
                    raise ParseError(f"span {lo}..{hi} covers no points", line)
            elif pts is not None:
                cover = pts
            else:
                raise ParseError("ranges var needs span or points", line)
            ranges[vid] = cover
            weights[vid] = w
        inst = Instance.from_ranges(shape, points, ranges, weights)

    problems = validate(inst)
    if problems:
        v = problems[0]
        lines = {f"point {pid}": ln for pid, ln in point_lines.items()}
        for line, ins in instrs:
            lines[f"point {ins.at}"] = line
        lines.update({vid: line for line, vid, *_ in var_rows})
        raise ParseError(f"invalid instance ({len(problems)} problem(s)); "
                         f"first: {v}", lines.get(v.subject, 1))
    return inst


def _fmt_weight(w: Fraction):
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def _fmt_csv(ids):
    ids = sorted(ids)
    return ",".join(ids) if ids else "-"


def serialize(instance) -> str:
    """Canonical text form: sorted records, byte-stable across runs."""
    out = [f"format {FORMAT_TAG}"]
    if instance.code_backed:
        out.append(f"kind {instance.shape}")
    else:
        out.append("kind ranges")
    for p in sorted(instance.points, key=lambda p: p.id):
        if p.parent is None:
            out.append(f"point {p.id}")
        else:
            out.append(f"point {p.id} parent {p.parent}")
    if instance.livein:
        out.append(f"livein {_fmt_csv(instance.livein)}")
    if instance.liveout:
        out.append(f"liveout {_fmt_csv(instance.liveout)}")
    if instance.code_backed:
        for ins in sorted(instance.instructions, key=lambda i: instance.point_pos[i.at]):
            out.append(f"instr {ins.at} uses {_fmt_csv(ins.uses)} "
                       f"defs {_fmt_csv(ins.defs)}")
    for vid in sorted(instance.variables):
        v = instance.variables[vid]
        row = f"var {vid} weight {_fmt_weight(v.weight)}"
        if not instance.code_backed:
            if instance.shape == LINEAR:
                row += f" span {min(v.range.points)}..{max(v.range.points)}"
            else:
                row += " points " + ",".join(str(p) for p in sorted(v.range.points))
        out.append(row)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------
# Source-problem files for the reduction generators
# ---------------------------------------------------------------------

def parse_source(text):
    """Parse an X3C / minimum-cover / independent-set source instance.

        source x3c            source mincover        source indepset
        elements e1,e2,e3     ground b1,b2           vertices u,v,w
        triple e1,e2,e3       member b1,b2           edge u v
                              bound 1                bound 2
    """
    kind = None
    elements = ground = vertices = None
    triples = []
    members = []
    edges = []
    bound = None
    for line, toks in _records(text):
        rec, args = toks[0], toks[1:]
        if kind is None:
            if rec != "source" or len(args) != 1 or args[0] not in (
                    "x3c", "mincover", "indepset"):
                raise ParseError("expected 'source x3c|mincover|indepset' first", line)
            kind = args[0]
            continue
        if rec == "elements" and kind == "x3c" and len(args) == 1:
            elements = tuple(_csv(args[0], line))
        elif rec == "triple" and kind == "x3c" and len(args) == 1:
            triples.append(frozenset(_csv(args[0], line)))
        elif rec == "ground" and kind == "mincover" and len(args) == 1:
            ground = tuple(_csv(args[0], line))
        elif rec == "member" and kind == "mincover" and len(args) == 1:
            members.append(frozenset(_csv(args[0], line)))
        elif rec == "vertices" and kind == "indepset" and len(args) == 1:
            vertices = tuple(_csv(args[0], line))
        elif rec == "edge" and kind == "indepset" and len(args) == 2:
            u, v = _name(args[0], line), _name(args[1], line)
            edges.append((min(u, v), max(u, v)))
        elif rec == "bound" and kind in ("mincover", "indepset") and len(args) == 1:
            bound = _int(args[0], line, "bound")
        else:
            raise ParseError(f"unexpected record {rec!r} for source {kind}", line)
    if kind is None:
        raise ParseError("empty source file", 1)
    try:
        if kind == "x3c":
            src = X3CInstance(elements or (), tuple(triples))
            src.check()
        elif kind == "mincover":
            src = CoverInstance(ground or (), tuple(members), bound or 0)
            src.check()
        else:
            src = GraphInstance(vertices or (), tuple(sorted(set(edges))), bound or 0)
            src.check()
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    return kind, src
