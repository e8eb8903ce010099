import pytest

from spillkit.errors import ParseError
from spillkit.fileformat import parse, parse_source, serialize
from spillkit.reductions import (
    CoverInstance,
    GraphInstance,
    X3CInstance,
    gen_indepset_h1,
    gen_indepset_h2,
    gen_mincover,
    gen_x3c,
)

from builders import (
    random_linear_code,
    random_linear_ranges,
    random_tree_code,
    random_tree_ranges,
    seeded,
)

fs = frozenset

MINIMAL = """format spill-v1
kind ranges
point 1
var a weight 1 span 1..1
"""

CODE = """format spill-v1
kind linear
point 1
point 2
instr 1 uses - defs a
instr 2 uses a defs -
var a weight 1
"""


class TestParse:
    def test_minimal(self):
        inst = parse(MINIMAL)
        assert inst.n_vars == 1 and inst.omega == 1

    def test_code_backed_ranges_derived(self):
        inst = parse(CODE)
        assert inst.variables["a"].range.points == fs({1, 2})

    def test_zero_weight_is_semantic_error(self):
        bad = MINIMAL.replace("weight 1", "weight 0")
        with pytest.raises(ParseError) as exc:
            parse(bad)
        assert exc.value.line == 4

    def test_unknown_record_rejected(self):
        with pytest.raises(ParseError):
            parse(MINIMAL + "frobnicate yes\n")

    def test_rational_weights(self):
        inst = parse(MINIMAL.replace("weight 1", "weight 7/2"))
        assert inst.variables["a"].weight == 7 / 2 == 3.5

    def test_comments_and_blank_lines(self):
        text = "# header\n\n" + MINIMAL.replace("point 1", "point 1 # inline")
        assert parse(text) == parse(MINIMAL)

    def test_tree_ranges_use_points(self):
        text = ("format spill-v1\nkind ranges\npoint 1\npoint 2 parent 1\n"
                "var a weight 1 points 1,2\n")
        inst = parse(text)
        assert inst.shape == "tree"

    def test_span_on_tree_rejected(self):
        text = ("format spill-v1\nkind ranges\npoint 1\npoint 2 parent 1\n"
                "var a weight 1 span 1..2\n")
        with pytest.raises(ParseError):
            parse(text)

    def test_duplicate_point_rejected(self):
        with pytest.raises(ParseError):
            parse(MINIMAL.replace("point 1\n", "point 1\npoint 1\n"))

    def test_validate_violations_surface(self):
        text = ("format spill-v1\nkind linear\npoint 1\npoint 2\n"
                "instr 1 uses - defs a\ninstr 2 uses - defs a\n"
                "var a weight 1\n")
        with pytest.raises(ParseError) as exc:
            parse(text)
        assert "ssa" in str(exc.value)


class TestSerialize:
    def test_deterministic(self):
        inst = parse(CODE)
        assert serialize(inst) == serialize(inst)

    def test_roundtrip_structural_equality(self):
        rng = seeded(41)
        for make in (lambda: random_linear_ranges(rng, w_max=9),
                     lambda: random_tree_ranges(rng),
                     lambda: random_linear_code(rng, h=2),
                     lambda: random_tree_code(rng)):
            for _ in range(15):
                inst = make()
                text = serialize(inst)
                again = parse(text)
                assert again == inst
                assert serialize(again) == text

    def test_reordered_input_canonicalizes(self):
        shuffled = """format spill-v1
kind linear
point 2
point 1
var a weight 1
instr 2 uses a defs -
instr 1 uses - defs a
"""
        assert serialize(parse(shuffled)) == serialize(parse(CODE))

    def test_generated_instances_roundtrip(self):
        certs = [
            gen_x3c(X3CInstance(tuple(f"e{i}" for i in range(6)),
                                (fs({"e0", "e1", "e2"}),
                                 fs({"e3", "e4", "e5"})))),
            gen_mincover(CoverInstance(("b1", "b2"),
                                       (fs({"b1"}), fs({"b1", "b2"})), 1)),
            gen_indepset_h2(GraphInstance(("u", "v"), (("u", "v"),), 1)),
            gen_indepset_h1(GraphInstance(("u", "v", "w"),
                                          (("u", "v"), ("v", "w")), 1)),
        ]
        for cert in certs:
            text = serialize(cert.instance)
            assert parse(text) == cert.instance
            assert serialize(parse(text)) == text


class TestSourceFiles:
    def test_x3c(self):
        kind, src = parse_source(
            "source x3c\nelements e1,e2,e3\ntriple e1,e2,e3\n")
        assert kind == "x3c" and len(src.triples) == 1

    def test_mincover(self):
        kind, src = parse_source(
            "source mincover\nground b1,b2\nmember b1\nmember b1,b2\nbound 1\n")
        assert kind == "mincover" and src.bound == 1

    def test_indepset_normalizes_edges(self):
        kind, src = parse_source(
            "source indepset\nvertices u,v\nedge v u\nbound 1\n")
        assert src.edges == (("u", "v"),)

    def test_invalid_source_rejected(self):
        with pytest.raises(ParseError):
            parse_source("source x3c\nelements e1,e2\ntriple e1,e2\n")
        with pytest.raises(ParseError):
            parse_source("source mincover\nground b1\nmember b1\nbound 9\n")
