from __future__ import annotations

import random
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, load_sig, read_fixture, seeds
from strictify.bicat_strict import placed_diagram, strictify2
from strictify.diagram import Diagram, FlatPath
from strictify.errors import E_ILL_TYPED, E_INDEX, E_NO_MATCH, E_NOT_CONSECUTIVE, E_OVERLAP, KernelError
from strictify.gray_rewrite import RewriteRule, apply_rule, interchange, render, rules_of
from strictify.oracle import random_pattern
from strictify.signature import parse_signature
from strictify.terms import parse_term2
from strictify.tricat_strict import gray_nf2

SNAKES = load_sig("rules/snake_rules.sig")
INTER = load_sig("rules/interchange.sig")
WIDE = parse_signature(
    "(sig2 (obj a) (obj b) (obj c) (gen1 f a b) (gen1 g b a) (gen1 k c a)"
    " (gen2 eta (u a) (o g f)) (gen2 eps (o f g) (u b)) (gen2 kk k k)"
    " (rule snake1 (v (o eps (id f)) (v (ainv f g f) (o (id f) eta))) (id f)))"
)


def p2(t):
    return parse_term2(t)


# Interchange --------------------------------------------------------------------------


def test_disjoint_discs_swap_with_a_typed_interchanger():
    d = gray_nf2(INTER, p2("(o s s)"))
    swapped, w = interchange(INTER, d, 0)
    assert swapped != d
    assert w.check(INTER)
    assert gray_nf2(INTER, w.src) == d
    assert gray_nf2(INTER, w.tgt) == swapped
    back, _ = interchange(INTER, swapped, 0)
    assert back == d


def test_bicategory_interchange_has_no_witness():
    d = placed_diagram(WIDE, FlatPath("c", "b", ("f", "k")), [("eta", 1), ("kk", 3)])
    swapped, w = interchange(WIDE, d, 0)
    assert w is None and interchange(WIDE, swapped, 0)[0] == d


def test_shared_strand_overlaps():
    d = gray_nf2(INTER, p2("(v t s)"))
    with pytest.raises(KernelError) as info:
        interchange(INTER, d, 0)
    assert info.value.code == E_OVERLAP


def test_empty_diagram_has_no_pair():
    d = Diagram.identity(FlatPath("a", "a", ("p",)))
    with pytest.raises(KernelError) as info:
        interchange(INTER, d, 0)
    assert info.value.code == E_INDEX


@given(seeds, st.integers(2, 5), st.integers(1, 4))
def test_interchange_is_involutive(seed, discs, strands):
    d = random_pattern(random.Random(seed), discs, strands).diagram()
    sig = parse_signature("(sig2 (obj a))")
    for i in range(len(d.discs) - 1):
        try:
            swapped, _ = interchange(sig, d, i)
        except KernelError as err:
            assert err.code == E_OVERLAP
            continue
        assert interchange(sig, swapped, i)[0] == d
        assert sorted(x.gen for x in swapped.discs) == sorted(x.gen for x in d.discs)


# Rules --------------------------------------------------------------------------------


def test_snake_rule_straightens_the_zigzag():
    rule = rules_of(SNAKES)["snake1"]
    d = strictify2(SNAKES, p2(read_fixture("rules/zigzag.t2")))
    out = apply_rule(d, rule, 0)
    assert out == Diagram.identity(FlatPath("a", "b", ("f",)))
    assert apply_rule(out, rule.reversed(), 0) == d


def test_identity_rule_is_a_no_op():
    path = FlatPath("a", "b", ("f",))
    rule = RewriteRule("noop", Diagram.identity(path), Diagram.identity(path))
    d = strictify2(SNAKES, p2(read_fixture("rules/zigzag.t2")))
    assert apply_rule(d, rule, 0) == d
    straight = Diagram.identity(path)
    assert apply_rule(straight, rule, 0) == straight


def test_separated_match_needs_an_interchange():
    rule = rules_of(WIDE)["snake1"]
    d = placed_diagram(WIDE, FlatPath("c", "b", ("f", "k")), [("eta", 1), ("kk", 3), ("eps", 0)])
    with pytest.raises(KernelError) as info:
        apply_rule(d, rule, 0, right=("k",))
    assert info.value.code == E_NO_MATCH
    with pytest.raises(KernelError) as info:
        apply_rule(d, rule, [0, 2], right=("k",))
    assert info.value.code == E_NOT_CONSECUTIVE
    moved, _ = interchange(WIDE, d, 1)
    out = apply_rule(moved, rule, [0, 1], right=("k",))
    assert [x.gen for x in out.discs] == ["kk"]


def test_rule_sides_must_be_parallel():
    with pytest.raises(KernelError) as info:
        RewriteRule("bad", Diagram.identity(FlatPath("a", "b", ("f",))), Diagram.identity(FlatPath("b", "a", ("g",))))
    assert info.value.code == E_ILL_TYPED


def test_non_invertible_rule_cannot_reverse():
    with pytest.raises(KernelError):
        rules_of(WIDE)["snake1"].reversed()


# Rendering ----------------------------------------------------------------------------


def test_empty_diagram_is_one_labelled_strand():
    doc = render(Diagram.identity(FlatPath("a", "b", ("f",))), "svg")
    assert doc.count("<line") == 0 and doc.count("<circle") == 0
    assert re.findall(r">(\w+)</text>", doc) == ["f", "f"]


@pytest.mark.parametrize("name, fmt, ext", [("eta", "svg", "svg"), ("eta", "tikz", "tex"), ("zigzag", "svg", "svg"), ("zigzag", "tikz", "tex")])
def test_golden_files(name, fmt, ext):
    term = "eta" if name == "eta" else read_fixture("rules/zigzag.t2")
    doc = render(strictify2(SNAKES, p2(term)), fmt)
    assert doc == (FIXTURES / "golden" / f"{name}.{ext}").read_text(encoding="utf-8")


def test_interchanged_documents_differ_only_in_vertical_order():
    d = gray_nf2(INTER, p2("(o s s)"))
    swapped, _ = interchange(INTER, d, 0)
    one, other = render(d, "svg"), render(swapped, "svg")
    assert one != other
    assert sorted((x, g) for x, _, g in _nodes(one)) == sorted((x, g) for x, _, g in _nodes(other))
    assert sorted(y for _, y, _ in _nodes(one)) == sorted(y for _, y, _ in _nodes(other))
    by_height = lambda doc: [x for x, _, _ in sorted(_nodes(doc), key=lambda n: n[1])]  # noqa: E731
    assert by_height(one) == list(reversed(by_height(other)))


def _nodes(doc):
    centres = re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)"', doc)
    labels = re.findall(r'<text x="[\d.]+" y="[\d.]+" font-size="10">([^<]+)</text>', doc)
    return [(float(x), float(y), g) for (x, y), g in zip(centres, labels)]


@given(seeds, st.integers(1, 5), st.integers(1, 4), st.sampled_from(["svg", "tikz"]))
def test_render_is_deterministic(seed, discs, strands, fmt):
    d = random_pattern(random.Random(seed), discs, strands).diagram()
    assert render(d, fmt) == render(d, fmt)


def test_unknown_format():
    with pytest.raises(Exception):
        render(Diagram.identity(FlatPath("a", "b", ("f",))), "png")
