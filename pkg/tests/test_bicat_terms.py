from __future__ import annotations

import pytest
from hypothesis import given

from conftest import sampler, seeds
from strictify.bicat_terms import (
    canonical_coherence,
    check_coherence_eq,
    eval1,
    eval2,
    extend_to_strict_functor,
    flatten1,
    invert2,
    is_coherence2,
    left_bracketed,
    type1,
    type2,
)
from strictify.diagram import FlatPath
from strictify.errors import E_ILL_TYPED, E_NOT_COHERENCE, E_NOT_PARALLEL, E_TABLE_INCOMPLETE, KernelError
from strictify.instances import POINT, cocycle_bicategory, trivial_bicategory
from strictify.oracle import SearchBudget, enumerate_coherence, sampling_signature
from strictify.signature import parse_signature
from strictify.terms import Con2, Id2, Unit1, VComp2, parse_term1, parse_term2

SIG = parse_signature(
    "(sig2 (obj a) (obj b) (obj c) (obj d) (obj e)"
    " (gen1 h a b) (gen1 g b c) (gen1 f c d) (gen1 k d e) (gen2 alpha g g))"
)
TABLED = sampling_signature(with_table=True)


def p1(text):
    return parse_term1(text)


def p2(text):
    return parse_term2(text)


@pytest.mark.parametrize(
    "text, gens, ends",
    [
        ("(o (o f g) h)", ("f", "g", "h"), ("a", "d")),
        ("(o (o f (u c)) g)", ("f", "g"), ("b", "d")),
        ("(u a)", (), ("a", "a")),
        ("(o (u d) (o (u d) f))", ("f",), ("c", "d")),
    ],
)
def test_flatten1(text, gens, ends):
    assert flatten1(SIG, p1(text)) == FlatPath(ends[0], ends[1], gens)


def test_type1_rejects_mismatch():
    with pytest.raises(KernelError) as info:
        type1(SIG, p1("(o h f)"))
    assert info.value.code == E_ILL_TYPED


@pytest.mark.parametrize(
    "text, expected",
    [
        ("(id f)", True),
        ("(v (a f g h) (o alpha (id g)))", False),
        ("(v (o (l f) (r g)) (ainv f g h))", True),
        ("alpha", False),
    ],
)
def test_is_coherence2(text, expected):
    assert is_coherence2(p2(text)) is expected


def test_typing_of_constraints():
    assert type2(SIG, p2("(a f g h)")) == (p1("(o (o f g) h)"), p1("(o f (o g h))"))
    assert type2(SIG, p2("(l f)")) == (p1("(o (u d) f)"), p1("f"))
    assert type2(SIG, p2("(r f)")) == (p1("(o f (u c))"), p1("f"))


def test_canonical_identity_class():
    w = canonical_coherence(SIG, p1("f"), p1("f"))
    assert check_coherence_eq(SIG, w, Id2(p1("f")))


def test_canonical_associator_class():
    src, tgt = p1("(o (o f g) h)"), p1("(o f (o g h))")
    w = canonical_coherence(SIG, src, tgt)
    assert type2(SIG, w) == (src, tgt)
    assert check_coherence_eq(SIG, w, Con2("a", (p1("f"), p1("g"), p1("h"))))


def test_canonical_not_parallel():
    with pytest.raises(KernelError) as info:
        canonical_coherence(SIG, p1("(o f g)"), p1("(o g f)"))
    assert info.value.code in (E_NOT_PARALLEL, E_ILL_TYPED)
    with pytest.raises(KernelError) as info:
        canonical_coherence(SIG, p1("(o f g)"), p1("(o f (o g h))"))
    assert info.value.code == E_NOT_PARALLEL


def test_inverse_law():
    a = Con2("a", (p1("f"), p1("g"), p1("h")))
    assert check_coherence_eq(SIG, VComp2(Con2("ainv", a.args), a), Id2(p1("(o (o f g) h)")))


PENTAGON_LEFT = "(v (a k f (o g h)) (a (o k f) g h))"
PENTAGON_RIGHT = "(v (o (id k) (a f g h)) (v (a k (o f g) h) (o (a k f g) (id h))))"


def test_pentagon_composites():
    assert check_coherence_eq(SIG, p2(PENTAGON_LEFT), p2(PENTAGON_RIGHT))


def test_different_types_unequal():
    assert not check_coherence_eq(SIG, p2("(l f)"), p2("(r f)"))


def test_non_coherence_rejected():
    with pytest.raises(KernelError) as info:
        check_coherence_eq(SIG, p2("alpha"), p2("alpha"))
    assert info.value.code == E_NOT_COHERENCE


@given(seeds)
def test_left_bracketed_is_a_normal_form(seed):
    s = sampler(SIG, seed)
    t = s.term1(4)
    path = flatten1(SIG, t)
    lb = left_bracketed(SIG, path)
    assert flatten1(SIG, lb) == path
    assert type2(SIG, canonical_coherence(SIG, t, lb)) == (t, lb)


@given(seeds)
def test_canonical_coherence_inverts(seed):
    s = sampler(SIG, seed)
    t = s.term1(4)
    lb = left_bracketed(SIG, flatten1(SIG, t))
    w = canonical_coherence(SIG, t, lb)
    assert type2(SIG, invert2(SIG, w)) == (lb, t)


# Evaluation into tables ---------------------------------------------------------


def test_eval_identity_is_table_unit():
    tab = TABLED.table
    f = p1("(o f g)")
    assert eval2(TABLED, Id2(f)) == tab.unit2(eval1(TABLED, f))


def test_eval_associator_is_tabulated():
    tab = TABLED.table
    assert eval2(TABLED, p2("(a f f f)")) == tab.con("a", ("x", "x", "x")) == "x1"
    assert eval2(TABLED, p2("(a f g f)")) == "e0"


def test_eval_needs_tables():
    with pytest.raises(KernelError) as info:
        eval2(SIG, p2("(id f)"))
    assert info.value.code == E_TABLE_INCOMPLETE


def test_one_cell_table_evaluates_every_coherence_term_to_its_unique_cell():
    sig = parse_signature("(sig2 (obj pt) (gen1 f pt pt))").extend(table=trivial_bicategory().table)
    sig.table.map1["f"] = "u"
    count = 0
    for src in (p1("(o (o f f) f)"), p1("(o f (u pt))"), p1("(o (u pt) (o f f))")):
        en = enumerate_coherence(sig, src, left_bracketed(sig, flatten1(sig, src)), SearchBudget(max_size=5))
        for t in en.terms:
            assert eval2(sig, t) == "p"
            count += 1
    assert count > 0


@pytest.mark.parametrize(
    "src, tgt",
    [
        ("(o (o f f) f)", "(o f (o f f))"),
        ("(o (o f (u pt)) g)", "(o f g)"),
        ("(o (u pt) (o f f))", "(o f f)"),
    ],
)
def test_parallel_coherence_terms_evaluate_equal(src, tgt):
    en = enumerate_coherence(TABLED, p1(src), p1(tgt), SearchBudget(max_size=6))
    values = {eval2(TABLED, t) for t in en.terms}
    assert len(en.terms) > 0 and len(values) == 1
    assert values == {eval2(TABLED, canonical_coherence(TABLED, p1(src), p1(tgt)))}


def test_inclusion_extends_to_eval2():
    tab = TABLED.table
    ev = extend_to_strict_functor(TABLED, tab, {"f": "x", "g": "e"}, {"kf": "x1", "kg": "e0"})
    for text in ("(v (a f f f) (o (o kf (id f)) (id f)))", "(o kg (l f))", "(v (r f) (o kf (id (u pt))))"):
        assert ev.eval2(p2(text)) == eval2(TABLED, p2(text))


def test_empty_graph_has_trivial_evaluator():
    sig = parse_signature(f"(sig2 (obj {POINT}))")
    ev = extend_to_strict_functor(sig, cocycle_bicategory().table, {}, {})
    assert ev.eval2(Id2(Unit1(POINT))) == "e0"


@given(seeds)
def test_units_assignment_matches_direct_evaluation(seed):
    tab = TABLED.table
    ev = extend_to_strict_functor(TABLED, tab, {"f": "x", "g": "e"}, {"kf": "x0", "kg": "e0"})
    s = sampler(TABLED, seed, max_nodes=4)
    src = s.term1()
    t = s.term2(src)
    direct = eval2(TABLED, _units_for_gens(t))
    assert ev.eval2(t) == direct


def _units_for_gens(t):
    """Replace each 2-generator by the identity on its boundary."""
    from strictify.terms import Gen2, HComp2

    if isinstance(t, Gen2):
        return Id2(TABLED.g2[t.name].src)
    if isinstance(t, VComp2):
        return VComp2(_units_for_gens(t.left), _units_for_gens(t.right))
    if isinstance(t, HComp2):
        return HComp2(_units_for_gens(t.left), _units_for_gens(t.right))
    return t


def test_ill_typed_assignment_rejected():
    with pytest.raises(KernelError) as info:
        extend_to_strict_functor(TABLED, TABLED.table, {"f": "x", "g": "e"}, {"kf": "e0", "kg": "e0"})
    assert info.value.code == E_ILL_TYPED
