from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given

from conftest import seeds
from strictify.errors import E_CONSTRAINT_NOT_PRESERVED, E_ILL_TYPED, E_NOT_MAGMOID, KernelError
from strictify.instances import POINT, cell3_name, strict_tricategory
from strictify.signature import Gen1Decl, parse_signature
from strictify.terms import (
    Cell2,
    Cell3,
    Comp1,
    Comp3,
    Con2,
    Con3,
    Gen1,
    Id2,
    Id3,
    Star3,
    Tens3,
    parse_term1,
    parse_term2,
    parse_term3,
)
from strictify.tricat_strict import gray_nf2
from strictify.tricat_terms import (
    CellMap,
    ConstraintKind,
    check_virtually_strict,
    constraint3_type,
    ev3,
    is_coherence3,
    type3,
    typecheck,
)

CHAIN = parse_signature(
    "(sig3 (obj a) (obj b) (obj c) (obj d) (obj e)"
    " (gen1 k a b) (gen1 h b c) (gen1 g c d) (gen1 f d e)"
    " (gen2 alpha f f) (gen2 beta g g))"
)
STRICT = strict_tricategory()


def p1(t):
    return parse_term1(t)


def test_associator_typing():
    d = typecheck(CHAIN, parse_term2("(a f g h)"))
    assert (d.src, d.tgt) == ("(o (o f g) h)", "(o f (o g h))")
    assert d.level == 2 and len(d.children) == 3


def test_identity_3cell_typing():
    d = typecheck(CHAIN, parse_term3("(id2 alpha)"))
    assert (d.src, d.tgt) == ("alpha", "alpha")


def test_pentagonator_typing():
    src, tgt = constraint3_type(CHAIN, "pi", (p1("f"), p1("g"), p1("h"), p1("k")))
    assert str(tgt) == "(v (a f g (o h k)) (a (o f g) h k))"
    assert str(src) == "(v (v (o (id f) (a g h k)) (a f (o g h) k)) (o (a f g h) (id k)))"


@pytest.mark.parametrize("perm", [p for p in itertools.permutations("fghk") if p != tuple("fghk")])
def test_pentagonator_permuted_indices_rejected(perm):
    declared = Cell3("P", *constraint3_type(CHAIN, "pi", tuple(p1(x) for x in "fghk")))
    permuted = Con3("pi", tuple(p1(x) for x in perm))
    with pytest.raises(KernelError) as info:
        type3(CHAIN, Comp3(permuted, Id3(declared.src)))
    assert info.value.code == E_ILL_TYPED


def test_typecheck_locates_the_failure():
    with pytest.raises(KernelError) as info:
        typecheck(CHAIN, parse_term2("(o (id f) (v alpha beta))"))
    assert info.value.detail["position"] == [1]


def test_every_head_has_a_kind():
    for head in ("phi", "phix", "pi", "lloc", "i", "a"):
        assert ConstraintKind.of(head).head == head
    with pytest.raises(KernelError):
        ConstraintKind.of("zeta")


def test_coherence3_classification():
    assert is_coherence3(parse_term3("(c (phi a) (inv (phi a)))"))
    assert is_coherence3(parse_term3("(id2 alpha)"))
    assert not is_coherence3(Cell3("X", parse_term2("alpha"), parse_term2("alpha")))


def test_3cells_need_a_tricategory():
    bi = parse_signature("(sig2 (obj a))")
    with pytest.raises(KernelError) as info:
        type3(bi, parse_term3("(phi a)"))
    assert info.value.code == E_ILL_TYPED


# Evaluation ---------------------------------------------------------------------------

TRIPLE_SIG = STRICT.extend(gens1=(Gen1Decl("u", POINT, POINT),))
U = Gen1("u")


def test_ev3_of_a_triple_is_the_cell():
    pi = Cell3(cell3_name(0, 1, 1), Cell2("p0", U, U), Cell2("p1", U, U))
    assert ev3(TRIPLE_SIG, pi) == "c011"


def test_ev3_of_identity_is_table_unit():
    alpha = Cell2("p1", U, U)
    assert ev3(TRIPLE_SIG, Id3(alpha)) == STRICT.table.unit3("p1") == "c110"


CELLS3 = [cell3_name(s, t, g) for s, t, g in itertools.product((0, 1), repeat=3)]


def _triple(name: str) -> Cell3:
    s, t = STRICT.table.cells3[name]
    return Cell3(name, Cell2(s, U, U), Cell2(t, U, U))


def test_ev3_tensor_homomorphism_on_random_pairs():
    rng = random.Random(0)
    tab = STRICT.table
    for _ in range(1000):
        x, y = rng.choice(CELLS3), rng.choice(CELLS3)
        for op, table_op in ((Tens3, tab.tens3), (Star3, tab.star3)):
            assert ev3(TRIPLE_SIG, op(_triple(x), _triple(y))) == table_op(x, y)


@given(seeds)
def test_ev3_composite_homomorphism(seed):
    rng = random.Random(seed)
    x = rng.choice(CELLS3)
    s, _ = STRICT.table.cells3[x]
    y = rng.choice([c for c in CELLS3 if STRICT.table.cells3[c][1] == s])
    assert ev3(TRIPLE_SIG, Comp3(_triple(x), _triple(y))) == STRICT.table.comp3(x, y)


def test_ev3_constraints_are_tabulated():
    t = Con3("aloc", (Cell2("p1", U, U), Cell2("p1", U, U), Cell2("p0", U, U)))
    assert ev3(TRIPLE_SIG, t) == "c000"


# Virtually strict functors -----------------------------------------------------------


def test_identity_mapping_is_virtually_strict():
    tab = STRICT.table
    report = check_virtually_strict(tab, tab, CellMap.identity(tab, STRICT.objects))
    assert report.ok and report.checked > 0


def test_pipeline_image_is_virtually_strict():
    """Push each base 2-cell through the pipeline and read the cell back off its disc."""
    tab = STRICT.table
    cells2 = {}
    for name in tab.cells2:
        (disc,) = gray_nf2(TRIPLE_SIG, Cell2(name, U, U)).discs
        cells2[name] = parse_term2(disc.gen).name
    fmap = CellMap({POINT: POINT}, {"u": "u"}, cells2, {c: c for c in tab.cells3})
    assert check_virtually_strict(tab, tab, fmap).ok


def test_swapping_2cells_breaks_the_magmoid():
    tab = STRICT.table
    swap = {"p0": "p1", "p1": "p0"}
    cells3 = {}
    for name, (s, t) in tab.cells3.items():
        g = int(name[-1])
        cells3[name] = cell3_name(int(swap[s][1]), int(swap[t][1]), g)
    fmap = CellMap({POINT: POINT}, {"u": "u"}, swap, cells3)
    with pytest.raises(KernelError) as info:
        check_virtually_strict(tab, tab, fmap)
    assert info.value.code == E_NOT_MAGMOID


def test_non_functorial_target_is_caught():
    tab = STRICT.table
    broken = strict_tricategory(swap_hcomp=True).table
    with pytest.raises(KernelError) as info:
        check_virtually_strict(tab, broken, CellMap.identity(tab, STRICT.objects))
    assert info.value.code in (E_NOT_MAGMOID, E_CONSTRAINT_NOT_PRESERVED)


def test_typing_of_unit_comparisons():
    assert constraint3_type(CHAIN, "phi", ("a",)) == (Id2(parse_term1("(u a)")), Con2("i", ("a",)))
    src, tgt = constraint3_type(CHAIN, "phiu", (p1("f"), p1("g")))
    assert src == Id2(Comp1(Gen1("f"), Gen1("g")))
