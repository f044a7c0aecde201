from __future__ import annotations

import filecmp
from importlib import resources
from pathlib import Path

import pytest

from conftest import FIXTURES, load_sig
from strictify.errors import E_AXIOM_VIOLATION, E_DUP_NAME, E_ILL_TYPED, E_PARSE, E_TABLE_INCOMPLETE, KernelError
from strictify.instances import cocycle_bicategory, strict_tricategory, trivial_bicategory
from strictify.signature import BICATEGORY, TRICATEGORY, parse_signature, serialize, validate_tables
from strictify.terms import Comp1, Gen1, Unit1

ADJ = """
(sig2 (obj a) (obj b) (gen1 f a b) (gen1 g b a)
  (gen2 eta (u a) (o g f)) (gen2 eps (o f g) (u b)))
"""


def test_minimal_signature():
    sig = parse_signature("(sig2 (obj a))")
    assert sig.level == BICATEGORY
    assert sig.objects == ("a",)
    assert not sig.gens1 and not sig.gens2 and sig.table is None


def test_adjunction_data():
    sig = parse_signature(ADJ)
    assert sig.objects == ("a", "b")
    assert [(g.name, g.src, g.tgt) for g in sig.gens1] == [("f", "a", "b"), ("g", "b", "a")]
    eta, eps = sig.g2["eta"], sig.g2["eps"]
    assert (eta.src, eta.tgt) == (Unit1("a"), Comp1(Gen1("g"), Gen1("f")))
    assert (eps.src, eps.tgt) == (Comp1(Gen1("f"), Gen1("g")), Unit1("b"))


@pytest.mark.parametrize(
    "text, code",
    [
        ("(sig2 (obj a) (obj b) (gen1 f a b) (gen1 h b b) (gen2 bad f h))", E_ILL_TYPED),
        ("(sig2 (obj a) (gen1 f a c))", E_ILL_TYPED),
        ("(sig2 (obj a) (obj a))", E_DUP_NAME),
        ("(sig2 (obj a) (gen1 f a a) (gen1 f a a))", E_DUP_NAME),
        ("(sig4 (obj a))", E_PARSE),
        ("(sig2 (obj a) (frob x))", E_PARSE),
        ("(sig2 (obj a)) (sig2 (obj b))", E_PARSE),
        ("(sig2 (obj a) (gen1 f a a) (gen2 k f f) (gen3 K k k))", E_ILL_TYPED),
    ],
)
def test_rejections(text, code):
    with pytest.raises(KernelError) as info:
        parse_signature(text)
    assert info.value.code == code


def test_error_positions_point_at_the_declaration():
    text = "(sig2 (obj a)\n  (obj b)\n  (gen1 f a b)\n  (gen2 k f (u a)))"
    with pytest.raises(KernelError) as info:
        parse_signature(text)
    assert "line 4, column 3" in str(info.value)


def test_sig3_level():
    sig = load_sig("rules/interchange.sig")
    assert sig.level == TRICATEGORY and sig.is_tricategory
    assert sig.g3["cancel"].invertible


def test_trivial_table_passes():
    report = validate_tables(trivial_bicategory())
    assert report.ok


def test_free_signature_has_no_tables():
    with pytest.raises(KernelError) as info:
        validate_tables(parse_signature(ADJ))
    assert info.value.code == E_TABLE_INCOMPLETE


def test_cocycle_table_passes_every_axiom():
    report = validate_tables(cocycle_bicategory())
    assert set(report.counts) >= {"pentagon", "triangle"}


def test_perturbed_unitor_flags_triangle():
    with pytest.raises(KernelError) as info:
        validate_tables(cocycle_bicategory(perturb_left_unitor=True))
    assert info.value.code == E_AXIOM_VIOLATION
    assert info.value.detail["axiom"] == "triangle"


def test_tricategory_tables():
    assert validate_tables(strict_tricategory()).ok
    with pytest.raises(KernelError) as info:
        validate_tables(strict_tricategory(swap_hcomp=True))
    assert info.value.code == E_AXIOM_VIOLATION


@pytest.mark.parametrize("path", sorted(p.relative_to(FIXTURES).as_posix() for p in FIXTURES.rglob("*.sig")))
def test_fixture_signatures_roundtrip(path):
    sig = load_sig(path)
    again = parse_signature(serialize(sig))
    assert again.same_as(sig)


@pytest.mark.parametrize(
    "name, broken",
    [("cocycle", False), ("cocycle_broken", True), ("strict_tricategory", False), ("strict_tricategory_broken", True)],
)
def test_table_fixtures(name, broken):
    sig = load_sig(f"tables/{name}.sig")
    if broken:
        with pytest.raises(KernelError):
            validate_tables(sig)
    else:
        assert validate_tables(sig).ok


@pytest.mark.parametrize("corpus", ["adjunction", "biadjunction"])
def test_bundled_corpus_matches_fixtures(corpus):
    bundled = Path(str(resources.files("strictify") / "corpus" / corpus))
    names = sorted(p.name for p in (FIXTURES / corpus).iterdir())
    assert sorted(p.name for p in bundled.iterdir()) == names
    match, mismatch, errors = filecmp.cmpfiles(FIXTURES / corpus, bundled, names, shallow=False)
    assert not mismatch and not errors
