from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from strictify.diagram import (
    LEFT,
    RIGHT,
    Diagram,
    Disc,
    FlatPath,
    canonical,
    canonical_discs,
    disc_at,
    interchange_discs,
    orbit,
)
from strictify.errors import E_BUDGET, E_ILL_TYPED, E_INDEX, E_OVERLAP, KernelError
from strictify.oracle import disjoint_discs, random_pattern


def seq_key(discs):
    return tuple(d.key() for d in discs)


def test_flat_path_printing():
    assert str(FlatPath("a", "b", ("f", "g"))) == "[f,g]"
    assert str(FlatPath("a", "a", ())) == "[]@a"


def test_disc_at_checks_the_window():
    d = disc_at(("f", "g", "h"), 1, "k", ("g",), ("g", "g"))
    assert d.output == ("f", "g", "g", "h")
    with pytest.raises(KernelError) as info:
        disc_at(("f", "g"), 0, "k", ("g",), ())
    assert info.value.code == E_ILL_TYPED


def test_diagram_rejects_broken_chain():
    path = FlatPath("a", "a", ("p",))
    with pytest.raises(KernelError) as info:
        Diagram(path, path, (Disc((), "s", (), ("q",), ("p",)),))
    assert info.value.code == E_ILL_TYPED


def test_two_disjoint_discs_swap_and_return():
    d = disjoint_discs(2)
    once = interchange_discs(d.discs, 0)
    assert once != d.discs
    assert interchange_discs(once, 0) == d.discs


def test_swap_errors():
    d = disjoint_discs(2)
    with pytest.raises(KernelError) as info:
        interchange_discs(d.discs, 1)
    assert info.value.code == E_INDEX
    with pytest.raises(KernelError) as info:
        interchange_discs((), 0)
    assert info.value.code == E_INDEX
    stacked = (Disc((), "s", (), ("p",), ("q",)), Disc((), "t", (), ("q",), ("p",)))
    with pytest.raises(KernelError) as info:
        interchange_discs(stacked, 0)
    assert info.value.code == E_OVERLAP


def test_scalar_discs_can_pass_on_either_side():
    cap = Disc((), "cap", (), ("f", "g"), ())
    cup = Disc((), "cup", (), (), ("f", "g"))
    left = interchange_discs((cap, cup), 0, LEFT)
    right = interchange_discs((cap, cup), 0, RIGHT)
    assert left != right
    assert {left[0].gen, right[0].gen} == {"cup"}


def test_orbit_budget():
    d = disjoint_discs(5)
    with pytest.raises(KernelError) as info:
        orbit(d.discs, limit=10)
    assert info.value.code == E_BUDGET


@pytest.mark.parametrize("k", range(1, 6))
def test_disjoint_orbit_is_factorial(k):
    assert len(orbit(disjoint_discs(k).discs)) == len(list(itertools.permutations(range(k))))


@given(seeds, st.integers(2, 5), st.integers(1, 4))
def test_canonical_is_orbit_minimum(seed, discs, strands):
    pattern = random_pattern(random.Random(seed), discs, strands)
    d = pattern.diagram()
    members = orbit(d.discs)
    assert canonical_discs(d.discs) == min(members, key=seq_key)


@given(seeds, st.integers(2, 5), st.integers(1, 4))
def test_canonical_is_constant_on_orbits(seed, discs, strands):
    d = random_pattern(random.Random(seed), discs, strands).diagram()
    c = canonical(d)
    assert canonical(c) == c
    for member in orbit(d.discs):
        assert canonical_discs(member) == c.discs


def test_tensor_puts_left_discs_first():
    left = Diagram(FlatPath("a", "a", ("p",)), FlatPath("a", "a", ("q",)), (Disc((), "s", (), ("p",), ("q",)),))
    right = Diagram(FlatPath("a", "a", ("q",)), FlatPath("a", "a", ("p",)), (Disc((), "t", (), ("q",), ("p",)),))
    both = left.tensor(right)
    assert [d.gen for d in both.discs] == ["s", "t"]
    assert both.src.gens == ("p", "q") and both.tgt.gens == ("q", "p")
    assert left.then(right).tgt == left.src
    with pytest.raises(KernelError):
        left.then(left)
