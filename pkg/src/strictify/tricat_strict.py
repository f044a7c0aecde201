"""The strictification pipeline for 2- and 3-terms over a tricategory.

Passes, in order:

* ``ftilde_pass`` replaces ``i_A`` by the unit ``1_{1_A}`` and units on
  composite 1-terms by tensor composites of units (witness ``Xi``);
* ``barf_pass`` pushes every tensor below every vertical composite, so the
  result is a vertical composite of cells that whisker one basic cell by
  units (witness ``Theta``);
* ``cubical_cells`` drops unit cells and forgets vertical bracketing;
* ``c2_block_partition`` groups coherent cells between the genuine ones;
* ``gray_nf2`` collapses the coherent blocks and flattens whisker contexts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicat_strict import Verdict, gen_id
from .bicat_terms import flatten1, invert2, type2
from .diagram import Diagram, Disc, FlatPath
from .errors import E_ILL_TYPED, KernelError
from .signature import Signature
from .terms import (
    Cell2,
    Cell3,
    Comp1,
    Comp3,
    Con2,
    Con3,
    Gen1,
    Gen2,
    Gen3,
    HComp2,
    Id2,
    Id3,
    Inv3,
    Star3,
    Tens3,
    Term1,
    Term2,
    Term3,
    Unit1,
    VComp2,
)
from .tricat_terms import COHERENT_CORE, is_coherence3, type3
from .witness import (
    Witness3,
    pad,
    reassociate,
    unit_to_pair,
    w_chain,
    w_comp,
    w_con,
    w_id,
    w_inv,
    w_star,
    w_tens,
)

# Cell shapes ---------------------------------------------------------------


def is_unit_leaf(t: Term2) -> bool:
    return isinstance(t, Id2) and isinstance(t.over, (Gen1, Unit1))


def is_basic_leaf(t: Term2) -> bool:
    """A cell that survives the first pass untouched."""
    if is_unit_leaf(t):
        return True
    if isinstance(t, (Gen2, Cell2)):
        return True
    return isinstance(t, Con2) and t.head != "i"


def leaves(t: Term2) -> list[Term2]:
    if isinstance(t, HComp2):
        return leaves(t.left) + leaves(t.right)
    return [t]


def is_tbar_basic(t: Term2) -> bool:
    """A tensor tree of basic leaves with at most one non-unit leaf."""
    if isinstance(t, VComp2):
        return False
    if isinstance(t, HComp2):
        ls = leaves(t)
        return all(is_basic_leaf(x) for x in ls) and sum(not is_unit_leaf(x) for x in ls) <= 1
    return is_basic_leaf(t)


def is_unit_cell(t: Term2) -> bool:
    return all(is_unit_leaf(x) for x in leaves(t))


def core(t: Term2) -> Term2 | None:
    """The single non-unit leaf of a basic cell, if any."""
    for x in leaves(t):
        if not is_unit_leaf(x):
            return x
    return None


def is_coherent_cell(t: Term2) -> bool:
    c = core(t)
    return c is None or (isinstance(c, Con2) and c.head in COHERENT_CORE)


def star_leaves(t: Term2) -> list[Term2]:
    """Cells of a vertical composite in application order."""
    if isinstance(t, VComp2):
        return star_leaves(t.right) + star_leaves(t.left)
    return [t]


def map_star_leaves(t: Term2, fn) -> Term2:
    if isinstance(t, VComp2):
        return VComp2(map_star_leaves(t.left, fn), map_star_leaves(t.right, fn))
    return fn(t)


# The first pass ---------------------------------------------------------------


def unit_tree(over: Term1) -> Term2:
    """The tensor composite of basic units replacing ``1_over``."""
    if isinstance(over, Comp1):
        return HComp2(unit_tree(over.left), unit_tree(over.right))
    return Id2(over)


def unit_witness(sig: Signature, over: Term1) -> Witness3:
    """``1_over -> unit_tree(over)``."""
    if not isinstance(over, Comp1):
        return w_id(Id2(over))
    return w_comp(
        w_tens(unit_witness(sig, over.left), unit_witness(sig, over.right)),
        w_con(sig, "phiu", over.left, over.right),
    )


def ftilde_pass(sig: Signature, t: Term2) -> tuple[Term2, Witness3]:
    """Remove ``i_A`` and units on composite 1-terms; witness ``t -> result``."""
    type2(sig, t)
    return _ftilde(sig, t)


def _ftilde(sig: Signature, t: Term2) -> tuple[Term2, Witness3]:
    if isinstance(t, Con2) and t.head == "i":
        (obj,) = t.args
        return Id2(Unit1(obj)), w_inv(w_con(sig, "phi", obj))
    if isinstance(t, Id2):
        w = unit_witness(sig, t.over)
        return w.tgt, w
    if isinstance(t, HComp2):
        (x, wx), (y, wy) = _ftilde(sig, t.left), _ftilde(sig, t.right)
        return HComp2(x, y), w_tens(wx, wy)
    if isinstance(t, VComp2):
        (x, wx), (y, wy) = _ftilde(sig, t.left), _ftilde(sig, t.right)
        return VComp2(x, y), w_star(wx, wy)
    return t, w_id(t)


# The second pass --------------------------------------------------------------


def _lloc_tilde(sig: Signature, x: Term2) -> Witness3:
    """``unit_tree(t x) * x -> x``."""
    _, t = type2(sig, x)
    return w_comp(w_con(sig, "lloc", x), w_star(w_inv(unit_witness(sig, t)), w_id(x)))


def _rloc_tilde(sig: Signature, x: Term2) -> Witness3:
    """``x * unit_tree(s x) -> x``."""
    s, _ = type2(sig, x)
    return w_comp(w_con(sig, "rloc", x), w_star(w_id(x), w_inv(unit_witness(sig, s))))


def _distribute_left(sig: Signature, unit: Term2, b: Term2) -> Witness3:
    """``unit (x) b -> b`` with ``unit (x) -`` pushed onto every cell of ``b``."""
    if not isinstance(b, VComp2):
        return w_id(HComp2(unit, b))
    b1, b2 = b.left, b.right
    return w_chain(
        w_tens(w_inv(_lloc_tilde(sig, unit)), w_id(b)),
        w_inv(w_con(sig, "phix", unit, b1, unit, b2)),
        w_star(_distribute_left(sig, unit, b1), _distribute_left(sig, unit, b2)),
    )


def _distribute_right(sig: Signature, a: Term2, unit: Term2) -> Witness3:
    if not isinstance(a, VComp2):
        return w_id(HComp2(a, unit))
    a1, a2 = a.left, a.right
    return w_chain(
        w_tens(w_id(a), w_inv(_rloc_tilde(sig, unit))),
        w_inv(w_con(sig, "phix", a1, unit, a2, unit)),
        w_star(_distribute_right(sig, a1, unit), _distribute_right(sig, a2, unit)),
    )


def tensor_bar(sig: Signature, a: Term2, b: Term2) -> tuple[Term2, Witness3]:
    """Tensor of two pass-two normal forms, with its witness ``a (x) b -> result``."""
    whole = HComp2(a, b)
    if is_tbar_basic(whole):
        return whole, w_id(whole)
    _, ta = type2(sig, a)
    sb, _ = type2(sig, b)
    unit_t, unit_s = unit_tree(ta), unit_tree(sb)
    upper = map_star_leaves(b, lambda x: HComp2(unit_t, x))
    lower = map_star_leaves(a, lambda x: HComp2(x, unit_s))
    theta = w_chain(
        w_tens(w_inv(_lloc_tilde(sig, a)), w_inv(_rloc_tilde(sig, b))),
        w_inv(w_con(sig, "phix", unit_t, b, a, unit_s)),
        w_star(_distribute_left(sig, unit_t, b), _distribute_right(sig, a, unit_s)),
    )
    result = VComp2(upper, lower)
    assert theta.tgt == result
    return result, theta


def barf_pass(sig: Signature, t: Term2) -> tuple[Term2, Witness3]:
    """Vertical composite of single-cell whiskerings; witness ``t -> result``."""
    if is_basic_leaf(t):
        return t, w_id(t)
    if isinstance(t, VComp2):
        (x, wx), (y, wy) = barf_pass(sig, t.left), barf_pass(sig, t.right)
        return VComp2(x, y), w_star(wx, wy)
    if isinstance(t, HComp2):
        (x, wx), (y, wy) = barf_pass(sig, t.left), barf_pass(sig, t.right)
        out, theta = tensor_bar(sig, x, y)
        return out, w_comp(theta, w_tens(wx, wy))
    raise KernelError(E_ILL_TYPED, f"{t} is not in first-pass normal form")


# Cubical quotient and block partitions ----------------------------------------


def cubical_cells(t: Term2) -> tuple[Term2, ...]:
    """Non-unit cells of a pass-two normal form, in application order."""
    return tuple(c for c in star_leaves(t) if not is_unit_cell(c))


@dataclass(frozen=True)
class BlockPartition:
    """Alternating coherence blocks (even indices) and genuine cells (odd indices)."""

    entries: tuple

    def __post_init__(self) -> None:
        if len(self.entries) % 2 != 1:
            raise KernelError(E_ILL_TYPED, "a block partition has odd length")
        for i, e in enumerate(self.entries):
            if i % 2 == 0:
                if not isinstance(e, tuple) or not all(is_coherent_cell(c) for c in e):
                    raise KernelError(E_ILL_TYPED, f"entry {i} must be a coherence block")
            elif isinstance(e, tuple) or is_coherent_cell(e):
                raise KernelError(E_ILL_TYPED, f"entry {i} must be a genuine cell")

    @property
    def genuine(self) -> tuple[Term2, ...]:
        return self.entries[1::2]

    def reconstruct(self) -> tuple[Term2, ...]:
        out: list[Term2] = []
        for i, e in enumerate(self.entries):
            out.extend(e if i % 2 == 0 else (e,))
        return tuple(out)

    def to_json(self) -> list:
        return [[str(c) for c in e] if i % 2 == 0 else str(e) for i, e in enumerate(self.entries)]


def c2_block_partition(cells) -> BlockPartition:
    """Unique alternating partition of a cell sequence (or a pass-two normal form)."""
    if not isinstance(cells, (tuple, list)):
        cells = cubical_cells(cells)
    entries: list = []
    block: list[Term2] = []
    for c in cells:
        if is_unit_cell(c):
            continue
        if is_coherent_cell(c):
            block.append(c)
        else:
            entries.append(tuple(block))
            entries.append(c)
            block = []
    entries.append(tuple(block))
    return BlockPartition(tuple(entries))


def standard_lift(cells) -> Term2:
    """Left-bracketed vertical composite in written order (last applied first)."""
    written = list(reversed(list(cells)))
    out = written[0]
    for c in written[1:]:
        out = VComp2(out, c)
    return out


@dataclass(frozen=True)
class FreeUnit1:
    """The unit of the free tricategory at an object."""

    obj: str

    def __str__(self) -> str:
        return f"(uF {self.obj})"


def standard_F_lift(t):
    """Replace basic units ``1_a`` by free units; everything else is kept."""
    if isinstance(t, Unit1):
        return FreeUnit1(t.obj)
    if isinstance(t, Comp1):
        return Comp1(standard_F_lift(t.left), standard_F_lift(t.right))
    if isinstance(t, Gen1):
        return t
    if isinstance(t, Id2):
        return Id2(standard_F_lift(t.over))
    if isinstance(t, Con2):
        return Con2(t.head, tuple(a if isinstance(a, str) else standard_F_lift(a) for a in t.args))
    if isinstance(t, Cell2):
        return Cell2(t.name, standard_F_lift(t.src), standard_F_lift(t.tgt))
    if isinstance(t, (HComp2, VComp2)):
        return type(t)(standard_F_lift(t.left), standard_F_lift(t.right))
    return t


# Coherence relators -----------------------------------------------------------


def whisker_triple(sig: Signature, cell: Term2) -> tuple[tuple[str, ...], Term2 | None, tuple[str, ...]]:
    """(left context, core, right context) with flattened contexts."""
    ls = leaves(cell)
    idx = next((i for i, x in enumerate(ls) if not is_unit_leaf(x)), None)
    if idx is None:
        return tuple(g for x in ls for g in flatten1(sig, x.over).gens), None, ()
    left = tuple(g for x in ls[:idx] for g in flatten1(sig, x.over).gens)
    right = tuple(g for x in ls[idx + 1 :] for g in flatten1(sig, x.over).gens)
    return left, ls[idx], right


@dataclass(frozen=True)
class Conjugation:
    """A witness ``cell -> outer * (middle * inner)`` with coherence ``outer``, ``inner``."""

    witness: Witness3
    outer: Term2
    middle: Term2
    inner: Term2


def _trivial(sig: Signature, x: Term2) -> Conjugation:
    s, t = type2(sig, x)
    return Conjugation(pad(sig, x), Id2(t), x, Id2(s))


def _then(sig: Signature, first: Conjugation, second: Conjugation) -> Conjugation:
    """Continue conjugating the middle of ``first`` by ``second``."""
    g1, h1 = first.outer, first.inner
    g2, m, h2 = second.outer, second.middle, second.inner
    w = w_chain(
        first.witness,
        w_star(w_id(g1), w_star(second.witness, w_id(h1))),
        reassociate(sig, g1, g2, m, h2, h1),
    )
    return Conjugation(w, VComp2(g1, g2), m, VComp2(h2, h1))


def _in_left(sig: Signature, conj: Conjugation, q: Term2) -> Conjugation:
    """Lift a conjugation of ``p`` to one of ``p (x) q``."""
    g, m, h = conj.outer, conj.middle, conj.inner
    sq, tq = type2(sig, q)
    w = w_chain(
        w_tens(conj.witness, pad(sig, q)),
        w_inv(w_con(sig, "phix", g, Id2(tq), VComp2(m, h), VComp2(q, Id2(sq)))),
        w_star(w_id(HComp2(g, Id2(tq))), w_inv(w_con(sig, "phix", m, q, h, Id2(sq)))),
    )
    return Conjugation(w, HComp2(g, Id2(tq)), HComp2(m, q), HComp2(h, Id2(sq)))


def _in_right(sig: Signature, p: Term2, conj: Conjugation) -> Conjugation:
    g, m, h = conj.outer, conj.middle, conj.inner
    sp, tp = type2(sig, p)
    w = w_chain(
        w_tens(pad(sig, p), conj.witness),
        w_inv(w_con(sig, "phix", Id2(tp), g, VComp2(p, Id2(sp)), VComp2(m, h))),
        w_star(w_id(HComp2(Id2(tp), g)), w_inv(w_con(sig, "phix", p, m, Id2(sp), h))),
    )
    return Conjugation(w, HComp2(Id2(tp), g), HComp2(p, m), HComp2(Id2(sp), h))


def _isolate(sig: Signature, x: Term2, unit: Witness3, adj: Term2, fwd: Term2, nat: Witness3) -> Conjugation:
    """From ``nat: fwd * x -> y * back`` build ``x -> adj * (y * back)``.

    ``unit`` is an invertible cell ``1 -> adj * fwd`` on the target of ``x``.
    """
    y, back = nat.tgt.left, nat.tgt.right
    w = w_chain(
        w_inv(w_con(sig, "lloc", x)),
        w_star(unit, w_id(x)),
        w_con(sig, "aloc", adj, fwd, x),
        w_star(w_id(adj), nat),
    )
    return Conjugation(w, adj, y, back)


def _reassoc_move(sig: Signature, x: Term2, y: Term2, z: Term2) -> Conjugation:
    """``x (x) (y (x) z) -> aadj * (((x (x) y) (x) z) * ...)``: rotate to the left."""
    (_, f2), (_, g2), (_, h2) = type2(sig, x), type2(sig, y), type2(sig, z)
    cell = HComp2(x, HComp2(y, z))
    fwd = Con2("aadj", (f2, g2, h2))
    adj = Con2("a", (f2, g2, h2))
    nat = w_con(sig, "aadj2", x, y, z)
    unit = w_inv(w_con(sig, "epsa", f2, g2, h2))
    return _isolate(sig, cell, unit, adj, fwd, nat)


def _drop_unit_right(sig: Signature, x: Term2, obj: str) -> Conjugation:
    _, f2 = type2(sig, x)
    to_i = w_tens(w_id(x), w_con(sig, "phi", obj))
    inner = _isolate(sig, to_i.tgt, w_con(sig, "etar", f2), Con2("radj", (f2,)), Con2("r", (f2,)), w_con(sig, "r2", x))
    return Conjugation(w_comp(inner.witness, to_i), inner.outer, inner.middle, inner.inner)


def _drop_unit_left(sig: Signature, x: Term2, obj: str) -> Conjugation:
    _, f2 = type2(sig, x)
    to_i = w_tens(w_con(sig, "phi", obj), w_id(x))
    inner = _isolate(sig, to_i.tgt, w_con(sig, "etal", f2), Con2("ladj", (f2,)), Con2("l", (f2,)), w_con(sig, "l2", x))
    return Conjugation(w_comp(inner.witness, to_i), inner.outer, inner.middle, inner.inner)


def _is_object_unit(t: Term2) -> bool:
    return isinstance(t, Id2) and isinstance(t.over, Unit1)


def _normalize(sig: Signature, cell: Term2) -> Conjugation:
    """Conjugate a whiskered cell to its left-bracketed, object-unit-free form."""
    if not isinstance(cell, HComp2):
        return _trivial(sig, cell)
    p, q = cell.left, cell.right
    conj = _in_left(sig, _normalize(sig, p), q)
    conj = _then(sig, conj, _in_right(sig, conj.middle.left, _normalize(sig, q)))
    return _then(sig, conj, _join(sig, conj.middle.left, conj.middle.right))


def _join(sig: Signature, p: Term2, q: Term2) -> Conjugation:
    """Normalize ``p (x) q`` for normalized ``p`` and ``q``."""
    if _is_object_unit(q):
        return _drop_unit_right(sig, p, q.over.obj)
    if _is_object_unit(p):
        return _drop_unit_left(sig, q, p.over.obj)
    if not isinstance(q, HComp2):
        return _trivial(sig, HComp2(p, q))
    y, z = q.left, q.right
    conj = _reassoc_move(sig, p, y, z)
    inner = _in_left(sig, _join(sig, p, y), z)
    return _then(sig, conj, inner)


@dataclass(frozen=True)
class Relator:
    """``a -> (outer * b) * inner`` for coherence ``outer`` and ``inner``."""

    witness: Witness3
    outer: Term2
    inner: Term2

    def to_json(self) -> dict:
        return {"witness": self.witness.to_json(), "outer": str(self.outer), "inner": str(self.inner)}


def coherence_relator(sig: Signature, a: Term2, b: Term2) -> Relator | None:
    """The relator between two whiskered cells, or ``None`` if they are not related."""
    ta, tb = whisker_triple(sig, a), whisker_triple(sig, b)
    if ta != tb or ta[1] is None:
        return None
    if a == b:
        s, t = type2(sig, a)
        w = w_chain(
            w_inv(w_con(sig, "rloc", a)),
            w_inv(w_con(sig, "lloc", VComp2(a, Id2(s)))),
            w_inv(w_con(sig, "aloc", Id2(t), a, Id2(s))),
        )
        return Relator(w, Id2(t), Id2(s))
    na, nb = _normalize(sig, a), _normalize(sig, b)
    if na.middle != nb.middle:
        return None
    ga, m, ha = na.outer, na.middle, na.inner
    gb, hb = nb.outer, nb.inner
    igb, ihb = invert2(sig, gb), invert2(sig, hb)
    w = w_chain(
        na.witness,
        w_star(w_id(ga), w_star(pad(sig, m), w_id(ha))),
        w_star(
            w_id(ga),
            w_star(w_star(unit_to_pair(sig, gb), w_star(w_id(m), unit_to_pair(sig, ihb))), w_id(ha)),
        ),
        _regroup(sig, ga, igb, gb, m, hb, ihb, ha),
        w_star(w_id(VComp2(ga, igb)), w_star(w_inv(nb.witness), w_id(VComp2(ihb, ha)))),
        w_inv(w_con(sig, "aloc", VComp2(ga, igb), b, VComp2(ihb, ha))),
    )
    return Relator(w, VComp2(ga, igb), VComp2(ihb, ha))


def _regroup(sig, ga, igb, gb, m, hb, ihb, ha) -> Witness3:
    """``ga * (((igb*gb) * (m * (hb*ihb))) * ha) -> (ga*igb) * ((gb*(m*hb)) * (ihb*ha))``."""
    steps = [
        # ga * (x * ha) -> ga * ((igb*gb) * ((m*(hb*ihb)) * ha))
        w_star(w_id(ga), w_con(sig, "aloc", VComp2(igb, gb), VComp2(m, VComp2(hb, ihb)), ha)),
        # -> ga * (igb * (gb * ((m*(hb*ihb)) * ha)))
        w_star(w_id(ga), w_con(sig, "aloc", igb, gb, VComp2(VComp2(m, VComp2(hb, ihb)), ha))),
        # inner: (m*(hb*ihb))*ha -> m*((hb*ihb)*ha) -> m*(hb*(ihb*ha))
        w_star(
            w_id(ga),
            w_star(
                w_id(igb),
                w_star(
                    w_id(gb),
                    w_chain(
                        w_con(sig, "aloc", m, VComp2(hb, ihb), ha),
                        w_star(w_id(m), w_con(sig, "aloc", hb, ihb, ha)),
                        w_inv(w_con(sig, "aloc", m, hb, VComp2(ihb, ha))),
                    ),
                ),
            ),
        ),
        # gb * ((m*hb) * (ihb*ha)) -> (gb*(m*hb)) * (ihb*ha)
        w_star(w_id(ga), w_star(w_id(igb), w_inv(w_con(sig, "aloc", gb, VComp2(m, hb), VComp2(ihb, ha))))),
        # ga * (igb * (B * R)) -> (ga * igb) * (B * R)
        w_inv(w_con(sig, "aloc", ga, igb, VComp2(VComp2(gb, VComp2(m, hb)), VComp2(ihb, ha)))),
    ]
    return w_chain(*steps)


# Gray normal forms --------------------------------------------------------------


@dataclass(frozen=True)
class PipelineTrace:
    stages: tuple[dict, ...]
    witness: Witness3

    def to_json(self) -> list:
        return list(self.stages)


def _disc_of(sig: Signature, cell: Term2) -> Disc:
    left, c, right = whisker_triple(sig, cell)
    src, tgt = type2(sig, c)
    return Disc(left, gen_id(c), right, flatten1(sig, src).gens, flatten1(sig, tgt).gens)


def gray_nf2_trace(sig: Signature, t: Term2) -> tuple[Diagram, PipelineTrace]:
    """Gray normal form of a 2-term together with the per-pass record."""
    src, tgt = type2(sig, t)
    t1, xi = ftilde_pass(sig, t)
    t2, theta = barf_pass(sig, t1)
    cells = cubical_cells(t2)
    part = c2_block_partition(cells)
    discs = tuple(_disc_of(sig, c) for c in part.genuine)
    nf = Diagram(flatten1(sig, src), flatten1(sig, tgt), discs)
    stages = (
        {"pass": "ftilde", "term": str(t1), "witness": xi.to_json()},
        {"pass": "barf", "term": str(t2), "witness": theta.to_json()},
        {"pass": "cubical", "cells": [str(c) for c in cells]},
        {"pass": "partition", "blocks": part.to_json()},
        {"pass": "gray", "nf": nf.to_json()},
    )
    return nf, PipelineTrace(stages, w_comp(theta, xi))


def gray_nf2(sig: Signature, t: Term2) -> Diagram:
    return gray_nf2_trace(sig, t)[0]


# 3-cells in the Gray image ----------------------------------------------------


@dataclass(frozen=True)
class RuleStep:
    """One application of a 3-generator (or its inverse) between Gray diagrams."""

    name: str
    inverse: bool
    before: Diagram
    after: Diagram

    def shifted(self, fn) -> "RuleStep":
        return RuleStep(self.name, self.inverse, fn(self.before), fn(self.after))

    def reversed(self) -> "RuleStep":
        return RuleStep(self.name, not self.inverse, self.after, self.before)

    def to_json(self) -> dict:
        return {
            "kind": "rule",
            "name": self.name,
            "inverse": self.inverse,
            "from": self.before.to_json(),
            "to": self.after.to_json(),
        }


@dataclass(frozen=True)
class PermStep:
    """A coherence move between Gray diagrams (a composite of interchangers)."""

    before: Diagram
    after: Diagram

    def shifted(self, fn) -> "PermStep":
        return PermStep(fn(self.before), fn(self.after))

    def reversed(self) -> "PermStep":
        return PermStep(self.after, self.before)

    def to_json(self) -> dict:
        return {"kind": "perm", "from": self.before.to_json(), "to": self.after.to_json()}


@dataclass(frozen=True)
class GrayNF3:
    src: Diagram
    tgt: Diagram
    steps: tuple

    def to_json(self) -> dict:
        return {
            "src": self.src.to_json(),
            "tgt": self.tgt.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }

    def signed_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            if isinstance(s, RuleStep):
                out[s.name] = out.get(s.name, 0) + (-1 if s.inverse else 1)
        return {k: v for k, v in sorted(out.items()) if v}


def _steps3(sig: Signature, t: Term3) -> list:
    if isinstance(t, Id3):
        return []
    if isinstance(t, (Gen3, Cell3)):
        s, g = type3(sig, t)
        name = t.name if isinstance(t, Gen3) else str(t)
        return [RuleStep(name, False, gray_nf2(sig, s), gray_nf2(sig, g))]
    if isinstance(t, Con3):
        s, g = type3(sig, t)
        a, b = gray_nf2(sig, s), gray_nf2(sig, g)
        return [] if a == b else [PermStep(a, b)]
    if isinstance(t, Inv3):
        type3(sig, t)
        return [s.reversed() for s in reversed(_steps3(sig, t.body))]
    if isinstance(t, Comp3):
        type3(sig, t)
        return _steps3(sig, t.right) + _steps3(sig, t.left)
    if isinstance(t, Star3):
        (a, a2), (b, b2) = type3(sig, t.left), type3(sig, t.right)
        above = gray_nf2(sig, a)
        below_after = gray_nf2(sig, b2)
        first = [s.shifted(lambda d: d.then(above)) for s in _steps3(sig, t.right)]
        second = [s.shifted(lambda d: below_after.then(d)) for s in _steps3(sig, t.left)]
        return first + second
    if isinstance(t, Tens3):
        (a, a2), (b, b2) = type3(sig, t.left), type3(sig, t.right)
        right_before = gray_nf2(sig, b)
        left_after = gray_nf2(sig, a2)
        first = [s.shifted(lambda d: d.tensor(right_before)) for s in _steps3(sig, t.left)]
        second = [s.shifted(lambda d: left_after.tensor(d)) for s in _steps3(sig, t.right)]
        return first + second
    raise KernelError(E_ILL_TYPED, f"not a 3-term: {t!r}")


def normalize_steps(steps) -> tuple:
    """Merge coherence runs, drop trivial ones and cancel a rule against its inverse."""
    out: list = []
    for s in steps:
        if isinstance(s, PermStep):
            if out and isinstance(out[-1], PermStep):
                prev = out.pop()
                s = PermStep(prev.before, s.after)
            if s.before == s.after:
                continue
            out.append(s)
            continue
        if out and isinstance(out[-1], RuleStep) and out[-1].reversed() == s:
            out.pop()
            continue
        out.append(s)
    if any(isinstance(a, PermStep) and isinstance(b, PermStep) for a, b in zip(out, out[1:])):
        return normalize_steps(out)
    return tuple(out)


def _window(step: RuleStep) -> tuple[int, int, int]:
    """``before.discs[start:end]`` is replaced by ``after.discs[start:new_end]``."""
    b, a = step.before.discs, step.after.discs
    start = 0
    while start < min(len(b), len(a)) and b[start] == a[start]:
        start += 1
    tail = 0
    while tail < min(len(b), len(a)) - start and b[-1 - tail] == a[-1 - tail]:
        tail += 1
    return start, len(b) - tail, len(a) - tail


def _splice(d: Diagram, start: int, end: int, new: tuple[Disc, ...], tgt: FlatPath) -> Diagram:
    return Diagram(d.src, tgt, d.discs[:start] + new + d.discs[end:])


def _commute(first: RuleStep, second: RuleStep) -> tuple[RuleStep, RuleStep] | None:
    """Swap two rule steps acting on disjoint disc windows, or ``None``."""
    p1, e1, n1 = _window(first)
    p2, e2, n2 = _window(second)
    if not (e2 <= p1 or p2 >= n1):
        return None
    new1 = first.after.discs[p1:n1]
    new2 = second.after.discs[p2:n2]
    d0 = first.before
    try:
        if e2 <= p1:
            mid = _splice(d0, p2, e2, new2, d0.tgt)
            shift = (n2 - p2) - (e2 - p2)
            end = _splice(mid, p1 + shift, e1 + shift, new1, second.after.tgt)
        else:
            back = p2 - (n1 - e1)
            stop = e2 - (n1 - e1)
            mid = _splice(d0, back, stop, new2, d0.tgt)
            end = _splice(mid, p1, e1, new1, second.after.tgt)
    except KernelError:
        return None
    if end != second.after:
        return None
    return RuleStep(second.name, second.inverse, d0, mid), RuleStep(first.name, first.inverse, mid, end)


def _commute_sort(steps: tuple) -> tuple:
    """Order independent rule steps by the position they act on (earliest disc first)."""
    out = list(steps)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            a, b = out[i], out[i + 1]
            if not (isinstance(a, RuleStep) and isinstance(b, RuleStep)):
                continue
            swapped = _commute(a, b)
            if swapped is None:
                continue
            if (_window(swapped[0])[0], swapped[0].name) < (_window(a)[0], a.name):
                out[i : i + 2] = swapped
                changed = True
    return normalize_steps(out)


def gray_nf3(sig: Signature, t: Term3) -> GrayNF3:
    s, g = type3(sig, t)
    return GrayNF3(gray_nf2(sig, s), gray_nf2(sig, g), _commute_sort(normalize_steps(_steps3(sig, t))))


def check_eq3(sig: Signature, s: Term3, t: Term3) -> Verdict:
    """Decide equality of 3-terms through their Gray normal forms."""
    a, b = gray_nf3(sig, s), gray_nf3(sig, t)
    if (a.src, a.tgt) != (b.src, b.tgt):
        return Verdict.NOT_EQUAL
    if a.steps == b.steps:
        return Verdict.EQUAL
    if is_coherence3(s) and is_coherence3(t):
        # both are composites of interchangers between the same diagrams
        return Verdict.EQUAL
    if sig.rels3:
        return Verdict.UNKNOWN
    if a.signed_counts() != b.signed_counts():
        return Verdict.NOT_EQUAL
    return Verdict.UNKNOWN
