"""Turning disc diagrams back into explicit 2-terms."""

from __future__ import annotations

from .bicat_terms import canonical_coherence, left_bracketed, type2, vcomp
from .diagram import Diagram, Disc
from .signature import Signature
from .terms import Gen1, Gen2, HComp2, Id2, Term1, Term2, parse_term2


def gen_term(label: str) -> Term2:
    if label.startswith("("):
        return parse_term2(label)
    return Gen2(label)


def _path_term(gens: tuple[str, ...]) -> Term1 | None:
    if not gens:
        return None
    out: Term1 = Gen1(gens[0])
    for g in gens[1:]:
        from .terms import Comp1

        out = Comp1(out, Gen1(g))
    return out


def disc_term(sig: Signature, d: Disc) -> Term2:
    """The disc's generator whiskered by unit cells on its flat contexts."""
    out = gen_term(d.gen)
    left, right = _path_term(d.left), _path_term(d.right)
    if left is not None:
        out = HComp2(Id2(left), out)
    if right is not None:
        out = HComp2(out, Id2(right))
    return out


def glue(sig: Signature, blocks: list[Term2], src: Term1, tgt: Term1) -> Term2:
    """Vertically compose ``blocks`` (first applied first), inserting canonical
    coherence cells wherever adjacent 1-boundaries differ in bracketing."""
    acc: Term2 = Id2(src)
    cur = src
    for b in blocks:
        bs, bt = type2(sig, b)
        if bs != cur:
            acc = vcomp(canonical_coherence(sig, cur, bs), acc)
        acc = vcomp(b, acc)
        cur = bt
    if cur != tgt:
        acc = vcomp(canonical_coherence(sig, cur, tgt), acc)
    return acc


def diagram_term(sig: Signature, d: Diagram, src: Term1 | None = None, tgt: Term1 | None = None) -> Term2:
    """A 2-term whose normal form is ``d``."""
    src = left_bracketed(sig, d.src) if src is None else src
    tgt = left_bracketed(sig, d.tgt) if tgt is None else tgt
    return glue(sig, [disc_term(sig, x) for x in d.discs], src, tgt)
