"""Explicit coherence 3-terms with their boundaries, and builders for them.

Every builder returns a ``Witness3`` whose ``src``/``tgt`` are exactly the
boundaries ``type3`` computes for its term; ``check`` re-derives them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicat_terms import invert2, type2
from .errors import E_ILL_TYPED, KernelError
from .signature import Signature
from .terms import Comp3, Con2, Con3, HComp2, Id2, Id3, Inv3, Star3, Tens3, Term2, Term3, VComp2
from .tricat_terms import constraint3_type, is_coherence3, type3


@dataclass(frozen=True)
class Witness3:
    term: Term3
    src: Term2
    tgt: Term2

    def check(self, sig: Signature) -> bool:
        """Typecheck the term and confirm it is built from coherence cells."""
        return type3(sig, self.term) == (self.src, self.tgt) and is_coherence3(self.term)

    @property
    def is_identity(self) -> bool:
        return isinstance(self.term, Id3)

    def to_json(self) -> dict:
        return {"term": str(self.term), "src": str(self.src), "tgt": str(self.tgt)}


def w_id(x: Term2) -> Witness3:
    return Witness3(Id3(x), x, x)


def w_con(sig: Signature, head: str, *args) -> Witness3:
    src, tgt = constraint3_type(sig, head, tuple(args))
    return Witness3(Con3(head, tuple(args)), src, tgt)


def w_inv(w: Witness3) -> Witness3:
    if w.is_identity:
        return w
    body = w.term.body if isinstance(w.term, Inv3) else Inv3(w.term)
    return Witness3(body, w.tgt, w.src)


def w_comp(second: Witness3, first: Witness3) -> Witness3:
    """``second`` after ``first``."""
    if first.tgt != second.src:
        raise KernelError(E_ILL_TYPED, f"witnesses do not compose: {first.tgt} vs {second.src}")
    if first.is_identity:
        return second
    if second.is_identity:
        return first
    return Witness3(Comp3(second.term, first.term), first.src, second.tgt)


def w_chain(*steps: Witness3) -> Witness3:
    """Compose in application order."""
    out = steps[0]
    for s in steps[1:]:
        out = w_comp(s, out)
    return out


def w_star(upper: Witness3, lower: Witness3) -> Witness3:
    """Vertical whiskering: ``upper`` sits on the target side."""
    src, tgt = VComp2(upper.src, lower.src), VComp2(upper.tgt, lower.tgt)
    if upper.is_identity and lower.is_identity:
        return w_id(src)
    return Witness3(Star3(upper.term, lower.term), src, tgt)


def w_tens(left: Witness3, right: Witness3) -> Witness3:
    src, tgt = HComp2(left.src, right.src), HComp2(left.tgt, right.tgt)
    if left.is_identity and right.is_identity:
        return w_id(src)
    return Witness3(Tens3(left.term, right.term), src, tgt)


# Derived coherence moves -----------------------------------------------------


def pad(sig: Signature, x: Term2) -> Witness3:
    """``x -> 1_t * (x * 1_s)``."""
    s, t = type2(sig, x)
    return w_chain(
        w_inv(w_con(sig, "lloc", x)),
        w_star(w_id(Id2(t)), w_inv(w_con(sig, "rloc", x))),
    )


def unpad(sig: Signature, x: Term2) -> Witness3:
    return w_inv(pad(sig, x))


def reassociate(sig: Signature, g1: Term2, g2: Term2, mid: Term2, h2: Term2, h1: Term2) -> Witness3:
    """``g1 * ((g2 * (mid * h2)) * h1) -> (g1 * g2) * (mid * (h2 * h1))``."""
    return w_chain(
        w_star(w_id(g1), w_con(sig, "aloc", g2, VComp2(mid, h2), h1)),
        w_star(w_id(g1), w_star(w_id(g2), w_con(sig, "aloc", mid, h2, h1))),
        w_inv(w_con(sig, "aloc", g1, g2, VComp2(mid, VComp2(h2, h1)))),
    )


def unit_to_pair(sig: Signature, g: Term2) -> Witness3:
    """``1_{s g} -> invert2(g) * g`` for a coherence 2-term ``g``."""
    s, t = type2(sig, g)
    if isinstance(g, Id2):
        return w_inv(w_con(sig, "lloc", g))
    if isinstance(g, Con2):
        head, args = g.head, g.args
        if head in ("a", "l", "r"):
            return w_con(sig, {"a": "etaa", "l": "etal", "r": "etar"}[head], *args)
        if head in ("aadj", "ladj", "radj"):
            base = head[0]
            return w_inv(w_con(sig, {"a": "epsa", "l": "epsl", "r": "epsr"}[base], *args))
        raise KernelError(E_ILL_TYPED, f"no unit of adjunction for {head}")
    if isinstance(g, VComp2):
        outer, inner = g.left, g.right
        inv_outer, inv_inner = invert2(sig, outer), invert2(sig, inner)
        _, mid = type2(sig, inner)
        # 1 -> i_in * in -> i_in * (1 * in) -> i_in * ((i_out * out) * in) -> (i_in * i_out) * (out * in)
        return w_chain(
            unit_to_pair(sig, inner),
            w_star(w_id(inv_inner), w_inv(w_con(sig, "lloc", inner))),
            w_star(w_id(inv_inner), w_star(unit_to_pair(sig, outer), w_id(inner))),
            w_star(w_id(inv_inner), w_con(sig, "aloc", inv_outer, outer, inner)),
            w_inv(w_con(sig, "aloc", inv_inner, inv_outer, VComp2(outer, inner))),
        )
    if isinstance(g, HComp2):
        (sl, _), (sr, _) = type2(sig, g.left), type2(sig, g.right)
        return w_chain(
            w_con(sig, "phiu", sl, sr),
            w_tens(unit_to_pair(sig, g.left), unit_to_pair(sig, g.right)),
            w_inv(
                w_con(sig, "phix", invert2(sig, g.left), invert2(sig, g.right), g.left, g.right)
            ),
        )
    raise KernelError(E_ILL_TYPED, f"{g} is not a coherence 2-term")
