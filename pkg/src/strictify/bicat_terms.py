"""The formal 1-/2-term calculus: typing, flattening, coherence and evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .diagram import FlatPath
from .errors import E_ILL_TYPED, E_NOT_COHERENCE, E_NOT_PARALLEL, E_TABLE_INCOMPLETE, KernelError, ill_typed
from .signature import TRICATEGORY, Signature
from .tables import Table
from .terms import (
    HEADS2_BICAT,
    HEADS2_TRICAT,
    Cell2,
    Comp1,
    Con2,
    Gen1,
    Gen2,
    HComp2,
    Id2,
    Term1,
    Term2,
    Unit1,
    VComp2,
)

# Typing ---------------------------------------------------------------------


def type1(sig: Signature, t: Term1) -> tuple[str, str]:
    """Source and target objects of a 1-term."""
    cache = sig.cache.setdefault("type1", {})
    hit = cache.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen1):
        g = sig.g1.get(t.name)
        if g is None:
            raise ill_typed(f"unknown 1-generator {t.name!r}")
        out = (g.src, g.tgt)
    elif isinstance(t, Unit1):
        if t.obj not in sig.obj_set:
            raise ill_typed(f"unknown object {t.obj!r}")
        out = (t.obj, t.obj)
    elif isinstance(t, Comp1):
        ls, lt = type1(sig, t.left)
        rs, rt = type1(sig, t.right)
        if ls != rt:
            raise ill_typed(f"1-composite {t} does not compose", expected=rt, found=ls)
        out = (rs, lt)
    else:
        raise ill_typed(f"not a 1-term: {t!r}")
    cache[t] = out
    return out


def src_obj(sig: Signature, t: Term1) -> str:
    return type1(sig, t)[0]


def tgt_obj(sig: Signature, t: Term1) -> str:
    return type1(sig, t)[1]


def _heads(sig: Signature) -> dict[str, str]:
    return HEADS2_TRICAT if sig.level == TRICATEGORY else HEADS2_BICAT


def constraint2_type(sig: Signature, head: str, args: tuple) -> tuple[Term1, Term1]:
    """Typing rule of a constraint 2-cell head."""
    if head not in _heads(sig):
        raise ill_typed(f"constraint {head!r} is not available for a {sig.level}")
    if head == "i":
        (obj,) = args
        if obj not in sig.obj_set:
            raise ill_typed(f"unknown object {obj!r}")
        return Unit1(obj), Unit1(obj)
    for a in args:
        type1(sig, a)
    if head in ("a", "ainv", "aadj"):
        f, g, h = args
        if src_obj(sig, f) != tgt_obj(sig, g) or src_obj(sig, g) != tgt_obj(sig, h):
            raise ill_typed(f"associator indices {f}, {g}, {h} do not compose")
        fwd = (Comp1(Comp1(f, g), h), Comp1(f, Comp1(g, h)))
        return fwd if head == "a" else (fwd[1], fwd[0])
    (f,) = args
    if head in ("l", "linv", "ladj"):
        fwd = (Comp1(Unit1(tgt_obj(sig, f)), f), f)
    else:
        fwd = (Comp1(f, Unit1(src_obj(sig, f))), f)
    return fwd if head in ("l", "r") else (fwd[1], fwd[0])


def type2(sig: Signature, t: Term2) -> tuple[Term1, Term1]:
    """Source and target 1-terms of a 2-term."""
    cache = sig.cache.setdefault("type2", {})
    hit = cache.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen2):
        g = sig.g2.get(t.name)
        if g is None:
            raise ill_typed(f"unknown 2-generator {t.name!r}")
        out = (g.src, g.tgt)
    elif isinstance(t, Cell2):
        if type1(sig, t.src) != type1(sig, t.tgt):
            raise ill_typed(f"basic cell {t.name} has non-parallel boundary")
        out = (t.src, t.tgt)
    elif isinstance(t, Id2):
        type1(sig, t.over)
        out = (t.over, t.over)
    elif isinstance(t, Con2):
        out = constraint2_type(sig, t.head, t.args)
    elif isinstance(t, HComp2):
        ls, lt = type2(sig, t.left)
        rs, rt = type2(sig, t.right)
        if src_obj(sig, ls) != tgt_obj(sig, rs):
            raise ill_typed(f"horizontal composite {t} does not compose", expected=tgt_obj(sig, rs), found=src_obj(sig, ls))
        out = (Comp1(ls, rs), Comp1(lt, rt))
    elif isinstance(t, VComp2):
        ls, lt = type2(sig, t.left)
        rs, rt = type2(sig, t.right)
        if ls != rt:
            raise ill_typed(f"vertical composite {t} does not compose", expected=rt, found=ls)
        out = (rs, lt)
    else:
        raise ill_typed(f"not a 2-term: {t!r}")
    cache[t] = out
    return out


# Flattening ------------------------------------------------------------------


def flatten1(sig: Signature, t: Term1) -> FlatPath:
    """Unit-free, bracket-free generator list of a 1-term."""
    if isinstance(t, Gen1):
        s, g = type1(sig, t)
        return FlatPath(s, g, (t.name,))
    if isinstance(t, Unit1):
        type1(sig, t)
        return FlatPath(t.obj, t.obj, ())
    if isinstance(t, Comp1):
        type1(sig, t)
        return flatten1(sig, t.left).then_left(flatten1(sig, t.right))
    raise ill_typed(f"not a 1-term: {t!r}")


def left_bracketed(sig: Signature, path: FlatPath) -> Term1:
    """The left-bracketed unit-free 1-term of a flat path."""
    if not path.gens:
        return Unit1(path.src)
    out: Term1 = Gen1(path.gens[0])
    for g in path.gens[1:]:
        out = Comp1(out, Gen1(g))
    return out


# Coherence -------------------------------------------------------------------


def is_coherence2(t: Term2) -> bool:
    if isinstance(t, (Gen2, Cell2)):
        return False
    if isinstance(t, (Id2, Con2)):
        return True
    return is_coherence2(t.left) and is_coherence2(t.right)


_INVERSE_HEAD = {
    "a": "ainv",
    "ainv": "a",
    "l": "linv",
    "linv": "l",
    "r": "rinv",
    "rinv": "r",
    "aadj": "a",
    "ladj": "l",
    "radj": "r",
    "i": "i",
}


def _inverse_head(sig: Signature, head: str) -> str:
    if sig.level == TRICATEGORY:
        return {"a": "aadj", "l": "ladj", "r": "radj"}.get(head, _INVERSE_HEAD[head])
    return _INVERSE_HEAD[head]


def invert2(sig: Signature, t: Term2) -> Term2:
    """Formal inverse of a coherence 2-term (adjoint pseudo-inverse at level 3)."""
    if isinstance(t, Id2):
        return t
    if isinstance(t, Con2):
        return Con2(_inverse_head(sig, t.head), t.args)
    if isinstance(t, HComp2):
        return HComp2(invert2(sig, t.left), invert2(sig, t.right))
    if isinstance(t, VComp2):
        return VComp2(invert2(sig, t.right), invert2(sig, t.left))
    raise KernelError(E_NOT_COHERENCE, f"cannot invert non-coherence term {t}")


def vcomp(x: Term2, y: Term2) -> Term2:
    """``x`` after ``y``, dropping identity factors."""
    if isinstance(y, Id2):
        return x
    if isinstance(x, Id2):
        return y
    return VComp2(x, y)


def hcomp(x: Term2, y: Term2) -> Term2:
    if isinstance(x, Id2) and isinstance(y, Id2):
        return Id2(Comp1(x.over, y.over))
    return HComp2(x, y)


def normal_form_witness(sig: Signature, t: Term1) -> tuple[Term2, Term1]:
    """A coherence 2-term from ``t`` to its left-bracketed unit-free form."""
    inv = "aadj" if sig.level == TRICATEGORY else "ainv"
    if isinstance(t, (Gen1, Unit1)):
        return Id2(t), t
    wx, nx = normal_form_witness(sig, t.left)
    wy, ny = normal_form_witness(sig, t.right)
    step = hcomp(wx, wy)
    if isinstance(nx, Unit1):
        return vcomp(Con2("l", (ny,)), step), ny
    if isinstance(ny, Unit1):
        return vcomp(Con2("r", (nx,)), step), nx
    return _append_left(sig, nx, ny, step, inv)


def _append_left(sig: Signature, nx: Term1, ny: Term1, acc: Term2, inv: str) -> tuple[Term2, Term1]:
    # nx, ny are left-bracketed and unit-free; acc ends at Comp1(nx, ny).
    if isinstance(ny, Gen1):
        return acc, Comp1(nx, ny)
    rest, last = ny.left, ny.right
    acc = vcomp(Con2(inv, (nx, rest, last)), acc)
    inner, n = _append_left(sig, nx, rest, Id2(Comp1(nx, rest)), inv)
    return vcomp(hcomp(inner, Id2(last)), acc), Comp1(n, last)


def canonical_coherence(sig: Signature, src: Term1, tgt: Term1) -> Term2:
    """An explicit coherence 2-term ``src -> tgt`` through the left-bracketed form."""
    if flatten1(sig, src) != flatten1(sig, tgt):
        raise KernelError(E_NOT_PARALLEL, f"{src} and {tgt} have different flattenings")
    ws, ns = normal_form_witness(sig, src)
    wt, nt = normal_form_witness(sig, tgt)
    assert ns == nt
    return vcomp(invert2(sig, wt), ws)


def check_coherence_eq(sig: Signature, s: Term2, t: Term2) -> bool:
    """Decide equality of coherence 2-terms: they are equal exactly when parallel."""
    for x in (s, t):
        if not is_coherence2(x):
            raise KernelError(E_NOT_COHERENCE, f"{x} is not a coherence term")
    return type2(sig, s) == type2(sig, t)


# Evaluation -------------------------------------------------------------------


@dataclass
class StrictEvaluator:
    """A strict homomorphism from formal terms into a tabulated bicategory."""

    table: Table
    on_objects: Callable[[str], str]
    on_gen1: Callable[[str], str]
    on_gen2: Callable[[str], str]

    def eval1(self, t: Term1) -> str:
        if isinstance(t, Gen1):
            return self.on_gen1(t.name)
        if isinstance(t, Unit1):
            return self.table.unit1(self.on_objects(t.obj))
        return self.table.comp1(self.eval1(t.left), self.eval1(t.right))

    def eval2(self, t: Term2) -> str:
        tab = self.table
        if isinstance(t, Gen2):
            return self.on_gen2(t.name)
        if isinstance(t, Cell2):
            if t.name not in tab.cells2:
                raise KernelError(E_TABLE_INCOMPLETE, f"unknown base 2-cell {t.name!r}")
            return t.name
        if isinstance(t, Id2):
            return tab.unit2(self.eval1(t.over))
        if isinstance(t, HComp2):
            return tab.hcomp(self.eval2(t.left), self.eval2(t.right))
        if isinstance(t, VComp2):
            return tab.vcomp(self.eval2(t.left), self.eval2(t.right))
        if isinstance(t, Con2):
            if t.head == "i":
                return tab.con("i", (self.on_objects(t.args[0]),))
            args = tuple(self.eval1(a) for a in t.args)
            if t.head in ("ainv", "linv", "rinv"):
                return tab.inverse2(tab.con(t.head[:-3], args))
            return tab.con(t.head, args)
        raise KernelError(E_ILL_TYPED, f"not a 2-term: {t!r}")


def _lookup(mapping: dict[str, str], cells: dict, name: str, what: str) -> str:
    if name in mapping:
        return mapping[name]
    if name in cells:
        return name
    raise KernelError(E_TABLE_INCOMPLETE, f"no table interpretation for {what} {name!r}")


def extend_to_strict_functor(
    sig: Signature,
    table: Table,
    gen1: dict[str, str],
    gen2: dict[str, str],
) -> StrictEvaluator:
    """Extend a generator assignment to the unique strict evaluator on terms.

    ``gen1``/``gen2`` send generators to table cells of matching type; the
    result agrees with them on generators and sends constraints to the
    tabulated constraints.
    """
    for g in sig.gens1:
        if g.name not in gen1:
            raise KernelError(E_ILL_TYPED, f"assignment misses 1-generator {g.name!r}")
        cell = gen1[g.name]
        if table.cells1.get(cell) != (g.src, g.tgt):
            raise KernelError(E_ILL_TYPED, f"1-generator {g.name!r} sent to ill-typed cell {cell!r}")
    ev = StrictEvaluator(table, lambda o: o, lambda n: gen1[n], lambda n: gen2[n])
    for g in sig.gens2:
        if g.name not in gen2:
            raise KernelError(E_ILL_TYPED, f"assignment misses 2-generator {g.name!r}")
        cell = gen2[g.name]
        want = (ev.eval1(g.src), ev.eval1(g.tgt))
        if table.cells2.get(cell) != want:
            raise KernelError(E_ILL_TYPED, f"2-generator {g.name!r} sent to ill-typed cell {cell!r}")
    return ev


def default_evaluator(sig: Signature) -> StrictEvaluator:
    if sig.table is None:
        raise KernelError(E_TABLE_INCOMPLETE, "signature has no tables")
    tab = sig.table
    return StrictEvaluator(
        tab,
        lambda o: o,
        lambda n: _lookup(tab.map1, tab.cells1, n, "1-generator"),
        lambda n: _lookup(tab.map2, tab.cells2, n, "2-generator"),
    )


def eval1(sig: Signature, t: Term1) -> str:
    return default_evaluator(sig).eval1(t)


def eval2(sig: Signature, t: Term2) -> str:
    type2(sig, t)
    return default_evaluator(sig).eval2(t)
