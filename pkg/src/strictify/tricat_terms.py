"""The 3-level term calculus: constraint vocabulary, typing and evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .bicat_terms import StrictEvaluator, default_evaluator, src_obj, tgt_obj, type1, type2
from .errors import (
    E_CONSTRAINT_NOT_PRESERVED,
    E_ILL_TYPED,
    E_NOT_MAGMOID,
    E_TABLE_INCOMPLETE,
    KernelError,
    ill_typed,
)
from .signature import TRICATEGORY, Signature
from .tables import Table
from .terms import (
    HEADS2_TRICAT,
    HEADS3,
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


class ConstraintKind(Enum):
    """Every constraint head of a tricategory, with its index kinds.

    Index kinds: ``O`` an object, ``1`` a 1-term, ``2`` a 2-term.
    """

    # 2-level
    UNIT_I = ("i", 2, "O")
    ASSOC = ("a", 2, "111")
    ASSOC_ADJ = ("aadj", 2, "111")
    LEFT_UNITOR = ("l", 2, "1")
    LEFT_UNITOR_ADJ = ("ladj", 2, "1")
    RIGHT_UNITOR = ("r", 2, "1")
    RIGHT_UNITOR_ADJ = ("radj", 2, "1")
    # 3-level: comparison cells of the composition functor
    UNIT_COMPARISON = ("phi", 3, "O")
    TENSOR_COMPARISON = ("phix", 3, "2222")
    TENSOR_UNIT_COMPARISON = ("phiu", 3, "11")
    # 3-level: naturality components at 2-morphisms
    ASSOC_AT_2 = ("a2", 3, "222")
    ASSOC_ADJ_AT_2 = ("aadj2", 3, "222")
    LEFT_UNITOR_AT_2 = ("l2", 3, "2")
    LEFT_UNITOR_ADJ_AT_2 = ("ladj2", 3, "2")
    RIGHT_UNITOR_AT_2 = ("r2", 3, "2")
    RIGHT_UNITOR_ADJ_AT_2 = ("radj2", 3, "2")
    # 3-level: adjoint equivalence data
    ASSOC_UNIT = ("etaa", 3, "111")
    ASSOC_COUNIT = ("epsa", 3, "111")
    LEFT_UNIT = ("etal", 3, "1")
    LEFT_COUNIT = ("epsl", 3, "1")
    RIGHT_UNIT = ("etar", 3, "1")
    RIGHT_COUNIT = ("epsr", 3, "1")
    # 3-level: modifications
    PENTAGONATOR = ("pi", 3, "1111")
    MIDDLE_UNITOR = ("mu", 3, "11")
    LEFT_TRIANGULATOR = ("lam", 3, "11")
    RIGHT_TRIANGULATOR = ("rho", 3, "11")
    # 3-level: local bicategory constraints of each hom
    LOCAL_ASSOC = ("aloc", 3, "222")
    LOCAL_LEFT_UNITOR = ("lloc", 3, "2")
    LOCAL_RIGHT_UNITOR = ("rloc", 3, "2")

    def __init__(self, head: str, level: int, kinds: str) -> None:
        self.head = head
        self.level = level
        self.kinds = kinds

    @property
    def arity(self) -> int:
        return len(self.kinds)

    @classmethod
    def of(cls, head: str) -> "ConstraintKind":
        for k in cls:
            if k.head == head:
                return k
        raise ill_typed(f"unknown constraint head {head!r}")


# Heads whose cells are built from other constraints only.
COHERENT_CORE = frozenset({"a", "aadj", "l", "ladj", "r", "radj"})


# Typing --------------------------------------------------------------------


def _require_tricat(sig: Signature) -> None:
    if sig.level != TRICATEGORY:
        raise ill_typed("3-terms need a tricategory signature")


def _a(f: Term1, g: Term1, h: Term1) -> Con2:
    return Con2("a", (f, g, h))


def _check_heads(sig: Signature, t: Term2, want: Term1, where: str) -> None:
    if t != want:
        raise ill_typed(f"{where} boundary mismatch", expected=want, found=t)


def constraint3_type(sig: Signature, head: str, args: tuple) -> tuple[Term2, Term2]:
    """Typing rule of a constraint 3-cell head."""
    _require_tricat(sig)
    if head not in HEADS3:
        raise ill_typed(f"unknown 3-constraint {head!r}")
    kinds = HEADS3[head]
    if len(args) != len(kinds):
        raise ill_typed(f"{head} takes {len(kinds)} indices", expected=len(kinds), found=len(args))
    for k, a in zip(kinds, args):
        if k == "1":
            type1(sig, a)
        elif k == "2":
            type2(sig, a)
        elif a not in sig.obj_set:
            raise ill_typed(f"unknown object {a!r}")

    if head == "phi":
        (obj,) = args
        return Id2(Unit1(obj)), Con2("i", (obj,))
    if head == "phix":
        x, y, x2, y2 = args
        src = VComp2(HComp2(x, y), HComp2(x2, y2))
        tgt = HComp2(VComp2(x, x2), VComp2(y, y2))
        type2(sig, src)
        type2(sig, tgt)
        return src, tgt
    if head == "phiu":
        f, g = args
        src = Id2(Comp1(f, g))
        type2(sig, src)
        return src, HComp2(Id2(f), Id2(g))
    if head in ("a2", "aadj2"):
        x, y, z = args
        (f, f2), (g, g2), (h, h2) = type2(sig, x), type2(sig, y), type2(sig, z)
        left = HComp2(HComp2(x, y), z)
        right = HComp2(x, HComp2(y, z))
        type2(sig, left)
        if head == "a2":
            return VComp2(_a(f2, g2, h2), left), VComp2(right, _a(f, g, h))
        return (
            VComp2(Con2("aadj", (f2, g2, h2)), right),
            VComp2(left, Con2("aadj", (f, g, h))),
        )
    if head in ("l2", "ladj2", "r2", "radj2"):
        (x,) = args
        f, f2 = type2(sig, x)
        if head.startswith("l"):
            unit = Con2("i", (tgt_obj(sig, f),))
            whiskered = HComp2(unit, x)
        else:
            unit = Con2("i", (src_obj(sig, f),))
            whiskered = HComp2(x, unit)
        base = head[0]
        if head in ("l2", "r2"):
            return VComp2(Con2(base, (f2,)), whiskered), VComp2(x, Con2(base, (f,)))
        adj = base + "adj"
        return VComp2(Con2(adj, (f2,)), x), VComp2(whiskered, Con2(adj, (f,)))
    if head in ("etaa", "epsa"):
        f, g, h = args
        fwd, back = _a(f, g, h), Con2("aadj", (f, g, h))
        src, tgt = type2(sig, fwd)
        if head == "etaa":
            return Id2(src), VComp2(back, fwd)
        return VComp2(fwd, back), Id2(tgt)
    if head in ("etal", "epsl", "etar", "epsr"):
        (f,) = args
        base = head[-1]
        fwd, back = Con2(base, (f,)), Con2(base + "adj", (f,))
        src, tgt = type2(sig, fwd)
        if head.startswith("eta"):
            return Id2(src), VComp2(back, fwd)
        return VComp2(fwd, back), Id2(tgt)
    if head == "pi":
        f, g, h, k = args
        type2(sig, _a(f, g, h))
        type2(sig, _a(g, h, k))
        src = VComp2(
            VComp2(HComp2(Id2(f), _a(g, h, k)), _a(f, Comp1(g, h), k)),
            HComp2(_a(f, g, h), Id2(k)),
        )
        tgt = VComp2(_a(f, g, Comp1(h, k)), _a(Comp1(f, g), h, k))
        type2(sig, src)
        type2(sig, tgt)
        return src, tgt
    if head in ("mu", "lam", "rho"):
        f, g = args
        type1(sig, Comp1(f, g))
        mid = Unit1(src_obj(sig, f))
        if head == "mu":
            src = VComp2(
                VComp2(HComp2(Id2(f), Con2("l", (g,))), _a(f, mid, g)),
                HComp2(Con2("radj", (f,)), Id2(g)),
            )
            return src, Id2(Comp1(f, g))
        if head == "lam":
            unit = Unit1(tgt_obj(sig, f))
            return HComp2(Con2("l", (f,)), Id2(g)), VComp2(Con2("l", (Comp1(f, g),)), _a(unit, f, g))
        unit = Unit1(src_obj(sig, g))
        return HComp2(Id2(f), Con2("radj", (g,))), VComp2(_a(f, g, unit), Con2("radj", (Comp1(f, g),)))
    if head == "aloc":
        x, y, z = args
        src = VComp2(VComp2(x, y), z)
        type2(sig, src)
        return src, VComp2(x, VComp2(y, z))
    (x,) = args
    s, t = type2(sig, x)
    if head == "lloc":
        return VComp2(Id2(t), x), x
    return VComp2(x, Id2(s)), x


def is_coherence3(t: Term3) -> bool:
    """True when ``t`` is built from constraint cells and identities only."""
    if isinstance(t, (Gen3, Cell3)):
        return False
    if isinstance(t, (Id3, Con3)):
        return True
    if isinstance(t, Inv3):
        return is_coherence3(t.body)
    return is_coherence3(t.left) and is_coherence3(t.right)


def _invertible(sig: Signature, t: Term3) -> bool:
    if isinstance(t, Gen3):
        g = sig.g3.get(t.name)
        return g is not None and g.invertible
    if isinstance(t, (Id3, Con3)):
        return True
    if isinstance(t, Cell3):
        return False
    if isinstance(t, Inv3):
        return True
    return _invertible(sig, t.left) and _invertible(sig, t.right)


def type3(sig: Signature, t: Term3) -> tuple[Term2, Term2]:
    """Source and target 2-terms of a 3-term."""
    _require_tricat(sig)
    cache = sig.cache.setdefault("type3", {})
    hit = cache.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen3):
        g = sig.g3.get(t.name)
        if g is None:
            raise ill_typed(f"unknown 3-generator {t.name!r}")
        out = (g.src, g.tgt)
    elif isinstance(t, Cell3):
        if type2(sig, t.src) != type2(sig, t.tgt):
            raise ill_typed(f"basic 3-cell {t.name} has non-parallel boundary")
        out = (t.src, t.tgt)
    elif isinstance(t, Id3):
        type2(sig, t.over)
        out = (t.over, t.over)
    elif isinstance(t, Con3):
        out = constraint3_type(sig, t.head, t.args)
    elif isinstance(t, Inv3):
        if not _invertible(sig, t.body):
            raise ill_typed(f"{t.body} is not invertible")
        s, g = type3(sig, t.body)
        out = (g, s)
    elif isinstance(t, Tens3):
        ls, lt = type3(sig, t.left)
        rs, rt = type3(sig, t.right)
        src, tgt = HComp2(ls, rs), HComp2(lt, rt)
        type2(sig, src)
        out = (src, tgt)
    elif isinstance(t, Star3):
        ls, lt = type3(sig, t.left)
        rs, rt = type3(sig, t.right)
        src, tgt = VComp2(ls, rs), VComp2(lt, rt)
        type2(sig, src)
        type2(sig, tgt)
        out = (src, tgt)
    elif isinstance(t, Comp3):
        ls, lt = type3(sig, t.left)
        rs, rt = type3(sig, t.right)
        if ls != rt:
            raise ill_typed(f"3-composite {t} does not compose", expected=rt, found=ls)
        out = (rs, lt)
    else:
        raise ill_typed(f"not a 3-term: {t!r}")
    cache[t] = out
    return out


# Typing derivations ----------------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    """A typing derivation tree; ``position`` is the child-index path."""

    term: str
    level: int
    src: str
    tgt: str
    position: tuple[int, ...] = ()
    children: tuple["Derivation", ...] = ()

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "level": self.level,
            "src": self.src,
            "tgt": self.tgt,
            "position": list(self.position),
            "children": [c.to_json() for c in self.children],
        }


def _level(t) -> int:
    if isinstance(t, (Gen1, Unit1, Comp1)):
        return 1
    if isinstance(t, (Gen2, Cell2, Id2, Con2, HComp2, VComp2)):
        return 2
    if isinstance(t, (Gen3, Cell3, Id3, Con3, Inv3, Tens3, Star3, Comp3)):
        return 3
    raise ill_typed(f"not a term: {t!r}")


def _subterms(t) -> tuple:
    if isinstance(t, (Comp1, HComp2, VComp2, Tens3, Star3, Comp3)):
        return (t.left, t.right)
    if isinstance(t, Inv3):
        return (t.body,)
    if isinstance(t, (Con2, Con3)):
        return tuple(a for a in t.args if not isinstance(a, str))
    if isinstance(t, Id2):
        return (t.over,)
    if isinstance(t, Id3):
        return (t.over,)
    return ()


def typecheck(sig: Signature, t, position: tuple[int, ...] = ()) -> Derivation:
    """Full typing derivation of a 1-, 2- or 3-term, or a located E_ILL_TYPED."""
    children = tuple(typecheck(sig, c, position + (i,)) for i, c in enumerate(_subterms(t)))
    level = _level(t)
    try:
        if level == 1:
            s, g = type1(sig, t)
        elif level == 2:
            s, g = type2(sig, t)
        else:
            s, g = type3(sig, t)
    except KernelError as err:
        if err.code != E_ILL_TYPED:
            raise
        detail = dict(err.detail or {})
        detail["position"] = list(position)
        raise KernelError(E_ILL_TYPED, f"{err.message} at position {list(position)}", detail=detail) from None
    return Derivation(str(t), level, str(s), str(g), position, children)


# Evaluation ----------------------------------------------------------------


@dataclass
class TricatEvaluator(StrictEvaluator):
    """Strict evaluation of 3-terms into a tabulated tricategory."""

    on_gen3: Callable[[str], str] = field(default=lambda n: n)

    def eval_arg(self, kind: str, a):
        if kind == "1":
            return self.eval1(a)
        if kind == "2":
            return self.eval2(a)
        return self.on_objects(a)

    def eval3(self, t: Term3) -> str:
        tab = self.table
        if isinstance(t, Gen3):
            return self.on_gen3(t.name)
        if isinstance(t, Cell3):
            if t.name not in tab.cells3:
                raise KernelError(E_TABLE_INCOMPLETE, f"unknown base 3-cell {t.name!r}")
            return t.name
        if isinstance(t, Id3):
            return tab.unit3(self.eval2(t.over))
        if isinstance(t, Con3):
            kinds = HEADS3[t.head]
            return tab.con(t.head, tuple(self.eval_arg(k, a) for k, a in zip(kinds, t.args)))
        if isinstance(t, Inv3):
            return tab.inverse3(self.eval3(t.body))
        op = {Tens3: tab.tens3, Star3: tab.star3, Comp3: tab.comp3}[type(t)]
        return op(self.eval3(t.left), self.eval3(t.right))


def tricat_evaluator(sig: Signature) -> TricatEvaluator:
    base = default_evaluator(sig)
    tab = sig.table

    def gen3(name: str) -> str:
        if name in tab.map3:
            return tab.map3[name]
        if name in tab.cells3:
            return name
        raise KernelError(E_TABLE_INCOMPLETE, f"no table interpretation for 3-generator {name!r}")

    return TricatEvaluator(tab, base.on_objects, base.on_gen1, base.on_gen2, gen3)


def ev3(sig: Signature, t: Term3) -> str:
    """Evaluate a well-typed 3-term in the signature's tables."""
    type3(sig, t)
    return tricat_evaluator(sig).eval3(t)


# Virtually strict functors ------------------------------------------------------


@dataclass(frozen=True)
class FunctorReport:
    ok: bool
    checked: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked}


@dataclass(frozen=True)
class CellMap:
    """A mapping of table cells at each dimension; objects map by ``objects``."""

    objects: dict[str, str]
    cells1: dict[str, str]
    cells2: dict[str, str]
    cells3: dict[str, str]

    @classmethod
    def identity(cls, tab: Table, objects) -> "CellMap":
        return cls(
            {o: o for o in objects},
            {c: c for c in tab.cells1},
            {c: c for c in tab.cells2},
            {c: c for c in tab.cells3},
        )


def _magmoid_fail(what: str, instance) -> KernelError:
    return KernelError(E_NOT_MAGMOID, f"{what} not preserved at {instance}", detail={"op": what, "instance": instance})


def check_virtually_strict(source: Table, target: Table, fmap: CellMap) -> FunctorReport:
    """Check that ``fmap`` is a 3-magmoid morphism that preserves every constraint."""
    checked = 0
    levels = (
        (source.cells1, fmap.cells1, target.cells1, fmap.objects),
        (source.cells2, fmap.cells2, target.cells2, fmap.cells1),
        (source.cells3, fmap.cells3, target.cells3, fmap.cells2),
    )
    for cells, cmap, tcells, bmap in levels:
        for name in sorted(cells):
            if name not in cmap:
                raise KernelError(E_TABLE_INCOMPLETE, f"mapping misses cell {name!r}")
            s, t = cells[name]
            if tcells.get(cmap[name]) != (bmap[s], bmap[t]):
                raise _magmoid_fail("boundary", name)
            checked += 1
    unit_ops = (
        ("unit1", source.unit1_, target.unit1, fmap.objects, fmap.cells1),
        ("unit2", source.unit2_, target.unit2, fmap.cells1, fmap.cells2),
        ("unit3", source.unit3_, target.unit3, fmap.cells2, fmap.cells3),
    )
    for what, rows, op, dom, cod in unit_ops:
        for x in sorted(rows):
            if cod[rows[x]] != op(dom[x]):
                raise _magmoid_fail(what, x)
            checked += 1
    bin_ops = (
        ("comp1", source.comp1_, target.comp1, fmap.cells1),
        ("vcomp", source.vcomp_, target.vcomp, fmap.cells2),
        ("hcomp", source.hcomp_, target.hcomp, fmap.cells2),
        ("comp3", source.comp3_, target.comp3, fmap.cells3),
        ("star3", source.star3_, target.star3, fmap.cells3),
        ("tens3", source.tens3_, target.tens3, fmap.cells3),
    )
    for what, rows, op, cmap in bin_ops:
        for (x, y) in sorted(rows):
            if cmap[rows[(x, y)]] != op(cmap[x], cmap[y]):
                raise _magmoid_fail(what, (x, y))
            checked += 1
    arg_maps = {"O": fmap.objects, "1": fmap.cells1, "2": fmap.cells2}
    for (head, args) in sorted(source.con_):
        kinds = HEADS3.get(head) or HEADS2_TRICAT[head]
        mapped = tuple(arg_maps[k][a] for k, a in zip(kinds, args))
        result = source.con_[(head, args)]
        cmap = fmap.cells3 if head in HEADS3 else fmap.cells2
        if cmap[result] != target.con(head, mapped):
            raise KernelError(
                E_CONSTRAINT_NOT_PRESERVED,
                f"constraint {head} not preserved at {args}",
                detail={"kind": ConstraintKind.of(head).name, "instance": list(args)},
            )
        checked += 1
    return FunctorReport(True, checked)
