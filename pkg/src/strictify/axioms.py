"""Exhaustive axiom checks on finite bicategory and tricategory tables.

Every check iterates over sorted cell names, so the verdict does not depend on
the order of table rows.  The first violated instance is raised as
``E_AXIOM_VIOLATION`` with the axiom id and the offending indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import E_AXIOM_VIOLATION, E_TABLE_INCOMPLETE, KernelError
from .signature import Signature
from .tables import Table
from .terms import HEADS2_TRICAT, HEADS3


@dataclass
class ValidationReport:
    """Instances checked per axiom id; only produced when every check passes."""

    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return True

    def tick(self, axiom: str) -> None:
        self.counts[axiom] = self.counts.get(axiom, 0) + 1

    def to_json(self) -> dict:
        return {"ok": True, "checked": dict(sorted(self.counts.items()))}


def violation(axiom: str, instance) -> KernelError:
    return KernelError(
        E_AXIOM_VIOLATION,
        f"axiom {axiom} fails at {instance}",
        detail={"axiom": axiom, "instance": list(instance)},
    )


class _Checker:
    def __init__(self, tab: Table, objects) -> None:
        self.tab = tab
        self.objects = sorted(objects)
        self.c1 = sorted(tab.cells1)
        self.c2 = sorted(tab.cells2)
        self.c3 = sorted(tab.cells3)
        self.report = ValidationReport()

    def expect(self, axiom: str, instance, lhs, rhs) -> None:
        if lhs != rhs:
            raise violation(axiom, instance)
        self.report.tick(axiom)

    # boundaries
    def s1(self, f):
        return self.tab.cells1[f][0]

    def t1(self, f):
        return self.tab.cells1[f][1]

    def s2(self, x):
        return self.tab.cells2[x][0]

    def t2(self, x):
        return self.tab.cells2[x][1]

    def typed2(self, x, src, tgt, axiom, instance) -> None:
        if x not in self.tab.cells2:
            raise KernelError(E_TABLE_INCOMPLETE, f"{axiom} result {x!r} is not a 2-cell")
        self.expect(axiom, instance, self.tab.cells2[x], (src, tgt))

    def pairs1(self):
        return [(f, g) for f, g in product(self.c1, repeat=2) if self.s1(f) == self.t1(g)]

    def triples1(self):
        return [(f, g, h) for (f, g) in self.pairs1() for h in self.c1 if self.s1(g) == self.t1(h)]

    def vpairs(self):
        return [(x, y) for x, y in product(self.c2, repeat=2) if self.s2(x) == self.t2(y)]

    def hpairs(self):
        return [
            (x, y) for x, y in product(self.c2, repeat=2) if self.s1(self.s2(x)) == self.t1(self.s2(y))
        ]


# Bicategory ------------------------------------------------------------------


def _bicat_structure(ck: _Checker) -> None:
    tab = ck.tab
    for o in ck.objects:
        u = tab.unit1(o)
        ck.expect("unit1-typing", (o,), tab.cells1.get(u), (o, o))
    for f, g in ck.pairs1():
        ck.expect("comp1-typing", (f, g), tab.cells1.get(tab.comp1(f, g)), (ck.s1(g), ck.t1(f)))
    for f in ck.c1:
        ck.typed2(tab.unit2(f), f, f, "unit2-typing", (f,))
    for x, y in ck.vpairs():
        ck.typed2(tab.vcomp(x, y), ck.s2(y), ck.t2(x), "vcomp-typing", (x, y))
    for x, y in ck.hpairs():
        src = tab.comp1(ck.s2(x), ck.s2(y))
        tgt = tab.comp1(ck.t2(x), ck.t2(y))
        ck.typed2(tab.hcomp(x, y), src, tgt, "hcomp-typing", (x, y))


def _vertical_category(ck: _Checker) -> None:
    tab = ck.tab
    for x in ck.c2:
        ck.expect("vcomp-left-unit", (x,), tab.vcomp(tab.unit2(ck.t2(x)), x), x)
        ck.expect("vcomp-right-unit", (x,), tab.vcomp(x, tab.unit2(ck.s2(x))), x)
    for x, y in ck.vpairs():
        for z in ck.c2:
            if ck.s2(y) == ck.t2(z):
                ck.expect(
                    "vcomp-assoc",
                    (x, y, z),
                    tab.vcomp(tab.vcomp(x, y), z),
                    tab.vcomp(x, tab.vcomp(y, z)),
                )


def _horizontal_functor(ck: _Checker) -> None:
    tab = ck.tab
    for f, g in ck.pairs1():
        ck.expect("hcomp-units", (f, g), tab.hcomp(tab.unit2(f), tab.unit2(g)), tab.unit2(tab.comp1(f, g)))
    vp = ck.vpairs()
    for (x, x2), (y, y2) in product(vp, repeat=2):
        if ck.s1(ck.s2(x)) != ck.t1(ck.s2(y)):
            continue
        ck.expect(
            "interchange",
            (x, x2, y, y2),
            tab.hcomp(tab.vcomp(x, x2), tab.vcomp(y, y2)),
            tab.vcomp(tab.hcomp(x, y), tab.hcomp(x2, y2)),
        )


def _bicat_constraints(ck: _Checker) -> None:
    tab = ck.tab
    comp = tab.comp1
    for f, g, h in ck.triples1():
        a = tab.con("a", (f, g, h))
        ck.typed2(a, comp(comp(f, g), h), comp(f, comp(g, h)), "associator-typing", (f, g, h))
        tab.inverse2(a)
        ck.report.tick("associator-invertible")
    for f in ck.c1:
        lu, ru = tab.unit1(ck.t1(f)), tab.unit1(ck.s1(f))
        ck.typed2(tab.con("l", (f,)), comp(lu, f), f, "left-unitor-typing", (f,))
        ck.typed2(tab.con("r", (f,)), comp(f, ru), f, "right-unitor-typing", (f,))
        tab.inverse2(tab.con("l", (f,)))
        tab.inverse2(tab.con("r", (f,)))
        ck.report.tick("unitors-invertible")
    # naturality
    for x, y in ck.hpairs():
        for z in ck.c2:
            if ck.s1(ck.s2(y)) != ck.t1(ck.s2(z)):
                continue
            f, g, h = ck.s2(x), ck.s2(y), ck.s2(z)
            f2, g2, h2 = ck.t2(x), ck.t2(y), ck.t2(z)
            ck.expect(
                "associator-naturality",
                (x, y, z),
                tab.vcomp(tab.con("a", (f2, g2, h2)), tab.hcomp(tab.hcomp(x, y), z)),
                tab.vcomp(tab.hcomp(x, tab.hcomp(y, z)), tab.con("a", (f, g, h))),
            )
    for x in ck.c2:
        f, f2 = ck.s2(x), ck.t2(x)
        lunit = tab.unit2(tab.unit1(ck.t1(f)))
        runit = tab.unit2(tab.unit1(ck.s1(f)))
        ck.expect(
            "left-unitor-naturality",
            (x,),
            tab.vcomp(tab.con("l", (f2,)), tab.hcomp(lunit, x)),
            tab.vcomp(x, tab.con("l", (f,))),
        )
        ck.expect(
            "right-unitor-naturality",
            (x,),
            tab.vcomp(tab.con("r", (f2,)), tab.hcomp(x, runit)),
            tab.vcomp(x, tab.con("r", (f,))),
        )
    # pentagon
    a, hc, vc, u2 = (lambda *i: tab.con("a", i)), tab.hcomp, tab.vcomp, tab.unit2
    for f, g, h in ck.triples1():
        for k in ck.c1:
            if ck.s1(h) != ck.t1(k):
                continue
            lhs = vc(a(f, g, comp(h, k)), a(comp(f, g), h, k))
            rhs = vc(vc(hc(u2(f), a(g, h, k)), a(f, comp(g, h), k)), hc(a(f, g, h), u2(k)))
            ck.expect("pentagon", (f, g, h, k), lhs, rhs)
    # triangle
    for f, g in ck.pairs1():
        unit = tab.unit1(ck.s1(f))
        lhs = vc(hc(u2(f), tab.con("l", (g,))), a(f, unit, g))
        rhs = hc(tab.con("r", (f,)), u2(g))
        ck.expect("triangle", (f, g), lhs, rhs)


def validate_bicategory_table(sig: Signature) -> ValidationReport:
    ck = _Checker(sig.table, sig.objects)
    _bicat_structure(ck)
    _vertical_category(ck)
    _horizontal_functor(ck)
    _bicat_constraints(ck)
    return ck.report


# Tricategory -----------------------------------------------------------------


def _three_cells(ck: _Checker) -> None:
    tab = ck.tab
    s3 = lambda c: tab.cells3[c][0]  # noqa: E731
    t3 = lambda c: tab.cells3[c][1]  # noqa: E731
    for x in ck.c2:
        u = tab.unit3(x)
        ck.expect("unit3-typing", (x,), tab.cells3.get(u), (x, x))
    comps = [(p, q) for p, q in product(ck.c3, repeat=2) if s3(p) == t3(q)]
    for p, q in comps:
        ck.expect("comp3-typing", (p, q), tab.cells3.get(tab.comp3(p, q)), (s3(q), t3(p)))
    for p in ck.c3:
        ck.expect("comp3-left-unit", (p,), tab.comp3(tab.unit3(t3(p)), p), p)
        ck.expect("comp3-right-unit", (p,), tab.comp3(p, tab.unit3(s3(p))), p)
    for p, q in comps:
        for r in ck.c3:
            if s3(q) == t3(r):
                ck.expect("comp3-assoc", (p, q, r), tab.comp3(tab.comp3(p, q), r), tab.comp3(p, tab.comp3(q, r)))
    for op_name, op2, ok in (
        ("star3", tab.vcomp, lambda x, y: ck.s2(x) == ck.t2(y)),
        ("tens3", tab.hcomp, lambda x, y: ck.s1(ck.s2(x)) == ck.t1(ck.s2(y))),
    ):
        op3 = getattr(tab, op_name)
        pairs = [(p, q) for p, q in product(ck.c3, repeat=2) if ok(s3(p), s3(q))]
        for p, q in pairs:
            want = (op2(s3(p), s3(q)), op2(t3(p), t3(q)))
            ck.expect(f"{op_name}-typing", (p, q), tab.cells3.get(op3(p, q)), want)
        for x, y in product(ck.c2, repeat=2):
            if ok(x, y):
                ck.expect(f"{op_name}-units", (x, y), op3(tab.unit3(x), tab.unit3(y)), tab.unit3(op2(x, y)))
        for (p, p2), (q, q2) in product(comps, repeat=2):
            if ok(s3(p), s3(q)) and ok(s3(p2), s3(q2)):
                ck.expect(
                    f"{op_name}-interchange",
                    (p, p2, q, q2),
                    op3(tab.comp3(p, p2), tab.comp3(q, q2)),
                    tab.comp3(op3(p, q), op3(p2, q2)),
                )


def _tricat_constraints(sig: Signature, ck: _Checker) -> None:
    """Every tabulated constraint is typed as its head demands and 3-level ones are invertible."""
    from .terms import Cell2, Gen1
    from .tricat_terms import constraint3_type, tricat_evaluator

    tab = ck.tab
    ev = tricat_evaluator(sig)
    ev.on_gen1 = lambda n: n

    def arg_term(kind, a):
        if kind == "1":
            return Gen1(a)
        if kind == "2":
            return Cell2(a, Gen1(ck.s2(a)), Gen1(ck.t2(a)))
        return a

    cell_sig = _cell_signature(sig)
    for (head, args) in sorted(tab.con_):
        kinds = HEADS3.get(head) or HEADS2_TRICAT.get(head)
        if kinds is None:
            raise violation("constraint-head", (head,))
        result = tab.con_[(head, args)]
        terms = tuple(arg_term(k, a) for k, a in zip(kinds, args))
        if head in HEADS3:
            src, tgt = constraint3_type(cell_sig, head, terms)
            want = (ev.eval2(src), ev.eval2(tgt))
            ck.expect(f"{head}-typing", args, tab.cells3.get(result), want)
            tab.inverse3(result)
            ck.report.tick(f"{head}-invertible")
        else:
            from .bicat_terms import constraint2_type

            src, tgt = constraint2_type(cell_sig, head, terms)
            ck.expect(f"{head}-typing", args, tab.cells2.get(result), (ev.eval1(src), ev.eval1(tgt)))


def _cell_signature(sig: Signature) -> Signature:
    """A signature whose generators are the table's own cells, for typing."""
    from .signature import Gen1Decl

    tab = sig.table
    gens1 = tuple(Gen1Decl(c, s, t) for c, (s, t) in sorted(tab.cells1.items()))
    return sig.extend(gens1=gens1, gens2=(), gens3=(), rels2=(), rels3=(), table=None)


def validate_tricategory_table(sig: Signature) -> ValidationReport:
    # Composition of 2-cells is only weakly associative and functorial here;
    # those laws are witnessed by constraint 3-cells instead.
    ck = _Checker(sig.table, sig.objects)
    _bicat_structure(ck)
    _three_cells(ck)
    _tricat_constraints(sig, ck)
    return ck.report
