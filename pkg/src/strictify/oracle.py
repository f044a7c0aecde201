"""Brute-force cross-checks: coherence enumeration, interchange orbits and
seeded functoriality sampling with shrinking."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import factorial

from .bicat_strict import compose_nf, raw_diagram, strictify2, tensor_nf
from .bicat_terms import (
    StrictEvaluator,
    canonical_coherence,
    check_coherence_eq,
    default_evaluator,
    flatten1,
    src_obj,
    tgt_obj,
    type2,
)
from .diagram import Diagram, Disc, FlatPath, canonical, orbit
from .errors import E_BUDGET, KernelError
from .instances import POINT, cocycle_bicategory
from .signature import BICATEGORY, TRICATEGORY, Gen1Decl, Gen2Decl, Signature
from .tables import Table
from .terms import HEADS2, HEADS3, Comp1, Con2, Con3, Gen1, Gen2, HComp2, Id2, Term1, Term2, Unit1, VComp2, term_size
from .tricat_strict import barf_pass, ftilde_pass, gray_nf2, tensor_bar, unit_tree


@dataclass(frozen=True)
class SearchBudget:
    max_size: int = 6
    max_count: int = 200_000
    fuel: int = 10_000

    def __post_init__(self) -> None:
        if min(self.max_size, self.max_count, self.fuel) <= 0:
            raise ValueError("budget fields must be positive")


# Coherence enumeration -----------------------------------------------------------


def _constraint_steps(sig: Signature, s: Term1):
    """Every constraint 2-cell with source ``s``, with its target."""
    tricat = sig.level == TRICATEGORY
    inv_a, inv_l, inv_r = ("aadj", "ladj", "radj") if tricat else ("ainv", "linv", "rinv")
    if isinstance(s, Comp1):
        if isinstance(s.left, Comp1):
            f, g, h = s.left.left, s.left.right, s.right
            yield Con2("a", (f, g, h)), Comp1(f, Comp1(g, h))
        if isinstance(s.right, Comp1):
            f, g, h = s.left, s.right.left, s.right.right
            yield Con2(inv_a, (f, g, h)), Comp1(Comp1(f, g), h)
        if isinstance(s.left, Unit1):
            yield Con2("l", (s.right,)), s.right
        if isinstance(s.right, Unit1):
            yield Con2("r", (s.left,)), s.left
    yield Con2(inv_l, (s,)), Comp1(Unit1(tgt_obj(sig, s)), s)
    yield Con2(inv_r, (s,)), Comp1(s, Unit1(src_obj(sig, s)))
    if tricat and isinstance(s, Unit1):
        yield Con2("i", (s.obj,)), s


class _Enumerator:
    """All coherence 2-terms out of a 1-term, by exact node count."""

    def __init__(self, sig: Signature, budget: SearchBudget) -> None:
        self.sig = sig
        self.budget = budget
        self.memo: dict[tuple[Term1, int], list[tuple[Term2, Term1]]] = {}
        self.produced = 0

    def out_of(self, s: Term1, n: int) -> list[tuple[Term2, Term1]]:
        key = (s, n)
        if key in self.memo:
            return self.memo[key]
        out: list[tuple[Term2, Term1]] = []
        if n == 1:
            out.append((Id2(s), s))
            out.extend(_constraint_steps(self.sig, s))
        elif n >= 3:
            for n1 in range(1, n - 1):
                n2 = n - 1 - n1
                if isinstance(s, Comp1):
                    for x, tx in self.out_of(s.left, n1):
                        for y, ty in self.out_of(s.right, n2):
                            out.append((HComp2(x, y), Comp1(tx, ty)))
                for y, ty in self.out_of(s, n2):
                    for x, tx in self.out_of(ty, n1):
                        out.append((VComp2(x, y), tx))
        self.produced += len(out)
        if self.produced > self.budget.max_count:
            raise KernelError(E_BUDGET, f"coherence enumeration exceeds {self.budget.max_count} terms")
        self.memo[key] = out
        return out

    def all_out_of(self, s: Term1) -> list[tuple[Term2, Term1]]:
        out = []
        for n in range(1, self.budget.max_size + 1):
            out.extend(self.out_of(s, n))
        return out


@dataclass(frozen=True)
class Enumeration:
    terms: tuple[Term2, ...]
    raw_count: int
    classes: int

    def to_json(self) -> dict:
        return {"count": len(self.terms), "raw_count": self.raw_count, "classes": self.classes}


def enumerate_coherence(sig: Signature, src: Term1, tgt: Term1, budget: SearchBudget = SearchBudget()) -> Enumeration:
    """Every coherence 2-term ``src -> tgt`` with at most ``budget.max_size`` nodes."""
    if flatten1(sig, src) != flatten1(sig, tgt):
        return Enumeration((), 0, 0)
    en = _Enumerator(sig, budget)
    terms = tuple(x for x, t in en.all_out_of(src) if t == tgt)
    classes = {strictify2(sig, x).dumps() for x in terms} if sig.level == BICATEGORY else set()
    return Enumeration(terms, en.produced, len(classes))


def _object_maps(sig: Signature):
    """Assignments of the 1-generators to the two 1-cells of the cocycle instance."""
    names = [g.name for g in sig.gens1]
    for choice in itertools.product(("e", "x"), repeat=len(names)):
        yield dict(zip(names, choice))


@dataclass
class CoherenceReport:
    sources: int = 0
    pairs: int = 0
    terms: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "sources": self.sources,
            "pairs": self.pairs,
            "terms": self.terms,
            "violations": [list(map(str, v)) for v in self.violations],
        }


def check_coherence_uniqueness(sig: Signature, sources, budget: SearchBudget = SearchBudget()) -> CoherenceReport:
    """Every enumerated coherence term equals the canonical one, structurally and
    under every evaluation into the cocycle instance."""
    table = cocycle_bicategory().table
    evaluators = [
        StrictEvaluator(table, lambda o: POINT, m.__getitem__, lambda n: n) for m in _object_maps(sig)
    ]
    report = CoherenceReport()
    for src in sources:
        en = _Enumerator(sig, budget)
        by_target: dict[Term1, list[Term2]] = {}
        for x, t in en.all_out_of(src):
            by_target.setdefault(t, []).append(x)
        report.sources += 1
        for tgt, terms in by_target.items():
            report.pairs += 1
            canon = canonical_coherence(sig, src, tgt)
            want = [ev.eval2(canon) for ev in evaluators]
            for x in terms:
                report.terms += 1
                if not check_coherence_eq(sig, x, canon):
                    report.violations.append((src, tgt, x))
                elif [ev.eval2(x) for ev in evaluators] != want:
                    report.violations.append((src, tgt, x))
    return report


def one_terms(sig: Signature, path: tuple[str, ...], obj: str, max_units: int) -> list[Term1]:
    """Every bracketing of ``path`` with at most ``max_units`` inserted units."""
    out: list[Term1] = []
    for units in range(max_units + 1):
        for leaves in _with_units(sig, path, obj, units):
            out.extend(_bracketings(tuple(leaves)))
    return sorted(set(out), key=str)


def _with_units(sig: Signature, path: tuple[str, ...], obj: str, units: int):
    gaps = []
    for k in range(len(path) + 1):
        gaps.append(sig.g1[path[k]].tgt if k < len(path) else (sig.g1[path[-1]].src if path else obj))
    for spots in itertools.combinations_with_replacement(range(len(path) + 1), units):
        leaves: list[Term1] = []
        for k in range(len(path) + 1):
            leaves.extend(Unit1(gaps[k]) for s in spots if s == k)
            if k < len(path):
                leaves.append(Gen1(path[k]))
        if leaves:
            yield leaves


def _bracketings(leaves: tuple[Term1, ...]) -> list[Term1]:
    if len(leaves) == 1:
        return [leaves[0]]
    out = []
    for k in range(1, len(leaves)):
        for a in _bracketings(leaves[:k]):
            for b in _bracketings(leaves[k:]):
                out.append(Comp1(a, b))
    return out


# Interchange orbits ----------------------------------------------------------------


def interchange_orbit(d: Diagram, limit: int = 200_000) -> set[Diagram]:
    """Breadth-first closure of ``d`` under single interchange moves."""
    return {Diagram(d.src, d.tgt, discs) for discs in orbit(d.discs, limit)}


def disjoint_discs(k: int) -> Diagram:
    """``k`` endomorphism discs on ``k`` distinct strands."""
    strands = tuple(f"s{j}" for j in range(k))
    discs = tuple(Disc(strands[:j], f"d{j}", strands[j + 1 :], (strands[j],), (strands[j],)) for j in range(k))
    path = FlatPath(POINT, POINT, strands)
    return Diagram(path, path, discs)


@dataclass(frozen=True)
class DiscPattern:
    """Same-width discs on a row of strands: disc ``j`` covers ``[start, start + width)``."""

    strands: int
    spans: tuple[tuple[int, int], ...]

    def diagram(self) -> Diagram:
        names = tuple(f"s{j}" for j in range(self.strands))
        discs = []
        for j, (start, width) in enumerate(self.spans):
            window = names[start : start + width]
            discs.append(Disc(names[:start], f"d{j}", names[start + width :], window, window))
        path = FlatPath(POINT, POINT, names)
        return Diagram(path, path, tuple(discs))

    def depends(self, i: int, j: int) -> bool:
        (a, wa), (b, wb) = self.spans[i], self.spans[j]
        return a < b + wb and b < a + wa


def random_pattern(rng: random.Random, discs: int, strands: int) -> DiscPattern:
    spans = []
    for _ in range(discs):
        width = rng.randint(1, min(2, strands))
        spans.append((rng.randint(0, strands - width), width))
    return DiscPattern(strands, tuple(spans))


def linear_extensions(p: DiscPattern) -> int:
    """Count orderings that keep every pair of overlapping discs in their original order."""
    k = len(p.spans)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k) if p.depends(i, j)]
    count = 0
    for perm in itertools.permutations(range(k)):
        where = {x: n for n, x in enumerate(perm)}
        if all(where[i] < where[j] for i, j in pairs):
            count += 1
    return count


@dataclass(frozen=True)
class OrbitCheck:
    pattern: DiscPattern
    orbit_size: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.orbit_size == self.expected


def check_disjoint_orbits(max_k: int = 5) -> list[OrbitCheck]:
    out = []
    for k in range(1, max_k + 1):
        d = disjoint_discs(k)
        pattern = DiscPattern(k, tuple((j, 1) for j in range(k)))
        out.append(OrbitCheck(pattern, len(interchange_orbit(d)), factorial(k)))
    return out


def check_random_orbits(count: int = 20, seed: int = 0, discs: int = 5, strands: int = 4) -> list[OrbitCheck]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = random_pattern(rng, discs, strands)
        out.append(OrbitCheck(p, len(interchange_orbit(p.diagram())), linear_extensions(p)))
    return out


# Constraint instances ------------------------------------------------------------


def full_size(t) -> int:
    """Node count including the 1-terms under identities and constraint indices."""
    if isinstance(t, str):
        return 1
    if isinstance(t, (Comp1, HComp2, VComp2)):
        return 1 + full_size(t.left) + full_size(t.right)
    if isinstance(t, Id2):
        return 1 + full_size(t.over)
    if isinstance(t, (Con2, Con3)):
        return 1 + sum(full_size(a) for a in t.args)
    return 1


class InstanceEnumerator:
    """Every well-typed index of each size over a signature, by exact size."""

    def __init__(self, sig: Signature, heads2: dict[str, str] | None = None) -> None:
        self.sig = sig
        self.heads2 = heads2 if heads2 is not None else (HEADS2 if sig.level == BICATEGORY else _tricat_heads2())
        self._ones: dict[int, list[Term1]] = {}
        self._twos: dict[int, list[Term2]] = {}

    def ones(self, n: int) -> list[Term1]:
        if n not in self._ones:
            out: list[Term1] = []
            if n == 1:
                out = [Gen1(g.name) for g in self.sig.gens1] + [Unit1(o) for o in self.sig.objects]
            for k in range(1, n - 1):
                for left in self.ones(k):
                    for right in self.ones(n - 1 - k):
                        if src_obj(self.sig, left) == tgt_obj(self.sig, right):
                            out.append(Comp1(left, right))
            self._ones[n] = out
        return self._ones[n]

    def objects(self, n: int) -> list[str]:
        return list(self.sig.objects) if n == 1 else []

    def twos(self, n: int) -> list[Term2]:
        if n not in self._twos:
            out: list[Term2] = []
            if n == 1:
                out = [Gen2(g.name) for g in self.sig.gens2]
            out += [Id2(f) for f in self.ones(n - 1)] if n > 1 else []
            for head, kinds in sorted(self.heads2.items()):
                out += [x for x in self.constraints(Con2, head, kinds, n) if _typed2(self.sig, x)]
            for k in range(1, n - 1):
                for left in self.twos(k):
                    for right in self.twos(n - 1 - k):
                        for cand in (HComp2(left, right), VComp2(left, right)):
                            if _typed2(self.sig, cand):
                                out.append(cand)
            self._twos[n] = out
        return self._twos[n]

    def of_kind(self, kind: str, n: int) -> list:
        return {"O": self.objects, "1": self.ones, "2": self.twos}[kind](n)

    def constraints(self, cls, head: str, kinds: str, n: int):
        """Constraint terms ``cls(head, args)`` of exact full size ``n``."""
        for sizes in _compositions(n - 1, len(kinds)):
            pools = [self.of_kind(k, m) for k, m in zip(kinds, sizes)]
            for args in itertools.product(*pools):
                yield cls(head, tuple(args))


def _tricat_heads2() -> dict[str, str]:
    from .terms import HEADS2_TRICAT

    return HEADS2_TRICAT


def _typed2(sig: Signature, t: Term2) -> bool:
    try:
        type2(sig, t)
    except KernelError:
        return False
    return True


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def constraint_instances(sig: Signature, level: int, max_size: int, heads: dict[str, str] | None = None):
    """Every well-typed constraint of ``level`` with index tuple of full size at most ``max_size``.

    The size of an instance is the full size of its index tuple (the head is
    not counted).
    """
    from .tricat_terms import constraint3_type

    en = InstanceEnumerator(sig)
    if heads is None:
        heads = en.heads2 if level == 2 else HEADS3
    cls = Con2 if level == 2 else Con3
    for head, kinds in sorted(heads.items()):
        for n in range(len(kinds), max_size + 1):
            for x in en.constraints(cls, head, kinds, n + 1):
                try:
                    if level == 2:
                        type2(sig, x)
                    else:
                        constraint3_type(sig, head, x.args)
                except KernelError:
                    continue
                yield x


# Functoriality sampling ----------------------------------------------------------


def sampling_signature(level: str = BICATEGORY, with_table: bool = False) -> Signature:
    """Two objects, 1-cells ``f: a -> b`` and ``g: b -> a``, and four 2-generators.

    With ``with_table`` the signature has one object and evaluates into the
    cocycle instance (``f -> x``, ``g -> e``).
    """
    if with_table:
        rows = list(cocycle_bicategory().table.rows)
        rows += [("map1", "f", "x"), ("map1", "g", "e"), ("map2", "kf", "x1"), ("map2", "kg", "e0")]
        return Signature(
            BICATEGORY,
            objects=(POINT,),
            gens1=(Gen1Decl("f", POINT, POINT), Gen1Decl("g", POINT, POINT)),
            gens2=(Gen2Decl("kf", Gen1("f"), Gen1("f")), Gen2Decl("kg", Gen1("g"), Gen1("g"))),
            table=Table.from_rows(rows),
        )
    f, g = Gen1("f"), Gen1("g")
    return Signature(
        level,
        objects=("a", "b"),
        gens1=(Gen1Decl("f", "a", "b"), Gen1Decl("g", "b", "a")),
        gens2=(
            Gen2Decl("eta", Unit1("a"), Comp1(g, f)),
            Gen2Decl("eps", Comp1(f, g), Unit1("b")),
            Gen2Decl("kf", f, f),
            Gen2Decl("kg", g, g),
        ),
    )


class TermSampler:
    """Seeded random well-typed terms over a signature."""

    def __init__(self, sig: Signature, rng: random.Random, max_nodes: int = 7) -> None:
        self.sig = sig
        self.rng = rng
        self.max_nodes = max_nodes

    def path(self, length: int, obj: str | None = None) -> tuple[str, ...]:
        """A composable word of 1-generators ending (on the right) at ``obj``."""
        out: list[str] = []
        cur = obj or self.rng.choice(self.sig.objects)
        for _ in range(length):
            choices = [g for g in self.sig.gens1 if g.src == cur]
            if not choices:
                break
            g = self.rng.choice(choices)
            out.insert(0, g.name)
            cur = g.tgt
        return tuple(out)

    def term1(self, max_len: int = 3, obj: str | None = None) -> Term1:
        obj = obj or self.rng.choice(self.sig.objects)
        path = self.path(self.rng.randint(0, max_len), obj)
        units = self.rng.randint(0 if path else 1, 1)
        leaves = self.rng.choice(list(_with_units(self.sig, path, obj, units)))
        return self._bracket(tuple(leaves))

    def _bracket(self, leaves: tuple[Term1, ...]) -> Term1:
        if len(leaves) == 1:
            return leaves[0]
        k = self.rng.randint(1, len(leaves) - 1)
        return Comp1(self._bracket(leaves[:k]), self._bracket(leaves[k:]))

    def constraint(self, s: Term1) -> Term2:
        return self.rng.choice(list(_constraint_steps(self.sig, s)))[0]

    def term2(self, s: Term1, budget: int | None = None) -> Term2:
        budget = self.max_nodes if budget is None else budget
        options = ["unit", "constraint"]
        gens = [Gen2(g.name) for g in self.sig.gens2 if g.src == s]
        if gens:
            options += ["gen", "gen"]
        if budget >= 3:
            options += ["v", "v"]
            if isinstance(s, Comp1):
                options += ["h", "h", "h"]
        pick = self.rng.choice(options)
        if pick == "unit":
            return Id2(s)
        if pick == "constraint":
            return self.constraint(s)
        if pick == "gen":
            return self.rng.choice(gens)
        rest = budget - 1
        share = self.rng.randint(1, rest - 1)
        if pick == "h":
            return HComp2(self.term2(s.left, share), self.term2(s.right, rest - share))
        y = self.term2(s, share)
        _, t = type2(self.sig, y)
        return VComp2(self.term2(t, rest - share), y)


@dataclass(frozen=True)
class Case:
    """One homomorphism check: ``kind`` in {vertical, horizontal, unit, constraint}."""

    kind: str
    term: Term2

    @property
    def size(self) -> int:
        return term_size(self.term)

    def to_json(self) -> dict:
        return {"kind": self.kind, "term": str(self.term), "size": self.size}


def _case_of(t: Term2) -> Case:
    if isinstance(t, VComp2):
        return Case("vertical", t)
    if isinstance(t, HComp2):
        return Case("horizontal", t)
    if isinstance(t, Id2):
        return Case("unit", t)
    if isinstance(t, Con2):
        return Case("constraint", t)
    return Case("generator", t)


class PassSpec:
    """A pass with its homomorphism laws."""

    name = ""
    level = BICATEGORY
    with_table = False

    def prepare(self, sig: Signature, t: Term2) -> Term2:
        return t

    def holds(self, sig: Signature, case: Case) -> bool:
        raise NotImplementedError


class _EvalPass(PassSpec):
    name = "ev"
    with_table = True

    def image(self, sig: Signature, t: Term2) -> str:
        return default_evaluator(sig).eval2(t)

    def holds(self, sig: Signature, case: Case) -> bool:
        t, tab, ev = case.term, sig.table, default_evaluator(sig)
        img = self.image(sig, t)
        if case.kind == "vertical":
            return img == tab.vcomp(self.image(sig, t.left), self.image(sig, t.right))
        if case.kind == "horizontal":
            return img == tab.hcomp(self.image(sig, t.left), self.image(sig, t.right))
        if case.kind == "unit":
            return img == tab.unit2(ev.eval1(t.over))
        if case.kind == "constraint":
            args = tuple(ev.eval1(a) for a in t.args)
            if t.head.endswith("inv"):
                return img == tab.inverse2(tab.con(t.head[:-3], args))
            return img == tab.con(t.head, args)
        return img == ev.on_gen2(t.name)


class _StrictifyPass(PassSpec):
    name = "strictify2"

    def image(self, sig: Signature, t: Term2):
        return strictify2(sig, t)

    def holds(self, sig: Signature, case: Case) -> bool:
        t = case.term
        img = self.image(sig, t)
        if case.kind == "vertical":
            return img == compose_nf(self.image(sig, t.right), self.image(sig, t.left))
        if case.kind == "horizontal":
            return img == tensor_nf(self.image(sig, t.left), self.image(sig, t.right))
        if case.kind in ("unit", "constraint"):
            return img.is_identity
        return len(img.discs) == 1


class _BrokenStrictifyPass(_StrictifyPass):
    """Mutation: object units are drawn as discs, so units are not preserved."""

    name = "strictify2-broken-units"

    def image(self, sig: Signature, t: Term2):
        return canonical(_raw_with_unit_discs(sig, t))


def _raw_with_unit_discs(sig: Signature, t: Term2) -> Diagram:
    if isinstance(t, Id2) and isinstance(t.over, Unit1):
        path = FlatPath(t.over.obj, t.over.obj, ())
        return Diagram(path, path, (Disc((), "unit", (), (), ()),))
    if isinstance(t, VComp2):
        return _raw_with_unit_discs(sig, t.right).then(_raw_with_unit_discs(sig, t.left))
    if isinstance(t, HComp2):
        return _raw_with_unit_discs(sig, t.left).tensor(_raw_with_unit_discs(sig, t.right))
    return raw_diagram(sig, t)


class _FtildePass(PassSpec):
    name = "ftilde"
    level = TRICATEGORY

    def image(self, sig: Signature, t: Term2) -> Term2:
        return ftilde_pass(sig, t)[0]

    def holds(self, sig: Signature, case: Case) -> bool:
        t = case.term
        img = self.image(sig, t)
        if case.kind in ("vertical", "horizontal"):
            return img == type(t)(self.image(sig, t.left), self.image(sig, t.right))
        if case.kind == "unit":
            return img == unit_tree(t.over)
        if case.kind == "constraint":
            return img == (Id2(Unit1(t.args[0])) if t.head == "i" else t)
        return img == t


class _BarfPass(PassSpec):
    name = "barf"
    level = TRICATEGORY

    def prepare(self, sig: Signature, t: Term2) -> Term2:
        return ftilde_pass(sig, t)[0]

    def image(self, sig: Signature, t: Term2) -> Term2:
        return barf_pass(sig, t)[0]

    def holds(self, sig: Signature, case: Case) -> bool:
        t = case.term
        img = self.image(sig, t)
        if case.kind == "vertical":
            return img == VComp2(self.image(sig, t.left), self.image(sig, t.right))
        if case.kind == "horizontal":
            return img == tensor_bar(sig, self.image(sig, t.left), self.image(sig, t.right))[0]
        return img == t


class _GrayPass(PassSpec):
    name = "gray_nf2"
    level = TRICATEGORY

    def image(self, sig: Signature, t: Term2) -> Diagram:
        return gray_nf2(sig, t)

    def holds(self, sig: Signature, case: Case) -> bool:
        t = case.term
        img = self.image(sig, t)
        if case.kind == "vertical":
            return img == self.image(sig, t.right).then(self.image(sig, t.left))
        if case.kind == "horizontal":
            return img == self.image(sig, t.left).tensor(self.image(sig, t.right))
        if case.kind in ("unit", "constraint"):
            return img.is_identity
        return len(img.discs) == 1


PASSES: dict[str, PassSpec] = {
    p.name: p
    for p in (_EvalPass(), _StrictifyPass(), _BrokenStrictifyPass(), _FtildePass(), _BarfPass(), _GrayPass())
}


@dataclass(frozen=True)
class FunctorialityReport:
    pass_name: str
    samples: int
    seed: int
    checks: int
    counterexample: Case | None
    shrunk: Case | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "pass": self.pass_name,
            "samples": self.samples,
            "seed": self.seed,
            "checks": self.checks,
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
            "shrunk": self.shrunk.to_json() if self.shrunk else None,
        }


def _fails(spec: PassSpec, sig: Signature, case: Case) -> bool:
    try:
        return not spec.holds(sig, case)
    except KernelError:
        return True


def _subterms(t: Term2):
    """Proper 2-subterms, outermost first."""
    queue = [t]
    while queue:
        cur = queue.pop(0)
        if isinstance(cur, (HComp2, VComp2)):
            for child in (cur.left, cur.right):
                yield child
                queue.append(child)


def _smaller_indices(t: Term2):
    if isinstance(t, Id2) and isinstance(t.over, Comp1):
        yield Id2(t.over.left)
        yield Id2(t.over.right)


def shrink(spec: PassSpec, sig: Signature, case: Case) -> Case:
    """Replace a failing case by its smallest failing subterm, then shrink indices."""
    best = case
    progress = True
    while progress:
        progress = False
        candidates = list(_subterms(best.term)) + list(_smaller_indices(best.term))
        for sub in sorted(candidates, key=term_size):
            cand = _case_of(sub)
            if cand.size < best.size and _fails(spec, sig, cand):
                best, progress = cand, True
                break
    return best


def sample_functoriality(pass_name: str, n: int, seed: int = 0, max_nodes: int = 7) -> FunctorialityReport:
    """Check the homomorphism laws of a pass on ``n`` seeded random composable tuples."""
    spec = PASSES[pass_name]
    sig = sampling_signature(spec.level, spec.with_table)
    rng = random.Random(seed)
    sampler = TermSampler(sig, rng, max_nodes)
    checks = 0
    for k in range(n):
        kind = ("vertical", "horizontal", "unit", "constraint")[k % 4]
        if kind == "vertical":
            s = sampler.term1()
            y = sampler.term2(s)
            _, t = type2(sig, y)
            term = VComp2(sampler.term2(t), y)
        elif kind == "horizontal":
            right = sampler.term1()
            left = sampler.term1(obj=tgt_obj(sig, right))
            term = HComp2(sampler.term2(left), sampler.term2(right))
        elif kind == "unit":
            term = Id2(sampler.term1())
        else:
            term = sampler.constraint(sampler.term1())
        case = _case_of(spec.prepare(sig, term))
        checks += 1
        if _fails(spec, sig, case):
            return FunctorialityReport(pass_name, n, seed, checks, case, shrink(spec, sig, case))
    return FunctorialityReport(pass_name, n, seed, checks, None, None)
