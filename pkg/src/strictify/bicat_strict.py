"""Strict normal forms of 2-terms and equality of pasting diagrams."""

from __future__ import annotations

import heapq
import json
import itertools
from dataclasses import dataclass
from enum import Enum

from .bicat_terms import (
    canonical_coherence,
    default_evaluator,
    flatten1,
    left_bracketed,
    type2,
)
from .config import default_fuel
from .diagram import Diagram, Disc, FlatPath, canonical, canonical_discs, orbit_prefix
from .errors import E_ILL_TYPED, E_MISSING_GENERATOR, KernelError
from .signature import Signature
from .terms import Cell2, Comp1, Con2, Gen2, HComp2, Id2, Term2, VComp2, parse_term2


@dataclass(frozen=True)
class TableNF:
    """Normal form over a tabulated base: the transported table cell."""

    src: FlatPath
    tgt: FlatPath
    cell: str

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "tgt": self.tgt.to_json(), "cell": self.cell}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


Bst2NF = Diagram | TableNF


def gen_id(t: Gen2 | Cell2) -> str:
    """Disc label: a generator name, or the full triple for a basic cell."""
    return t.name if isinstance(t, Gen2) else str(t)


def gen_disc(sig: Signature, t: Gen2 | Cell2) -> Diagram:
    src, tgt = type2(sig, t)
    fs, ft = flatten1(sig, src), flatten1(sig, tgt)
    return Diagram(fs, ft, (Disc((), gen_id(t), (), fs.gens, ft.gens),))


def raw_diagram(sig: Signature, t: Term2) -> Diagram:
    """Disc diagram of a 2-term; constraints and units contribute no discs."""
    if isinstance(t, (Gen2, Cell2)):
        return gen_disc(sig, t)
    if isinstance(t, (Id2, Con2)):
        src, _ = type2(sig, t)
        return Diagram.identity(flatten1(sig, src))
    if isinstance(t, VComp2):
        type2(sig, t)
        return raw_diagram(sig, t.right).then(raw_diagram(sig, t.left))
    if isinstance(t, HComp2):
        type2(sig, t)
        return raw_diagram(sig, t.left).tensor(raw_diagram(sig, t.right))
    raise KernelError(E_ILL_TYPED, f"not a 2-term: {t!r}")


def strictify2(sig: Signature, t: Term2) -> Bst2NF:
    """The strict normal form of ``t``."""
    src, tgt = type2(sig, t)
    if sig.table is not None:
        ev = default_evaluator(sig)
        fs, ft = flatten1(sig, src), flatten1(sig, tgt)
        to_src = canonical_coherence(sig, left_bracketed(sig, fs), src)
        from_tgt = canonical_coherence(sig, tgt, left_bracketed(sig, ft))
        tab = sig.table
        cell = tab.vcomp(ev.eval2(from_tgt), tab.vcomp(ev.eval2(t), ev.eval2(to_src)))
        return TableNF(fs, ft, cell)
    return canonical(raw_diagram(sig, t))


def compose_nf(upper: Bst2NF, lower: Bst2NF, sig: Signature | None = None) -> Bst2NF:
    """Vertical composite of normal forms: ``upper`` first."""
    if isinstance(upper, TableNF):
        return TableNF(upper.src, lower.tgt, sig.table.vcomp(lower.cell, upper.cell))
    return canonical(upper.then(lower))


def tensor_nf(left: Bst2NF, right: Bst2NF, sig: Signature | None = None) -> Bst2NF:
    """Horizontal composite of normal forms with ``left`` on the left."""
    if isinstance(left, TableNF):
        tab = sig.table
        ev = default_evaluator(sig)
        src = left.src.then_left(right.src)
        tgt = left.tgt.then_left(right.tgt)
        pair_src = Comp1(left_bracketed(sig, left.src), left_bracketed(sig, right.src))
        pair_tgt = Comp1(left_bracketed(sig, left.tgt), left_bracketed(sig, right.tgt))
        into = ev.eval2(canonical_coherence(sig, left_bracketed(sig, src), pair_src))
        out = ev.eval2(canonical_coherence(sig, pair_tgt, left_bracketed(sig, tgt)))
        return TableNF(src, tgt, tab.vcomp(out, tab.vcomp(tab.hcomp(left.cell, right.cell), into)))
    return canonical(left.tensor(right))


class Verdict(Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"
    UNKNOWN = "unknown"


# Fueled rewriting ---------------------------------------------------------------


@dataclass(frozen=True)
class Rule2:
    lhs: Diagram
    rhs: Diagram


def relation_rules(sig: Signature) -> list[Rule2]:
    rules = []
    for a, b in sig.rels2:
        da, db = canonical(raw_diagram(sig, a)), canonical(raw_diagram(sig, b))
        rules.append(Rule2(da, db))
        rules.append(Rule2(db, da))
    return rules


def _occurrences(path: tuple[str, ...], pattern: tuple[str, ...]):
    n = len(pattern)
    for q in range(len(path) - n + 1):
        if path[q : q + n] == pattern:
            yield q


def _unwhisker(window: tuple[Disc, ...], left: tuple[str, ...], right: tuple[str, ...]):
    out = []
    nl, nr = len(left), len(right)
    for d in window:
        if d.left[:nl] != left or len(d.left) < nl:
            return None
        if nr and (len(d.right) < nr or d.right[len(d.right) - nr :] != right):
            return None
        out.append(Disc(d.left[nl:], d.gen, d.right[: len(d.right) - nr], d.dom, d.cod))
    return tuple(out)


def _object_at(sig: Signature, d: Diagram, path: tuple[str, ...], q: int) -> str:
    """The object sitting at gap ``q`` of a path inside ``d``."""
    if q < len(path):
        return sig.g1[path[q]].tgt
    if path:
        return sig.g1[path[-1]].src
    return d.src.src


def rewrite_neighbours(sig: Signature, d: Diagram, rules: list[Rule2], orbit_limit: int = 400):
    """Every diagram reachable by one rule application, modulo interchange."""
    for member in orbit_prefix(d.discs, orbit_limit):
        paths = [d.src.gens] + [disc.output for disc in member]
        for rule in rules:
            m = len(rule.lhs.discs)
            pattern = rule.lhs.src.gens
            for i in range(len(member) - m + 1):
                path = paths[i]
                for q in _occurrences(path, pattern):
                    if not pattern and _object_at(sig, d, path, q) != rule.lhs.src.src:
                        continue
                    left, right = path[:q], path[q + len(pattern) :]
                    window = _unwhisker(member[i : i + m], left, right)
                    if window is None:
                        continue
                    if m and canonical_discs(window) != rule.lhs.discs:
                        continue
                    new = tuple(x.whisker(left, right) for x in rule.rhs.discs)
                    yield Diagram(d.src, d.tgt, member[:i] + new + member[i + m :])


def search_equal(sig: Signature, start: Diagram, goal: Diagram, fuel: int) -> Verdict:
    """Smallest-first closure under the relations, bounded by ``fuel`` expansions.

    Diagrams larger than the endpoints plus two rule sides are not explored;
    when that prunes anything an exhausted search reports ``UNKNOWN``.
    """
    start, goal = canonical(start), canonical(goal)
    if start == goal:
        return Verdict.EQUAL
    if (start.src, start.tgt) != (goal.src, goal.tgt):
        return Verdict.NOT_EQUAL
    rules = relation_rules(sig)
    if not rules:
        return Verdict.NOT_EQUAL
    widest = max(len(r.lhs.discs) for r in rules)
    max_discs = max(len(start.discs), len(goal.discs)) + 2 * widest
    pruned = False
    seen = {start}
    counter = itertools.count()
    heap = [(len(start.discs), next(counter), start)]
    expansions = 0
    while heap:
        if expansions >= fuel:
            return Verdict.UNKNOWN
        _, _, cur = heapq.heappop(heap)
        expansions += 1
        for nxt in rewrite_neighbours(sig, cur, rules):
            if len(nxt.discs) > max_discs:
                pruned = True
                continue
            nxt = canonical(nxt)
            if nxt == goal:
                return Verdict.EQUAL
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (len(nxt.discs), next(counter), nxt))
    return Verdict.UNKNOWN if pruned else Verdict.NOT_EQUAL


def check_eq2(sig: Signature, s: Term2, t: Term2, fuel: int | None = None) -> Verdict:
    """Decide equality of two pasting diagrams after strictification."""
    ss, st = type2(sig, s)
    ts, tt = type2(sig, t)
    if flatten1(sig, ss) != flatten1(sig, ts) or flatten1(sig, st) != flatten1(sig, tt):
        return Verdict.NOT_EQUAL
    a, b = strictify2(sig, s), strictify2(sig, t)
    if a == b:
        return Verdict.EQUAL
    if sig.table is not None or not sig.rels2:
        return Verdict.NOT_EQUAL
    return search_equal(sig, a, b, default_fuel() if fuel is None else fuel)


# Snake identities ---------------------------------------------------------------

SNAKE1_LHS = "(v (l f) (v (o eps (id f)) (v (ainv f g f) (v (o (id f) eta) (rinv f)))))"
SNAKE2_LHS = "(v (r g) (v (o (id g) eps) (v (a g f g) (v (o eta (id g)) (linv g)))))"

# Placements (generator, gap) on the path [g]; consecutive entries are one
# rewrite step apart.
SNAKE2_CHAIN: tuple[tuple[tuple[str, int], ...], ...] = (
    (("eta", 0), ("eps", 1)),
    (("eta", 0), ("eps", 1), ("eta", 0), ("etainv", 0)),
    (("eta", 0), ("eta", 2), ("eps", 3), ("etainv", 0)),
    (("eta", 0), ("eta", 2), ("eps", 3), ("eps", 1), ("epsinv", 1), ("etainv", 0)),
    (("eta", 0), ("eta", 2), ("eps", 1), ("eps", 1), ("epsinv", 1), ("etainv", 0)),
    (("eta", 0), ("eps", 1), ("epsinv", 1), ("etainv", 0)),
    (("eta", 0), ("etainv", 0)),
    (),
)


@dataclass(frozen=True)
class SnakeEquation:
    name: str
    lhs: Term2
    rhs: Term2
    lhs_nf: Diagram
    rhs_nf: Diagram
    verdict: Verdict
    status: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "lhs_nf": self.lhs_nf.to_json(),
            "rhs_nf": self.rhs_nf.to_json(),
            "verdict": self.verdict.value,
            "status": self.status,
        }


@dataclass(frozen=True)
class DerivationStep:
    before: Diagram
    after: Diagram
    verdict: Verdict

    def to_json(self) -> dict:
        return {"from": self.before.to_json(), "to": self.after.to_json(), "verdict": self.verdict.value}


@dataclass(frozen=True)
class SnakeReport:
    equations: tuple[SnakeEquation, ...]
    derivation: tuple[DerivationStep, ...] | None

    def status(self, name: str) -> str:
        return next(e.status for e in self.equations if e.name == name)

    def to_json(self) -> dict:
        return {
            "equations": [e.to_json() for e in self.equations],
            "derivation": None if self.derivation is None else [s.to_json() for s in self.derivation],
        }


def placed_diagram(sig: Signature, path: FlatPath, placements) -> Diagram:
    """Stack generator discs, each inserted at a gap of the running path."""
    cur = path.gens
    discs = []
    for name, q in placements:
        src, tgt = type2(sig, Gen2(name))
        dom, cod = flatten1(sig, src).gens, flatten1(sig, tgt).gens
        disc = Disc(cur[:q], name, cur[q + len(dom) :], dom, cod)
        if disc.input != cur:
            raise KernelError(E_ILL_TYPED, f"{name} does not fit at gap {q} of {cur}")
        discs.append(disc)
        cur = disc.output
    return Diagram(path, FlatPath(path.src, path.tgt, cur), tuple(discs))


def _status(verdict: Verdict) -> str:
    return {Verdict.EQUAL: "holds", Verdict.NOT_EQUAL: "fails", Verdict.UNKNOWN: "undetermined"}[verdict]


def snake_report(sig: Signature, fuel: int | None = None) -> SnakeReport:
    """Both snake equations, their strict reductions and whether they hold.

    When ``etainv`` and ``epsinv`` are declared, the second equation is also
    derived from the first along ``SNAKE2_CHAIN``, every link certified by
    ``check_eq2``.
    """
    from .reify import diagram_term

    for name in ("f", "g"):
        if name not in sig.g1:
            raise KernelError(E_MISSING_GENERATOR, f"adjunction needs 1-generator {name}")
    for name in ("eta", "eps"):
        if name not in sig.g2:
            raise KernelError(E_MISSING_GENERATOR, f"adjunction needs 2-generator {name}")
    equations = []
    for name, lhs_text, rhs_text in (("snake-1", SNAKE1_LHS, "(id f)"), ("snake-2", SNAKE2_LHS, "(id g)")):
        lhs, rhs = parse_term2(lhs_text), parse_term2(rhs_text)
        verdict = check_eq2(sig, lhs, rhs, fuel)
        equations.append(
            SnakeEquation(name, lhs, rhs, strictify2(sig, lhs), strictify2(sig, rhs), verdict, _status(verdict))
        )
    derivation = None
    if "etainv" in sig.g2 and "epsinv" in sig.g2:
        g = sig.g1["g"]
        path = FlatPath(g.src, g.tgt, ("g",))
        chain = [placed_diagram(sig, path, p) for p in SNAKE2_CHAIN]
        steps = []
        for before, after in zip(chain, chain[1:]):
            verdict = check_eq2(sig, diagram_term(sig, before), diagram_term(sig, after), fuel)
            steps.append(DerivationStep(before, after, verdict))
        derivation = tuple(steps)
        if all(s.verdict is Verdict.EQUAL for s in steps) and equations[1].verdict is not Verdict.EQUAL:
            eq = equations[1]
            equations[1] = SnakeEquation(
                eq.name, eq.lhs, eq.rhs, eq.lhs_nf, eq.rhs_nf, Verdict.EQUAL, "holds (derived)"
            )
    return SnakeReport(tuple(equations), derivation)
