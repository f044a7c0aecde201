"""Flat paths and height-ordered disc diagrams.

A diagram is read top to bottom: disc 0 is applied first.  Each disc rewrites
the running path ``left + dom`` ``+ right`` into ``left + cod + right``.  The
same structure serves as the strict bicategory normal form and as the Gray
normal form; only the treatment of disc order differs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import E_BUDGET, E_ILL_TYPED, E_INDEX, E_OVERLAP, KernelError


@dataclass(frozen=True)
class FlatPath:
    src: str
    tgt: str
    gens: tuple[str, ...]

    def then_left(self, other: "FlatPath") -> "FlatPath":
        """``self`` composed after ``other`` (``other`` applied first)."""
        return FlatPath(other.src, self.tgt, self.gens + other.gens)

    def to_json(self) -> list[str]:
        return list(self.gens)

    def __str__(self) -> str:
        return "[" + ",".join(self.gens) + "]" if self.gens else f"[]@{self.src}"


@dataclass(frozen=True)
class Disc:
    left: tuple[str, ...]
    gen: str
    right: tuple[str, ...]
    dom: tuple[str, ...]
    cod: tuple[str, ...]

    @property
    def pos(self) -> int:
        return len(self.left)

    @property
    def input(self) -> tuple[str, ...]:
        return self.left + self.dom + self.right

    @property
    def output(self) -> tuple[str, ...]:
        return self.left + self.cod + self.right

    def key(self) -> tuple:
        return (len(self.left), self.gen, self.left, self.right, self.dom, self.cod)

    def whisker(self, left: tuple[str, ...], right: tuple[str, ...]) -> "Disc":
        return Disc(left + self.left, self.gen, self.right + right, self.dom, self.cod)

    def to_json(self) -> dict:
        return {"left": list(self.left), "gen": self.gen, "right": list(self.right)}


def disc_at(path: tuple[str, ...], q: int, gen: str, dom: tuple[str, ...], cod: tuple[str, ...]) -> Disc:
    if tuple(path[q : q + len(dom)]) != dom:
        raise KernelError(E_ILL_TYPED, f"disc {gen} does not match path at {q}")
    return Disc(tuple(path[:q]), gen, tuple(path[q + len(dom) :]), dom, cod)


@dataclass(frozen=True)
class Diagram:
    src: FlatPath
    tgt: FlatPath
    discs: tuple[Disc, ...]

    def __post_init__(self) -> None:
        cur = self.src.gens
        for d in self.discs:
            if d.input != cur:
                raise KernelError(E_ILL_TYPED, f"disc {d.gen} input {d.input} does not chain with {cur}")
            cur = d.output
        if cur != self.tgt.gens:
            raise KernelError(E_ILL_TYPED, f"diagram output {cur} differs from target {self.tgt.gens}")

    @classmethod
    def identity(cls, path: FlatPath) -> "Diagram":
        return cls(path, path, ())

    @property
    def is_identity(self) -> bool:
        return not self.discs

    def paths(self) -> list[tuple[str, ...]]:
        out = [self.src.gens]
        for d in self.discs:
            out.append(d.output)
        return out

    def then(self, after: "Diagram") -> "Diagram":
        """Vertical composite: ``self`` first, then ``after``."""
        if after.src != self.tgt:
            raise KernelError(E_ILL_TYPED, f"cannot stack {after.src} under {self.tgt}")
        return Diagram(self.src, after.tgt, self.discs + after.discs)

    def tensor(self, right: "Diagram") -> "Diagram":
        """Horizontal composite with ``self`` on the left; left discs come first."""
        if self.src.src != right.src.tgt:
            raise KernelError(E_ILL_TYPED, "objects do not match for horizontal composite")
        upper = tuple(d.whisker((), right.src.gens) for d in self.discs)
        lower = tuple(d.whisker(self.tgt.gens, ()) for d in right.discs)
        return Diagram(
            self.src.then_left(right.src),
            self.tgt.then_left(right.tgt),
            upper + lower,
        )

    def whisker(self, left: FlatPath, right: FlatPath) -> "Diagram":
        discs = tuple(d.whisker(left.gens, right.gens) for d in self.discs)
        return Diagram(left.then_left(self.src).then_left(right), left.then_left(self.tgt).then_left(right), discs)

    def to_json(self) -> dict:
        return {
            "src": self.src.to_json(),
            "tgt": self.tgt.to_json(),
            "objects": [self.src.src, self.src.tgt],
            "discs": [d.to_json() for d in self.discs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# Interchange moves -----------------------------------------------------------

LEFT = "left"
RIGHT = "right"


def swap_options(upper: Disc, lower: Disc) -> list[tuple[str, Disc, Disc]]:
    """All ways to let ``lower`` act before ``upper``.

    Returns ``(side, lower', upper')`` triples.  ``side`` records whether the
    moved disc ends up left or right of the other one; both are possible only
    when ``upper`` has empty output and ``lower`` has empty input at the same
    gap.
    """
    p, t1 = upper.pos, len(upper.cod)
    q, s2 = lower.pos, len(lower.dom)
    before = upper.input
    out = []
    if q + s2 <= p:
        new_lower = disc_at(before, q, lower.gen, lower.dom, lower.cod)
        mid = new_lower.output
        new_upper = disc_at(mid, p - s2 + len(lower.cod), upper.gen, upper.dom, upper.cod)
        out.append((LEFT, new_lower, new_upper))
    if q >= p + t1:
        q2 = q - t1 + len(upper.dom)
        new_lower = disc_at(before, q2, lower.gen, lower.dom, lower.cod)
        mid = new_lower.output
        new_upper = disc_at(mid, p, upper.gen, upper.dom, upper.cod)
        out.append((RIGHT, new_lower, new_upper))
    return out


def interchange_discs(discs: tuple[Disc, ...], i: int, side: str | None = None) -> tuple[Disc, ...]:
    if i < 0 or i + 1 >= len(discs):
        raise KernelError(E_INDEX, f"no disc pair at height {i}")
    opts = swap_options(discs[i], discs[i + 1])
    if not opts:
        raise KernelError(E_OVERLAP, f"discs at heights {i} and {i + 1} share strands")
    if side is not None:
        opts = [o for o in opts if o[0] == side] or opts
    _, lo, up = opts[0]
    return discs[:i] + (lo, up) + discs[i + 2 :]


def orbit(discs: tuple[Disc, ...], limit: int = 200_000) -> set[tuple[Disc, ...]]:
    """Closure of a disc sequence under interchange moves."""
    return set(orbit_prefix(discs, limit, strict=True))


def orbit_prefix(discs: tuple[Disc, ...], limit: int, strict: bool = False) -> list[tuple[Disc, ...]]:
    """Breadth-first interchange orbit, in discovery order, cut at ``limit``.

    With ``strict`` an oversized orbit raises ``E_BUDGET``; otherwise the
    first ``limit`` members are returned.
    """
    seen = {discs}
    order = [discs]
    queue = deque([discs])
    while queue:
        cur = queue.popleft()
        for i in range(len(cur) - 1):
            for _, lo, up in swap_options(cur[i], cur[i + 1]):
                nxt = cur[:i] + (lo, up) + cur[i + 2 :]
                if nxt not in seen:
                    if len(seen) >= limit:
                        if strict:
                            raise KernelError(E_BUDGET, f"interchange orbit exceeds {limit} diagrams")
                        return order
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
    return order


def _bubble(discs: tuple[Disc, ...], j: int):
    if j == 0:
        yield discs
        return
    for _, lo, up in swap_options(discs[j - 1], discs[j]):
        yield from _bubble(discs[: j - 1] + (lo, up) + discs[j + 1 :], j - 1)


def _seq_key(discs: tuple[Disc, ...]) -> tuple:
    return tuple(d.key() for d in discs)


@lru_cache(maxsize=200_000)
def canonical_discs(discs: tuple[Disc, ...]) -> tuple[Disc, ...]:
    """Least member of the interchange orbit under the per-disc key.

    The first disc is the smallest disc that can be moved to the top; the rest
    is canonicalized recursively, branching over every way of moving it.
    """
    if len(discs) <= 1:
        return discs
    candidates: dict[Disc, set[tuple[Disc, ...]]] = {}
    for j in range(len(discs)):
        for seq in _bubble(discs, j):
            candidates.setdefault(seq[0], set()).add(seq[1:])
    first = min(candidates, key=Disc.key)
    best = None
    for rest in candidates[first]:
        cand = (first,) + canonical_discs(rest)
        if best is None or _seq_key(cand) < _seq_key(best):
            best = cand
    return best


def canonical(d: Diagram) -> Diagram:
    return Diagram(d.src, d.tgt, canonical_discs(d.discs))
