"""Rewriting on Gray normal forms: interchangers, rule steps and rendering."""

from __future__ import annotations

from dataclasses import dataclass

from .bicat_strict import TableNF, raw_diagram
from .bicat_terms import left_bracketed, type2
from .diagram import LEFT, Diagram, Disc, FlatPath, interchange_discs, swap_options
from .errors import E_ILL_TYPED, E_INDEX, E_NO_MATCH, E_NOT_CONSECUTIVE, E_OVERLAP, KernelError
from .reify import disc_term, gen_term, glue
from .signature import RuleDecl, Signature
from .terms import Comp1, Gen1, HComp2, Id2, Term1, Term2, VComp2
from .tricat_strict import gray_nf2
from .witness import Witness3, w_chain, w_con, w_id, w_inv, w_star, w_tens


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Diagram
    rhs: Diagram
    invertible: bool = False

    def __post_init__(self) -> None:
        if self.lhs.src != self.rhs.src or self.lhs.tgt != self.rhs.tgt:
            raise KernelError(E_ILL_TYPED, f"rule {self.name} has non-parallel sides")

    @classmethod
    def from_decl(cls, sig: Signature, decl: RuleDecl) -> "RewriteRule":
        nf = gray_nf2 if sig.is_tricategory else raw_diagram
        return cls(decl.name, nf(sig, decl.lhs), nf(sig, decl.rhs), decl.invertible)

    def reversed(self) -> "RewriteRule":
        if not self.invertible:
            raise KernelError(E_ILL_TYPED, f"rule {self.name} is not invertible")
        return RewriteRule(self.name, self.rhs, self.lhs, True)


def rules_of(sig: Signature) -> dict[str, RewriteRule]:
    return {r.name: RewriteRule.from_decl(sig, r) for r in sig.rules}


# Interchange -------------------------------------------------------------------


def left_bracketed_gens(gens: tuple[str, ...]) -> Term1:
    out: Term1 = Gen1(gens[0])
    for g in gens[1:]:
        out = Comp1(out, Gen1(g))
    return out


def _whisker(cell: Term2, left: tuple[str, ...], right: tuple[str, ...]) -> Term2:
    if left:
        cell = HComp2(Id2(left_bracketed_gens(left)), cell)
    if right:
        cell = HComp2(cell, Id2(left_bracketed_gens(right)))
    return cell


def _with_middle(cell: Term2, middle: tuple[str, ...], on_left: bool) -> Term2:
    if not middle:
        return cell
    unit = Id2(left_bracketed_gens(middle))
    return HComp2(unit, cell) if on_left else HComp2(cell, unit)


def swap_forms(sig: Signature, x: Term2, y: Term2) -> tuple[Term2, Term2, Witness3]:
    """``(x (x) 1) * (1 (x) y)`` and ``(1 (x) y) * (x (x) 1)`` with the interchanger between them."""
    (sx, tx), (sy, ty) = type2(sig, x), type2(sig, y)
    y_first = VComp2(HComp2(x, Id2(ty)), HComp2(Id2(sx), y))
    x_first = VComp2(HComp2(Id2(tx), y), HComp2(x, Id2(sy)))
    w = w_chain(
        w_con(sig, "phix", x, Id2(ty), Id2(sx), y),
        w_tens(w_con(sig, "rloc", x), w_con(sig, "lloc", y)),
        w_tens(w_inv(w_con(sig, "lloc", x)), w_inv(w_con(sig, "rloc", y))),
        w_inv(w_con(sig, "phix", Id2(tx), y, x, Id2(sy))),
    )
    return y_first, x_first, w


def _mirror(src: Term2, tgt: Term2, local: Witness3) -> Witness3:
    """Extend ``local`` to ``src -> tgt`` where the two differ only at ``local``'s boundary."""
    if src == tgt:
        return w_id(src)
    if src == local.src and tgt == local.tgt:
        return local
    if isinstance(src, VComp2) and isinstance(tgt, VComp2):
        return w_star(_mirror(src.left, tgt.left, local), _mirror(src.right, tgt.right, local))
    raise KernelError(E_ILL_TYPED, "terms do not differ by a single block")


def _pair_block(sig: Signature, upper: Disc, lower: Disc, side: str):
    """The two discs as one whiskered block, before and after the swap."""
    if side == LEFT:
        # lower acts left of upper: path = A dom(lower) M dom(upper) B
        outer_left = lower.left
        middle = upper.left[len(lower.left) + len(lower.dom) :]
        outer_right = upper.right
        x = gen_term(lower.gen)
        y = _with_middle(gen_term(upper.gen), middle, on_left=True)
        y_first, x_first, w = swap_forms(sig, x, y)
        before, after, wit = y_first, x_first, w
    else:
        # lower acts right of upper: path = A dom(upper) M dom(lower) B
        outer_left = upper.left
        middle = upper.right[: len(upper.right) - len(lower.right) - len(lower.dom)]
        outer_right = lower.right
        x = gen_term(upper.gen)
        y = _with_middle(gen_term(lower.gen), middle, on_left=True)
        y_first, x_first, w = swap_forms(sig, x, y)
        before, after, wit = x_first, y_first, w_inv(w)
    whisk = lambda t: _whisker(t, outer_left, outer_right)  # noqa: E731
    local = _whiskered_witness(sig, wit, outer_left, outer_right)
    return whisk(before), whisk(after), local


def _whiskered_witness(sig: Signature, w: Witness3, left: tuple[str, ...], right: tuple[str, ...]) -> Witness3:
    if left:
        w = w_tens(w_id(Id2(left_bracketed_gens(left))), w)
    if right:
        w = w_tens(w, w_id(Id2(left_bracketed_gens(right))))
    return w


def diagram_with_block(sig: Signature, d: Diagram, i: int, block: Term2) -> Term2:
    """Reify ``d`` with heights ``i, i+1`` replaced by the single 2-term ``block``."""
    blocks = [disc_term(sig, x) for x in d.discs[:i]] + [block] + [disc_term(sig, x) for x in d.discs[i + 2 :]]
    return glue(sig, blocks, left_bracketed(sig, d.src), left_bracketed(sig, d.tgt))


def interchange(sig: Signature, d: Diagram, i: int, side: str | None = None) -> tuple[Diagram, Witness3]:
    """Swap the discs at heights ``i`` and ``i + 1``, with the interchanger 3-cell."""
    if i < 0 or i + 1 >= len(d.discs):
        raise KernelError(E_INDEX, f"no disc pair at height {i}")
    upper, lower = d.discs[i], d.discs[i + 1]
    opts = swap_options(upper, lower)
    if not opts:
        raise KernelError(E_OVERLAP, f"discs at heights {i} and {i + 1} share strands")
    if side is not None:
        opts = [o for o in opts if o[0] == side] or opts
    chosen = opts[0][0]
    swapped = Diagram(d.src, d.tgt, interchange_discs(d.discs, i, chosen))
    if not sig.is_tricategory:
        return swapped, None
    before, after, local = _pair_block(sig, upper, lower, chosen)
    src = diagram_with_block(sig, d, i, before)
    tgt = diagram_with_block(sig, swapped, i, after)
    return swapped, _mirror(src, tgt, local)


# Rule application --------------------------------------------------------------


def _window(at) -> tuple[int, int | None]:
    if isinstance(at, int):
        return at, None
    heights = sorted(at)
    if not heights:
        raise KernelError(E_INDEX, "empty height window")
    if heights != list(range(heights[0], heights[0] + len(heights))):
        raise KernelError(E_NOT_CONSECUTIVE, f"heights {heights} are not consecutive")
    return heights[0], len(heights)


def apply_rule(
    d: Diagram,
    rule: RewriteRule,
    at,
    left: FlatPath | tuple[str, ...] = (),
    right: FlatPath | tuple[str, ...] = (),
) -> Diagram:
    """Replace the whiskered left side of ``rule`` at height ``at`` by its right side.

    ``at`` is a height or an explicit list of heights, which must be consecutive.
    """
    start, count = _window(at)
    left = left.gens if isinstance(left, FlatPath) else tuple(left)
    right = right.gens if isinstance(right, FlatPath) else tuple(right)
    m = len(rule.lhs.discs)
    if count is not None and count != m:
        raise KernelError(E_NO_MATCH, f"rule {rule.name} spans {m} heights, not {count}")
    if start < 0 or start > len(d.discs) or start + m > len(d.discs):
        raise KernelError(E_NO_MATCH, f"rule {rule.name} does not fit at height {start}")
    running = d.paths()[start]
    if running != left + rule.lhs.src.gens + right:
        raise KernelError(E_NO_MATCH, f"rule {rule.name} source does not match the path at height {start}")
    want = tuple(x.whisker(left, right) for x in rule.lhs.discs)
    if d.discs[start : start + m] != want:
        raise KernelError(E_NO_MATCH, f"rule {rule.name} does not match the discs at height {start}")
    new = tuple(x.whisker(left, right) for x in rule.rhs.discs)
    return Diagram(d.src, d.tgt, d.discs[:start] + new + d.discs[start + m :])


# Rendering ------------------------------------------------------------------------

STEP = 40
MARGIN = 30
RADIUS = 8


def _fmt(x: float) -> str:
    return f"{x:.1f}"


def _layout(d: Diagram):
    """Rows of strand positions and, per disc, its centre and attached strands."""
    paths = d.paths()
    width = max(len(p) for p in paths)
    xs = []
    for p in paths:
        offset = (width - len(p)) * STEP / 2
        xs.append([MARGIN + offset + k * STEP for k in range(len(p))])
    ys = [MARGIN + 2 * k * STEP for k in range(len(paths))]
    segments = []
    nodes = []
    for k, disc in enumerate(d.discs):
        y0, y1 = ys[k], ys[k + 1]
        cy = (y0 + y1) / 2
        p, s, t = disc.pos, len(disc.dom), len(disc.cod)
        attached = xs[k][p : p + s] + xs[k + 1][p : p + t]
        if attached:
            cx = sum(attached) / len(attached)
        else:
            row = xs[k]
            left_x = row[p - 1] if p > 0 else MARGIN - STEP
            right_x = row[p] if p < len(row) else (row[-1] + STEP if row else MARGIN + STEP)
            cx = (left_x + right_x) / 2 if row else MARGIN + (width - 1) * STEP / 2
        nodes.append((cx, cy, disc.gen))
        for j, name in enumerate(paths[k]):
            if p <= j < p + s:
                segments.append((xs[k][j], y0, cx, cy, name))
            else:
                j2 = j if j < p else j - s + t
                segments.append((xs[k][j], y0, xs[k + 1][j2], y1, name))
        for j in range(p, p + t):
            segments.append((cx, cy, xs[k + 1][j], y1, paths[k + 1][j]))
    labels = [(x, ys[0] - 10, n) for x, n in zip(xs[0], paths[0])]
    labels += [(x, ys[-1] + 16, n) for x, n in zip(xs[-1], paths[-1])]
    extent = (MARGIN * 2 + max(width - 1, 1) * STEP, ys[-1] + MARGIN)
    return segments, nodes, labels, extent


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _svg(d: Diagram) -> str:
    segments, nodes, labels, (w, h) = _layout(d)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}">',
    ]
    for x0, y0, x1, y1, name in segments:
        out.append(
            f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
            f'stroke="black" data-strand="{_escape(name)}"/>'
        )
    for cx, cy, gen in nodes:
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{RADIUS}" fill="white" stroke="black"/>')
        out.append(f'<text x="{_fmt(cx + RADIUS + 3)}" y="{_fmt(cy + 4)}" font-size="10">{_escape(gen)}</text>')
    for x, y, name in labels:
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="10" text-anchor="middle">{_escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tex(s: str) -> str:
    return "".join("\\" + c if c in "_&%#$" else c for c in s)


def _tikz(d: Diagram) -> str:
    segments, nodes, labels, _ = _layout(d)
    scale = 1 / STEP
    out = ["\\begin{tikzpicture}[yscale=-1]"]
    for x0, y0, x1, y1, _name in segments:
        out.append(f"\\draw ({x0 * scale:.2f},{y0 * scale:.2f}) -- ({x1 * scale:.2f},{y1 * scale:.2f});")
    for cx, cy, gen in nodes:
        out.append(
            f"\\node[draw, circle, fill=white, inner sep=1.5pt, label=right:{{$\\mathtt{{{_tex(gen)}}}$}}] "
            f"at ({cx * scale:.2f},{cy * scale:.2f}) {{}};"
        )
    for x, y, name in labels:
        out.append(f"\\node at ({x * scale:.2f},{y * scale:.2f}) {{$\\mathtt{{{_tex(name)}}}$}};")
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"


def _table_diagram(x: TableNF) -> Diagram:
    return Diagram(x.src, x.tgt, (Disc((), x.cell, (), x.src.gens, x.tgt.gens),))


def render(x: Diagram | TableNF, fmt: str = "svg") -> str:
    """Deterministic SVG 1.1 or TikZ drawing, read top to bottom."""
    d = _table_diagram(x) if isinstance(x, TableNF) else x
    if fmt == "svg":
        return _svg(d)
    if fmt == "tikz":
        return _tikz(d)
    raise ValueError(f"unknown format {fmt!r}")
