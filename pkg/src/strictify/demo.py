"""The biadjunction corpus: lifted pasting boundaries and their Gray reductions.

Each figure is a loop ``bottom -> left -> right -> bottom`` of 3-cells:
the inverse of one snake cell, an interchanger, then the other snake cell.
The loop is glued at the level of Gray normal forms, since the interchanger's
boundary terms are reified diagrams rather than the lifted 2-terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram
from .gray_rewrite import interchange
from .signature import Signature, parse_signature
from .terms import Gen3, HComp2, Id3, Star3, Tens3, Term2, Term3, VComp2, parse_term2
from .tricat_strict import GrayNF3, PermStep, gray_nf2_trace, gray_nf3, normalize_steps
from .witness import Witness3

PHI_SRC = "(v (l f) (v (o alpha (id f)) (v (aadj f g f) (v (o (id f) beta) (radj f)))))"
PSI_SRC = "(v (r g) (v (o (id g) alpha) (v (a g f g) (v (o beta (id g)) (ladj g)))))"

BIADJUNCTION_SIG = f"""; biadjunction data: counit alpha, unit beta and the two snake 3-isomorphisms
(sig3
  (obj a)
  (obj b)
  (gen1 f a b)
  (gen1 g b a)
  (gen2 alpha (o f g) (u b))
  (gen2 beta (u a) (o g f))
  (gen3 Phi {PHI_SRC} (id f) iso)
  (gen3 Psi {PSI_SRC} (id g) iso))
"""


def biadjunction_signature() -> Signature:
    return parse_signature(BIADJUNCTION_SIG)


@dataclass(frozen=True)
class FigureSpec:
    name: str
    left: Term2
    right: Term2
    bottom: Term2
    # 3-cells left -> bottom and right -> bottom
    to_bottom_left: Term3
    to_bottom_right: Term3
    swap_height: int


def figure_specs() -> tuple[FigureSpec, FigureSpec]:
    phi_src, psi_src = parse_term2(PHI_SRC), parse_term2(PSI_SRC)
    alpha, beta = parse_term2("alpha"), parse_term2("beta")
    idf, idg = parse_term2("(id f)"), parse_term2("(id g)")
    first = FigureSpec(
        "figure-1",
        left=VComp2(alpha, HComp2(phi_src, idg)),
        right=VComp2(alpha, HComp2(idf, psi_src)),
        bottom=VComp2(alpha, HComp2(idf, idg)),
        to_bottom_left=Star3(Id3(alpha), Tens3(Gen3("Phi"), Id3(idg))),
        to_bottom_right=Star3(Id3(alpha), Tens3(Id3(idf), Gen3("Psi"))),
        swap_height=1,
    )
    second = FigureSpec(
        "figure-2",
        left=VComp2(HComp2(psi_src, idf), beta),
        right=VComp2(HComp2(idg, phi_src), beta),
        bottom=VComp2(HComp2(idg, idf), beta),
        to_bottom_left=Star3(Tens3(Gen3("Psi"), Id3(idf)), Id3(beta)),
        to_bottom_right=Star3(Tens3(Id3(idg), Gen3("Phi")), Id3(beta)),
        swap_height=0,
    )
    return first, second


@dataclass(frozen=True)
class FigureReduction:
    name: str
    left: Diagram
    right: Diagram
    bottom: Diagram
    traces: dict
    witnesses: tuple[Witness3, ...]
    interchanger: Witness3
    pasting: GrayNF3

    def witnesses_check(self, sig: Signature) -> bool:
        return all(w.check(sig) for w in self.witnesses) and self.interchanger.check(sig)

    def pinned(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json(), "bottom": self.bottom.to_json()}

    def to_json(self, trace: bool = False) -> dict:
        out = {"name": self.name, **self.pinned(), "pasting": self.pasting.to_json()}
        if trace:
            out["trace"] = self.traces
            out["interchanger"] = self.interchanger.to_json()
        return out


def reduce_figure(sig: Signature, spec: FigureSpec) -> FigureReduction:
    traces = {}
    witnesses = []
    nfs = {}
    for part in ("left", "right", "bottom"):
        nf, trace = gray_nf2_trace(sig, getattr(spec, part))
        nfs[part] = nf
        traces[part] = trace.to_json()
        witnesses.append(trace.witness)
    swapped, swap_witness = interchange(sig, nfs["left"], spec.swap_height)
    if swapped != nfs["right"]:
        raise AssertionError(f"{spec.name}: interchange does not reach the right diagram")
    down_left = gray_nf3(sig, spec.to_bottom_left)
    down_right = gray_nf3(sig, spec.to_bottom_right)
    steps = (
        [s.reversed() for s in reversed(down_left.steps)]
        + [PermStep(nfs["left"], nfs["right"])]
        + list(down_right.steps)
    )
    pasting = GrayNF3(nfs["bottom"], nfs["bottom"], normalize_steps(steps))
    return FigureReduction(
        spec.name, nfs["left"], nfs["right"], nfs["bottom"], traces, tuple(witnesses), swap_witness, pasting
    )


def biadjunction_report(sig: Signature | None = None) -> list[FigureReduction]:
    sig = sig or biadjunction_signature()
    return [reduce_figure(sig, spec) for spec in figure_specs()]
