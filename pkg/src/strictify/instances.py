"""Small tabulated instances used by validation, evaluation and sampling."""

from __future__ import annotations

from itertools import product

from .signature import BICATEGORY, TRICATEGORY, Signature
from .tables import Table
from .terms import HEADS3

POINT = "pt"


def _bit(name: str) -> int:
    return int(name[-1])


def cocycle_bicategory(perturb_left_unitor: bool = False) -> Signature:
    """One object; 1-cells ``e``, ``x`` forming Z/2; each 1-cell has 2-cells ``<f>0``, ``<f>1``.

    Vertical and horizontal composition add indices mod 2.  The associator at
    ``(f, g, h)`` is the nontrivial 3-cocycle: index 1 exactly when all three
    are ``x``.  Unitors are trivial unless ``perturb_left_unitor`` flips ``l_x``.
    """
    ones = {"e": 0, "x": 1}
    name1 = {0: "e", 1: "x"}
    rows: list[tuple[str, ...]] = [("unit1", POINT, "e")]
    for f in ones:
        rows.append(("cell1", f, POINT, POINT))
        rows.append(("unit2", f, f + "0"))
        for i in (0, 1):
            rows.append(("cell2", f"{f}{i}", f, f))
    for f, g in product(ones, repeat=2):
        rows.append(("comp1", f, g, name1[ones[f] ^ ones[g]]))
    cells2 = [f"{f}{i}" for f in ones for i in (0, 1)]
    for x, y in product(cells2, repeat=2):
        if x[0] == y[0]:
            rows.append(("vcomp", x, y, f"{x[0]}{_bit(x) ^ _bit(y)}"))
        rows.append(("hcomp", x, y, f"{name1[ones[x[0]] ^ ones[y[0]]]}{_bit(x) ^ _bit(y)}"))
    for f, g, h in product(ones, repeat=3):
        fgh = name1[ones[f] ^ ones[g] ^ ones[h]]
        rows.append(("con", "a", f, g, h, f"{fgh}{ones[f] & ones[g] & ones[h]}"))
    for f in ones:
        flip = int(perturb_left_unitor and f == "x")
        rows.append(("con", "l", f, f"{f}{flip}"))
        rows.append(("con", "r", f, f"{f}0"))
    return Signature(BICATEGORY, objects=(POINT,), table=Table.from_rows(rows))


def trivial_bicategory() -> Signature:
    """One object, one 1-cell, one 2-cell; every entry is the identity."""
    rows = [
        ("cell1", "u", POINT, POINT),
        ("cell2", "p", "u", "u"),
        ("unit1", POINT, "u"),
        ("comp1", "u", "u", "u"),
        ("unit2", "u", "p"),
        ("vcomp", "p", "p", "p"),
        ("hcomp", "p", "p", "p"),
        ("con", "a", "u", "u", "u", "p"),
        ("con", "l", "u", "p"),
        ("con", "r", "u", "p"),
    ]
    return Signature(BICATEGORY, objects=(POINT,), table=Table.from_rows(rows))


def cell3_name(src: int, tgt: int, tag: int) -> str:
    return f"c{src}{tgt}{tag}"


def strict_tricategory(swap_hcomp: bool = False) -> Signature:
    """One object, one 1-cell ``u``, 2-cells ``p0``, ``p1`` and 3-cells ``c<s><t><g>``.

    Every composition adds indices mod 2 and every constraint is an identity.
    With ``swap_hcomp`` the horizontal composite of 2-cells is post-composed
    with the swap ``p0 <-> p1``, which no longer makes a magmoid.
    """
    rows: list[tuple[str, ...]] = [
        ("cell1", "u", POINT, POINT),
        ("unit1", POINT, "u"),
        ("comp1", "u", "u", "u"),
        ("unit2", "u", "p0"),
    ]
    for i in (0, 1):
        rows.append(("cell2", f"p{i}", "u", "u"))
        rows.append(("unit3", f"p{i}", cell3_name(i, i, 0)))
    for i, j in product((0, 1), repeat=2):
        rows.append(("vcomp", f"p{i}", f"p{j}", f"p{i ^ j}"))
        rows.append(("hcomp", f"p{i}", f"p{j}", f"p{i ^ j ^ int(swap_hcomp)}"))
    cells3 = list(product((0, 1), repeat=3))
    for s, t, g in cells3:
        rows.append(("cell3", cell3_name(s, t, g), f"p{s}", f"p{t}"))
    for (s1, t1, g1), (s2, t2, g2) in product(cells3, repeat=2):
        if s1 == t2:
            rows.append(("comp3", cell3_name(s1, t1, g1), cell3_name(s2, t2, g2), cell3_name(s2, t1, g1 ^ g2)))
        combo = cell3_name(s1 ^ s2, t1 ^ t2, g1 ^ g2)
        rows.append(("star3", cell3_name(s1, t1, g1), cell3_name(s2, t2, g2), combo))
        rows.append(("tens3", cell3_name(s1, t1, g1), cell3_name(s2, t2, g2), combo))
    for head in ("a", "aadj"):
        rows.append(("con", head, "u", "u", "u", "p0"))
    for head in ("l", "ladj", "r", "radj"):
        rows.append(("con", head, "u", "p0"))
    rows.append(("con", "i", POINT, "p0"))
    for head, kinds in HEADS3.items():
        choices = [{"O": [POINT], "1": ["u"], "2": ["p0", "p1"]}[k] for k in kinds]
        for args in product(*choices):
            # Every 3-level head is the identity on its source.
            bit = _source_bit(head, args)
            rows.append(("con", head, *args, cell3_name(bit, bit, 0)))
    return Signature(TRICATEGORY, objects=(POINT,), table=Table.from_rows(rows))


def _source_bit(head: str, args: tuple[str, ...]) -> int:
    """Index of the source 2-cell of a 3-level head in the additive instance.

    Constraint 2-cells and units all evaluate to ``p0``, so the source is the
    sum of the 2-cell indices, counted once per occurrence.
    """
    bits = [_bit(a) for a in args if a in ("p0", "p1")]
    if head in ("aloc", "a2", "aadj2", "phix"):
        return sum(bits) % 2
    if head in ("lloc", "rloc", "l2", "ladj2", "r2", "radj2"):
        return bits[0]
    return 0
