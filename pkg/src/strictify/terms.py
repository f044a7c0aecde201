"""Syntax trees for 1-, 2- and 3-terms and their s-expression form.

Composition is applicative throughout: in ``(o X Y)`` and ``(v X Y)`` the
right operand is applied first, so ``X`` sits on the target side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .sexpr import SExpr, SList, Symbol, parse_one, position

# Term1 -------------------------------------------------------------------


@dataclass(frozen=True)
class Gen1:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Unit1:
    obj: str

    def __str__(self) -> str:
        return f"(u {self.obj})"


@dataclass(frozen=True)
class Comp1:
    left: "Term1"
    right: "Term1"

    def __str__(self) -> str:
        return f"(o {self.left} {self.right})"


Term1 = Gen1 | Unit1 | Comp1

# Term2 -------------------------------------------------------------------

# Argument kinds: "1" a 1-term, "2" a 2-term, "O" an object name.
HEADS2_BICAT = {"a": "111", "ainv": "111", "l": "1", "linv": "1", "r": "1", "rinv": "1"}
HEADS2_TRICAT = {"a": "111", "aadj": "111", "l": "1", "ladj": "1", "r": "1", "radj": "1", "i": "O"}
HEADS2 = {**HEADS2_BICAT, **HEADS2_TRICAT}


@dataclass(frozen=True)
class Gen2:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Cell2:
    """A basic triple: a named base 2-cell with explicit formal boundary."""

    name: str
    src: Term1
    tgt: Term1

    def __str__(self) -> str:
        return f"(cell {self.name} {self.src} {self.tgt})"


@dataclass(frozen=True)
class Id2:
    over: Term1

    def __str__(self) -> str:
        return f"(id {self.over})"


@dataclass(frozen=True)
class Con2:
    head: str
    args: tuple

    def __str__(self) -> str:
        return "(" + " ".join([self.head, *map(str, self.args)]) + ")"


@dataclass(frozen=True)
class HComp2:
    left: "Term2"
    right: "Term2"

    def __str__(self) -> str:
        return f"(o {self.left} {self.right})"


@dataclass(frozen=True)
class VComp2:
    left: "Term2"
    right: "Term2"

    def __str__(self) -> str:
        return f"(v {self.left} {self.right})"


Term2 = Gen2 | Cell2 | Id2 | Con2 | HComp2 | VComp2

# Term3 -------------------------------------------------------------------

HEADS3 = {
    "phi": "O",
    "phix": "2222",
    "phiu": "11",
    "a2": "222",
    "aadj2": "222",
    "l2": "2",
    "ladj2": "2",
    "r2": "2",
    "radj2": "2",
    "etaa": "111",
    "epsa": "111",
    "etal": "1",
    "epsl": "1",
    "etar": "1",
    "epsr": "1",
    "pi": "1111",
    "mu": "11",
    "lam": "11",
    "rho": "11",
    "aloc": "222",
    "lloc": "2",
    "rloc": "2",
}


@dataclass(frozen=True)
class Gen3:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Cell3:
    name: str
    src: Term2
    tgt: Term2

    def __str__(self) -> str:
        return f"(cell3 {self.name} {self.src} {self.tgt})"


@dataclass(frozen=True)
class Id3:
    over: Term2

    def __str__(self) -> str:
        return f"(id2 {self.over})"


@dataclass(frozen=True)
class Con3:
    head: str
    args: tuple

    def __str__(self) -> str:
        return "(" + " ".join([self.head, *map(str, self.args)]) + ")"


@dataclass(frozen=True)
class Inv3:
    body: "Term3"

    def __str__(self) -> str:
        return f"(inv {self.body})"


@dataclass(frozen=True)
class Tens3:
    left: "Term3"
    right: "Term3"

    def __str__(self) -> str:
        return f"(o {self.left} {self.right})"


@dataclass(frozen=True)
class Star3:
    left: "Term3"
    right: "Term3"

    def __str__(self) -> str:
        return f"(h {self.left} {self.right})"


@dataclass(frozen=True)
class Comp3:
    left: "Term3"
    right: "Term3"

    def __str__(self) -> str:
        return f"(c {self.left} {self.right})"


Term3 = Gen3 | Cell3 | Id3 | Con3 | Inv3 | Tens3 | Star3 | Comp3

# Reading -----------------------------------------------------------------


def _fail(x: SExpr, msg: str) -> ParseError:
    line, col = position(x)
    return ParseError(msg, line, col)


def _sym(x: SExpr, what: str) -> str:
    if not isinstance(x, Symbol):
        raise _fail(x, f"expected {what}")
    return x.name


def _expect(x: SList, n: int) -> None:
    if len(x) != n + 1:
        raise _fail(x, f"'{x.head}' takes {n} argument(s), got {len(x) - 1}")


def read_term1(x: SExpr) -> Term1:
    if isinstance(x, Symbol):
        return Gen1(x.name)
    head = x.head
    if head == "u":
        _expect(x, 1)
        return Unit1(_sym(x[1], "object name"))
    if head == "o":
        _expect(x, 2)
        return Comp1(read_term1(x[1]), read_term1(x[2]))
    raise _fail(x, f"unknown 1-term head {head!r}")


def _read_args(x: SList, kinds: str, reader2=None) -> tuple:
    _expect(x, len(kinds))
    out = []
    for k, a in zip(kinds, x.items[1:]):
        if k == "1":
            out.append(read_term1(a))
        elif k == "2":
            out.append(read_term2(a))
        else:
            out.append(_sym(a, "object name"))
    return tuple(out)


def read_term2(x: SExpr) -> Term2:
    if isinstance(x, Symbol):
        return Gen2(x.name)
    head = x.head
    if head == "id":
        _expect(x, 1)
        return Id2(read_term1(x[1]))
    if head == "o":
        _expect(x, 2)
        return HComp2(read_term2(x[1]), read_term2(x[2]))
    if head == "v":
        _expect(x, 2)
        return VComp2(read_term2(x[1]), read_term2(x[2]))
    if head == "cell":
        _expect(x, 3)
        return Cell2(_sym(x[1], "cell name"), read_term1(x[2]), read_term1(x[3]))
    if head in HEADS2:
        return Con2(head, _read_args(x, HEADS2[head]))
    raise _fail(x, f"unknown 2-term head {head!r}")


def read_term3(x: SExpr) -> Term3:
    if isinstance(x, Symbol):
        return Gen3(x.name)
    head = x.head
    if head == "id2":
        _expect(x, 1)
        return Id3(read_term2(x[1]))
    if head in ("o", "h", "c"):
        _expect(x, 2)
        cls = {"o": Tens3, "h": Star3, "c": Comp3}[head]
        return cls(read_term3(x[1]), read_term3(x[2]))
    if head == "inv":
        _expect(x, 1)
        return Inv3(read_term3(x[1]))
    if head == "cell3":
        _expect(x, 3)
        return Cell3(_sym(x[1], "cell name"), read_term2(x[2]), read_term2(x[3]))
    if head in HEADS3:
        return Con3(head, _read_args(x, HEADS3[head]))
    raise _fail(x, f"unknown 3-term head {head!r}")


def parse_term1(text: str) -> Term1:
    return read_term1(parse_one(text))


def parse_term2(text: str) -> Term2:
    return read_term2(parse_one(text))


def parse_term3(text: str) -> Term3:
    return read_term3(parse_one(text))


def term_size(t) -> int:
    """Node count, used by generators and shrinking."""
    if isinstance(t, (Comp1, HComp2, VComp2, Tens3, Star3, Comp3)):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, Inv3):
        return 1 + term_size(t.body)
    if isinstance(t, (Con2, Con3)):
        return 1 + sum(term_size(a) for a in t.args if not isinstance(a, str))
    return 1
