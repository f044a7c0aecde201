"""Finite composition and constraint tables for tabulated base instances.

A table is a fully explicit small bicategory or tricategory.  Objects are the
signature's objects; generators are interpreted through ``map1``/``map2``/
``map3`` rows (a generator whose name is itself a table cell maps to it).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import E_TABLE_INCOMPLETE, KernelError, ParseError
from .sexpr import SList, Symbol, position

# Row kinds and their arities (number of symbol arguments).
ROW_ARITY = {
    "cell1": 3,
    "cell2": 3,
    "cell3": 3,
    "unit1": 2,
    "comp1": 3,
    "unit2": 2,
    "vcomp": 3,
    "hcomp": 3,
    "unit3": 2,
    "comp3": 3,
    "star3": 3,
    "tens3": 3,
    "map1": 2,
    "map2": 2,
    "map3": 2,
}


def _missing(what: str, key) -> KernelError:
    return KernelError(E_TABLE_INCOMPLETE, f"no table entry for {what} {key}")


@dataclass
class Table:
    rows: list[tuple[str, ...]] = field(default_factory=list)
    cells1: dict[str, tuple[str, str]] = field(default_factory=dict)
    cells2: dict[str, tuple[str, str]] = field(default_factory=dict)
    cells3: dict[str, tuple[str, str]] = field(default_factory=dict)
    unit1_: dict[str, str] = field(default_factory=dict)
    comp1_: dict[tuple[str, str], str] = field(default_factory=dict)
    unit2_: dict[str, str] = field(default_factory=dict)
    vcomp_: dict[tuple[str, str], str] = field(default_factory=dict)
    hcomp_: dict[tuple[str, str], str] = field(default_factory=dict)
    unit3_: dict[str, str] = field(default_factory=dict)
    comp3_: dict[tuple[str, str], str] = field(default_factory=dict)
    star3_: dict[tuple[str, str], str] = field(default_factory=dict)
    tens3_: dict[tuple[str, str], str] = field(default_factory=dict)
    con_: dict[tuple, str] = field(default_factory=dict)
    map1: dict[str, str] = field(default_factory=dict)
    map2: dict[str, str] = field(default_factory=dict)
    map3: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows) -> "Table":
        t = cls()
        for row in rows:
            t.add(tuple(row))
        return t

    def add(self, row: tuple[str, ...]) -> None:
        kind, args = row[0], row[1:]
        self.rows.append(row)
        if kind == "con":
            self.con_[(args[0], tuple(args[1:-1]))] = args[-1]
            return
        target = {
            "cell1": self.cells1,
            "cell2": self.cells2,
            "cell3": self.cells3,
        }.get(kind)
        if target is not None:
            target[args[0]] = (args[1], args[2])
            return
        if kind in ("unit1", "unit2", "unit3", "map1", "map2", "map3"):
            getattr(self, kind if kind.startswith("map") else kind + "_")[args[0]] = args[1]
            return
        getattr(self, kind + "_")[(args[0], args[1])] = args[2]

    # lookups ------------------------------------------------------------

    def unit1(self, obj: str) -> str:
        try:
            return self.unit1_[obj]
        except KeyError:
            raise _missing("unit1", obj) from None

    def comp1(self, f: str, g: str) -> str:
        try:
            return self.comp1_[(f, g)]
        except KeyError:
            raise _missing("comp1", (f, g)) from None

    def unit2(self, f: str) -> str:
        try:
            return self.unit2_[f]
        except KeyError:
            raise _missing("unit2", f) from None

    def vcomp(self, x: str, y: str) -> str:
        try:
            return self.vcomp_[(x, y)]
        except KeyError:
            raise _missing("vcomp", (x, y)) from None

    def hcomp(self, x: str, y: str) -> str:
        try:
            return self.hcomp_[(x, y)]
        except KeyError:
            raise _missing("hcomp", (x, y)) from None

    def unit3(self, x: str) -> str:
        try:
            return self.unit3_[x]
        except KeyError:
            raise _missing("unit3", x) from None

    def comp3(self, x: str, y: str) -> str:
        try:
            return self.comp3_[(x, y)]
        except KeyError:
            raise _missing("comp3", (x, y)) from None

    def star3(self, x: str, y: str) -> str:
        try:
            return self.star3_[(x, y)]
        except KeyError:
            raise _missing("star3", (x, y)) from None

    def tens3(self, x: str, y: str) -> str:
        try:
            return self.tens3_[(x, y)]
        except KeyError:
            raise _missing("tens3", (x, y)) from None

    def con(self, head: str, args: tuple) -> str:
        try:
            return self.con_[(head, tuple(args))]
        except KeyError:
            raise _missing(head, args) from None

    def inverse2(self, x: str) -> str:
        s, t = self.cells2[x]
        for y, (s2, t2) in self.cells2.items():
            if s2 == t and t2 == s:
                if self.vcomp_.get((x, y)) == self.unit2_.get(s) and self.vcomp_.get((y, x)) == self.unit2_.get(t):
                    return y
        raise KernelError(E_TABLE_INCOMPLETE, f"2-cell {x} has no inverse in the table")

    def inverse3(self, x: str) -> str:
        s, t = self.cells3[x]
        for y, (s2, t2) in self.cells3.items():
            if s2 == t and t2 == s:
                if self.comp3_.get((x, y)) == self.unit3_.get(s) and self.comp3_.get((y, x)) == self.unit3_.get(t):
                    return y
        raise KernelError(E_TABLE_INCOMPLETE, f"3-cell {x} has no inverse in the table")

    # I/O ----------------------------------------------------------------

    def to_sexpr(self) -> str:
        lines = ["(table"]
        for row in self.rows:
            lines.append("  (" + " ".join(row) + ")")
        return "\n".join(lines) + ")"


def read_table(x: SList) -> Table:
    rows = []
    for item in x.items[1:]:
        if not isinstance(item, SList) or item.head is None:
            line, col = position(item)
            raise ParseError("malformed table row", line, col)
        kind = item.head
        args = []
        for a in item.items[1:]:
            if not isinstance(a, Symbol):
                line, col = position(a)
                raise ParseError("table rows take symbols only", line, col)
            args.append(a.name)
        if kind == "con":
            if len(args) < 2:
                raise ParseError("con row needs a head and a result", item.line, item.column)
        elif kind not in ROW_ARITY:
            raise ParseError(f"unknown table row {kind!r}", item.line, item.column)
        elif len(args) != ROW_ARITY[kind]:
            raise ParseError(f"table row {kind!r} takes {ROW_ARITY[kind]} arguments", item.line, item.column)
        rows.append((kind, *args))
    return Table.from_rows(rows)
