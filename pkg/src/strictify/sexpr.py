"""A small s-expression reader with source positions and `;` line comments."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

_DELIMS = set("();")


@dataclass(frozen=True)
class Symbol:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Symbol):
            return self.items[0].name
        return None


SExpr = Symbol | SList


def _tokens(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            i += 1
            col += 1
        else:
            start, start_col = i, col
            while i < n and not text[i].isspace() and text[i] not in _DELIMS:
                i += 1
                col += 1
            yield text[start:i], line, start_col


def parse_all(text: str) -> list[SExpr]:
    """Read every top-level form in ``text``."""
    stack: list[tuple[list, int, int]] = []
    out: list[SExpr] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unmatched ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
        else:
            node = Symbol(tok, line, col)
            (stack[-1][0] if stack else out).append(node)
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unclosed '('", l0, c0)
    return out


def parse_one(text: str) -> SExpr:
    forms = parse_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}", 1, 1)
    return forms[0]


def dump(x: SExpr) -> str:
    if isinstance(x, Symbol):
        return x.name
    return "(" + " ".join(dump(i) for i in x.items) + ")"


def position(x: SExpr) -> tuple[int, int]:
    return x.line, x.column
