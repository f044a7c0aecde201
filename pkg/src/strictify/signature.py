"""Presentations of bicategories and tricategories and their on-disk format."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import E_DUP_NAME, E_ILL_TYPED, E_TABLE_INCOMPLETE, KernelError, ParseError
from .sexpr import SExpr, SList, Symbol, parse_all, position
from .tables import Table, read_table
from .terms import Term1, Term2, Term3, read_term1, read_term2, read_term3

BICATEGORY = "bicategory"
TRICATEGORY = "tricategory"


@dataclass(frozen=True)
class Gen1Decl:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Gen2Decl:
    name: str
    src: Term1
    tgt: Term1


@dataclass(frozen=True)
class Gen3Decl:
    name: str
    src: Term2
    tgt: Term2
    invertible: bool = False


@dataclass(frozen=True)
class RuleDecl:
    name: str
    lhs: Term2
    rhs: Term2
    invertible: bool = False


@dataclass(eq=False)
class Signature:
    level: str
    objects: tuple[str, ...] = ()
    gens1: tuple[Gen1Decl, ...] = ()
    gens2: tuple[Gen2Decl, ...] = ()
    gens3: tuple[Gen3Decl, ...] = ()
    rels2: tuple[tuple[Term2, Term2], ...] = ()
    rels3: tuple[tuple[Term3, Term3], ...] = ()
    rules: tuple[RuleDecl, ...] = ()
    table: Table | None = None
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.obj_set = frozenset(self.objects)
        self.g1 = {g.name: g for g in self.gens1}
        self.g2 = {g.name: g for g in self.gens2}
        self.g3 = {g.name: g for g in self.gens3}

    @property
    def is_tricategory(self) -> bool:
        return self.level == TRICATEGORY

    def same_as(self, other: "Signature") -> bool:
        return (
            self.level == other.level
            and self.objects == other.objects
            and self.gens1 == other.gens1
            and self.gens2 == other.gens2
            and self.gens3 == other.gens3
            and self.rels2 == other.rels2
            and self.rels3 == other.rels3
            and self.rules == other.rules
            and (self.table.rows if self.table else None) == (other.table.rows if other.table else None)
        )

    def extend(self, **changes) -> "Signature":
        data = dict(
            level=self.level,
            objects=self.objects,
            gens1=self.gens1,
            gens2=self.gens2,
            gens3=self.gens3,
            rels2=self.rels2,
            rels3=self.rels3,
            rules=self.rules,
            table=self.table,
        )
        data.update(changes)
        sig = Signature(**data)
        check_signature(sig)
        return sig


class OracleMode(Enum):
    FREE = "free"
    FUELED = "fueled-rewrite"
    TABLE = "table-lookup"


@dataclass(frozen=True)
class EqualityOracle:
    """How base-cell equality is decided for a signature."""

    mode: OracleMode
    fuel: int = 0

    @classmethod
    def for_signature(cls, sig: Signature, fuel: int | None = None) -> "EqualityOracle":
        from .config import default_fuel

        if sig.table is not None:
            return cls(OracleMode.TABLE)
        if sig.rels2 or sig.rels3:
            return cls(OracleMode.FUELED, default_fuel() if fuel is None else fuel)
        return cls(OracleMode.FREE)


# Parsing -------------------------------------------------------------------


def _sym(x: SExpr, what: str) -> str:
    if not isinstance(x, Symbol):
        line, col = position(x)
        raise ParseError(f"expected {what}", line, col)
    return x.name


def _arity(x: SList, lo: int, hi: int | None = None) -> None:
    hi = lo if hi is None else hi
    n = len(x) - 1
    if not lo <= n <= hi:
        raise ParseError(f"'{x.head}' takes {lo} argument(s), got {n}", x.line, x.column)


def parse_signature(text: str) -> Signature:
    """Parse and validate one ``(sig2 ...)`` or ``(sig3 ...)`` document."""
    forms = parse_all(text)
    if len(forms) != 1 or not isinstance(forms[0], SList) or forms[0].head not in ("sig2", "sig3"):
        line, col = position(forms[0]) if forms else (1, 1)
        raise ParseError("expected a single (sig2 ...) or (sig3 ...) form", line, col)
    root = forms[0]
    level = BICATEGORY if root.head == "sig2" else TRICATEGORY
    objects, gens1, gens2, gens3, rels2, rels3, rules = [], [], [], [], [], [], []
    table = None
    where: dict[int, SExpr] = {}
    for item in root.items[1:]:
        if not isinstance(item, SList) or item.head is None:
            line, col = position(item)
            raise ParseError("expected a declaration form", line, col)
        head = item.head
        if head == "obj":
            _arity(item, 1)
            objects.append(_sym(item[1], "object name"))
        elif head == "gen1":
            _arity(item, 3)
            gens1.append(Gen1Decl(_sym(item[1], "name"), _sym(item[2], "object"), _sym(item[3], "object")))
            where[id(gens1[-1])] = item
        elif head == "gen2":
            _arity(item, 3)
            gens2.append(Gen2Decl(_sym(item[1], "name"), read_term1(item[2]), read_term1(item[3])))
            where[id(gens2[-1])] = item
        elif head == "gen3":
            _arity(item, 3, 4)
            iso = False
            if len(item) == 5:
                flag = _sym(item[4], "flag")
                if flag != "iso":
                    raise ParseError(f"unknown gen3 flag {flag!r}", item.line, item.column)
                iso = True
            gens3.append(Gen3Decl(_sym(item[1], "name"), read_term2(item[2]), read_term2(item[3]), iso))
            where[id(gens3[-1])] = item
        elif head == "rel2":
            _arity(item, 2)
            rels2.append((read_term2(item[1]), read_term2(item[2])))
            where[id(rels2[-1])] = item
        elif head == "rel3":
            _arity(item, 2)
            rels3.append((read_term3(item[1]), read_term3(item[2])))
            where[id(rels3[-1])] = item
        elif head == "rule":
            _arity(item, 3, 4)
            inv = False
            if len(item) == 5:
                if _sym(item[4], "flag") != "invertible":
                    raise ParseError("unknown rule flag", item.line, item.column)
                inv = True
            rules.append(RuleDecl(_sym(item[1], "name"), read_term2(item[2]), read_term2(item[3]), inv))
            where[id(rules[-1])] = item
        elif head == "table":
            if table is not None:
                raise ParseError("duplicate table", item.line, item.column)
            table = read_table(item)
        else:
            raise ParseError(f"unknown declaration {head!r}", item.line, item.column)
    sig = Signature(
        level=level,
        objects=tuple(objects),
        gens1=tuple(gens1),
        gens2=tuple(gens2),
        gens3=tuple(gens3),
        rels2=tuple(rels2),
        rels3=tuple(rels3),
        rules=tuple(rules),
        table=table,
    )
    check_signature(sig, where)
    return sig


def _located(err: KernelError, form: SExpr | None) -> KernelError:
    if form is None:
        return err
    line, col = position(form)
    out = KernelError(err.code, f"{err.message} at line {line}, column {col}", detail=err.detail)
    return out


def check_signature(sig: Signature, where: dict[int, SExpr] | None = None) -> None:
    """Enforce name uniqueness and globular well-typedness of every declaration."""
    from .bicat_terms import type1, type2

    where = where or {}
    for label, names in (
        ("object", sig.objects),
        ("1-generator", [g.name for g in sig.gens1]),
        ("2-generator", [g.name for g in sig.gens2]),
        ("3-generator", [g.name for g in sig.gens3]),
        ("rule", [r.name for r in sig.rules]),
    ):
        seen = set()
        for n in names:
            if n in seen:
                raise KernelError(E_DUP_NAME, f"duplicate {label} name {n!r}")
            seen.add(n)
    for g in sig.gens1:
        for o in (g.src, g.tgt):
            if o not in sig.obj_set:
                raise _located(KernelError(E_ILL_TYPED, f"1-generator {g.name!r} uses unknown object {o!r}"), where.get(id(g)))
    try:
        for g in sig.gens2:
            cur = g
            if type1(sig, g.src) != type1(sig, g.tgt):
                raise KernelError(E_ILL_TYPED, f"2-generator {g.name!r} has non-parallel boundary {g.src} / {g.tgt}")
        for g in sig.gens3:
            cur = g
            if sig.level != TRICATEGORY:
                raise KernelError(E_ILL_TYPED, "3-generators need a (sig3 ...) signature")
            if type2(sig, g.src) != type2(sig, g.tgt):
                raise KernelError(E_ILL_TYPED, f"3-generator {g.name!r} has non-parallel boundary")
        for rel in sig.rels2:
            cur = rel
            if type2(sig, rel[0]) != type2(sig, rel[1]):
                raise KernelError(E_ILL_TYPED, f"relation {rel[0]} = {rel[1]} is not parallel")
        for rel in sig.rels3:
            cur = rel
            from .tricat_terms import type3

            if type3(sig, rel[0]) != type3(sig, rel[1]):
                raise KernelError(E_ILL_TYPED, f"relation {rel[0]} = {rel[1]} is not parallel")
        for r in sig.rules:
            cur = r
            if type2(sig, r.lhs) != type2(sig, r.rhs):
                from .bicat_terms import flatten1

                ls, lt = type2(sig, r.lhs)
                rs, rt = type2(sig, r.rhs)
                if flatten1(sig, ls) != flatten1(sig, rs) or flatten1(sig, lt) != flatten1(sig, rt):
                    raise KernelError(E_ILL_TYPED, f"rule {r.name!r} has non-parallel sides")
    except KernelError as err:
        if err.code == E_ILL_TYPED:
            raise _located(err, where.get(id(cur))) from None
        raise


# Serialization ---------------------------------------------------------------


def serialize(sig: Signature) -> str:
    head = "sig2" if sig.level == BICATEGORY else "sig3"
    lines = [f"({head}"]
    lines += [f"  (obj {o})" for o in sig.objects]
    lines += [f"  (gen1 {g.name} {g.src} {g.tgt})" for g in sig.gens1]
    lines += [f"  (gen2 {g.name} {g.src} {g.tgt})" for g in sig.gens2]
    lines += [f"  (gen3 {g.name} {g.src} {g.tgt}{' iso' if g.invertible else ''})" for g in sig.gens3]
    lines += [f"  (rel2 {a} {b})" for a, b in sig.rels2]
    lines += [f"  (rel3 {a} {b})" for a, b in sig.rels3]
    lines += [f"  (rule {r.name} {r.lhs} {r.rhs}{' invertible' if r.invertible else ''})" for r in sig.rules]
    if sig.table is not None:
        lines.append("  " + sig.table.to_sexpr().replace("\n", "\n  "))
    return "\n".join(lines) + ")\n"


def validate_tables(sig: Signature):
    """Exhaustively check the axioms on the signature's tables."""
    from .axioms import validate_bicategory_table, validate_tricategory_table

    if sig.table is None:
        raise KernelError(E_TABLE_INCOMPLETE, "signature has no tables")
    if sig.level == BICATEGORY:
        return validate_bicategory_table(sig)
    return validate_tricategory_table(sig)
