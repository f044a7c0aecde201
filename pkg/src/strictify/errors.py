"""Error codes shared by every kernel module."""

from __future__ import annotations

E_PARSE = "E_PARSE"
E_ILL_TYPED = "E_ILL_TYPED"
E_DUP_NAME = "E_DUP_NAME"
E_TABLE_INCOMPLETE = "E_TABLE_INCOMPLETE"
E_AXIOM_VIOLATION = "E_AXIOM_VIOLATION"
E_NOT_PARALLEL = "E_NOT_PARALLEL"
E_NOT_COHERENCE = "E_NOT_COHERENCE"
E_ORACLE_FUEL = "E_ORACLE_FUEL"
E_MISSING_GENERATOR = "E_MISSING_GENERATOR"
E_NOT_MAGMOID = "E_NOT_MAGMOID"
E_CONSTRAINT_NOT_PRESERVED = "E_CONSTRAINT_NOT_PRESERVED"
E_OVERLAP = "E_OVERLAP"
E_INDEX = "E_INDEX"
E_NO_MATCH = "E_NO_MATCH"
E_NOT_CONSECUTIVE = "E_NOT_CONSECUTIVE"
E_BUDGET = "E_BUDGET"


class KernelError(Exception):
    """A failure carrying one of the error codes above."""

    def __init__(self, code: str, message: str, *, detail: object = None) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.detail = detail


class ParseError(KernelError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(E_PARSE, f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


def ill_typed(message: str, *, expected: object = None, found: object = None) -> KernelError:
    detail = None
    if expected is not None or found is not None:
        detail = {"expected": str(expected), "found": str(found)}
        message = f"{message} (expected {expected}, found {found})"
    return KernelError(E_ILL_TYPED, message, detail=detail)
