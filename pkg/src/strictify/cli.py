"""Command-line entry point.

Exit codes: 0 equal/valid/success, 1 not-equal or invalid, 2 parse error,
3 ill-typed, 4 unknown (fuel or budget), 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .bicat_strict import Verdict, check_eq2, snake_report, strictify2
from .bicat_terms import canonical_coherence, flatten1
from .config import default_fuel
from .demo import biadjunction_report, biadjunction_signature
from .errors import (
    E_AXIOM_VIOLATION,
    E_BUDGET,
    E_ILL_TYPED,
    E_MISSING_GENERATOR,
    E_NOT_COHERENCE,
    E_NOT_PARALLEL,
    E_ORACLE_FUEL,
    E_PARSE,
    E_TABLE_INCOMPLETE,
    KernelError,
)
from .gray_rewrite import render
from .oracle import PASSES, SearchBudget, enumerate_coherence, interchange_orbit, sample_functoriality
from .signature import parse_signature, validate_tables
from .terms import parse_term1, parse_term2, parse_term3
from .tricat_strict import check_eq3, gray_nf2_trace

EXIT_OK, EXIT_NOT_EQUAL, EXIT_PARSE, EXIT_ILL_TYPED, EXIT_UNKNOWN, EXIT_INTERNAL = range(6)

EXIT_FOR_CODE = {
    E_PARSE: EXIT_PARSE,
    E_ILL_TYPED: EXIT_ILL_TYPED,
    E_NOT_PARALLEL: EXIT_ILL_TYPED,
    E_NOT_COHERENCE: EXIT_ILL_TYPED,
    E_MISSING_GENERATOR: EXIT_ILL_TYPED,
    E_BUDGET: EXIT_UNKNOWN,
    E_ORACLE_FUEL: EXIT_UNKNOWN,
    E_AXIOM_VIOLATION: EXIT_NOT_EQUAL,
    E_TABLE_INCOMPLETE: EXIT_NOT_EQUAL,
}

VERDICT_EXIT = {Verdict.EQUAL: EXIT_OK, Verdict.NOT_EQUAL: EXIT_NOT_EQUAL, Verdict.UNKNOWN: EXIT_UNKNOWN}


class Output:
    def __init__(self, fmt: str, out) -> None:
        self.fmt = fmt
        self.out = out

    def emit(self, data, text: str) -> None:
        if self.fmt == "json":
            self.out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
        else:
            self.out.write(text.rstrip("\n") + "\n")


def _read_text(arg: str) -> str:
    p = Path(arg)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    return arg


def _sig(path: str):
    return parse_signature(Path(path).read_text(encoding="utf-8"))


def _corpus(root: str | None) -> Path:
    if root is not None:
        return Path(root)
    return Path(str(resources.files("strictify") / "corpus"))


# Subcommands -----------------------------------------------------------------------


def cmd_check(args, out: Output) -> int:
    sig = _sig(args.sig)
    data = {
        "level": sig.level,
        "objects": len(sig.objects),
        "gens1": len(sig.gens1),
        "gens2": len(sig.gens2),
        "gens3": len(sig.gens3),
        "valid": True,
    }
    if sig.table is not None:
        data["tables"] = validate_tables(sig).to_json()
    out.emit(data, f"valid {sig.level} signature")
    return EXIT_OK


def cmd_nf1(args, out: Output) -> int:
    sig = _sig(args.sig)
    path = flatten1(sig, parse_term1(_read_text(args.term)))
    out.emit(path.to_json(), str(path))
    return EXIT_OK


def cmd_witness(args, out: Output) -> int:
    sig = _sig(args.sig)
    src, tgt = parse_term1(_read_text(args.src)), parse_term1(_read_text(args.tgt))
    w = canonical_coherence(sig, src, tgt)
    out.emit({"src": str(src), "tgt": str(tgt), "witness": str(w)}, str(w))
    return EXIT_OK


def cmd_strictify2(args, out: Output) -> int:
    sig = _sig(args.sig)
    nf = strictify2(sig, parse_term2(_read_text(args.term)))
    out.emit(nf.to_json(), json.dumps(nf.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_gray_nf(args, out: Output) -> int:
    sig = _sig(args.sig)
    t = parse_term2(_read_text(args.term))
    nf, trace = gray_nf2_trace(sig, t)
    if not trace.witness.check(sig):
        print("pipeline witness does not typecheck", file=sys.stderr)
        return EXIT_INTERNAL
    data = {"nf": nf.to_json()}
    if args.trace:
        data["trace"] = trace.to_json()
    out.emit(data if args.trace else nf.to_json(), json.dumps(data, sort_keys=True))
    return EXIT_OK


def cmd_eq(args, out: Output) -> int:
    sig = _sig(args.sig)
    a, b = _read_text(args.a), _read_text(args.b)
    if args.level == 2:
        verdict = check_eq2(sig, parse_term2(a), parse_term2(b), args.fuel)
    else:
        verdict = check_eq3(sig, parse_term3(a), parse_term3(b))
    out.emit({"level": args.level, "verdict": verdict.value}, verdict.value)
    return VERDICT_EXIT[verdict]


def cmd_render(args, out: Output) -> int:
    sig = _sig(args.sig)
    t = parse_term2(_read_text(args.term))
    nf = gray_nf2_trace(sig, t)[0] if sig.is_tricategory else strictify2(sig, t)
    doc = render(nf, args.render_format)
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
        out.emit({"written": args.output}, f"wrote {args.output}")
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_oracle(args, out: Output) -> int:
    if args.oracle == "coherence":
        sig = _sig(args.sig)
        src, tgt = parse_term1(_read_text(args.src)), parse_term1(_read_text(args.tgt))
        budget = SearchBudget(max_size=args.max_size, max_count=args.max_count)
        en = enumerate_coherence(sig, src, tgt, budget)
        data = {**en.to_json(), "terms": [str(x) for x in en.terms]}
        out.emit(data, f"{len(en.terms)} coherence terms in {en.classes} class(es)")
        return EXIT_OK
    if args.oracle == "orbit":
        sig = _sig(args.sig)
        t = parse_term2(_read_text(args.term))
        nf = gray_nf2_trace(sig, t)[0] if sig.is_tricategory else strictify2(sig, t)
        members = sorted(interchange_orbit(nf, args.limit), key=lambda d: d.dumps())
        out.emit({"size": len(members), "members": [d.to_json() for d in members]}, f"orbit size {len(members)}")
        return EXIT_OK
    report = sample_functoriality(args.pass_name, args.n, args.seed)
    text = f"{args.pass_name}: {report.checks} checks, " + (
        "no counterexample" if report.ok else f"counterexample {report.shrunk.term}"
    )
    out.emit(report.to_json(), text)
    return EXIT_OK if report.ok else EXIT_NOT_EQUAL


def cmd_demo(args, out: Output) -> int:
    root = _corpus(args.fixtures)
    if args.demo == "snake":
        reports = {}
        lines = []
        for name in ("adjunction", "adjunction_snake1", "adjunction_both", "adjoint_equivalence"):
            sig = parse_signature((root / "adjunction" / f"{name}.sig").read_text(encoding="utf-8"))
            rep = snake_report(sig, args.fuel)
            reports[name] = rep.to_json()
            lines.append(f"{name}: snake-1 {rep.status('snake-1')}, snake-2 {rep.status('snake-2')}")
        out.emit(reports, "\n".join(lines))
        return EXIT_OK
    sig_path = root / "biadjunction" / "biadjunction.sig"
    sig = parse_signature(sig_path.read_text(encoding="utf-8")) if sig_path.is_file() else biadjunction_signature()
    figures = biadjunction_report(sig)
    ok = all(f.witnesses_check(sig) for f in figures)
    data = {"figures": [f.to_json(trace=args.trace) for f in figures], "witnesses_typecheck": ok}
    lines = [f"{f.name}: {len(f.pasting.steps)} steps, left/right differ by one interchanger" for f in figures]
    out.emit(data, "\n".join(lines))
    return EXIT_OK if ok else EXIT_INTERNAL


# Parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fuel = argparse.ArgumentParser(add_help=False)
    fuel.add_argument("--fuel", type=int, default=None, help="rewrite fuel (default: KERNEL_FUEL)")
    common = argparse.ArgumentParser(add_help=False, parents=[fuel])
    common.add_argument("--format", choices=("json", "text"), default="json", help="output format")

    p = argparse.ArgumentParser(prog="strictify", description="Coherence and strictification kernel.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="parse and validate a signature")
    s.add_argument("sig")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("nf1", parents=[common], help="flatten a 1-term")
    s.add_argument("sig")
    s.add_argument("term")
    s.set_defaults(func=cmd_nf1)

    s = sub.add_parser("witness", parents=[common], help="canonical coherence between 1-terms")
    s.add_argument("sig")
    s.add_argument("src")
    s.add_argument("tgt")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("strictify2", parents=[common], help="strict normal form of a 2-term")
    s.add_argument("sig")
    s.add_argument("term")
    s.set_defaults(func=cmd_strictify2)

    s = sub.add_parser("gray-nf", parents=[common], help="Gray normal form of a 2-term")
    s.add_argument("sig")
    s.add_argument("term")
    s.add_argument("--trace", action="store_true", help="emit per-pass records")
    s.set_defaults(func=cmd_gray_nf)

    s = sub.add_parser("eq", parents=[common], help="decide equality of two terms")
    s.add_argument("sig")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--level", type=int, choices=(2, 3), required=True)
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("render", parents=[fuel], help="draw a normal form")
    s.add_argument("sig")
    s.add_argument("term")
    s.add_argument("--format", dest="render_format", choices=("svg", "tikz"), default="svg")
    s.set_defaults(format="json")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("oracle", help="brute-force cross-checks")
    osub = s.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("coherence", parents=[common])
    o.add_argument("sig")
    o.add_argument("src")
    o.add_argument("tgt")
    o.add_argument("--max-size", type=int, default=6)
    o.add_argument("--max-count", type=int, default=200_000)
    o.set_defaults(func=cmd_oracle)
    o = osub.add_parser("orbit", parents=[common])
    o.add_argument("sig")
    o.add_argument("term")
    o.add_argument("--limit", type=int, default=200_000)
    o.set_defaults(func=cmd_oracle)
    o = osub.add_parser("functoriality", parents=[common])
    o.add_argument("--pass", dest="pass_name", choices=sorted(PASSES), required=True)
    o.add_argument("--n", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("demo", parents=[common], help="bundled corpora")
    s.add_argument("demo", choices=("snake", "biadjunction"))
    s.add_argument("--trace", action="store_true")
    s.add_argument("--fixtures", help="corpus directory (default: bundled copy)")
    s.set_defaults(func=cmd_demo)
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_PARSE
    if getattr(args, "fuel", None) is None:
        args.fuel = default_fuel()
    fmt = "json" if getattr(args, "format", "text") == "json" else "text"
    out = Output(fmt, stdout)
    old = sys.stdout
    sys.stdout = stdout
    try:
        return args.func(args, out)
    except KernelError as err:
        stderr.write(f"error: {err}\n")
        return EXIT_FOR_CODE.get(err.code, EXIT_INTERNAL)
    except (OSError, ValueError) as err:
        stderr.write(f"error: {err}\n")
        return EXIT_PARSE
    except Exception as err:  # noqa: BLE001
        stderr.write(f"internal error: {type(err).__name__}: {err}\n")
        return EXIT_INTERNAL
    finally:
        sys.stdout = old


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
