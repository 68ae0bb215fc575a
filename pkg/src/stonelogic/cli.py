"""Command-line interface.

Exit codes: 0 valid / success, 1 invalid / countermodel found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import io
from .algebra import (
    FOUR,
    THREE_DUAL,
    THREE_PSEUDO,
    AlgebraStructure,
    boolean_algebra,
    canonical_iso,
    classify,
    interval_power,
    named_algebra,
)
from .errors import StoneLogicError
from .lattice import chain, is_bounded_distributive
from .logic.formula import parse_sequent, signature
from .logic.semantics import MAX_VALUATIONS, order_valid, preserve_valid, rs_valid
from .proofs import calculus, check_derivation, parse_derivation, soundness_audit
from .roughset import representation_space, rough_sets, rs_algebra

LOGICS = {
    "LS": ("L_S", THREE_PSEUDO, "pseudo"),
    "LDS": ("L_DS", THREE_DUAL, "dual"),
    "LDBS": ("L_DBS", FOUR, None),
}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _limit(args) -> Optional[int]:
    return None if args.no_limit else args.max_valuations


def _verdict_lines(v, A: AlgebraStructure) -> list[str]:
    if v.valid:
        return ["VALID"]
    lines = ["INVALID"]
    cm = v.countermodel.describe() if v.countermodel is not None else ""
    lines.append(f"countermodel {cm}".rstrip())
    if v.point is not None:
        lines.append(f"point {v.point}")
    names = v.countermodel.target.names if v.countermodel is not None else A.names
    if v.lhs_value is not None:
        lines.append(f"values lhs={names[v.lhs_value]} rhs={names[v.rhs_value]}")
    return lines


def _figure(args, A, title: str) -> None:
    if getattr(args, "figure", None):
        from .plotting import draw_hasse

        draw_hasse(A, args.figure, title)


def _dot(args, A, name: str) -> None:
    if getattr(args, "dot", None):
        _write(args.dot, io.to_dot(A, name))


# subcommands ------------------------------------------------------------------------


def cmd_check(args) -> int:
    cname, generator, rs_variant = LOGICS[args.logic]
    s = parse_sequent(args.sequent)
    allowed = calculus(cname).signature
    extra = signature(s) - allowed
    if extra:
        raise UsageError(f"connective {''.join(sorted(extra))} is not in the language of {args.logic}")
    if args.semantics == "order":
        v = order_valid(s, generator, _limit(args))
        A = generator
    elif args.semantics == "roughset":
        if rs_variant is None:
            raise UsageError("rough-set semantics is defined for LS and LDS only")
        if args.space:
            space = io.load_space(_read(args.space))
        else:
            space, _ = representation_space(["x", "y"])
        v = rs_valid(space, s, rs_variant, _limit(args))
        A = rs_algebra(space, rs_variant)
    else:
        v = preserve_valid(s, generator, args.semantics, _limit(args))
        A = generator
    print(f"logic {args.logic} semantics {args.semantics} in {A.name}")
    print("\n".join(_verdict_lines(v, A)))
    return 0 if v.valid else 1


def _load_algebra(spec: str) -> AlgebraStructure:
    try:
        return named_algebra(spec)
    except KeyError:
        pass
    return io.load_lattice(_read(spec))


def cmd_countermodel(args) -> int:
    A = _load_algebra(args.algebra)
    s = parse_sequent(args.sequent)
    v = order_valid(s, A, _limit(args))
    if v.valid:
        print(f"no countermodel in {A.name or args.algebra}")
        return 0
    print("\n".join(_verdict_lines(v, A)[1:]))
    return 1


def _built(args) -> AlgebraStructure:
    n = args.size
    if n < 0:
        raise UsageError("size must be non-negative")
    if args.kind == "boolean":
        return classify(boolean_algebra(n).lattice, f"2^{n}")
    if args.kind == "b2":
        return interval_power(boolean_algebra(n), 2)
    if args.kind == "b3":
        return interval_power(boolean_algebra(n), 3)
    if n < 1:
        raise UsageError("a chain needs at least one element")
    return classify(chain(n), f"chain {n}")


def cmd_algebra_build(args) -> int:
    A = _built(args)
    text = io.dump_lattice(A)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    _dot(args, A, A.name)
    _figure(args, A, A.name)
    return 0


def classification_lines(A: AlgebraStructure) -> list[str]:
    yn = lambda b: "yes" if b else "no"  # noqa: E731
    if A.is_double_stone:
        verdict = "double Stone algebra"
    elif A.is_stone:
        verdict = "Stone algebra"
    elif A.is_dual_stone:
        verdict = "dual Stone algebra"
    else:
        verdict = "none of Stone, dual Stone, double Stone"
    return [
        f"elements {A.size}",
        f"distributive {yn(is_bounded_distributive(A.lattice))}",
        f"pseudocomplemented {yn(A.pseudo_neg is not None)}",
        f"dual-pseudocomplemented {yn(A.dual_neg is not None)}",
        f"stone {yn(A.is_stone)}",
        f"dual-stone {yn(A.is_dual_stone)}",
        f"double-stone {yn(A.is_double_stone)}",
        f"verdict {verdict}",
    ]


def cmd_algebra_classify(args) -> int:
    A = io.load_lattice(_read(args.file))
    print("\n".join(classification_lines(A)))
    _dot(args, A, A.name or "lattice")
    _figure(args, A, A.name)
    return 0


def cmd_iso(args) -> int:
    n = 2 if args.kind == "three-two" else 3
    base = 3 if n == 2 else 4
    I = args.index_size
    if I < 0:
        raise UsageError("index set size must be non-negative")
    try:
        m = canonical_iso(I, n)
    except StoneLogicError as e:
        print(f"NOT ISO {base}^{I} -> (2^{I})^[{n}]: {e}")
        return 1
    what = "Stone and dual Stone" if n == 2 else "double Stone"
    print(f"VALID ISO {base}^{I} -> (2^{I})^[{n}] as {what} algebras, {m.source.size} elements")
    for a, b in m.labelled():
        print(f"{a} -> {b}")
    return 0


def cmd_roughset(args) -> int:
    space = io.load_space(_read(args.space))
    if args.action == "list":
        pairs = rough_sets(space)
        for p in pairs:
            print(space.describe_pair(p))
        print(f"count {len(pairs)}")
        return 0
    A = rs_algebra(space, args.variant)
    sys.stdout.write(io.dump_lattice(A))
    _dot(args, A, A.name)
    _figure(args, A, A.name)
    return 0


def cmd_audit(args) -> int:
    c = calculus(args.logic, args.variant)
    A = named_algebra(args.algebra) if args.algebra else c.generator
    report = soundness_audit(c, A, args.depth, args.vars)
    sys.stdout.write(report.format())
    return 0 if report.sound else 1


def cmd_prove_check(args) -> int:
    c = calculus(args.logic, args.variant)
    d = parse_derivation(_read(args.file))
    r = check_derivation(c, d)
    print(r.describe())
    if r.ok and d.conclusion is not None:
        print(f"proves {d.conclusion}")
    return 0 if r.ok else 1


# parser --------------------------------------------------------------------------------


def _limit_flags(p):
    p.add_argument("--max-valuations", type=int, default=MAX_VALUATIONS, help="refuse larger enumerations")
    p.add_argument("--no-limit", action="store_true", help="lift the valuation guard")


def _export_flags(p):
    p.add_argument("--dot", metavar="FILE", help="write a DOT Hasse diagram")
    p.add_argument("--figure", metavar="FILE", help="render the Hasse diagram (png, pdf, svg)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stonelogic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a sequent in one of the logics")
    p.add_argument("--logic", required=True, choices=sorted(LOGICS))
    p.add_argument("--semantics", default="order", choices=["order", "truth", "falsity", "both", "roughset"])
    p.add_argument("--space", metavar="FILE", help="approximation space for --semantics roughset")
    _limit_flags(p)
    p.add_argument("sequent")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("countermodel", help="least countermodel to order validity")
    p.add_argument("--algebra", default="4", help="1, 2, 3, 3s, 3d, 4 or a lattice file")
    _limit_flags(p)
    p.add_argument("sequent")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("algebra", help="build or classify finite algebras")
    asub = p.add_subparsers(dest="action", required=True)
    b = asub.add_parser("build")
    b.add_argument("kind", choices=["boolean", "b2", "b3", "chain"])
    b.add_argument("size", type=int)
    b.add_argument("-o", "--output", metavar="FILE")
    _export_flags(b)
    b.set_defaults(func=cmd_algebra_build)
    c = asub.add_parser("classify")
    c.add_argument("file")
    _export_flags(c)
    c.set_defaults(func=cmd_algebra_classify)

    p = sub.add_parser("iso", help="verify 3^I = (2^I)^[2] or 4^I = (2^I)^[3]")
    p.add_argument("kind", choices=["three-two", "four-three"])
    p.add_argument("index_size", type=int)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("roughset", help="rough sets of an approximation space")
    p.add_argument("--space", required=True, metavar="FILE")
    rsub = p.add_subparsers(dest="action", required=True)
    rsub.add_parser("list")
    r = rsub.add_parser("algebra")
    r.add_argument("variant", choices=["pseudo", "dual", "double"])
    _export_flags(r)
    p.set_defaults(func=cmd_roughset)

    p = sub.add_parser("audit", help="soundness audit of a calculus")
    p.add_argument("--logic", required=True, help="DLL, BDLL, LS, LDS or LDBS")
    p.add_argument("--variant", default="corrected", choices=["as-written", "corrected"])
    p.add_argument("--algebra", choices=["2", "3", "3s", "3d", "4"])
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--vars", type=int, default=2)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("prove-check", help="check a derivation file")
    p.add_argument("--logic", required=True)
    p.add_argument("--variant", default="corrected", choices=["as-written", "corrected"])
    p.add_argument("file")
    p.set_defaults(func=cmd_prove_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, StoneLogicError, OSError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
