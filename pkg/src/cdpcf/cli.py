"""Command-line driver.

Exit codes: 0 success, 1 parse or type error, 2 timeout, 3 machine mismatch
in ``check-sim``.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, TextIO

from .deep import run_deep
from .detmachine import det_run
from .differential import dlet
from .machine import run_term
from .parser import ParseError, load, parse_type
from .printer import show
from .rel import interp_ground
from .rewriting import msrs_step
from .syntax import NAT, Multiset, free_vars, plus_all, ty_str
from .typecheck import TypingError, elaborate, infer

DEFAULT_FUEL = 10_000
DEFAULT_INTERP_FUEL = 1_000

EXIT_OK, EXIT_TYPE, EXIT_TIMEOUT, EXIT_MISMATCH = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _program(path: str, ground: bool = False):
    try:
        prog = load(path)
        term = elaborate(prog.term)
        ty = infer({}, term)
    except ParseError as e:
        raise _Failure(EXIT_TYPE, f"{path}: syntax error: {e}") from e
    except TypingError as e:
        raise _Failure(EXIT_TYPE, f"{path}: type error: {e}") from e
    if ground and ty != NAT:
        raise _Failure(EXIT_TYPE, f"{path}: expected a program of type Nat, found {ty_str(ty)}")
    return term, ty


def _trace_sink(spec: Optional[str], out: TextIO) -> tuple[Optional[Callable[[str], None]], Optional[TextIO]]:
    if spec is None:
        return None, None
    if spec == "-":
        return (lambda line: print(line, file=out)), None
    if spec == "stderr":
        return (lambda line: print(line, file=sys.stderr)), None
    fh = open(spec, "w", encoding="utf-8")
    return (lambda line: print(line, file=fh)), fh


def cmd_typecheck(args, out: TextIO) -> int:
    _, ty = _program(args.file)
    print(ty_str(ty), file=out)
    return EXIT_OK


def cmd_diff(args, out: TextIO) -> int:
    try:
        ctx = {args.var: parse_type(args.var_type)}
        term = load(args.file).term
        term = elaborate(term, ctx if args.var in free_vars(term) else {})
    except (ParseError, TypingError) as e:
        raise _Failure(EXIT_TYPE, f"{args.file}: {e}") from e
    print(show(dlet(args.var, term)), file=out)
    return EXIT_OK


def cmd_reduce(args, out: TextIO) -> int:
    term, ty = _program(args.file)
    state = Multiset([term])
    taken = 0
    while taken < args.steps:
        nxt = msrs_step(state)
        if nxt is None:
            break
        state = nxt
        taken += 1
    print(show(plus_all(state.sorted(), ty)), file=out)
    print(f"steps: {taken}", file=out)
    return EXIT_OK


def _format_result(value: Optional[int]) -> str:
    return "result: zero" if value is None else f"result: {value}"


def cmd_run(args, out: TextIO) -> int:
    term, _ = _program(args.file, ground=True)
    trace, fh = _trace_sink(args.trace, out)
    try:
        if args.machine == "det":
            r = det_run(term, fuel=args.fuel, trace=trace)
            if r.exhausted:
                print("timeout", file=out)
                return EXIT_TIMEOUT
            print(_format_result(r.outcome), file=out)
        else:
            res = run_term(term, fuel=args.fuel, trace=trace)
            if res.exhausted:
                print("timeout", file=out)
                return EXIT_TIMEOUT
            values = sorted(res.results)
            if len(values) > 1:
                print(f"result: several values {values}", file=out)
            else:
                print(_format_result(values[0] if values else None), file=out)
    finally:
        if fh is not None:
            fh.close()
    return EXIT_OK


def cmd_interp(args, out: TextIO) -> int:
    term, _ = _program(args.file, ground=True)
    values = interp_ground(term, args.nu_bound, fuel=args.fuel)
    print("{" + ", ".join(str(v) for v in sorted(values)) + "}", file=out)
    return EXIT_OK


def cmd_check_sim(args, out: TextIO) -> int:
    term, _ = _program(args.file, ground=True)
    d = det_run(term, fuel=args.fuel)
    n = run_term(term, fuel=args.fuel)
    if d.exhausted or n.exhausted:
        print("timeout", file=out)
        return EXIT_TIMEOUT
    nd_values = sorted(n.results)
    nd_value = nd_values[0] if len(nd_values) == 1 else None
    nd_steps = n.successful_steps()
    print(f"det:      {_format_result(d.outcome)} steps={d.steps if d.outcome is not None else '-'}", file=out)
    print(f"multiset: {_format_result(nd_value)} steps={nd_steps if nd_steps is not None else '-'}", file=out)
    same_value = len(nd_values) <= 1 and d.outcome == nd_value
    same_steps = d.outcome is None or d.steps == nd_steps
    if same_value and same_steps:
        print("agree", file=out)
        return EXIT_OK
    print("MISMATCH", file=out)
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdpcf", description="Coherent differential PCF toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("typecheck", help="print the type of a program")
    s.add_argument("file")
    s.set_defaults(func=cmd_typecheck)

    s = sub.add_parser("diff", help="print the differential of a program with respect to a variable")
    s.add_argument("file")
    s.add_argument("--var", required=True)
    s.add_argument("--var-type", default="Nat", help="type of the variable when it occurs free (default Nat)")
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("reduce", help="rewrite with the multiset strategy")
    s.add_argument("file")
    s.add_argument("--steps", type=int, default=100)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("run", help="evaluate a ground program on an abstract machine")
    s.add_argument("file")
    s.add_argument("--machine", choices=("det", "multiset"), default="det")
    s.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    s.add_argument(
        "--trace",
        nargs="?",
        const="stderr",
        default=None,
        metavar="DEST",
        help="write a transition trace to stderr (default), '-' for stdout, or a file",
    )
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("interp", help="values of a ground program in the relational model")
    s.add_argument("file")
    s.add_argument("--nu-bound", type=int, default=20)
    s.add_argument("--fuel", type=int, default=DEFAULT_INTERP_FUEL)
    s.set_defaults(func=cmd_interp)

    s = sub.add_parser("check-sim", help="run both machines and compare result and step count")
    s.add_argument("file")
    s.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    s.set_defaults(func=cmd_check_sim)
    return p


def main(argv: Optional[list[str]] = None, out: TextIO = sys.stdout) -> int:
    args = build_parser().parse_args(argv)

    def go() -> int:
        try:
            return args.func(args, out)
        except _Failure as f:
            print(str(f), file=sys.stderr)
            return f.code
        except OSError as e:
            print(f"cdpcf: {e}", file=sys.stderr)
            return EXIT_TYPE

    return run_deep(go)


if __name__ == "__main__":
    sys.exit(main())
