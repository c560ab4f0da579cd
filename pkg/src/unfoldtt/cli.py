"""Command-line driver: ``unfoldtt {check,elaborate,goals,normalize} FILE``.

Exit codes: 0 on success (including files with open goals), 1 on
elaboration or type errors, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import sys

from unfoldtt import nbe
from unfoldtt.core import syntax as S
from unfoldtt.core.kernel import check_signature
from unfoldtt.core.printer import print_signature, print_telescope, print_term, prop_display_name, telescope_names
from unfoldtt.elab import ElabState, elaborate_source, report_goals
from unfoldtt.errors import (
    AbstractProp,
    AbstractUnfoldTarget,
    ConvMismatch,
    ParseError,
    Span,
    TypeMismatch,
    UnboundName,
    UnfoldError,
    UsageError,
)
from unfoldtt.proplattice import meet_all

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

_RED, _BOLD, _CYAN, _RESET = "\x1b[31m", "\x1b[1m", "\x1b[36m", "\x1b[0m"


class _Style:
    def __init__(self, on: bool):
        self.on = on

    def __call__(self, text: str, *codes: str) -> str:
        return "".join(codes) + text + _RESET if self.on else text


def _location(span: Span, text: str | None) -> str:
    if text is None:
        return span.path
    line, col = span.line_col(text)
    return f"{span.path}:{line}:{col}"


def _excerpt(span: Span, text: str, style: _Style) -> list[str]:
    line, col = span.line_col(text)
    lines = text.split("\n")
    src = lines[line - 1] if line <= len(lines) else ""
    width = max(1, min(span.end - span.start, len(src) - col + 1))
    gutter = " " * len(str(line))
    return [
        f"{gutter} |",
        f"{line} | {src}",
        f"{gutter} | {' ' * (col - 1)}{style('^' * width, _RED)}",
    ]


def format_diagnostic(err: UnfoldError, text: str | None = None, color: bool = False) -> str:
    """Render ``err`` with its source excerpt when ``text`` is available."""
    style = _Style(color)
    lines = [f"{style(f'error[{err.code}]', _RED, _BOLD)}: {err.message}"]
    if err.span is not None:
        lines.append(f"  --> {_location(err.span, text)}")
        if text is not None:
            lines += _excerpt(err.span, text, style)
    match err:
        case ConvMismatch(expected=exp, found=fnd) | TypeMismatch(expected=exp, found=fnd) if exp is not None:
            lines.append(f"  expected: {exp}")
            lines.append(f"     found: {fnd}")
        case ParseError(expected=exp) if exp:
            lines.append(f"  expected one of: {', '.join(exp)}")
        case AbstractUnfoldTarget(name=name, abstract_site=site):
            where = f" at {_location(site, text)}" if site is not None else ""
            lines.append(f"  note: {name} is declared abstract{where}")
    return "\n".join(lines)


def format_goal(state: ElabState, goal, text: str, max_depth=None, raw=False, color=False) -> str:
    style = _Style(color)
    loc = _location(goal.span, text) if goal.span is not None else "<unknown>"
    tele = print_telescope(goal.telescope, state.table)
    ty = goal.raw_type if raw else goal.type
    shown = print_term(ty, telescope_names(goal.telescope), state.table, max_depth)
    name = f"?{goal.label}" if goal.label else f"?{goal.number}"
    return f"{loc} ⊢ {tele} ⊢ {style(name, _CYAN)} : {shown}"


def _assumption(state: ElabState, name: str):
    table = state.table
    key = name.removeprefix("Υ")
    if table.is_hidden(key) or key.startswith("%"):
        raise AbstractProp(f"{prop_display_name(key)} is hidden and cannot be assumed")
    return table.lookup(key)


def normalize_definition(state: ElabState, name: str, assume=()) -> S.Term:
    """Normal form of ``out{Υname} name`` under the conjunction of ``assume``."""
    info = state.defs.get(name)
    if info is None:
        raise UnboundName(f"no definition named {name}")
    hyps = meet_all(_assumption(state, a) for a in assume)
    ext = state.sigenv.const_terms[name]
    ctx = nbe.Ctx.empty(state.sigenv).assume(hyps)
    return nbe.normalize(ctx, ext.ty, S.Out(ext.prop, S.Const(name)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unfoldtt", description="Type theory with controlled unfolding.")
    ap.add_argument("command", choices=("check", "elaborate", "goals", "normalize"))
    ap.add_argument("file")
    ap.add_argument("--def", dest="defn", metavar="NAME", help="definition to normalize")
    ap.add_argument("--assume", action="append", default=[], metavar="PROP", help="unfolding proposition to assume")
    ap.add_argument("--color", choices=("on", "off"), default="off")
    ap.add_argument("--max-goal-depth", type=int, default=None, metavar="N")
    ap.add_argument("--raw-goals", action="store_true", help="print goal types before normalization")
    return ap


def _validate(args) -> None:
    if args.command == "normalize":
        if not args.defn:
            raise UsageError("normalize requires --def NAME")
    elif args.defn or args.assume:
        raise UsageError("--def and --assume only apply to normalize")
    if args.max_goal_depth is not None and args.max_goal_depth < 1:
        raise UsageError("--max-goal-depth must be positive")


def run(argv, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    color = args.color == "on"
    try:
        _validate(args)
    except UsageError as e:
        print(format_diagnostic(e, color=color), file=err)
        return EXIT_USAGE
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"error[IO]: cannot read {args.file}: {e}", file=err)
        return EXIT_USAGE

    try:
        state = elaborate_source(text, args.file)
        check_signature(state.sig)
        goals = report_goals(state)
        match args.command:
            case "check":
                if goals:
                    print(f"{len(goals)} goal{'s' if len(goals) != 1 else ''}", file=out)
                    for g in goals:
                        print(format_goal(state, g, text, args.max_goal_depth, args.raw_goals, color), file=out)
            case "elaborate":
                out.write(print_signature(state.sig))
            case "goals":
                for g in goals:
                    print(format_goal(state, g, text, args.max_goal_depth, args.raw_goals, color), file=out)
            case "normalize":
                nf = normalize_definition(state, args.defn, args.assume)
                print(print_term(nf, [], state.table), file=out)
    except UnfoldError as e:
        print(format_diagnostic(e, text, color), file=err)
        return EXIT_ERROR
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
