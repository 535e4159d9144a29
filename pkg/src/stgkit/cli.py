"""Command line interface.

Exit codes: 0 success, 1 negative answer (non-member, counterexample, no
derivation), 2 usage error, 3 invalid grammar file.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .equiv import Counterexample
from .errors import GrammarSyntaxError, StgkitError, UnknownToken, ValidationFailed
from .grammar_io import load_grammar, print_grammar
from .harness import classify_stage, compare_grammars, load_stage_grammars, membership
from .regular import (build_automaton, compile_stg_to_regex, format_regex,
                      parse_regex, regex_to_stg)
from .stg import StgGrammar, enumerate_stg, validate_stg
from .tag import TagGrammar, _search, default_step_bound, enumerate_tag, validate_tag
from .trees import yield_of
from .tsg import TsgGrammar, enumerate_tsg, extract_cfg, validate_tsg

log = logging.getLogger("stgkit")

OK, NEGATIVE, USAGE, INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _words(text: str) -> str:
    return text if text else "<eps>"


def _sentence(text: str) -> tuple:
    return tuple(text.split())


class Output:
    """Collects text lines and a structured record; prints one of them."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.record: dict = {}

    def line(self, text: str):
        self.lines.append(text)

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.fmt == "structured":
            stream.write(json.dumps(self.record, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            for text in self.lines:
                stream.write(text + "\n")


def _validator(grammar):
    if isinstance(grammar, StgGrammar):
        return validate_stg(grammar)
    if isinstance(grammar, TsgGrammar):
        return validate_tsg(grammar)
    return validate_tag(grammar)


def cmd_validate(args, out: Output) -> int:
    grammar = load_grammar(args.file)
    report = _validator(grammar)
    out.record.update(command="validate", formalism=grammar.formalism, ok=True,
                      violations=[], warnings=[str(w) for w in report.warnings])
    out.line(str(report))
    return OK


def _enumerate(grammar, max_len, max_steps):
    if isinstance(grammar, StgGrammar):
        return enumerate_stg(grammar, max_len)
    if isinstance(grammar, TsgGrammar):
        return enumerate_tsg(grammar, max_len)
    steps = max_steps if max_steps is not None else default_step_bound(grammar, max_len)
    return enumerate_tag(grammar, max_len, steps)


def cmd_enumerate(args, out: Output) -> int:
    grammar = load_grammar(args.file)
    if args.max_steps is not None and not isinstance(grammar, TagGrammar):
        raise UsageError("--max-steps only applies to tag grammars")
    items = []
    if args.trees:
        for tree, _ in _enumerate(grammar, args.max_len, args.max_steps):
            items.append(str(tree))
    else:
        strings = {yield_of(t) for t, _ in _enumerate(grammar, args.max_len, args.max_steps)}
        items = [" ".join(s) for s in sorted(strings, key=lambda s: (len(s), s))]
    for item in items:
        out.line(_words(item))
    out.record.update(command="enumerate", kind="trees" if args.trees else "strings",
                      max_len=args.max_len, count=len(items), items=items)
    return OK


def cmd_member(args, out: Output) -> int:
    grammar = load_grammar(args.file)
    sentence = _sentence(args.sentence)
    unknown = sorted({t for t in sentence if t not in grammar.terminals})
    accepted, method = membership(grammar, sentence)
    out.line("true" if accepted else "false")
    if unknown:
        out.line("unknown tokens: " + " ".join(unknown))
    out.record.update(command="member", sentence=list(sentence), accepted=accepted,
                      method=method, unknown_tokens=unknown)
    return OK if accepted else NEGATIVE


def _derivation(grammar, sentence):
    n = len(sentence)
    if isinstance(grammar, TagGrammar):
        found = _search(grammar, n, default_step_bound(grammar, n), target=sentence)
    else:
        found = _enumerate(grammar, n, None)
    for tree, trace in found:
        if yield_of(tree) == sentence:
            return tree, trace
    return None


def cmd_derive(args, out: Output) -> int:
    grammar = load_grammar(args.file)
    sentence = _sentence(args.sentence)
    for tok in sentence:
        if tok not in grammar.terminals:
            raise UnknownToken(tok)
    found = _derivation(grammar, sentence)
    out.record.update(command="derive", sentence=list(sentence), derivable=found is not None)
    if found is None:
        out.line("no derivation")
        return NEGATIVE
    tree, trace = found
    out.line(f"tree: {tree}")
    out.record["tree"] = str(tree)
    if args.trace:
        lines = trace.format()
        out.lines.extend(lines)
        out.record["trace"] = lines
    return OK


def cmd_compile(args, out: Output) -> int:
    grammar = load_grammar(args.file)
    out.record.update(command="compile", target=args.to)
    if args.to in ("regex", "automaton"):
        if not isinstance(grammar, StgGrammar):
            raise UsageError(f"--to {args.to} needs an stg grammar")
        rx = compile_stg_to_regex(grammar)
        if args.to == "regex":
            out.line(format_regex(rx))
            out.record["regex"] = format_regex(rx)
        else:
            machine = build_automaton(rx, grammar.terminals)
            lines = machine.describe()
            out.lines.extend(lines)
            out.record["automaton"] = lines
    else:
        if not isinstance(grammar, TsgGrammar):
            raise UsageError("--to cfg needs a tsg grammar")
        lines = extract_cfg(grammar).lines()
        out.lines.extend(lines)
        out.record["productions"] = lines
    return OK


def cmd_regex2stg(args, out: Output) -> int:
    terminals = [t for t in args.terminals.split(",") if t]
    grammar = regex_to_stg(parse_regex(args.regex), terminals)
    text = print_grammar(grammar)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        out.line(f"wrote {args.output}")
    else:
        out.lines.extend(text.splitlines())
    out.record.update(command="regex2stg", regex=args.regex, grammar=text.splitlines())
    return OK


def cmd_compare(args, out: Output) -> int:
    a, b = load_grammar(args.a), load_grammar(args.b)
    result = compare_grammars(a, b, args.max_len)
    out.record.update(command="compare", max_len=args.max_len)
    if isinstance(result, Counterexample):
        out.line(f"counterexample: {result.text()} (accepted by {result.side} only)")
        out.record.update(equal=False, counterexample=list(result.string), side=result.side)
        return NEGATIVE
    out.line(f"equal up to length {args.max_len} ({result.size} strings)")
    out.record.update(equal=True, size=result.size)
    return OK


def cmd_stages(args, out: Output) -> int:
    result = classify_stage(_sentence(args.sentence), load_stage_grammars(args.fixtures))
    for v in result.per_stage:
        out.line(f"stage {v.stage} ({v.formalism}, {v.method}): {'true' if v.accepted else 'false'}")
    out.line(f"minimal stage: {result.minimal_stage if result.minimal_stage else 'none'}")
    out.record.update(command="stages", sentence=list(result.sentence),
                      minimal_stage=result.minimal_stage,
                      per_stage=[v._asdict() for v in result.per_stage])
    return OK if result.minimal_stage else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS,
                        help="output format (default: text)")
    p = argparse.ArgumentParser(prog="stgkit", parents=[common],
                                description="Schematic tree, tree substitution and tree adjoining grammars.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a grammar file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("enumerate", parents=[common], help="list the bounded language or tree set")
    s.add_argument("file")
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--max-steps", type=int)
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--trees", action="store_true")
    kind.add_argument("--strings", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("member", parents=[common], help="decide membership of a sentence")
    s.add_argument("file")
    s.add_argument("sentence")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("derive", parents=[common], help="show a derived tree for a sentence")
    s.add_argument("file")
    s.add_argument("sentence")
    s.add_argument("--trace", action="store_true", help="also print the derivation steps")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("compile", parents=[common], help="compile to a regex, automaton or cfg")
    s.add_argument("file")
    s.add_argument("--to", choices=("regex", "automaton", "cfg"), required=True)
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("regex2stg", parents=[common], help="build an stg from a regular expression")
    s.add_argument("regex")
    s.add_argument("--terminals", required=True, help="comma separated terminal list")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_regex2stg)

    s = sub.add_parser("compare", parents=[common], help="bounded language comparison")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("stages", parents=[common], help="classify a sentence by acquisition stage")
    s.add_argument("sentence")
    s.add_argument("--fixtures", help="directory of stage grammars (default: bundled)")
    s.set_defaults(func=cmd_stages)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Output(getattr(args, "format", "text"))
    try:
        code = args.func(args, out)
    except ValidationFailed as exc:
        out.record = {"command": args.command, "ok": False,
                      "violations": [str(v) for v in exc.report.violations],
                      "warnings": [str(w) for w in exc.report.warnings]}
        out.lines = [str(exc.report)]
        code = INVALID
    except GrammarSyntaxError as exc:
        out.record = {"command": args.command, "ok": False, "error": str(exc),
                      "line": exc.line, "column": exc.column}
        out.lines = [f"syntax error: {exc}"]
        code = INVALID
    except (UsageError, StgkitError, OSError) as exc:
        print(f"stgkit: error: {exc}", file=sys.stderr)
        return USAGE
    out.emit()
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
