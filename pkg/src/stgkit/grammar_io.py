"""Reading and writing grammar files, and the bundled fixture catalog.

A grammar file is line oriented::

    # comment
    formalism: stg | tsg | tag
    start: S
    nonterminals: S X
    terminals: a b
    require-adjoining: true        (tag only)
    tree <name>: <bracketed tree>
    aux <name>: <bracketed tree>   (tag only)

Sigils are trailing characters on tree tokens: ``+``/``*`` annotate schematic
nodes (stg), ``@`` marks the foot of an auxiliary tree and ``!`` bars
adjoining at a node (tag). ``<eps>`` is the empty leaf (tsg and tag).
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Union

from .errors import (FormalismLexicalViolation, GrammarSyntaxError,
                     UnbalancedBrackets, ValidationFailed)
from .stg import Annotation, SchematicTree, StgGrammar, validate_stg
from .tag import AuxiliaryTree, TagGrammar, validate_tag
from .trees import EPS, NO_ADJOIN, Kind, RawNode, SyntaxTree, read_bracketed
from .tsg import TsgGrammar, validate_tsg

Grammar = Union[StgGrammar, TsgGrammar, TagGrammar]

FORMALISMS = ("stg", "tsg", "tag")
SIGILS = "+*@!"
FOOT = "@"
_DECLS = ("formalism", "start", "nonterminals", "terminals", "require-adjoining")


def _token_error(message, line, column, lexical=False):
    cls = FormalismLexicalViolation if lexical else GrammarSyntaxError
    return cls(message, line, column)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.decls: dict = {}
        self.entries: list = []  # (kind, name, raw tree, line)

    def read(self):
        for lineno, line in enumerate(self.text.splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            indent = len(line) - len(line.lstrip())
            col = indent + 1
            head, sep, rest = stripped.partition(":")
            if not sep:
                raise GrammarSyntaxError("expected 'key: value' or a tree entry", lineno, col)
            words = head.split()
            rest_col = col + len(head) + 1 + (len(rest) - len(rest.lstrip()))
            if len(words) == 1 and words[0] in _DECLS:
                key = words[0]
                if key in self.decls:
                    raise GrammarSyntaxError(f"duplicate declaration {key!r}", lineno, col)
                self.decls[key] = (rest.split(), lineno, rest_col)
            elif len(words) == 2 and words[0] in ("tree", "aux"):
                if any(name == words[1] for _, name, _, _ in self.entries):
                    raise GrammarSyntaxError(f"duplicate tree name {words[1]!r}", lineno,
                                             col + head.index(words[1]))
                if not rest.strip():
                    raise GrammarSyntaxError("missing tree", lineno, rest_col)
                try:
                    raw = read_bracketed(rest.lstrip(), lineno, rest_col)
                except UnbalancedBrackets as exc:
                    ln, c = exc.position or (lineno, rest_col)
                    raise GrammarSyntaxError(str(exc), ln, c) from None
                self.entries.append((words[0], words[1], raw, lineno))
            else:
                raise GrammarSyntaxError(f"unknown entry {head.strip()!r}", lineno, col)
        return self

    def decl(self, key, required=True):
        if key not in self.decls:
            if required:
                raise GrammarSyntaxError(f"missing '{key}:' declaration", 1, 1)
            return None
        return self.decls[key]


def _check_declared_tokens(words, line, column, text_words):
    col = column
    for w in text_words:
        if w == EPS or w[-1] in SIGILS or "(" in w or ")" in w:
            raise GrammarSyntaxError(f"token {w!r} cannot be declared", line, col)
        col += len(w) + 1


class _TreeBuilder:
    def __init__(self, formalism, nonterminals, terminals):
        self.formalism = formalism
        self.nonterminals = nonterminals
        self.terminals = terminals

    def kind(self, token, has_children):
        if token == EPS:
            return Kind.EPSILON
        if not has_children and token in self.terminals:
            return Kind.TERMINAL
        return Kind.NONTERMINAL

    def split(self, raw: RawNode, aux: bool):
        """Strip sigils, returning (token, annotation, foot, no_adjoin)."""
        token = raw.token
        annotation, foot, no_adjoin = Annotation.NONE, False, False
        where = (raw.line, raw.column + len(token) - 1)
        if token == EPS and self.formalism == "stg":
            raise _token_error("<eps> is not allowed in an stg grammar", raw.line, raw.column, True)
        if token != EPS and token[-1:] == FOOT:
            if self.formalism != "tag" or not aux:
                raise _token_error("foot marker '@' is only allowed in tag auxiliary trees", *where, True)
            token, foot = token[:-1], True
            where = (where[0], where[1] - 1)
        if token[-1:] == NO_ADJOIN:
            if self.formalism != "tag":
                raise _token_error("adjoining constraint '!' is only allowed in tag grammars", *where, True)
            token, no_adjoin = token[:-1], True
            where = (where[0], where[1] - 1)
        if token[-1:] in ("+", "*"):
            if self.formalism != "stg":
                raise _token_error(f"schematic annotation {token!r} is only allowed in stg grammars",
                                   *where, True)
            annotation, token = Annotation(token[-1]), token[:-1]
        if not token or token[-1:] in SIGILS:
            raise _token_error(f"malformed token {raw.token!r}", raw.line, raw.column)
        return token, annotation, foot, no_adjoin

    def schema(self, raw: RawNode) -> SchematicTree:
        token, ann, _, _ = self.split(raw, False)
        return SchematicTree(token, ann, tuple(self.schema(c) for c in raw.children),
                             self.kind(token, bool(raw.children)))

    def tree(self, raw: RawNode, aux=False, feet=None, address=()) -> SyntaxTree:
        token, _, foot, no_adjoin = self.split(raw, aux)
        if foot:
            feet.append(address)
        children = tuple(self.tree(c, aux, feet, address + (i,)) for i, c in enumerate(raw.children))
        return SyntaxTree(token, children, self.kind(token, bool(children)), no_adjoin)


def parse_grammar(text: str, validate: bool = True) -> Grammar:
    """Parse grammar text and run the validator for its formalism."""
    r = _Reader(text).read()
    (fwords, fline, fcol) = r.decl("formalism")
    if len(fwords) != 1 or fwords[0] not in FORMALISMS:
        raise GrammarSyntaxError(f"formalism must be one of {', '.join(FORMALISMS)}", fline, fcol)
    formalism = fwords[0]
    (swords, sline, scol) = r.decl("start")
    if len(swords) != 1:
        raise GrammarSyntaxError("start takes exactly one token", sline, scol)
    nts, tms = frozenset(), frozenset()
    if r.decl("nonterminals", False):
        words, line, col = r.decl("nonterminals")
        _check_declared_tokens(words, line, col, words)
        nts = frozenset(words)
    if r.decl("terminals", False):
        words, line, col = r.decl("terminals")
        _check_declared_tokens(words, line, col, words)
        tms = frozenset(words)
    require = False
    if r.decl("require-adjoining", False):
        words, line, col = r.decl("require-adjoining")
        if formalism != "tag":
            raise FormalismLexicalViolation("require-adjoining is only meaningful for tag", line, 1)
        if words not in (["true"], ["false"]):
            raise GrammarSyntaxError("require-adjoining takes true or false", line, col)
        require = words == ["true"]

    b = _TreeBuilder(formalism, nts, tms)
    if formalism == "stg":
        trees = {}
        for kind, name, raw, line in r.entries:
            if kind == "aux":
                raise FormalismLexicalViolation("aux entries are only allowed in tag grammars", line, 1)
            trees[name] = b.schema(raw)
        grammar = StgGrammar.build(nts, tms, swords[0], trees)
        report = validate_stg(grammar) if validate else None
    elif formalism == "tsg":
        trees = {}
        for kind, name, raw, line in r.entries:
            if kind == "aux":
                raise FormalismLexicalViolation("aux entries are only allowed in tag grammars", line, 1)
            trees[name] = b.tree(raw)
        grammar = TsgGrammar.build(nts, tms, swords[0], trees)
        report = validate_tsg(grammar) if validate else None
    else:
        initial, aux = {}, {}
        for kind, name, raw, line in r.entries:
            if kind == "tree":
                initial[name] = b.tree(raw)
            else:
                feet = []
                tree = b.tree(raw, True, feet)
                aux[name] = AuxiliaryTree(tree, tuple(feet))
        grammar = TagGrammar.build(nts, tms, swords[0], initial, aux, require)
        report = validate_tag(grammar) if validate else None
    if report is not None and not report.ok:
        raise ValidationFailed(report)
    return grammar


def print_schema(schema: SchematicTree) -> str:
    label = schema.label + schema.annotation.value
    if not schema.children:
        return label
    return "(" + " ".join([label] + [print_schema(c) for c in schema.children]) + ")"


def _print_tag_tree(tree: SyntaxTree, feet=(), address=()) -> str:
    label = tree.label + (NO_ADJOIN if tree.no_adjoin else "") + (FOOT if address in feet else "")
    if not tree.children:
        return label
    parts = [label] + [_print_tag_tree(c, feet, address + (i,)) for i, c in enumerate(tree.children)]
    return "(" + " ".join(parts) + ")"


def print_grammar(grammar: Grammar) -> str:
    """Canonical text: declarations, then entries in name order."""
    lines = [f"formalism: {grammar.formalism}", f"start: {grammar.start}"]
    if grammar.nonterminals:
        lines.append("nonterminals: " + " ".join(sorted(grammar.nonterminals)))
    if grammar.terminals:
        lines.append("terminals: " + " ".join(sorted(grammar.terminals)))
    if isinstance(grammar, StgGrammar):
        lines += [f"tree {n}: {print_schema(t)}" for n, t in grammar.initial_trees]
    elif isinstance(grammar, TsgGrammar):
        lines += [f"tree {n}: {_print_tag_tree(t)}" for n, t in grammar.elementary_trees]
    else:
        lines.append(f"require-adjoining: {'true' if grammar.require_adjoining else 'false'}")
        lines += [f"tree {n}: {_print_tag_tree(t)}" for n, t in grammar.initial_trees]
        lines += [f"aux {n}: {_print_tag_tree(a.tree, a.feet)}" for n, a in grammar.auxiliary_trees]
    return "\n".join(lines) + "\n"


def load_grammar(path: Union[str, Path]) -> Grammar:
    return parse_grammar(Path(path).read_text(encoding="utf-8"))


def fixture_path(name: str) -> Path:
    base = resources.files("stgkit") / "fixtures"
    return Path(str(base / name))


def fixture_names() -> list[str]:
    """Relative paths of every bundled grammar file, sorted."""
    root = fixture_path("")
    return sorted(str(p.relative_to(root)) for p in root.rglob("*")
                  if p.suffix in (".stg", ".tsg", ".tag"))


def load_fixture(name: str) -> Grammar:
    return load_grammar(fixture_path(name))
