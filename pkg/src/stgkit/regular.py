"""Regular expressions, finite automata, and compilers between STGs and regexes.

STG to regex: ``Lang(A, F)`` is the language of complete trees rooted in
``A`` none of whose nodes carry a label from the forbidden set ``F``. Walking
an initial tree, a nonterminal leaf ``B`` contributes ``Lang(B, F | anc)``
where ``anc`` are the labels above the leaf in that tree, root included. A
node whose own label is forbidden denotes the empty set; wrapped in ``*``
that becomes the empty string, which is exactly the zero-copy instantiation.
"""
from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import count
from typing import Iterable, Sequence

from .errors import RegexSyntaxError, UnsupportedLiteral
from .stg import (Annotation, SchematicTree, StgGrammar, _check, _reachable,
                  schema_leaf, schema_node)
from .trees import Kind

log = logging.getLogger(__name__)


# -- regex syntax tree --------------------------------------------------------

class Regex:
    __slots__ = ()

    def __str__(self):
        return format_regex(self)


@dataclass(frozen=True)
class EmptySet(Regex):
    pass


@dataclass(frozen=True)
class EmptyString(Regex):
    pass


@dataclass(frozen=True)
class Literal(Regex):
    symbol: str


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Plus(Regex):
    inner: Regex


EMPTY_SET = EmptySet()
EMPTY_STRING = EmptyString()


def concat(*parts: Regex) -> Regex:
    flat = []
    for p in parts:
        if isinstance(p, EmptySet):
            return EMPTY_SET
        if isinstance(p, EmptyString):
            continue
        flat.extend(p.parts if isinstance(p, Concat) else (p,))
    if not flat:
        return EMPTY_STRING
    return flat[0] if len(flat) == 1 else Concat(tuple(flat))


def union(*parts: Regex) -> Regex:
    flat = []
    for p in parts:
        for q in (p.parts if isinstance(p, Union) else (p,)):
            if not isinstance(q, EmptySet) and q not in flat:
                flat.append(q)
    if not flat:
        return EMPTY_SET
    return flat[0] if len(flat) == 1 else Union(tuple(flat))


def star(x: Regex) -> Regex:
    if isinstance(x, (EmptySet, EmptyString)):
        return EMPTY_STRING
    if isinstance(x, (Star, Plus)):
        return Star(x.inner)
    return Star(x)


def plus(x: Regex) -> Regex:
    if isinstance(x, (EmptySet, EmptyString, Star, Plus)):
        return x
    return Plus(x)


def literals(r: Regex) -> set:
    if isinstance(r, Literal):
        return {r.symbol}
    if isinstance(r, (Concat, Union)):
        return set().union(*(literals(p) for p in r.parts))
    if isinstance(r, (Star, Plus)):
        return literals(r.inner)
    return set()


def nullable(r: Regex) -> bool:
    if isinstance(r, (EmptyString, Star)):
        return True
    if isinstance(r, Concat):
        return all(nullable(p) for p in r.parts)
    if isinstance(r, Union):
        return any(nullable(p) for p in r.parts)
    if isinstance(r, Plus):
        return nullable(r.inner)
    return False


# -- surface syntax -----------------------------------------------------------

_TOKEN = re.compile(r"[()|*+]|[^\s()|*+]+")


def parse_regex(text: str) -> Regex:
    """Parse ``( a | b ) * c`` style expressions; tokens are words."""
    toks = _TOKEN.findall(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def expr():
        nonlocal pos
        alts = [term()]
        while peek() == "|":
            pos += 1
            alts.append(term())
        return alts[0] if len(alts) == 1 else Union(tuple(alts))

    def term():
        parts = []
        while peek() is not None and peek() not in "|)":
            parts.append(factor())
        if not parts:
            raise RegexSyntaxError(f"empty alternative at token {pos}")
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def factor():
        nonlocal pos
        x = atom()
        while peek() in ("*", "+"):
            x = Star(x) if peek() == "*" else Plus(x)
            pos += 1
        return x

    def atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise RegexSyntaxError("unexpected end of expression")
        if tok in "*+|)":
            raise RegexSyntaxError(f"unexpected {tok!r} at token {pos}")
        pos += 1
        if tok == "(":
            x = expr()
            if peek() != ")":
                raise RegexSyntaxError("missing ')'")
            pos += 1
            return x
        if tok == "<eps>":
            return EMPTY_STRING
        if tok == "<empty>":
            return EMPTY_SET
        return Literal(tok)

    result = expr()
    if pos != len(toks):
        raise RegexSyntaxError(f"unexpected {toks[pos]!r} at token {pos}")
    return result


def format_regex(r: Regex, prec: int = 0) -> str:
    # precedence: 0 union, 1 concat, 2 postfix
    if isinstance(r, EmptySet):
        return "<empty>"
    if isinstance(r, EmptyString):
        return "<eps>"
    if isinstance(r, Literal):
        return r.symbol
    if isinstance(r, Union):
        s = " | ".join(format_regex(p, 1) for p in r.parts)
        return f"( {s} )" if prec > 0 else s
    if isinstance(r, Concat):
        s = " ".join(format_regex(p, 2) for p in r.parts)
        return f"( {s} )" if prec > 1 else s
    op = "*" if isinstance(r, Star) else "+"
    return f"{format_regex(r.inner, 3)} {op}"


# -- automata -----------------------------------------------------------------

@dataclass(frozen=True)
class Automaton:
    """Nondeterministic automaton with empty moves (symbol ``None``)."""
    state_count: int
    transitions: dict  # (state, symbol | None) -> frozenset of states
    start: int
    accepting: frozenset
    alphabet: frozenset

    def closure(self, states: Iterable[int]) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            for t in self.transitions.get((stack.pop(), None), ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def initial(self) -> frozenset:
        return self.closure((self.start,))

    def step(self, states: frozenset, symbol: str) -> frozenset:
        nxt = set()
        for s in states:
            nxt.update(self.transitions.get((s, symbol), ()))
        return self.closure(nxt)

    def accepts(self, states: frozenset) -> bool:
        return not states.isdisjoint(self.accepting)

    def reachable_states(self) -> int:
        seen, stack = {self.start}, [self.start]
        while stack:
            s = stack.pop()
            for (src, _), dst in self.transitions.items():
                if src == s:
                    for t in dst:
                        if t not in seen:
                            seen.add(t)
                            stack.append(t)
        return len(seen)

    def describe(self) -> list[str]:
        lines = [f"states {self.state_count}", f"start {self.start}",
                 "accepting " + " ".join(map(str, sorted(self.accepting)))]
        for (src, sym), dst in sorted(self.transitions.items(),
                                      key=lambda kv: (kv[0][0], kv[0][1] or "")):
            label = "<eps>" if sym is None else sym
            for t in sorted(dst):
                lines.append(f"{src} {label} {t}")
        return lines


def build_automaton(expression: Regex, alphabet: Iterable[str] | None = None) -> Automaton:
    """Thompson construction."""
    fresh = count()
    trans: dict = {}

    def edge(a, sym, b):
        trans.setdefault((a, sym), set()).add(b)

    def build(r: Regex) -> tuple[int, int]:
        s, f = next(fresh), next(fresh)
        if isinstance(r, EmptyString):
            edge(s, None, f)
        elif isinstance(r, Literal):
            edge(s, r.symbol, f)
        elif isinstance(r, Concat):
            cur = s
            for p in r.parts:
                ps, pf = build(p)
                edge(cur, None, ps)
                cur = pf
            edge(cur, None, f)
        elif isinstance(r, Union):
            for p in r.parts:
                ps, pf = build(p)
                edge(s, None, ps)
                edge(pf, None, f)
        elif isinstance(r, (Star, Plus)):
            ps, pf = build(r.inner)
            edge(s, None, ps)
            edge(pf, None, ps)
            edge(pf, None, f)
            if isinstance(r, Star):
                edge(s, None, f)
        elif not isinstance(r, EmptySet):
            raise TypeError(f"not a regex: {r!r}")
        return s, f

    start, final = build(expression)
    symbols = frozenset(alphabet) if alphabet is not None else frozenset(literals(expression))
    return Automaton(next(fresh), {k: frozenset(v) for k, v in trans.items()},
                     start, frozenset({final}), symbols | literals(expression))


def automaton_member(machine: Automaton, sentence: Sequence[str]) -> bool:
    states = machine.initial()
    for tok in sentence:
        if tok not in machine.alphabet:
            log.warning("token %r is outside the automaton alphabet", tok)
            return False
        states = machine.step(states, tok)
        if not states:
            return False
    return machine.accepts(states)


def automaton_strings(machine: Automaton, max_len: int, alphabet: Iterable[str] | None = None) -> set:
    """All accepted strings of length at most ``max_len``."""
    symbols = sorted(alphabet if alphabet is not None else machine.alphabet)
    out = set()
    layer = [((), machine.initial())]
    moves: dict = {}  # (state set, symbol) -> state set; prefixes share subsets
    for n in range(max_len + 1):
        nxt = []
        for prefix, states in layer:
            if machine.accepts(states):
                out.add(prefix)
            if n < max_len:
                for a in symbols:
                    key = (states, a)
                    if key not in moves:
                        moves[key] = machine.step(states, a)
                    st = moves[key]
                    if st:
                        nxt.append((prefix + (a,), st))
        layer = nxt
    return out


# -- STG -> regex -------------------------------------------------------------

def _wrap(annotation: Annotation, x: Regex) -> Regex:
    if annotation is Annotation.STAR:
        return star(x)
    if annotation is Annotation.PLUS:
        return plus(x)
    return x


class _StgCompiler:
    def __init__(self, grammar: StgGrammar, memoize: bool = True):
        self.grammar = grammar
        self.reach = _reachable(grammar)
        self.memo = {} if memoize else None
        self.calls = 0

    def lang(self, label: str, forbid: frozenset) -> Regex:
        if label in forbid:
            return EMPTY_SET
        key = (label, forbid & self.reach.get(label, frozenset()))
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        self.calls += 1
        alts = [self.node(tree, forbid, frozenset())
                for _, tree in self.grammar.trees_rooted(label)]
        result = union(*alts)
        if self.memo is not None:
            self.memo[key] = result
        return result

    def node(self, s: SchematicTree, forbid: frozenset, above: frozenset) -> Regex:
        """Language of one copy of ``s``; ``above`` holds the labels of its
        ancestors inside the current initial tree."""
        if s.label in forbid:
            return EMPTY_SET
        if not s.children:
            if s.kind is Kind.TERMINAL:
                return Literal(s.label)
            return self.lang(s.label, forbid | above)
        inner = above | {s.label}
        return concat(*(_wrap(c.annotation, self.node(c, forbid, inner)) for c in s.children))


def compile_stg_to_regex(grammar: StgGrammar) -> Regex:
    _check(grammar)
    return _StgCompiler(grammar).lang(grammar.start, frozenset())


@lru_cache(maxsize=64)
def compiled_automaton(grammar: StgGrammar) -> Automaton:
    return build_automaton(compile_stg_to_regex(grammar), grammar.terminals)


# -- regex -> STG -------------------------------------------------------------

def _without_empty(r: Regex) -> tuple[Regex, bool]:
    """Split ``r`` into an equivalent epsilon-free regex (no EmptyString, no
    Star) for L(r) minus the empty string, plus whether r is nullable."""
    if isinstance(r, EmptySet):
        return EMPTY_SET, False
    if isinstance(r, EmptyString):
        return EMPTY_SET, True
    if isinstance(r, Literal):
        return r, False
    if isinstance(r, Union):
        parts = [_without_empty(p) for p in r.parts]
        return union(*(p for p, _ in parts)), any(n for _, n in parts)
    if isinstance(r, (Star, Plus)):
        x, n = _without_empty(r.inner)
        return plus(x), isinstance(r, Star) or n
    if isinstance(r, Concat):
        # fold left: (A', a) . (B', b) -> A'B' | [a]B' | [b]A'
        acc, acc_null = _without_empty(r.parts[0])
        for p in r.parts[1:]:
            x, n = _without_empty(p)
            alts = [concat(acc, x)]
            if acc_null:
                alts.append(x)
            if n:
                alts.append(acc)
            acc, acc_null = union(*alts), acc_null and n
        return acc, acc_null
    raise TypeError(f"not a regex: {r!r}")


class _StgBuilder:
    def __init__(self, alphabet):
        self.alphabet = frozenset(alphabet)
        self.taken = set(self.alphabet)
        self.nonterminals = set()
        self.trees = {}
        self.counter = count(1)

    def fresh(self, stem: str) -> str:
        while True:
            name = f"{stem}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                self.nonterminals.add(name)
                return name

    def add_tree(self, schema: SchematicTree):
        n = sum(1 for t in self.trees.values() if t.label == schema.label)
        self.trees[f"{schema.label.lower()}-{n + 1}"] = schema

    def items(self, r: Regex) -> list[SchematicTree]:
        if isinstance(r, Literal):
            return [schema_leaf(r.symbol, kind=Kind.TERMINAL)]
        if isinstance(r, Concat):
            return [it for p in r.parts for it in self.items(p)]
        if isinstance(r, Union):
            site = self.fresh("U")
            for alt in r.parts:
                self.add_tree(schema_node(site, *self.items(alt)))
            return [schema_leaf(site)]
        if isinstance(r, (Star, Plus)):
            ann = Annotation.STAR if isinstance(r, Star) else Annotation.PLUS
            inner = self.items(r.inner)
            if len(inner) == 1 and inner[0].annotation is Annotation.NONE:
                return [inner[0]._replace(annotation=ann)]
            return [schema_node(self.fresh("G"), *inner, annotation=ann)]
        raise TypeError(f"unexpected {type(r).__name__} in epsilon-free regex")


def regex_to_stg(expression: Regex, alphabet: Iterable[str]) -> StgGrammar:
    """Build an STG with the same string language as ``expression``.

    Unions become fresh nonterminal sites with one initial tree per
    alternative; ``*``/``+`` annotate the repeated item (wrapped in a fresh
    node when it spans several). The empty string, where needed, comes from
    a starred site whose nonterminal has no initial trees.
    """
    alphabet = frozenset(alphabet)
    for lit in sorted(literals(expression)):
        if lit not in alphabet:
            raise UnsupportedLiteral(lit)
    b = _StgBuilder(alphabet)
    start = "S" if "S" not in alphabet else b.fresh("S")
    b.taken.add(start)
    b.nonterminals.add(start)
    body, is_nullable = _without_empty(expression)
    if is_nullable and isinstance(body, Plus):
        b.add_tree(schema_node(start, *b.items(Star(body.inner))))
    else:
        alts = body.parts if isinstance(body, Union) else (() if isinstance(body, EmptySet) else (body,))
        for alt in alts:
            b.add_tree(schema_node(start, *b.items(alt)))
        if is_nullable:
            void = b.fresh("NIL")
            b.add_tree(schema_node(start, schema_leaf(void, Annotation.STAR)))
    return StgGrammar.build(b.nonterminals, alphabet, start, b.trees)


def random_regex(rng: random.Random, depth: int, alphabet: Sequence[str] = ("a", "b")) -> Regex:
    """Pseudo-random regex of operator depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.05:
            return EMPTY_STRING
        return Literal(rng.choice(list(alphabet)))
    op = rng.choice(("concat", "union", "star", "plus"))
    if op in ("star", "plus"):
        inner = random_regex(rng, depth - 1, alphabet)
        return Star(inner) if op == "star" else Plus(inner)
    parts = tuple(random_regex(rng, depth - 1, alphabet) for _ in range(rng.randint(2, 3)))
    return Concat(parts) if op == "concat" else Union(parts)

