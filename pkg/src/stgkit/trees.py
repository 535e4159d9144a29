"""Finite ordered labeled trees, tree addresses and the bracketed text format.

Trees are immutable named tuples, so they hash and compare structurally and
can be shared freely between derivations::

    >>> abc = Alphabet.of(nonterminals="S A", terminals="a b")
    >>> t = parse_tree("(S (A a) b)", abc)
    >>> yield_of(t)
    ('a', 'b')
    >>> print_tree(replace_at(t, (0,), parse_tree("A", abc)))
    '(S A b)'
"""
from __future__ import annotations

from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (InvalidAddress, TerminalWithChildren, UnbalancedBrackets,
                     UnknownToken)

EPS = "<eps>"
NO_ADJOIN = "!"

Address = tuple  # tuple[int, ...]


class Kind(str, Enum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"
    EPSILON = "epsilon"


class Symbol(NamedTuple):
    text: str
    kind: Kind


class Alphabet(NamedTuple):
    nonterminals: frozenset
    terminals: frozenset

    @classmethod
    def of(cls, nonterminals: Iterable[str] | str = (), terminals: Iterable[str] | str = ()):
        if isinstance(nonterminals, str):
            nonterminals = nonterminals.split()
        if isinstance(terminals, str):
            terminals = terminals.split()
        return cls(frozenset(nonterminals), frozenset(terminals))

    def kind_of(self, token: str) -> Kind:
        if token == EPS:
            return Kind.EPSILON
        if token in self.terminals:
            return Kind.TERMINAL
        if token in self.nonterminals:
            return Kind.NONTERMINAL
        raise UnknownToken(token)

    def symbol(self, token: str) -> Symbol:
        return Symbol(token, self.kind_of(token))


class SyntaxTree(NamedTuple):
    label: str
    children: tuple = ()
    kind: Kind = Kind.NONTERMINAL
    # Only TAG elementary trees set this; it bars adjoining at the node.
    no_adjoin: bool = False

    @property
    def symbol(self) -> Symbol:
        return Symbol(self.label, self.kind)

    def is_leaf(self) -> bool:
        return not self.children

    def is_site(self) -> bool:
        """Nonterminal leaf, i.e. a pending substitution site."""
        return not self.children and self.kind is Kind.NONTERMINAL

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def subtree(self, address: Sequence[int]) -> "SyntaxTree":
        node = self
        for i in address:
            if not 0 <= i < len(node.children):
                raise InvalidAddress(address)
            node = node.children[i]
        return node

    def walk(self, address: Address = ()) -> Iterator[tuple[Address, "SyntaxTree"]]:
        """Preorder traversal yielding ``(address, node)`` pairs."""
        yield address, self
        for i, child in enumerate(self.children):
            yield from child.walk(address + (i,))

    def labels(self, kind: Kind | None = None) -> frozenset:
        return frozenset(n.label for _, n in self.walk() if kind is None or n.kind is kind)

    def nonterminal_labels(self) -> frozenset:
        return self.labels(Kind.NONTERMINAL)

    def sites(self) -> list[Address]:
        """Addresses of nonterminal leaves, left to right."""
        return [a for a, n in self.walk() if n.is_site()]

    def frontier(self) -> list["SyntaxTree"]:
        return [n for _, n in self.walk() if not n.children]

    def __str__(self) -> str:
        return print_tree(self)


def leaf(token: str, kind: Kind = Kind.TERMINAL) -> SyntaxTree:
    if token == EPS:
        kind = Kind.EPSILON
    return SyntaxTree(token, (), kind)


def node(label: str, *children: SyntaxTree) -> SyntaxTree:
    return SyntaxTree(label, tuple(children), Kind.NONTERMINAL)


EPS_LEAF = SyntaxTree(EPS, (), Kind.EPSILON)


def valid_address(tree: SyntaxTree, address: Sequence[int]) -> bool:
    try:
        tree.subtree(address)
    except InvalidAddress:
        return False
    return True


def yield_of(tree: SyntaxTree) -> tuple:
    """Left-to-right frontier labels with epsilon leaves dropped.

    Nonterminal leaves stay in the result; callers wanting a string of the
    language check ``is_complete`` first.
    """
    out = []
    stack = [tree]
    while stack:
        t = stack.pop()
        if t.children:
            stack.extend(reversed(t.children))
        elif t.kind is not Kind.EPSILON:
            out.append(t.label)
    return tuple(out)


def terminal_count(tree: SyntaxTree) -> int:
    if not tree.children:
        return 1 if tree.kind is Kind.TERMINAL else 0
    return sum(terminal_count(c) for c in tree.children)


def is_complete(tree: SyntaxTree) -> bool:
    """True iff every frontier node is a terminal or epsilon."""
    return all(n.kind is not Kind.NONTERMINAL for n in tree.frontier())


def replace_at(tree: SyntaxTree, address: Sequence[int], replacement: SyntaxTree) -> SyntaxTree:
    address = tuple(address)
    if not address:
        return replacement
    i = address[0]
    if not 0 <= i < len(tree.children):
        raise InvalidAddress(address)
    try:
        new_child = replace_at(tree.children[i], address[1:], replacement)
    except InvalidAddress:
        raise InvalidAddress(address) from None
    children = tree.children[:i] + (new_child,) + tree.children[i + 1:]
    return tree._replace(children=children)


def ancestor_labels(tree: SyntaxTree, address: Sequence[int]) -> frozenset:
    """Labels of the nodes strictly above ``address``, the root included."""
    labels = set()
    node_ = tree
    for i in address:
        labels.add(node_.label)
        if not 0 <= i < len(node_.children):
            raise InvalidAddress(address)
        node_ = node_.children[i]
    return frozenset(labels)


# -- bracketed text -----------------------------------------------------------

class RawNode(NamedTuple):
    """Token tree straight from the reader, before any alphabet is applied."""
    token: str
    children: tuple
    line: int
    column: int
    bracketed: bool


def _tokens(text: str, line0: int = 1, col0: int = 1):
    line, col = line0, col0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch in "()":
            yield ch, line, col
            i += 1
            col += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield text[i:j], line, col
            col += j - i
            i = j


def read_bracketed(text: str, line: int = 1, column: int = 1) -> RawNode:
    """Read exactly one bracketed tree; positions are 1-based."""
    toks = list(_tokens(text, line, column))
    if not toks:
        raise UnbalancedBrackets("empty tree text", (line, column))
    pos = 0

    def read() -> RawNode:
        nonlocal pos
        tok, ln, col = toks[pos]
        if tok == ")":
            raise UnbalancedBrackets(f"unexpected ')' at {ln}:{col}", (ln, col))
        if tok != "(":
            pos += 1
            return RawNode(tok, (), ln, col, False)
        pos += 1
        if pos >= len(toks):
            raise UnbalancedBrackets(f"unclosed '(' at {ln}:{col}", (ln, col))
        label, lln, lcol = toks[pos]
        if label in "()":
            raise UnbalancedBrackets(f"missing label at {lln}:{lcol}", (lln, lcol))
        pos += 1
        children = []
        while True:
            if pos >= len(toks):
                raise UnbalancedBrackets(f"unclosed '(' at {ln}:{col}", (ln, col))
            if toks[pos][0] == ")":
                pos += 1
                break
            children.append(read())
        return RawNode(label, tuple(children), lln, lcol, True)

    tree = read()
    if pos != len(toks):
        tok, ln, col = toks[pos]
        raise UnbalancedBrackets(f"trailing {tok!r} at {ln}:{col}", (ln, col))
    return tree


def parse_tree(text: str, alphabet: Alphabet) -> SyntaxTree:
    """Parse ``(Label child ...)`` text over ``alphabet``.

    A trailing ``!`` on a declared nonterminal marks a node where adjoining
    is barred; everything else must be declared or be ``<eps>``.
    """
    def build(raw: RawNode) -> SyntaxTree:
        token, no_adjoin = raw.token, False
        if (token.endswith(NO_ADJOIN) and token not in alphabet.terminals
                and token not in alphabet.nonterminals
                and token[:-1] in alphabet.nonterminals):
            token, no_adjoin = token[:-1], True
        kind = alphabet.kind_of(token)
        if raw.children:
            if kind is not Kind.NONTERMINAL:
                raise TerminalWithChildren(token)
            return SyntaxTree(token, tuple(build(c) for c in raw.children), kind, no_adjoin)
        return SyntaxTree(token, (), kind, no_adjoin)

    return build(read_bracketed(text))


def print_tree(tree: SyntaxTree) -> str:
    label = tree.label + (NO_ADJOIN if tree.no_adjoin else "")
    if not tree.children:
        return label
    return "(" + " ".join([label] + [print_tree(c) for c in tree.children]) + ")"
