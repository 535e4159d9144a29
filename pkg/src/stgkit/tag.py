"""Tree adjoining grammars: substitution plus adjoining of auxiliary trees.

Adjoining at node ``n`` cuts out the subtree rooted at ``n``, puts a copy of
the auxiliary tree in its place, and hangs the cut subtree at the copy's
foot. Nodes flagged ``no_adjoin`` (written ``S!``) refuse adjoining; the node
left at the foot position takes over the foot's flag.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Sequence

from .derivation import Adjoin, DerivationTrace, Instantiate, Substitute
from .errors import (InvalidAddress, InvalidGrammar, LabelMismatch,
                     LengthCeilingExceeded, NotAnAdjunctionSite, UnknownToken)
from .report import ValidationReport
from .trees import (Alphabet, Kind, SyntaxTree, is_complete, replace_at,
                    terminal_count, yield_of)
from .tsg import _declarations, check_tree_labels, substitute_tsg

log = logging.getLogger(__name__)

DEFAULT_CEILING = 20


class AuxiliaryTree(NamedTuple):
    tree: SyntaxTree
    feet: tuple  # addresses of foot-marked nodes; well-formed trees have one

    @property
    def foot(self) -> tuple:
        if len(self.feet) != 1:
            raise ValueError(f"auxiliary tree has {len(self.feet)} feet")
        return self.feet[0]

    @property
    def label(self) -> str:
        return self.tree.label


def auxiliary(tree: SyntaxTree, foot) -> AuxiliaryTree:
    return AuxiliaryTree(tree, (tuple(foot),))


@dataclass(frozen=True)
class TagGrammar:
    nonterminals: frozenset
    terminals: frozenset
    start: str
    initial_trees: tuple  # ((name, SyntaxTree), ...) sorted by name
    auxiliary_trees: tuple  # ((name, AuxiliaryTree), ...) sorted by name
    require_adjoining: bool = False

    @classmethod
    def build(cls, nonterminals, terminals, start, initial: Mapping[str, SyntaxTree],
              aux: Mapping[str, AuxiliaryTree] = None, require_adjoining=False):
        return cls(frozenset(nonterminals), frozenset(terminals), start,
                   tuple(sorted(initial.items())), tuple(sorted((aux or {}).items())),
                   bool(require_adjoining))

    @property
    def formalism(self) -> str:
        return "tag"

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.nonterminals, self.terminals)

    def lexicalized(self) -> bool:
        """Every auxiliary tree carries a terminal, so each adjoining
        lengthens the yield and adjoining alone cannot loop."""
        return all(terminal_count(a.tree) > 0 for _, a in self.auxiliary_trees)


def validate_tag(grammar: TagGrammar) -> ValidationReport:
    report = ValidationReport()
    _declarations(report, grammar.nonterminals, grammar.terminals, grammar.start)
    names = [n for n, _ in grammar.initial_trees] + [n for n, _ in grammar.auxiliary_trees]
    for dup in sorted({n for n in names if names.count(n) > 1}):
        report.add("DuplicateName", f"tree name {dup!r} is used more than once", dup)
    for name, tree in grammar.initial_trees:
        check_tree_labels(report, name, tree, grammar.nonterminals, grammar.terminals, "tag")
    for name, aux in grammar.auxiliary_trees:
        tree = aux.tree
        check_tree_labels(report, name, tree, grammar.nonterminals, grammar.terminals, "tag")
        if not aux.feet:
            report.add("MissingFoot", "auxiliary tree has no foot node", name)
            continue
        if len(aux.feet) > 1:
            report.add("MultipleFeet", f"auxiliary tree has {len(aux.feet)} foot nodes", name, aux.feet[1])
            continue
        try:
            foot = tree.subtree(aux.foot)
        except InvalidAddress:
            report.add("InvalidFoot", "foot address does not exist", name, aux.foot)
            continue
        if foot.children:
            report.add("FootNotFrontier", "foot must be a frontier node", name, aux.foot)
        if foot.kind is not Kind.NONTERMINAL:
            report.add("FootNotNonterminal", f"foot {foot.label!r} is not a nonterminal", name, aux.foot)
        if foot.label != tree.label:
            report.add("FootLabelMismatch",
                       f"foot {foot.label!r} differs from root {tree.label!r}", name, aux.foot)
        if aux.foot == ():
            report.add("FootNotFrontier", "the root cannot be the foot", name, ())
        if terminal_count(tree) == 0:
            report.warn("NonLexicalizedAuxiliary",
                        "auxiliary tree has no terminal leaf; enumeration is complete only "
                        "relative to the step bound", name)
    return report


def _check(grammar: TagGrammar):
    report = validate_tag(grammar)
    if not report.ok:
        raise InvalidGrammar(report)


def adjoin(host: SyntaxTree, address, aux: AuxiliaryTree) -> SyntaxTree:
    """Adjoin ``aux`` at the internal node ``address`` of ``host``.

    If host yields ``u x w`` with ``x`` the yield below ``address`` and aux
    yields ``l <foot> r``, the result yields ``u l x r w``.
    """
    address = tuple(address)
    target = host.subtree(address)
    if not target.children:
        raise NotAnAdjunctionSite(f"node at {list(address)} ({target.label}) is on the frontier")
    if target.no_adjoin:
        raise NotAnAdjunctionSite(f"node at {list(address)} ({target.label}) bars adjoining")
    if target.label != aux.tree.label:
        raise LabelMismatch(target.label, aux.tree.label)
    foot = aux.tree.subtree(aux.foot)
    moved = target._replace(no_adjoin=foot.no_adjoin)
    return replace_at(host, address, replace_at(aux.tree, aux.foot, moved))


def adjunction_sites(tree: SyntaxTree) -> list:
    return [a for a, n in tree.walk() if n.children and not n.no_adjoin]


def _is_subsequence(small: Sequence[str], big: Sequence[str]) -> bool:
    it = iter(big)
    return all(tok in it for tok in small)


class _State(NamedTuple):
    tree: SyntaxTree
    steps: tuple
    adjoined: bool


def _search(grammar: TagGrammar, max_len: int, max_steps: int, target: tuple | None = None):
    """Breadth-first closure under substitution and adjoining. Yields
    ``(tree, trace)`` for complete start-rooted results, first derivation
    found per tree."""
    initial = grammar.initial_trees
    by_label: dict = {}
    for name, t in initial:
        by_label.setdefault(t.label, []).append((name, t))
    aux_by_label: dict = {}
    for name, a in grammar.auxiliary_trees:
        aux_by_label.setdefault(a.label, []).append((name, a))

    def keep(tree: SyntaxTree) -> bool:
        if terminal_count(tree) > max_len:
            return False
        if target is not None:
            return _is_subsequence([x for x in yield_of(tree) if x in grammar.terminals], target)
        return True

    layer = []
    seen = set()
    for name, t in by_label.get(grammar.start, ()):
        if keep(t):
            st = _State(t, (Instantiate(name),), False)
            key = (t, st.adjoined if grammar.require_adjoining else None)
            if key not in seen:
                seen.add(key)
                layer.append(st)

    emitted = set()
    for depth in range(max_steps + 1):
        nxt = []
        for st in layer:
            tree = st.tree
            if is_complete(tree) and (st.adjoined or not grammar.require_adjoining):
                if tree not in emitted:
                    emitted.add(tree)
                    yield tree, DerivationTrace(st.steps)
            if depth == max_steps:
                continue
            host = len(st.steps) - 1
            for addr in tree.sites():
                label = tree.subtree(addr).label
                for name, filler in by_label.get(label, ()):
                    new = replace_at(tree, addr, filler)
                    if keep(new):
                        nxt.append(_State(new, st.steps + (
                            Instantiate(name), Substitute(host, addr, host + 1)), st.adjoined))
            for addr in adjunction_sites(tree):
                label = tree.subtree(addr).label
                for name, aux in aux_by_label.get(label, ()):
                    new = adjoin(tree, addr, aux)
                    if keep(new):
                        nxt.append(_State(new, st.steps + (
                            Instantiate(name), Adjoin(host, addr, host + 1)), True))
        layer = []
        for st in nxt:
            key = (st.tree, st.adjoined if grammar.require_adjoining else None)
            if key not in seen:
                seen.add(key)
                layer.append(st)
        if not layer:
            break


def enumerate_tag(grammar: TagGrammar, max_len: int, max_steps: int) -> Iterator[tuple[SyntaxTree, DerivationTrace]]:
    """All complete derived trees rooted at the start symbol reachable with at
    most ``max_steps`` substitutions and adjoinings and with yield length at
    most ``max_len``; shortest yields first, one trace per distinct tree."""
    _check(grammar)
    found = list(_search(grammar, max_len, max_steps))
    found.sort(key=lambda tt: len(yield_of(tt[0])))
    yield from found


def default_step_bound(grammar: TagGrammar, length: int) -> int:
    """Operation bound used for membership: each step of a lexicalized
    derivation adds a terminal, plus slack for unlexicalized substitutions."""
    trees = len(grammar.initial_trees) + len(grammar.auxiliary_trees)
    return (length + 1) * max(1, trees)


def member_tag(grammar: TagGrammar, sentence: Sequence[str], ceiling: int = DEFAULT_CEILING,
               max_steps: int | None = None) -> bool:
    """Bounded-search membership; exact when the grammar is lexicalized."""
    _check(grammar)
    sentence = tuple(sentence)
    for tok in sentence:
        if tok not in grammar.terminals:
            raise UnknownToken(tok)
    if len(sentence) > ceiling:
        raise LengthCeilingExceeded(f"sentence has {len(sentence)} tokens, ceiling is {ceiling}")
    if max_steps is None:
        max_steps = default_step_bound(grammar, len(sentence))
    for tree, _ in _search(grammar, len(sentence), max_steps, target=sentence):
        if yield_of(tree) == sentence:
            return True
    return False


def tag_language(grammar: TagGrammar, max_len: int, max_steps: int) -> set:
    return {yield_of(t) for t, _ in enumerate_tag(grammar, max_len, max_steps)}


def replay_tag(grammar: TagGrammar, trace: DerivationTrace) -> SyntaxTree:
    initial = dict(grammar.initial_trees)
    aux = dict(grammar.auxiliary_trees)

    def inst(step):
        if step.tree_name in initial:
            return initial[step.tree_name]
        return aux[step.tree_name]

    return trace.replay(inst, substitute_tsg, adjoin)
