"""Schematic tree grammars.

A schematic tree is an ordered tree whose non-root nodes may carry ``+``
(one or more copies) or ``*`` (zero or more copies). A sequence of concrete
trees instantiates a schematic tree when the root labels agree and each
tree's children split into contiguous runs, left to right, that instantiate
the schematic children in turn. Derivations substitute instantiated trees
into each other, but never below a node whose label occurs in the filler.

An internal schematic node whose children all vanish (every child starred
and given zero copies) is instantiated with a single ``<eps>`` leaf, so it
contributes the empty string instead of turning into a substitution site.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple, Sequence

from .derivation import DerivationNode, DerivationTrace, Instantiate
from .errors import (InvalidGrammar, LabelMismatch, NotASubstitutionSite,
                     PathRecursion, UnknownToken)
from .report import ValidationReport
from .trees import (EPS, EPS_LEAF, Alphabet, Kind, SyntaxTree, ancestor_labels,
                    replace_at, yield_of)


class Annotation(str, Enum):
    NONE = ""
    PLUS = "+"
    STAR = "*"


class SchematicTree(NamedTuple):
    label: str
    annotation: Annotation = Annotation.NONE
    children: tuple = ()
    kind: Kind = Kind.NONTERMINAL

    def walk(self, address=()):
        yield address, self
        for i, c in enumerate(self.children):
            yield from c.walk(address + (i,))

    def __str__(self):
        from .grammar_io import print_schema
        return print_schema(self)


def schema_leaf(label: str, annotation=Annotation.NONE, kind=Kind.NONTERMINAL) -> SchematicTree:
    return SchematicTree(label, Annotation(annotation), (), kind)


def schema_node(label: str, *children: SchematicTree, annotation=Annotation.NONE) -> SchematicTree:
    return SchematicTree(label, Annotation(annotation), tuple(children), Kind.NONTERMINAL)


@lru_cache(maxsize=None)
def schema_labels(schema: SchematicTree) -> frozenset:
    return frozenset(n.label for _, n in schema.walk())


@dataclass(frozen=True)
class StgGrammar:
    nonterminals: frozenset
    terminals: frozenset
    start: str
    initial_trees: tuple  # ((name, SchematicTree), ...) sorted by name

    @classmethod
    def build(cls, nonterminals, terminals, start, trees: Mapping[str, SchematicTree]):
        return cls(frozenset(nonterminals), frozenset(terminals), start,
                   tuple(sorted(trees.items())))

    @property
    def formalism(self) -> str:
        return "stg"

    @property
    def trees(self) -> dict:
        return dict(self.initial_trees)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.nonterminals, self.terminals)

    def trees_rooted(self, label: str) -> list[tuple[str, SchematicTree]]:
        return [(n, t) for n, t in self.initial_trees if t.label == label]


class PathLabelSet(frozenset):
    """Nonterminal labels on a root-to-site path, site excluded."""


# -- validation ---------------------------------------------------------------

def _min_yields(grammar: StgGrammar) -> dict:
    """Least yield length derivable from each nonterminal, ignoring the path
    condition (so it is a lower bound). ``inf`` marks underivable labels."""
    lb = {a: math.inf for a in grammar.nonterminals}

    def cost(s: SchematicTree) -> float:
        if not s.children:
            if s.kind is Kind.TERMINAL:
                return 1
            if s.kind is Kind.EPSILON:
                return 0
            return lb.get(s.label, math.inf)
        return sum(0 if c.annotation is Annotation.STAR else cost(c) for c in s.children)

    changed = True
    while changed:
        changed = False
        for _, tree in grammar.initial_trees:
            if tree.label not in lb:
                continue
            c = cost(tree)
            if c < lb[tree.label]:
                lb[tree.label] = c
                changed = True
    return lb, cost


def validate_stg(grammar: StgGrammar) -> ValidationReport:
    report = ValidationReport()
    overlap = grammar.nonterminals & grammar.terminals
    if overlap:
        report.add("OverlappingAlphabets", f"declared as both terminal and nonterminal: {sorted(overlap)}")
    if grammar.start not in grammar.nonterminals:
        report.add("StartNotNonterminal", f"start symbol {grammar.start!r} is not a declared nonterminal")
    for name, tree in grammar.initial_trees:
        if tree.annotation is not Annotation.NONE:
            report.add("AnnotatedRoot", "the root of an initial tree cannot be annotated", name, ())
        for addr, n in tree.walk():
            if n.label == EPS or n.kind is Kind.EPSILON:
                report.add("EpsilonInStg", "epsilon leaves are not allowed in schematic tree grammars", name, addr)
            elif n.label not in grammar.nonterminals and n.label not in grammar.terminals:
                report.add("UndeclaredLabel", f"label {n.label!r} is not declared", name, addr)
            elif n.children and n.label in grammar.terminals:
                report.add("TerminalInternal", f"terminal {n.label!r} labels an internal node", name, addr)
    if report.ok:
        lb, cost = _min_yields(grammar)
        for name, tree in grammar.initial_trees:
            for addr, n in tree.walk():
                if addr and n.annotation is not Annotation.NONE and cost(n) == 0:
                    report.add("NullableRepetition",
                               f"every copy of {n.label}{n.annotation.value} may be empty, "
                               "so the tree set is infinite at bounded length", name, addr)
        for a in sorted(grammar.nonterminals):
            if lb[a] == math.inf and any(n.label == a for _, t in grammar.initial_trees for _, n in t.walk()):
                report.warn("Underivable", f"no complete tree is derivable from {a!r}")
    return report


def _check(grammar: StgGrammar):
    report = validate_stg(grammar)
    if not report.ok:
        raise InvalidGrammar(report)


# -- instantiation ------------------------------------------------------------

def _child_trees(tree: SyntaxTree, schema: SchematicTree) -> tuple:
    kids = tree.children
    if schema.children and kids == (EPS_LEAF,):
        return ()
    return kids


@lru_cache(maxsize=1 << 16)
def _instantiates_one(tree: SyntaxTree, schema: SchematicTree) -> bool:
    if tree.label != schema.label:
        return False
    if not schema.children:
        return not tree.children and tree.kind is schema.kind
    if tree.kind is not Kind.NONTERMINAL:
        return False
    kids = _child_trees(tree, schema)
    n = len(kids)
    # reach[j] = positions i such that kids[:i] instantiates schema.children[:j]
    reach = {0}
    for j, sc in enumerate(schema.children):
        nxt = set()
        for i in sorted(reach):
            if sc.annotation is not Annotation.NONE:
                if sc.annotation is Annotation.STAR:
                    nxt.add(i)
                k = i
                while k < n and _instantiates_one(kids[k], sc):
                    k += 1
                    nxt.add(k)
            elif i < n and _instantiates_one(kids[i], sc):
                nxt.add(i + 1)
        reach = nxt
        if not reach:
            return False
    return n in reach


def instantiates(trees: Sequence[SyntaxTree], schema: SchematicTree) -> bool:
    """Decide whether the sequence ``trees`` instantiates ``schema``.

    The root annotation of ``schema`` fixes the admissible sequence length:
    exactly one when unannotated, at least one for ``+``, any for ``*``.
    """
    trees = tuple(trees)
    if schema.annotation is Annotation.NONE and len(trees) != 1:
        return False
    if schema.annotation is Annotation.PLUS and not trees:
        return False
    return all(_instantiates_one(t, schema) for t in trees)


class _Instancer:
    """Generates single-copy instantiations of schematic nodes under a cost
    budget. Repetition vectors list, in preorder, the copy count chosen at
    every annotated node that gets expanded."""

    def __init__(self, leaf_cost, node_cost: int, eps_cost: int, cap: int | None = None):
        self.leaf_cost = leaf_cost
        self.node_cost = node_cost
        self.eps_cost = eps_cost
        self.cap = cap
        self.memo: dict = {}

    def one(self, s: SchematicTree, budget, forbid: frozenset = frozenset()) -> list:
        if s.label in forbid:
            return []
        forbid = forbid & schema_labels(s)
        key = (s, budget, forbid)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if not s.children:
            c = self.leaf_cost(s)
            out = [(SyntaxTree(s.label, (), s.kind), (), c)] if c <= budget else []
        else:
            seqs = [((), (), self.node_cost)]
            for child in s.children:
                seqs = [(ts + t2, rs + r2, c + c2)
                        for ts, rs, c in seqs
                        for t2, r2, c2 in self.seq(child, budget - c, forbid)]
                if not seqs:
                    break
            out = []
            for ts, rs, c in seqs:
                if not ts:
                    ts, c = (EPS_LEAF,), c + self.eps_cost
                    if c > budget:
                        continue
                out.append((SyntaxTree(s.label, ts, Kind.NONTERMINAL), rs, c))
        self.memo[key] = out
        return out

    def seq(self, s: SchematicTree, budget, forbid: frozenset) -> list:
        copies = self.one(s, budget, forbid)
        if s.annotation is Annotation.NONE:
            return [((t,), r, c) for t, r, c in copies]
        lo = 1 if s.annotation is Annotation.PLUS else 0
        cap = self.cap if self.cap is not None else int(budget)
        out = []
        frontier = [((), (), 0)]
        k = 0
        while frontier:
            if k >= lo:
                out.extend((ts, (k,) + rs, c) for ts, rs, c in frontier)
            if k >= cap:
                break
            frontier = [(ts + (t,), rs + r, c + cc)
                        for ts, rs, c in frontier
                        for t, r, cc in copies if c + cc <= budget]
            k += 1
        return out


def instantiate(schema: SchematicTree, repetitions: Sequence[int] = ()) -> SyntaxTree:
    """Build the instantiation selected by a preorder repetition vector."""
    reps = iter(repetitions)

    def one(s: SchematicTree) -> SyntaxTree:
        if not s.children:
            return SyntaxTree(s.label, (), s.kind)
        kids = []
        for c in s.children:
            if c.annotation is Annotation.NONE:
                kids.append(one(c))
                continue
            try:
                k = next(reps)
            except StopIteration:
                raise ValueError("repetition vector too short") from None
            if k < 0 or (k == 0 and c.annotation is Annotation.PLUS):
                raise ValueError(f"invalid copy count {k} for {c.label}{c.annotation.value}")
            kids.extend(one(c) for _ in range(k))
        return SyntaxTree(s.label, tuple(kids) or (EPS_LEAF,), Kind.NONTERMINAL)

    tree = one(schema)
    if next(reps, None) is not None:
        raise ValueError("repetition vector too long")
    return tree


def _instantiations(schema: SchematicTree, max_reps: int) -> list:
    inst = _Instancer(lambda s: 1, node_cost=1, eps_cost=1, cap=max_reps)
    found = inst.one(schema, math.inf)
    found.sort(key=lambda x: (x[2], x[1]))
    seen, out = set(), []
    for tree, reps, _ in found:
        if tree not in seen:
            seen.add(tree)
            out.append((tree, reps))
    return out


def enumerate_instantiations(schema: SchematicTree, max_reps: int) -> Iterator[SyntaxTree]:
    """Every tree instantiating ``schema`` with at most ``max_reps`` copies at
    each annotated node, fewest nodes first, then by repetition vector."""
    if schema.annotation is not Annotation.NONE:
        raise ValueError("schema root must be unannotated")
    if max_reps < 1:
        raise ValueError("max_reps must be positive")
    for tree, _ in _instantiations(schema, max_reps):
        yield tree


# -- substitution -------------------------------------------------------------

def check_site(host: SyntaxTree, address, filler: SyntaxTree) -> SyntaxTree:
    site = host.subtree(address)
    if not site.is_site():
        raise NotASubstitutionSite(f"node at {list(address)} ({site.label}) is not a nonterminal leaf")
    if site.label != filler.label:
        raise LabelMismatch(site.label, filler.label)
    return site


def path_labels(host: SyntaxTree, address) -> PathLabelSet:
    return PathLabelSet(ancestor_labels(host, address))


def substitute_stg(host: SyntaxTree, address, filler: SyntaxTree) -> SyntaxTree:
    """Substitute ``filler`` at the nonterminal leaf ``address`` of ``host``.

    Raises PathRecursion when a nonterminal strictly above the site (the host
    root included) labels any node of ``filler``.
    """
    address = tuple(address)
    check_site(host, address, filler)
    clash = path_labels(host, address) & filler.nonterminal_labels()
    if clash:
        raise PathRecursion(min(clash), clash)
    return replace_at(host, address, filler)


# -- enumeration --------------------------------------------------------------

class _StgEnumerator:
    def __init__(self, grammar: StgGrammar):
        self.grammar = grammar
        self.lb, _ = _min_yields(grammar)
        self.by_root: dict = {}
        for name, tree in grammar.initial_trees:
            self.by_root.setdefault(tree.label, []).append((name, tree))
        self.reach = _reachable(grammar)

        def leaf_cost(s):
            if s.kind is Kind.TERMINAL:
                return 1
            return self.lb.get(s.label, math.inf)

        self.instancer = _Instancer(leaf_cost, node_cost=0, eps_cost=0)
        self.memo: dict = {}

    def derive(self, label: str, forbid: frozenset, budget: int) -> list:
        """All complete derived trees rooted at ``label`` with yield length at
        most ``budget`` whose pieces avoid ``forbid`` along their paths."""
        if label in forbid:
            return []
        key = (label, forbid & self.reach.get(label, frozenset()), budget)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        for name, schema in self.by_root.get(label, ()):
            found = self.instancer.one(schema, budget, forbid)
            found = sorted(found, key=lambda x: (x[2], x[1]))
            for inst, reps, _ in found:
                sites = inst.sites()
                paths = [path_labels(inst, a) for a in sites]
                fixed = len(yield_of(inst)) - len(sites)
                out.extend(self._fill(name, reps, inst, sites, paths, fixed, forbid, budget))
        self.memo[key] = out
        return out

    def _fill(self, name, reps, inst, sites, paths, fixed, forbid, budget):
        site_labels = [inst.subtree(a).label for a in sites]
        tail_lb = [0] * (len(sites) + 1)
        for k in range(len(sites) - 1, -1, -1):
            tail_lb[k] = tail_lb[k + 1] + self.lb.get(site_labels[k], math.inf)
        results = []

        def go(k, tree, used, fills):
            if k == len(sites):
                results.append(DerivationNode(tree, used, name, reps, tuple(fills)))
                return
            room = budget - used - tail_lb[k + 1]
            if room < 0:
                return
            for d in self.derive(site_labels[k], forbid | paths[k], room):
                go(k + 1, replace_at(tree, sites[k], d.tree), used + d.length,
                   fills + [(sites[k], paths[k], d)])

        go(0, inst, fixed, [])
        return results


def _reachable(grammar: StgGrammar) -> dict:
    """Nonterminal labels that can occur in trees derived from each label."""
    direct = {a: set() for a in grammar.nonterminals}
    for _, t in grammar.initial_trees:
        direct.setdefault(t.label, set()).update(
            n.label for _, n in t.walk() if n.label in grammar.nonterminals)
    reach = {}
    for a in direct:
        seen, stack = {a}, [a]
        while stack:
            for b in direct.get(stack.pop(), ()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        reach[a] = frozenset(seen)
    return reach


def enumerate_stg(grammar: StgGrammar, max_len: int) -> Iterator[tuple[SyntaxTree, DerivationTrace]]:
    """Stream the tree set restricted to yields of length ``max_len`` or less.

    Each tree comes with one bottom-up trace: every instantiation receives
    fully derived fillers, leftmost site first. Output is ordered by yield
    length, then by generation order (initial tree name, repetition vector,
    fillers).
    """
    _check(grammar)
    found = _StgEnumerator(grammar).derive(grammar.start, frozenset(), max_len)
    seen, unique = set(), []
    for d in found:
        if d.tree not in seen:
            seen.add(d.tree)
            unique.append(d)
    unique.sort(key=lambda d: d.length)
    for d in unique:
        yield d.tree, d.trace()


def replay_stg(grammar: StgGrammar, trace: DerivationTrace) -> SyntaxTree:
    trees = grammar.trees

    def inst(step: Instantiate):
        return instantiate(trees[step.tree_name], step.repetitions)

    def subst(host, address, filler):
        return substitute_stg(host, address, filler)

    return trace.replay(inst, subst)


def stg_language(grammar: StgGrammar, max_len: int) -> set:
    return {yield_of(t) for t, _ in enumerate_stg(grammar, max_len)}


def member_stg(grammar: StgGrammar, sentence: Sequence[str]) -> bool:
    """Membership in the string language, decided on the compiled automaton."""
    from .regular import compiled_automaton, automaton_member

    _check(grammar)
    sentence = tuple(sentence)
    for tok in sentence:
        if tok not in grammar.terminals:
            raise UnknownToken(tok)
    return automaton_member(compiled_automaton(grammar), sentence)
