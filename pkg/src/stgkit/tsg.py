"""Tree substitution grammars and their context-free skeleton.

Substitution here has no path condition, so a tree may be substituted under
a node carrying its own root label. Every elementary tree flattens to one
context-free production (root label -> frontier), which is how membership is
decided.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Sequence

from .derivation import DerivationNode, DerivationTrace
from .errors import InvalidGrammar, UnknownToken
from .report import ValidationReport
from .stg import check_site
from .trees import Alphabet, Kind, SyntaxTree, replace_at, terminal_count

log = logging.getLogger(__name__)

SCHEMA_SIGILS = "+*"


@dataclass(frozen=True)
class TsgGrammar:
    nonterminals: frozenset
    terminals: frozenset
    start: str
    elementary_trees: tuple  # ((name, SyntaxTree), ...) sorted by name

    @classmethod
    def build(cls, nonterminals, terminals, start, trees: Mapping[str, SyntaxTree]):
        return cls(frozenset(nonterminals), frozenset(terminals), start,
                   tuple(sorted(trees.items())))

    @property
    def formalism(self) -> str:
        return "tsg"

    @property
    def trees(self) -> dict:
        return dict(self.elementary_trees)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.nonterminals, self.terminals)


def check_tree_labels(report: ValidationReport, name: str, tree: SyntaxTree,
                      nonterminals: frozenset, terminals: frozenset,
                      formalism: str, foot_ok: bool = False):
    """Label checks shared by the TSG and TAG validators."""
    for addr, n in tree.walk():
        label = n.label
        if n.kind is Kind.EPSILON:
            if n.children:
                report.add("TerminalInternal", "epsilon cannot have children", name, addr)
            continue
        if label in nonterminals or label in terminals:
            if n.children and label in terminals:
                report.add("TerminalInternal", f"terminal {label!r} labels an internal node", name, addr)
            continue
        if label[-1:] in SCHEMA_SIGILS and (label[:-1] in nonterminals or label[:-1] in terminals):
            report.add("SchematicAnnotationInTsg" if formalism == "tsg" else "SchematicAnnotationInTag",
                       f"schematic annotation {label!r} is only meaningful in an STG", name, addr)
        elif label.endswith("@") and label[:-1] in nonterminals and not foot_ok:
            report.add("FootOutsideAuxiliary", f"foot marker {label!r} outside an auxiliary tree", name, addr)
        else:
            report.add("UndeclaredLabel", f"label {label!r} is not declared", name, addr)


def _declarations(report, nonterminals, terminals, start):
    overlap = nonterminals & terminals
    if overlap:
        report.add("OverlappingAlphabets", f"declared as both terminal and nonterminal: {sorted(overlap)}")
    if start not in nonterminals:
        report.add("StartNotNonterminal", f"start symbol {start!r} is not a declared nonterminal")


def validate_tsg(grammar: TsgGrammar) -> ValidationReport:
    """Check declarations and labels. Recursion (a tree containing its own
    root label, directly or through other trees) is allowed."""
    report = ValidationReport()
    _declarations(report, grammar.nonterminals, grammar.terminals, grammar.start)
    for name, tree in grammar.elementary_trees:
        check_tree_labels(report, name, tree, grammar.nonterminals, grammar.terminals, "tsg")
        for addr, n in tree.walk():
            if n.no_adjoin:
                report.add("AdjoiningConstraintInTsg", "adjoining constraints need a TAG", name, addr)
    return report


def substitute_tsg(host: SyntaxTree, address, filler: SyntaxTree) -> SyntaxTree:
    """Substitution without any path condition."""
    address = tuple(address)
    check_site(host, address, filler)
    return replace_at(host, address, filler)


# -- context-free grammars ----------------------------------------------------

class Production(NamedTuple):
    lhs: str
    rhs: tuple

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else '<eps>'}"


@dataclass(frozen=True)
class Cfg:
    productions: tuple
    start: str
    nonterminals: frozenset
    terminals: frozenset

    def by_lhs(self) -> dict:
        out: dict = {}
        for i, p in enumerate(self.productions):
            out.setdefault(p.lhs, []).append(i)
        return out

    def nullable(self) -> frozenset:
        null = set()
        changed = True
        while changed:
            changed = False
            for p in self.productions:
                if p.lhs not in null and all(x in null for x in p.rhs):
                    null.add(p.lhs)
                    changed = True
        return frozenset(null)

    def lines(self) -> list[str]:
        return [str(p) for p in self.productions]


def extract_cfg(grammar: TsgGrammar) -> Cfg:
    """One production per elementary tree, in tree-name order; duplicates kept
    once."""
    report = validate_tsg(grammar)
    if not report.ok:
        raise InvalidGrammar(report)
    prods = []
    for _, tree in grammar.elementary_trees:
        rhs = tuple(n.label for n in tree.frontier() if n.kind is not Kind.EPSILON)
        p = Production(tree.label, rhs)
        if p not in prods:
            prods.append(p)
    return Cfg(tuple(prods), grammar.start, grammar.nonterminals, grammar.terminals)


class Earley:
    """Incremental Earley recognizer.

    A state is the tuple of item sets read so far, so states can be shared
    between prefixes. Items are ``(production, dot, origin)``. Empty
    productions are handled by advancing over nullable nonterminals at
    prediction time.
    """

    def __init__(self, cfg: Cfg):
        self.cfg = cfg
        self.prods = cfg.productions
        self.lhs_index = cfg.by_lhs()
        self.null = cfg.nullable()

    def _close(self, columns: tuple, seed, k: int) -> frozenset:
        items = set(seed)
        agenda = list(items)
        waiting: dict = {}  # nonterminal -> items in this column expecting it
        for it in items:
            self._note_waiting(waiting, it)
        while agenda:
            p, d, o = agenda.pop()
            rhs = self.prods[p].rhs
            new = []
            if d < len(rhs):
                x = rhs[d]
                if x in self.cfg.nonterminals:
                    new.extend((q, 0, k) for q in self.lhs_index.get(x, ()))
                    if x in self.null:
                        new.append((p, d + 1, o))
            else:
                lhs = self.prods[p].lhs
                parents = waiting.get(lhs, ()) if o == k else self._expecting(columns[o], lhs)
                new.extend((p2, d2 + 1, o2) for p2, d2, o2 in list(parents))
            for it in new:
                if it not in items:
                    items.add(it)
                    agenda.append(it)
                    self._note_waiting(waiting, it)
        return frozenset(items)

    def _note_waiting(self, waiting, item):
        p, d, _ = item
        rhs = self.prods[p].rhs
        if d < len(rhs):
            waiting.setdefault(rhs[d], []).append(item)

    def _expecting(self, column, label):
        return [(p, d, o) for p, d, o in column
                if d < len(self.prods[p].rhs) and self.prods[p].rhs[d] == label]

    def initial(self) -> tuple:
        seed = [(q, 0, 0) for q in self.lhs_index.get(self.cfg.start, ())]
        return (self._close((), seed, 0),)

    def step(self, state: tuple, token: str) -> tuple:
        k = len(state)
        scanned = [(p, d + 1, o) for p, d, o in state[-1]
                   if d < len(self.prods[p].rhs) and self.prods[p].rhs[d] == token]
        return state + (self._close(state, scanned, k),)

    def dead(self, state: tuple) -> bool:
        return not state[-1]

    def accepts(self, state: tuple) -> bool:
        return any(o == 0 and d == len(self.prods[p].rhs) and self.prods[p].lhs == self.cfg.start
                   for p, d, o in state[-1])

    def recognize(self, sentence: Sequence[str]) -> bool:
        state = self.initial()
        for tok in sentence:
            state = self.step(state, tok)
            if self.dead(state):
                return False
        return self.accepts(state)


def count_parses(cfg: Cfg, sentence: Sequence[str]) -> float:
    """Number of distinct parse trees; ``inf`` when a derivation cycle can
    produce the sentence in unboundedly many ways."""
    sentence = tuple(sentence)
    n = len(sentence)
    lhs_index = cfg.by_lhs()
    nts = cfg.nonterminals

    # derivable (symbol, i, j) spans, to a fixed point
    spans: set = set()

    def ends(rhs, i, j):
        reach = {i}
        for x in rhs:
            nxt = set()
            for m in reach:
                if x in nts:
                    nxt.update(k for k in range(m, j + 1) if (x, m, k) in spans)
                elif m < j and sentence[m] == x:
                    nxt.add(m + 1)
            reach = nxt
            if not reach:
                break
        return reach

    changed = True
    while changed:
        changed = False
        for width in range(n + 1):
            for i in range(n - width + 1):
                j = i + width
                for x in nts:
                    if (x, i, j) not in spans and any(
                            j in ends(cfg.productions[p].rhs, i, j) for p in lhs_index.get(x, ())):
                        spans.add((x, i, j))
                        changed = True

    def derives(x, i, j):
        if x in nts:
            return (x, i, j) in spans
        return j == i + 1 and sentence[i] == x

    memo: dict = {}
    active: set = set()

    def sym(x, i, j):
        if x not in nts:
            return 1
        key = (x, i, j)
        if key in memo:
            return memo[key]
        if key in active:
            # every factor on this path is derivable, so the cycle pumps
            return math.inf
        active.add(key)
        total = sum(seq(cfg.productions[p].rhs, i, j) for p in lhs_index.get(x, ()))
        active.discard(key)
        memo[key] = total
        return total

    def seq(rhs, i, j):
        if not rhs:
            return 1 if i == j else 0
        total = 0
        for m in range(i, j + 1):
            if derives(rhs[0], i, m) and j in ends(rhs[1:], m, j):
                total += sym(rhs[0], i, m) * seq(rhs[1:], m, j)
        return total

    if (cfg.start, 0, n) not in spans:
        return 0
    return sym(cfg.start, 0, n)


def cfg_member(grammar: Cfg, sentence: Sequence[str], count: bool = False):
    """Chart membership; with ``count=True`` returns ``(accepted, parses)``."""
    sentence = tuple(sentence)
    for tok in sentence:
        if tok not in grammar.terminals:
            raise UnknownToken(tok)
    accepted = Earley(grammar).recognize(sentence)
    if not count:
        return accepted
    return accepted, (count_parses(grammar, sentence) if accepted else 0)


# -- enumeration --------------------------------------------------------------

def _tsg_min_yields(grammar: TsgGrammar) -> dict:
    lb = {a: math.inf for a in grammar.nonterminals}
    changed = True
    while changed:
        changed = False
        for _, t in grammar.elementary_trees:
            c = terminal_count(t) + sum(lb.get(t.subtree(a).label, math.inf) for a in t.sites())
            if c < lb.get(t.label, math.inf):
                lb[t.label] = c
                changed = True
    return lb


def _has_stalled_cycle(grammar: TsgGrammar, lb: dict) -> bool:
    """True if some nonterminal can rewrite to itself without adding any
    terminal, which makes the tree set infinite at bounded yield length."""
    edges: dict = {}
    for _, t in grammar.elementary_trees:
        sites = [t.subtree(a).label for a in t.sites()]
        base = terminal_count(t)
        total = base + sum(lb.get(s, math.inf) for s in sites)
        for s in sites:
            if total - lb.get(s, math.inf) == 0:
                edges.setdefault(t.label, set()).add(s)
    state: dict = {}

    def visit(a):
        state[a] = 1
        for b in edges.get(a, ()):
            if state.get(b) == 1 or (b not in state and visit(b)):
                return True
        state[a] = 2
        return False

    return any(a not in state and visit(a) for a in list(edges))


def tsg_step_bound(grammar: TsgGrammar, max_len: int) -> int | None:
    """Substitution bound the enumerator applies, or None when the length
    bound alone guarantees completeness."""
    if _has_stalled_cycle(grammar, _tsg_min_yields(grammar)):
        return max(1, max_len) * len(grammar.elementary_trees)
    return None


class _TsgEnumerator:
    def __init__(self, grammar: TsgGrammar):
        self.grammar = grammar
        self.lb = _tsg_min_yields(grammar)
        self.by_root: dict = {}
        for name, t in grammar.elementary_trees:
            self.by_root.setdefault(t.label, []).append((name, t))
        self.memo: dict = {}

    def derive(self, label: str, budget: int, steps: float) -> list:
        key = (label, budget, steps)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        for name, tree in self.by_root.get(label, ()):
            sites = tree.sites()
            if len(sites) > steps:
                continue
            labels = [tree.subtree(a).label for a in sites]
            tail = [0] * (len(sites) + 1)
            for k in range(len(sites) - 1, -1, -1):
                tail[k] = tail[k + 1] + self.lb.get(labels[k], math.inf)
            fixed = terminal_count(tree)
            if fixed + tail[0] > budget:
                continue

            def go(k, cur, used, ops, fills):
                if k == len(sites):
                    out.append((DerivationNode(cur, used, name, (), tuple(fills)), ops))
                    return
                room = budget - used - tail[k + 1]
                if room < 0:
                    return
                for d, dops in self.derive(labels[k], room, steps - ops):
                    go(k + 1, replace_at(cur, sites[k], d.tree), used + d.length,
                       ops + dops, fills + [(sites[k], None, d)])

            go(0, tree, fixed, len(sites), [])
        self.memo[key] = out
        return out


def enumerate_tsg(grammar: TsgGrammar, max_len: int) -> Iterator[tuple[SyntaxTree, DerivationTrace]]:
    """Stream every complete derived tree rooted at the start symbol with
    yield length at most ``max_len``, shortest first. Each distinct derived
    tree appears once, with its first-found (bottom-up, leftmost) trace."""
    report = validate_tsg(grammar)
    if not report.ok:
        raise InvalidGrammar(report)
    bound = tsg_step_bound(grammar, max_len)
    if bound is not None:
        log.info("tsg enumeration limited to %d substitutions (stalled recursion)", bound)
    found = _TsgEnumerator(grammar).derive(grammar.start, max_len,
                                           math.inf if bound is None else bound)
    seen, unique = set(), []
    for d, _ in found:
        if d.tree not in seen:
            seen.add(d.tree)
            unique.append(d)
    unique.sort(key=lambda d: d.length)
    for d in unique:
        yield d.tree, d.trace()


def replay_tsg(grammar: TsgGrammar, trace: DerivationTrace) -> SyntaxTree:
    trees = grammar.trees
    return trace.replay(lambda s: trees[s.tree_name], substitute_tsg)
