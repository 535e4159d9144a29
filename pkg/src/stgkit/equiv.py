"""Bounded language equivalence.

A :class:`LanguageSource` knows its terminal alphabet and can produce every
string it accepts up to a length bound. Recognizers (automata, Earley
charts) are explored prefix by prefix so that dead prefixes are cut early;
enumerators simply collect yields.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional

from .errors import AlphabetMismatch, TagCompletenessUnavailable
from .regular import Automaton, automaton_strings
from .stg import StgGrammar, stg_language
from .tag import TagGrammar, default_step_bound, tag_language
from .trees import yield_of
from .tsg import Cfg, Earley, TsgGrammar, enumerate_tsg


class Equal(NamedTuple):
    max_len: int
    size: int  # strings in the shared bounded language


class Counterexample(NamedTuple):
    string: tuple
    side: str  # "lhs" or "rhs": the side that accepts the string

    def text(self) -> str:
        return " ".join(self.string) if self.string else "<eps>"


@dataclass(frozen=True)
class LanguageSource:
    name: str
    alphabet: frozenset
    strings: Callable[[int], set]
    method: str = "enumeration"

    def language(self, max_len: int) -> set:
        return {s for s in self.strings(max_len) if len(s) <= max_len}


def shortlex(s: tuple):
    return (len(s), s)


def explore(initial, step, dead, accepts, alphabet: Iterable[str], max_len: int) -> set:
    """Collect accepted strings by breadth-first prefix extension."""
    symbols = sorted(alphabet)
    out = set()
    layer = [((), initial)]
    for n in range(max_len + 1):
        nxt = []
        for prefix, state in layer:
            if accepts(state):
                out.add(prefix)
            if n == max_len:
                continue
            for a in symbols:
                st = step(state, a)
                if not dead(st):
                    nxt.append((prefix + (a,), st))
        layer = nxt
    return out


def stg_source(grammar: StgGrammar) -> LanguageSource:
    return LanguageSource("stg-enumerator", grammar.terminals,
                          lambda n: stg_language(grammar, n))


def automaton_source(machine: Automaton, alphabet: Optional[Iterable[str]] = None) -> LanguageSource:
    symbols = frozenset(alphabet if alphabet is not None else machine.alphabet)
    return LanguageSource("automaton", symbols,
                          lambda n: automaton_strings(machine, n, symbols), "automaton")


def cfg_source(cfg: Cfg) -> LanguageSource:
    parser = Earley(cfg)

    def strings(n):
        return explore(parser.initial(), parser.step, parser.dead, parser.accepts,
                       cfg.terminals, n)

    return LanguageSource("cfg-chart", cfg.terminals, strings, "chart")


def tsg_source(grammar: TsgGrammar) -> LanguageSource:
    return LanguageSource("tsg-enumerator", grammar.terminals,
                          lambda n: {yield_of(t) for t, _ in enumerate_tsg(grammar, n)})


def tag_source(grammar: TagGrammar, max_steps: Optional[int] = None) -> LanguageSource:
    """TAG enumeration is complete up to the step bound; for lexicalized
    grammars the default bound covers every string of the requested length."""
    if not grammar.lexicalized():
        warnings.warn(TagCompletenessUnavailable(
            "tag grammar is not lexicalized; its bounded language is step-bounded"), stacklevel=2)

    def strings(n):
        steps = max_steps if max_steps is not None else default_step_bound(grammar, n)
        return tag_language(grammar, n, steps)

    return LanguageSource("tag-enumerator", grammar.terminals, strings, "bounded-search")


def finite_source(strings: Iterable, alphabet: Optional[Iterable[str]] = None,
                  name: str = "finite") -> LanguageSource:
    """A fixed set of strings; each string is a token tuple or a
    space-separated text."""
    lang = frozenset(tuple(s.split()) if isinstance(s, str) else tuple(s) for s in strings)
    symbols = frozenset(alphabet) if alphabet is not None else frozenset(t for s in lang for t in s)
    return LanguageSource(name, symbols, lambda n: set(lang))


def recognizer_source(accepts: Callable[[tuple], bool], alphabet: Iterable[str],
                      name: str = "recognizer") -> LanguageSource:
    """Brute force: every string over the alphabet is offered to ``accepts``."""
    symbols = frozenset(alphabet)
    return LanguageSource(name, symbols,
                          lambda n: explore((), lambda s, a: s + (a,), lambda s: False,
                                            accepts, symbols, n))


def as_source(obj) -> LanguageSource:
    if isinstance(obj, LanguageSource):
        return obj
    if isinstance(obj, StgGrammar):
        return stg_source(obj)
    if isinstance(obj, TsgGrammar):
        return tsg_source(obj)
    if isinstance(obj, TagGrammar):
        return tag_source(obj)
    if isinstance(obj, Automaton):
        return automaton_source(obj)
    if isinstance(obj, Cfg):
        return cfg_source(obj)
    if isinstance(obj, (set, frozenset, list, tuple)):
        return finite_source(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as a language source")


def bounded_equiv(lhs, rhs, max_len: int):
    """Compare the two languages on strings of length ``max_len`` or less.

    Returns :class:`Equal`, or the shortlex-least string accepted by exactly
    one side as a :class:`Counterexample`.
    """
    left, right = as_source(lhs), as_source(rhs)
    if left.alphabet != right.alphabet:
        raise AlphabetMismatch(left.alphabet, right.alphabet)
    a, b = left.language(max_len), right.language(max_len)
    diff = a ^ b
    if not diff:
        return Equal(max_len, len(a))
    witness = min(diff, key=shortlex)
    return Counterexample(witness, "lhs" if witness in a else "rhs")
