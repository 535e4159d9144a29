"""Cross-formalism comparison and the acquisition stage classifier."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Optional, Sequence

from .equiv import automaton_source, bounded_equiv, cfg_source, tag_source
from .grammar_io import Grammar, fixture_path, load_grammar
from .regular import automaton_member, compiled_automaton
from .stg import StgGrammar
from .tag import TagGrammar, member_tag
from .tsg import Earley, TsgGrammar, extract_cfg

log = logging.getLogger(__name__)


class StageVerdict(NamedTuple):
    stage: int
    formalism: str
    accepted: bool
    method: str


class StageResult(NamedTuple):
    sentence: tuple
    minimal_stage: Optional[int]
    per_stage: tuple


@lru_cache(maxsize=None)
def _chart(grammar: TsgGrammar) -> Earley:
    return Earley(extract_cfg(grammar))


def decision_source(grammar: Grammar):
    """The strongest available decision procedure as a language source."""
    if isinstance(grammar, StgGrammar):
        return automaton_source(compiled_automaton(grammar), grammar.terminals)
    if isinstance(grammar, TsgGrammar):
        return cfg_source(extract_cfg(grammar))
    return tag_source(grammar)


def compare_grammars(a: Grammar, b: Grammar, max_len: int):
    """Bounded comparison, each side decided by its strongest procedure:
    STG by compiled automaton, TSG by chart, TAG by bounded enumeration."""
    return bounded_equiv(decision_source(a), decision_source(b), max_len)


def membership(grammar: Grammar, sentence: Sequence[str]) -> tuple[bool, str]:
    """``(verdict, method)``; tokens outside the grammar's terminals give false."""
    sentence = tuple(sentence)
    known = all(tok in grammar.terminals for tok in sentence)
    if isinstance(grammar, StgGrammar):
        return known and automaton_member(compiled_automaton(grammar), sentence), "automaton"
    if isinstance(grammar, TsgGrammar):
        return known and _chart(grammar).recognize(sentence), "chart"
    if isinstance(grammar, TagGrammar):
        return known and member_tag(grammar, sentence, ceiling=max(20, len(sentence))), "bounded-search"
    raise TypeError(f"not a grammar: {type(grammar).__name__}")


def load_stage_grammars(directory=None) -> list:
    """Stage grammars from ``directory`` (default: the bundled stage fixtures),
    ordered by the numeric prefix of their file names."""
    root = Path(directory) if directory is not None else fixture_path("stages")
    files = sorted((p for p in root.iterdir() if p.suffix in (".stg", ".tsg", ".tag")),
                   key=lambda p: (int(p.name.split("-", 1)[0]), p.name))
    return [load_grammar(p) for p in files]


def classify_stage(sentence: Sequence[str], stage_grammars: Optional[Sequence[Grammar]] = None) -> StageResult:
    """Membership at every stage; the minimal stage is the first that accepts."""
    if isinstance(sentence, str):
        sentence = sentence.split()
    sentence = tuple(sentence)
    grammars = list(stage_grammars) if stage_grammars is not None else load_stage_grammars()
    with ThreadPoolExecutor(max_workers=max(1, len(grammars))) as pool:
        results = list(pool.map(lambda g: membership(g, sentence), grammars))
    verdicts = tuple(StageVerdict(i, g.formalism, ok, method)
                     for i, (g, (ok, method)) in enumerate(zip(grammars, results), 1))
    minimal = next((v.stage for v in verdicts if v.accepted), None)
    log.debug("classified %r as stage %s", " ".join(sentence), minimal)
    return StageResult(sentence, minimal, verdicts)
