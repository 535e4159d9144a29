"""Derivation traces: replayable records of elementary steps.

Steps are numbered by position. Every step produces one tree; ``Substitute``
and ``Adjoin`` refer back to earlier steps by number, and the last step's
tree is the derived tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

from .trees import SyntaxTree


class Instantiate(NamedTuple):
    tree_name: str
    repetitions: tuple = ()


class Substitute(NamedTuple):
    host: int
    address: tuple
    filler: int
    # None for formalisms without the path condition
    path_labels: frozenset | None = None


class Adjoin(NamedTuple):
    host: int
    address: tuple
    auxiliary: int


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def operation_count(self) -> int:
        return sum(not isinstance(s, Instantiate) for s in self.steps)

    def adjoin_count(self) -> int:
        return sum(isinstance(s, Adjoin) for s in self.steps)

    def replay(self, instantiate: Callable[[Instantiate], SyntaxTree],
               substitute: Callable, adjoin: Callable | None = None) -> SyntaxTree:
        trees: list[SyntaxTree] = []
        for step in self.steps:
            if isinstance(step, Instantiate):
                trees.append(instantiate(step))
            elif isinstance(step, Substitute):
                trees.append(substitute(trees[step.host], step.address, trees[step.filler]))
            elif isinstance(step, Adjoin):
                if adjoin is None:
                    raise ValueError("trace contains adjoining steps")
                trees.append(adjoin(trees[step.host], step.address, trees[step.auxiliary]))
            else:
                raise TypeError(f"unknown step {step!r}")
        return trees[-1]

    def format(self) -> list[str]:
        lines = []
        for i, s in enumerate(self.steps):
            if isinstance(s, Instantiate):
                reps = f" reps={list(s.repetitions)}" if s.repetitions else ""
                lines.append(f"{i}: instantiate {s.tree_name}{reps}")
            elif isinstance(s, Substitute):
                path = ""
                if s.path_labels is not None:
                    path = " path={" + ",".join(sorted(s.path_labels)) + "}"
                lines.append(f"{i}: substitute #{s.filler} into #{s.host} at {list(s.address)}{path}")
            else:
                lines.append(f"{i}: adjoin #{s.auxiliary} into #{s.host} at {list(s.address)}")
        return lines


class TraceBuilder:
    """Accumulates steps; used by the enumerators to flatten derivations."""

    def __init__(self):
        self.steps = []

    def add(self, step) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def build(self) -> DerivationTrace:
        return DerivationTrace(tuple(self.steps))


class DerivationNode(NamedTuple):
    """An elementary tree plus the derived fillers substituted into it."""

    tree: SyntaxTree
    length: int
    name: str
    reps: tuple
    fills: tuple  # ((address, path labels or None, DerivationNode), ...)

    def flatten(self, builder: TraceBuilder) -> int:
        fillers = [(addr, path, d.flatten(builder)) for addr, path, d in self.fills]
        host = builder.add(Instantiate(self.name, self.reps))
        for addr, path, fid in fillers:
            host = builder.add(Substitute(host, addr, fid, path))
        return host

    def trace(self) -> DerivationTrace:
        b = TraceBuilder()
        self.flatten(b)
        return b.build()
