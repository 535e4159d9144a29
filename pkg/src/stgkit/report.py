"""Validation reports shared by the three grammar validators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InvalidGrammar


class Violation(NamedTuple):
    code: str
    tree: str | None
    address: tuple
    message: str

    def __str__(self):
        where = ""
        if self.tree is not None:
            where = f" [{self.tree} @ {list(self.address)}]"
        return f"{self.code}{where}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code, message, tree=None, address=()):
        self.violations.append(Violation(code, tree, tuple(address), message))

    def warn(self, code, message, tree=None, address=()):
        self.warnings.append(Violation(code, tree, tuple(address), message))

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def raise_if_invalid(self):
        if not self.ok:
            raise InvalidGrammar(self)

    def __str__(self):
        lines = [f"error: {v}" for v in self.violations]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) if lines else "ok"
