"""Exception hierarchy shared by every formalism."""


class StgkitError(Exception):
    pass


class UnbalancedBrackets(StgkitError, ValueError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class UnknownToken(StgkitError, ValueError):
    def __init__(self, token, message=None):
        super().__init__(message or f"unknown token {token!r}")
        self.token = token


class TerminalWithChildren(StgkitError, ValueError):
    def __init__(self, token):
        super().__init__(f"terminal {token!r} cannot have children")
        self.token = token


class InvalidAddress(StgkitError, IndexError):
    def __init__(self, address):
        super().__init__(f"address {list(address)} is not valid for this tree")
        self.address = tuple(address)


class NotASubstitutionSite(StgkitError, ValueError):
    pass


class NotAnAdjunctionSite(StgkitError, ValueError):
    pass


class LabelMismatch(StgkitError, ValueError):
    def __init__(self, expected, found):
        super().__init__(f"label mismatch: site is {expected!r}, tree is rooted in {found!r}")
        self.expected = expected
        self.found = found


class PathRecursion(StgkitError, ValueError):
    """A substitution would place a nonterminal below a node with the same label."""

    def __init__(self, label, labels=None):
        super().__init__(f"path recursion on {label!r}")
        self.label = label
        self.labels = frozenset(labels or {label})


class InvalidGrammar(StgkitError, ValueError):
    def __init__(self, report, message=None):
        super().__init__(message or f"invalid grammar:\n{report}")
        self.report = report


class ValidationFailed(InvalidGrammar):
    pass


class GrammarSyntaxError(StgkitError, ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class FormalismLexicalViolation(GrammarSyntaxError):
    pass


class LengthCeilingExceeded(StgkitError, ValueError):
    pass


class AlphabetMismatch(StgkitError, ValueError):
    def __init__(self, lhs, rhs):
        super().__init__(
            f"alphabets differ: {sorted(lhs)} vs {sorted(rhs)}")
        self.lhs = frozenset(lhs)
        self.rhs = frozenset(rhs)


class UnsupportedLiteral(StgkitError, ValueError):
    def __init__(self, literal):
        super().__init__(f"literal {literal!r} is not in the alphabet")
        self.literal = literal


class RegexSyntaxError(StgkitError, ValueError):
    pass


class TagCompletenessUnavailable(UserWarning):
    """A TAG language source is only complete relative to its step bound."""
