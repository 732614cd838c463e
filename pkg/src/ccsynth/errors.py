"""Exception hierarchy shared across the package."""

from __future__ import annotations


class CcsynthError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CcsynthError):
    """An automaton or alphabet violates a structural invariant."""


class EmptyInitialSet(ValidationError):
    pass


class UnknownEvent(ValidationError):
    pass


class UnknownState(ValidationError):
    pass


class DuplicateStateId(ValidationError):
    pass


class AlphabetMismatch(CcsynthError):
    """Binary operation applied to automata over different alphabets."""


class UniverseMismatch(CcsynthError):
    """Relation or family arguments refer to different state universes."""


class CapExceeded(CcsynthError):
    """A configured search bound was exceeded.

    Carries the offending size and the bound so callers (and the CLI)
    can report both.
    """

    def __init__(self, size: int, cap: int, what: str = "pair universe"):
        self.size = size
        self.cap = cap
        self.what = what
        super().__init__(f"{what} has size {size}, which exceeds the cap of {cap}")


class NotAFamily(CcsynthError):
    """Supervisor construction requires a valid controllability family."""


class NotCcSimulation(CcsynthError):
    """Family extraction requires a covariant-contravariant simulation."""


class ParseError(CcsynthError):
    """Automaton file could not be parsed; reports 1-based line and column."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}")
