"""Exception hierarchy for the fault localization pipeline.

Every error raised on purpose anywhere in the package derives from
:class:`FaultLocError`, so the CLI can map failure classes to exit codes
without enumerating modules.
"""

from __future__ import annotations


class FaultLocError(Exception):
    """Base class for all package errors."""


class ParseError(FaultLocError):
    """Source text does not parse. Carries the offending position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SemanticError(FaultLocError):
    """Program parses but uses a construct outside the supported subset,
    or violates a static rule (undeclared name, recursion, shadowing, ...)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.message = message
        self.line = line


class IoError(FaultLocError):
    """A file or directory expected on disk is missing or unreadable."""


class FormatError(FaultLocError):
    """A test-suite file exists but its content is malformed."""


class UnrollError(FaultLocError):
    """A test's input list is shorter than the reads the unrolled program
    performs unconditionally on its straight-line prefix."""


class CapacityError(FaultLocError):
    """An instrumentation-time cap was exceeded (relaxation vector budget
    for nested loops)."""


class MissingVarError(FaultLocError):
    """A component's health variable did not survive into the CNF, so the
    soft-clause layer cannot be built. Indicates an encoder bug; never
    expected on user input."""


class HardUnsatError(FaultLocError):
    """The hard part of a WCNF is unsatisfiable: even with every component
    allowed to misbehave the observations cannot be met."""


class ResourceError(FaultLocError):
    """A configured budget (conflict budget, enumeration product cap) was
    exhausted before an answer was reached."""


class CapTooLarge(FaultLocError):
    """Brute-force diagnosis was asked to cover more components than its
    configured ceiling."""


class NoConsistentDiagnosis(FaultLocError):
    """The strategy produced no diagnosis consistent with all failing tests
    (for strategies that cannot always produce one)."""
