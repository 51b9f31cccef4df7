"""
Exceptions raised by the Orbits app.

Every error the library raises derives from MaslovKitError so that the
management command can turn it into a CommandError in one place. Errors that
reject a bad argument also derive from ValueError.
"""

from typing import Optional


class MaslovKitError(Exception):
    """Base class for all maslovkit errors."""
    pass


class InvalidBlockError(MaslovKitError, ValueError):
    """
    A normal-form block was constructed with parameters outside its domain,
    e.g. N1(2, 0) or a rotation with theta/pi = 1.
    """
    pass


class IrrationalRotationError(MaslovKitError, ValueError):
    """
    A rotation block has an irrational 2cos(theta) and therefore no rational
    matrix representative.
    """
    pass


class NotSymplecticError(MaslovKitError, ValueError):
    """A matrix failed the symplectic test or has an unusable shape."""
    pass


class UnsupportedCaseError(MaslovKitError):
    """
    The requested closed form does not exist for this normal-form case.

    Raised for the non-degenerate variant, whose index iteration is handled by
    an external theorem rather than a formula.
    """
    pass


class InvalidConfigError(MaslovKitError, ValueError):
    """
    An orbit configuration violates a structural rule.

    Attributes:
        rule (str): human-readable statement of the violated rule
    """

    def __init__(self, rule: str):
        super().__init__(rule)
        self.rule = rule


class MissingCriticalTypeError(MaslovKitError):
    """A critical type vector is missing for some residue class mod K(y)."""
    pass


class InapplicableIdentityError(MaslovKitError):
    """The resonance identities were asked about an orbit with zero mean index."""
    pass


class InconsistentResonanceError(MaslovKitError):
    """The unknown critical type entry does not enter the resonance identity."""
    pass


class UnsupportedSeriesError(MaslovKitError):
    """The Morse series cannot be truncated because the mean index is not positive."""
    pass


class InconclusiveTruncationError(MaslovKitError):
    """
    The certified window of a truncated series is empty.

    Attributes:
        truncation (int): truncation degree that was used
        needed (int): smallest truncation that would give a non-empty window
    """

    def __init__(self, message: str, truncation: int, needed: int):
        super().__init__(message)
        self.truncation = truncation
        self.needed = needed


class ConfigParseError(MaslovKitError, ValueError):
    """
    A run configuration could not be parsed.

    Attributes:
        line (Optional[int]): 1-based line number of the offending input line
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ConfigurationError(MaslovKitError):
    """An environment override holds a value that cannot be used."""
    pass
