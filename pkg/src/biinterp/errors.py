"""Exception hierarchy shared by every layer of the verifier."""


class VerifierError(Exception):
    """Base class for all errors raised by this package."""


class LayoutError(VerifierError):
    """Operands belong to different ring or group layouts."""


class NonUnitError(VerifierError):
    """An inverse was requested for an element that is not a unit.

    Attributes:
        component: index of the first component where the residue is not
            invertible.
    """

    def __init__(self, message, component):
        super().__init__(message)
        self.component = component


class DecompositionError(VerifierError):
    """No square-difference witness exists for an element."""


class TooLargeError(VerifierError):
    """A brute-force enumeration would exceed its size guard."""


class DomainError(VerifierError):
    """An argument lies outside the set an operation is defined on."""


class UnsupportedRingError(VerifierError):
    """The ring falls outside the family a construction supports."""


class ConfigError(VerifierError):
    """Malformed descriptor, unknown suite name or bad CLI option."""


class CheckFailure(VerifierError):
    """A constructive formula produced a value its oracle disagrees with."""
