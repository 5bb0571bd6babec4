"""Domain errors raised across the package.

Every error carries its class name so the CLI can print it verbatim.
"""


class DomainError(Exception):
    """Base class for recoverable, domain-level failures."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DegenerateCrossing(DomainError):
    pass


class EndpointMismatch(DomainError):
    pass


class PunctureProximity(DomainError):
    pass


class PoleAtInput(DomainError):
    pass


class NumericalFailure(DomainError):
    pass


class BranchAmbiguity(DomainError):
    pass


class CriticalValueProximity(DomainError):
    pass


class WindowEscape(DomainError):
    pass


class AccuracyUnreachable(DomainError):
    pass


class InvalidClassEntry(DomainError):
    pass


class NoConvergence(DomainError):
    pass


class UnsupportedFamily(DomainError):
    pass


class ZeroMeasureTile(DomainError):
    pass


class Inconclusive(DomainError):
    pass


class NonClosedLift(DomainError):
    pass


class EmptyGraph(DomainError):
    pass


class FamilyMismatch(DomainError):
    pass


class DegenerateClass(DomainError):
    pass
