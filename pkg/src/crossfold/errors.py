"""Exception hierarchy shared by all modules.

Every domain error derives from :class:`CrossfoldError`; the CLI maps these to
exit status 1 and prints the class name.
"""

from __future__ import annotations


class CrossfoldError(Exception):
    """Base class for domain errors."""


class InvalidStructure(CrossfoldError):
    """A diagram violates one of the structure invariants."""

    def __init__(self, message: str, arcs=()):
        super().__init__(message)
        self.arcs = tuple(arcs)


class PositionOutOfRange(InvalidStructure):
    pass


class DegreeViolation(InvalidStructure):
    pass


class ArcTooShort(InvalidStructure):
    pass


class StackTooShort(InvalidStructure):
    pass


class CrossingBoundExceeded(InvalidStructure):
    pass


class ArcNotInStructure(CrossfoldError):
    pass


class InvalidParams(CrossfoldError):
    pass


class MalformedPath(CrossfoldError):
    pass


class NotAMotif(CrossfoldError):
    pass


class NoConvergence(CrossfoldError):
    pass


class EmptyStructure(CrossfoldError):
    pass


class PositionsOccupied(CrossfoldError):
    pass


class FrontierViolation(CrossfoldError):
    pass


class AdjacentStackMerge(CrossfoldError):
    pass


class NotMinimal(CrossfoldError):
    pass


class NotASkeleton(CrossfoldError):
    pass


class LimitExceeded(CrossfoldError):
    pass


class InadmissiblePair(CrossfoldError):
    pass


class InvalidAlphabet(CrossfoldError):
    pass


class CeilingExceeded(CrossfoldError):
    pass


class UnsupportedK(CrossfoldError):
    pass


class ConfigError(CrossfoldError):
    pass


class FormatError(CrossfoldError):
    pass
