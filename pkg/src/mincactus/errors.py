"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit code 1); broken
internal consistency checks derive from :class:`InternalError` (exit code 2).
"""

from __future__ import annotations


class MincactusError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MincactusError, ValueError):
    """The caller handed in something malformed."""


class VertexOutOfRange(InputError):
    pass


class NegativeWeight(InputError):
    pass


class WeightOverflow(InputError):
    """Total weight would exceed the 2^62 cap used by the flow solver."""


class DisconnectedGraph(InputError):
    pass


class EmptyOrFullSide(InputError):
    pass


class EmptySet(InputError):
    pass


class OverlappingTerminals(InputError):
    pass


class TooFewTerminals(InputError):
    pass


class TooManyTerminals(InputError):
    pass


class WrongSize(InputError):
    pass


class OverlappingSplits(InputError):
    pass


class UnknownNode(InputError):
    pass


class UnknownVertex(InputError):
    pass


class InvalidSubset(InputError):
    pass


class NotAGraph(InputError):
    """A hyperedge of rank ≥ 3 where only ordinary edges are allowed."""


class WeightedInsertion(InputError):
    """The incremental maintainer only accepts unit-weight insertions."""


class InstanceParseError(InputError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class InternalError(MincactusError, RuntimeError):
    """An internal consistency check failed."""


class SplitExists(InternalError):
    pass


class AnchorNotLeaflike(InternalError):
    pass


class SplitVerificationError(InternalError):
    """A sampled split failed its defensive re-check against the mincut value."""
