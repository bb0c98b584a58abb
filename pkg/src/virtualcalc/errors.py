"""Exception hierarchy shared by every module."""
from __future__ import annotations


class VirtualCalcError(Exception):
    """Base class for all errors raised by virtualcalc."""


class NotInvertible(VirtualCalcError, ZeroDivisionError):
    """A series branch is zero (up to truncation) and has no inverse."""


class PointwiseZero(NotInvertible):
    """A sequence value was exactly zero at a sampled index during inversion."""

    def __init__(self, index: int):
        super().__init__(f"sequence value is zero at index {index}")
        self.index = index


class NoStandardPart(VirtualCalcError):
    """The value is not infinitely close to any real number.

    ``unknown`` is set when the sequence-tier heuristic was inconclusive
    rather than the value being provably infinite or oscillating.
    """

    def __init__(self, message: str = "no standard part", unknown: bool = False):
        super().__init__(message)
        self.unknown = unknown


class DomainError(VirtualCalcError, ValueError):
    def __init__(self, message: str, node=None, index: int | None = None):
        super().__init__(message)
        self.node = node
        self.index = index


class CenterOnBoundary(DomainError):
    """Taylor lifting was requested at a center where the sign is undecidable."""


class NonSmoothNode(VirtualCalcError):
    """Symbolic differentiation hit a node without a derivative rule (abs, patches)."""


class ParseError(VirtualCalcError, ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position
        self.text = text


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class UnsupportedExpression(ParseError):
    """The name is a known piecewise construct that the grammar deliberately omits."""


class UnsupportedSet(VirtualCalcError, ValueError):
    pass


class NotInterior(VirtualCalcError):
    pass


class NotDerivable(VirtualCalcError):
    def __init__(self, message: str, per_probe: dict | None = None):
        super().__init__(message)
        self.per_probe = per_probe or {}


class DegenerateInterval(VirtualCalcError, ValueError):
    pass


class NotPositive(DomainError):
    pass


class NotIntegrable(VirtualCalcError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UnknownSuite(VirtualCalcError, KeyError):
    pass
