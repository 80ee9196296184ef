from __future__ import annotations


class L2AlexError(Exception):
    """Base class for library errors."""


class UnknownGenerator(L2AlexError):
    pass


class MalformedPresentation(L2AlexError):
    pass


class MalformedDiagram(L2AlexError):
    pass


class NotCoprime(L2AlexError):
    pass


class NotHomologyCircle(L2AlexError):
    pass


class UnsupportedGroupClass(L2AlexError):
    pass


class ModelMismatch(L2AlexError):
    pass


class ZeroParameter(L2AlexError):
    pass


class NotUnitModulus(L2AlexError):
    pass


class IndexOutOfRange(L2AlexError):
    pass


class ZeroCoefficient(L2AlexError):
    pass


class FiniteOrderElement(L2AlexError):
    pass


class ZeroPolynomial(L2AlexError):
    pass


class NoDominantFactoring(L2AlexError):
    pass


class ModelUnsupported(L2AlexError):
    pass


class BallTooLarge(L2AlexError):
    pass


class EngineUnsupported(L2AlexError):
    pass


class NonpositiveValue(L2AlexError):
    pass


class UnsupportedModel(L2AlexError):
    pass


class NotDetAcyclic(L2AlexError):
    pass


class CircleZero(L2AlexError):
    pass


class ParseError(L2AlexError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
