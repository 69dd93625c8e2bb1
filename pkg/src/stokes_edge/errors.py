"""Exception types raised by the package."""


class StokesEdgeError(Exception):
    """Base class for all errors raised here."""


class DomainError(StokesEdgeError, ValueError):
    pass


class SingularPoint(StokesEdgeError, ValueError):
    """Kernel requested at (or numerically at) x == xi."""


class OrderTooHigh(StokesEdgeError, ValueError):
    pass


class UnsupportedBc(StokesEdgeError, ValueError):
    pass


class EvaluationInsideSupport(StokesEdgeError, ValueError):
    """Representation formula requested inside the source support (near-singular quadrature)."""


class DegenerateLambda(StokesEdgeError, ValueError):
    """Power basis degenerates near lambda in {-1, 0, 1}."""


class ContourThroughZero(StokesEdgeError, ArithmeticError):
    pass


class NonConvergence(StokesEdgeError, ArithmeticError):
    pass


class SpectrumEmptyInRegion(StokesEdgeError, LookupError):
    pass


class EntryIdenticallyZero(StokesEdgeError, ValueError):
    pass


class UnmatchedEigenvalue(StokesEdgeError, AssertionError):
    pass


class SchemaViolation(StokesEdgeError, ValueError):
    pass
