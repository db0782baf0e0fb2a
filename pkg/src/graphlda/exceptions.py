"""Exception types shared across the library.

Everything derives from :class:`GraphLdaError` so callers can catch one
base class, while each error also inherits the closest builtin category
(``ValueError`` for bad inputs, ``RuntimeError`` for numerical failures).
"""


class GraphLdaError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(GraphLdaError, ValueError):
    """Input shape does not agree with the model or fitted transform."""


class AsymmetricMatrix(GraphLdaError, ValueError):
    """Matrix exceeds the relative symmetry tolerance."""


class NonFinite(GraphLdaError, ValueError):
    """A value that must be finite is NaN or infinite."""


class InvalidConfig(GraphLdaError, ValueError):
    """Configuration value outside its documented domain."""


class ConvergenceFailure(GraphLdaError, RuntimeError):
    """An iterative numerical routine failed to converge."""


class ConnectivityExhausted(GraphLdaError, RuntimeError):
    """Too many consecutive disconnected draws while sampling a graph."""


class ZeroDegreeVertex(GraphLdaError, ValueError):
    """Degree normalization hit an isolated vertex.

    The offending vertex index is stored in ``vertex``.
    """

    def __init__(self, vertex: int):
        self.vertex = int(vertex)
        super().__init__(f"vertex {self.vertex} has zero degree")


class SingularWhitening(GraphLdaError, ValueError):
    """Whitening scale would divide by zero (zero eigenvalue, zero noise)."""


class InsufficientData(GraphLdaError, ValueError):
    """Not enough samples to fit the estimator."""


class EmptyClass(GraphLdaError, ValueError):
    """A class has no training samples."""


class SingularCovariance(GraphLdaError, RuntimeError):
    """Covariance solve failed because the matrix is singular."""


class EmptyInput(GraphLdaError, ValueError):
    """An aggregate was requested over an empty collection."""
