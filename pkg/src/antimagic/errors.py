"""Exception types shared across the package.

Input problems (bad text, impossible shapes) are ValueErrors so callers can
treat them uniformly; violated internal invariants are RuntimeErrors because
they indicate a bug, not bad input.
"""


class GraphFormatError(ValueError):
    """Raised when an edge-list document cannot be parsed."""


class GraphShapeError(ValueError):
    """Raised when a graph fails a structural requirement (regularity,
    even degree, connectivity, degree bounds of a bipartite view)."""


class InternalInvariantError(RuntimeError):
    """Raised when a construction-time invariant fails.

    Reaching this means the implementation, not the input, is wrong: every
    connected even-regular graph of degree at least 4 admits a labeling, so
    the construction has no legitimate failure path.
    """


class OracleBudgetError(RuntimeError):
    """Raised when the brute-force search exceeds its node budget."""


class GenerationBudgetError(RuntimeError):
    """Raised when random generation exhausts its retry budget."""


class StressFailure(RuntimeError):
    """Raised by the stress harness when an instance fails; carries enough
    context to replay the instance by hand."""

    def __init__(self, message: str, instance: str):
        super().__init__(message)
        self.instance = instance
