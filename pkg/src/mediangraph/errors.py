"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`MedianGraphError`, so callers (the CLI in particular) can map
failures to exit codes by category.
"""


class MedianGraphError(Exception):
    """Base class for all package errors."""


class DataError(MedianGraphError, ValueError):
    """Input data is malformed or incompatible."""


class NumericalError(MedianGraphError, ArithmeticError):
    """A numerical routine could not produce a valid answer."""


class DimensionMismatch(DataError):
    pass


class InsufficientData(DataError):
    pass


class EmptyInput(DataError):
    pass


class DegenerateColumn(DataError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column + 1} has zero sample variance")


class InvalidSparsity(DataError):
    pass


class InvalidPattern(DataError):
    pass


class InvalidPerturbation(DataError):
    pass


class TooLarge(DataError):
    pass


class Infeasible(NumericalError):
    """The CLIME linear program for ``column`` (0-based) has no feasible point."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"CLIME problem for column {column + 1} is infeasible")


class NotPositiveDefinite(NumericalError):
    pass


class InternalError(NumericalError):
    pass


class TieAtRankS(MedianGraphError):
    """Edge counts tie across the rank-``s`` boundary; the median is not unique.

    ``pairs`` holds the tied node pairs (0-based, ``j < k``).
    """

    def __init__(self, pairs, s):
        self.pairs = tuple(pairs)
        self.s = s
        shown = ", ".join(f"({j + 1},{k + 1})" for j, k in self.pairs[:10])
        more = "" if len(self.pairs) <= 10 else f", ... ({len(self.pairs)} pairs)"
        super().__init__(f"edge counts tied at rank s={s}: {shown}{more}")


class NoStableLambda(UserWarning):
    """StARS found no grid value below the instability threshold."""
