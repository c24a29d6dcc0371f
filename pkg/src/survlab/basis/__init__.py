from .knots import DEFAULT_QUANTILE_KNOTS, DEFAULT_TIME_KNOTS, KnotGrid
from .piecewise import BASIS_KINDS, BasisKind, BasisSet

__all__ = [
    "BASIS_KINDS",
    "DEFAULT_QUANTILE_KNOTS",
    "DEFAULT_TIME_KNOTS",
    "BasisKind",
    "BasisSet",
    "KnotGrid",
]
