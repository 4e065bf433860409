"""Exact Lebesgue measure and integration on Puiseux/Hahn series fields.

Values live in the Lebesgue algebra R[X] over the series field, X = log(1/t).
The heavy lifting happens in the C++ extension; this package re-exports its
surface.
"""

from _hahnmeasure import (
    AlgebraElement,
    DivergentIntegral,
    DomainError,
    PrecisionExhausted,
    SyntaxError,
    UnsupportedIntegrand,
    antiderivative,
    compare,
    integrate,
    limit,
    measure,
    run,
    standard_part,
    value,
    __version__,
)

__all__ = [
    "AlgebraElement",
    "DivergentIntegral",
    "DomainError",
    "PrecisionExhausted",
    "SyntaxError",
    "UnsupportedIntegrand",
    "antiderivative",
    "compare",
    "integrate",
    "limit",
    "measure",
    "run",
    "standard_part",
    "value",
    "__version__",
]
