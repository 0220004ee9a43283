"""Weighted shifts on directed trees: per-vertex classification and dense matrix cross-checks."""

from ._treeshift import (
    NumericalError,
    ParameterError,
    ParseError,
    Shift,
    classify,
    family,
    izonp,
    oracle,
    parse,
)

__all__ = [
    "NumericalError",
    "ParameterError",
    "ParseError",
    "Shift",
    "classify",
    "family",
    "izonp",
    "oracle",
    "parse",
]
