"""Exact weaver distributions W(n, p), exponential sampling and analysis.

Rational results are returned as ``fractions.Fraction``; ``p`` may be given as
anything ``Fraction`` accepts, e.g. ``"2/3"``, ``"0.25"`` or ``Fraction(1, 3)``.
"""

from ._core import *  # noqa: F401,F403
from ._core import (
    CapacityError,
    ContractError,
    DegeneracyError,
    ParseError,
    RangeError,
    RefinementError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
