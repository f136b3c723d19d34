"""Finite workbench for cofinitary-group and almost-disjoint-family constructions."""

from .core import (
    EvaluablePermutation,
    PartialInjection,
    Window,
    base_h,
    fixed_points,
    pair,
    perm_from_spec,
    unpair,
)
from .words import GroupContext, Word, parse_word, reduce_letters

__all__ = [
    "EvaluablePermutation",
    "PartialInjection",
    "Window",
    "GroupContext",
    "Word",
    "base_h",
    "fixed_points",
    "pair",
    "parse_word",
    "perm_from_spec",
    "reduce_letters",
    "unpair",
]

__version__ = "0.1.0"
