"""Model checking, transductions and backwards translation for the monadic
second-order logic of matroids."""

from .setsystem import Matroid, SetSystem, is_matroid
from .logic import Evaluator, parse, satisfies, to_dsl

__version__ = "0.1.0"

__all__ = ["Matroid", "SetSystem", "is_matroid", "Evaluator", "parse", "satisfies", "to_dsl"]
