"""Büchi automata: construction from (quantified) LTL and the decision kernel."""

from .complement import complement, is_weak
from .dump import dump, mask_to_formula
from .emptiness import LanguageVerdict, contains, equivalent, is_empty
from .ltl2nba import CrossCheckError, ltl_to_nba
from .masks import formula_mask
from .nba import AutomatonError, Lasso, Nba, accepts_lasso, find_lasso
from .ops import extend, intersect, project, reduce_bisim, reduce_simulation, union
from .qptl import QptlError, clear_caches, qptl_to_nba, satisfiable, valid
from .settings import CapExceeded, Settings, current, limits

__all__ = [
    "AutomatonError", "CapExceeded", "CrossCheckError", "LanguageVerdict", "Lasso", "Nba",
    "QptlError", "Settings", "accepts_lasso", "clear_caches", "complement", "contains",
    "current", "dump", "equivalent", "extend", "find_lasso", "formula_mask", "intersect",
    "is_empty", "is_weak", "limits", "ltl_to_nba", "mask_to_formula", "project", "qptl_to_nba",
    "reduce_bisim", "reduce_simulation", "satisfiable", "union", "valid",
]
