"""Ordinal-length bit games with MLO winning conditions: decide and synthesize."""

__version__ = "0.1.0"

from .engine import (Decision, Engine, decide, decide_sentence,
                     default_engine, omega_game, winning_code_atlas)
from .errors import (FormulaError, GameValueError, OrdgamesError,
                     OrdinalError, ResourceLimit, StrategyError)
from .finite import solve_finite_game, verify_finite_strategy
from .formulas import parse_formula, render
from .ordinals import Ordinal, format_ordinal, from_finite, parse_ordinal
from .synthesis import (reduce_to_omega_omega, search_definable_strategy,
                        synthesize, tree_from_doc, tree_to_doc,
                        verify_strategy_tree)

__all__ = [
    "Decision",
    "Engine",
    "FormulaError",
    "GameValueError",
    "OrdgamesError",
    "Ordinal",
    "OrdinalError",
    "ResourceLimit",
    "StrategyError",
    "__version__",
    "decide",
    "decide_sentence",
    "default_engine",
    "format_ordinal",
    "from_finite",
    "parse_formula",
    "parse_ordinal",
    "reduce_to_omega_omega",
    "render",
    "search_definable_strategy",
    "solve_finite_game",
    "omega_game",
    "synthesize",
    "tree_from_doc",
    "tree_to_doc",
    "verify_finite_strategy",
    "verify_strategy_tree",
    "winning_code_atlas",
]
