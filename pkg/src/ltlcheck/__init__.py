"""Explicit-state LTL model checking for finite workflow models."""

import logging

from .automata import accepts_lasso, build_automaton, degeneralize, translate_gba
from .checker import CheckMode, Verdict, check, product_search, verify_counterexample
from .kripke import Model, VariableDecl, parse_model, reachable_states, successors, totalize
from .ltl import Formula, Lasso, closure, eval_lasso, parse, pretty, to_nnf, wrap_globally
from .state import State

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "CheckMode",
    "Formula",
    "Lasso",
    "Model",
    "State",
    "VariableDecl",
    "Verdict",
    "accepts_lasso",
    "build_automaton",
    "check",
    "closure",
    "degeneralize",
    "eval_lasso",
    "parse",
    "parse_model",
    "pretty",
    "product_search",
    "reachable_states",
    "successors",
    "to_nnf",
    "totalize",
    "translate_gba",
    "verify_counterexample",
    "wrap_globally",
]
