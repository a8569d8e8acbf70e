"""Decide the weak linear-time--branching-time spectrum via energy games.

One 8-dimensional declining energy game per process pair settles every
behavioral preorder and equivalence of the silent-step spectrum at once:
minimal attacker budgets are Pareto frontiers, each notion corresponds to
a budget coordinate, and attacker strategies replay into distinguishing
modal formulas.
"""

from .ccs import compile_definitions, parse as parse_ccs
from .energy import INF, Energy, apply, dominates, format_energy, inverse
from .game import build, build_multi, graph_to_json
from .hml import Evaluator, distinguishes, parse_formula, price, render
from .lts import TransitionSystem, parse_transitions
from .report import analyze_pair
from .solver import attacker_wins, min_budgets, solve
from .spectrum import NOTIONS, ORDER, classify, coordinate, frontier
from .strategy import certificates, extract

__version__ = "0.1.0"

__all__ = [
    "INF", "Energy", "Evaluator", "NOTIONS", "ORDER", "TransitionSystem",
    "analyze_pair", "apply", "attacker_wins", "build", "build_multi",
    "certificates", "classify", "compile_definitions", "coordinate",
    "distinguishes", "dominates", "extract", "format_energy", "frontier",
    "graph_to_json", "inverse", "min_budgets", "parse_ccs", "parse_formula",
    "parse_transitions", "price", "render", "solve", "__version__",
]
