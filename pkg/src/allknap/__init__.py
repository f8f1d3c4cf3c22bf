"""All-target unbounded knapsack, coin change and residue tables.

Phase one finds the lexicographically smallest optimal solution of every
kernel (target reachable with few items) through convolutions with
minimum witnesses; phase two extends them to every target.
"""
from ._backend import NAME as BACKEND
from .core import ContractError, Instance, LexOrder, Mode, Solution, SolutionTable, lex_compare
from .solvers import (lexmin_table, maxplus_via_knapsack, solve_coinchange, solve_knapsack,
                      solve_residue_table, solve_subsetsum)

__all__ = [
    "BACKEND", "ContractError", "Instance", "LexOrder", "Mode", "Solution", "SolutionTable",
    "lex_compare", "lexmin_table", "maxplus_via_knapsack", "solve_coinchange", "solve_knapsack",
    "solve_residue_table", "solve_subsetsum",
]
