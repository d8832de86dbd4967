"""Deferred-constraint divide-and-conquer variational solver for Maximum Independent Set."""

from dcqdca.graph import Graph, Solution, exact_mis, greedy_mis, is_independent, load_graph

__version__ = "0.1.0"

__all__ = ["Graph", "Solution", "exact_mis", "greedy_mis", "is_independent", "load_graph"]
