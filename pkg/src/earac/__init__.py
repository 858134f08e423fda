"""Entanglement-assisted random access codes: exact evaluation, simulation,
tree optimization, bounds, and a two-party protocol demo."""

from .codetree import (CodeTree, Leaf, Node, PathProfile, build_paper_tree,
                       exact_bit_probability, min_probability, sr_average)
from .exactnum import ExactValue, delta
from .optimizer import best_avg_tree, best_min_tree, lower_bound, upper_bound

__all__ = [
    "CodeTree", "Leaf", "Node", "PathProfile", "build_paper_tree",
    "exact_bit_probability", "min_probability", "sr_average",
    "ExactValue", "delta",
    "best_avg_tree", "best_min_tree", "lower_bound", "upper_bound",
]
