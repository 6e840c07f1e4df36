"""Exact computation in Thompson's group F and densities of random subgroups."""

from .element import Element, identity, multiply, invert, power, x, x0, x1
from .enumeration import r_values
from .trees import Tree, TreePair

__version__ = "0.1.0"

__all__ = [
    "Element", "Tree", "TreePair", "identity", "invert", "multiply", "power",
    "r_values", "x", "x0", "x1", "__version__",
]
