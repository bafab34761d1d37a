"""Perfect matchings in 3-graphs under stepped degree-sequence conditions."""

from .core import ThreeGraph, TupleSystem, is_matching, leave, parse, serialize

__all__ = ["ThreeGraph", "TupleSystem", "is_matching", "leave", "parse", "serialize"]
__version__ = "0.1.0"
