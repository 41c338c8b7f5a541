"""Sum-shuffle expressions, their coordinatized orders, and the finite structures they carry."""

from .canon import canonicalize, same_order_type
from .coordmodel import coordinatize, extend_embedding, sample_substructure
from .finstruct import (
    FinStructure,
    amalgamate,
    are_isomorphic,
    enumerate_embeddings,
    enumerate_structures,
    validate,
)
from .presentation import Leaf, Shuffle, Sum, parse, render
from .ramsey import check_arrow, search_witness
from .rationals import class_of, fresh_in_class
from .ultra import UltraSpace, to_structure, to_ultrametric

__version__ = "0.1.0"

__all__ = [
    "FinStructure",
    "Leaf",
    "Shuffle",
    "Sum",
    "UltraSpace",
    "amalgamate",
    "are_isomorphic",
    "canonicalize",
    "check_arrow",
    "class_of",
    "coordinatize",
    "enumerate_embeddings",
    "enumerate_structures",
    "extend_embedding",
    "fresh_in_class",
    "parse",
    "render",
    "same_order_type",
    "sample_substructure",
    "search_witness",
    "to_structure",
    "to_ultrametric",
    "validate",
]
