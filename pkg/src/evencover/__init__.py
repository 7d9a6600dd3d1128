"""Short even covers in uniform hypergraphs.

Cleaning, Kikuchi graphs and unique-colour closed walks, plus the same
machinery applied to 3-query linear locally decodable codes.
"""

from ._kernels import BACKEND
from .hypergraph import (
    Bucket,
    BucketDecomposition,
    ColoredHypergraph,
    EvenCover,
    Hypergraph,
    codegree,
    load_hypergraph,
    store_hypergraph,
    symmetric_difference,
    verify_even_cover,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Bucket",
    "BucketDecomposition",
    "ColoredHypergraph",
    "EvenCover",
    "Hypergraph",
    "codegree",
    "load_hypergraph",
    "store_hypergraph",
    "symmetric_difference",
    "verify_even_cover",
]
