"""minorfind: sublinear-time forbidden-minor search on bounded-degree graphs.

A library and CLI around a one-sided randomized minor tester (collision
path finding, biclique search, local search) backed by an exact
branch-and-bound minor checker, plus the exact analysis machinery the
tester's guarantees rest on: returning-walk vectors, stratification,
projected Markov chains, conductance curves, and a graph decomposition
procedure.
"""

from .graph import Graph, GraphError, QueryLedger
from .minor import MinorEmbedding, has_minor, has_minor_bruteforce
from .tester import TesterConfig, TesterReport, find_minor

__all__ = [
    "Graph",
    "GraphError",
    "QueryLedger",
    "MinorEmbedding",
    "has_minor",
    "has_minor_bruteforce",
    "TesterConfig",
    "TesterReport",
    "find_minor",
]

__version__ = "0.1.0"
