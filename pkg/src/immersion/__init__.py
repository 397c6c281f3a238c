"""Clique immersions with machine-checkable certificates.

Finders for sparse (minimum degree), dense (quadratic edge count) and very
dense host graphs, explicit counterexample and line-graph constructions, an
independent verifier and an exhaustive oracle for tiny graphs.
"""

__version__ = "0.1.0"

from .certificates import (
    ImmersionCertificate,
    LineMinorCertificate,
    load_certificate,
    save_certificate,
    verify_immersion,
    verify_line_minor,
)
from .constructions import (
    class2_complement_family,
    corollary_line_minor,
    line_graph_clique_minor,
    line_minor_upper_bound,
    projective_plane,
    seymour_graph,
    very_dense_immersion,
)
from .dense import find_dense_immersion
from .engine import main_engine
from .graph import MultiGraph, SimpleGraph, read_graph, write_graph
from .oracle import brute_force_immersion, brute_force_one_immersion, min_degree_forcing_scan
from .sparse import bipartite_immersion, eulerian_min_degree_subgraph, split_to_clique

__all__ = [
    "ImmersionCertificate",
    "LineMinorCertificate",
    "MultiGraph",
    "SimpleGraph",
    "bipartite_immersion",
    "brute_force_immersion",
    "brute_force_one_immersion",
    "class2_complement_family",
    "corollary_line_minor",
    "eulerian_min_degree_subgraph",
    "find_dense_immersion",
    "line_graph_clique_minor",
    "line_minor_upper_bound",
    "load_certificate",
    "main_engine",
    "min_degree_forcing_scan",
    "projective_plane",
    "read_graph",
    "save_certificate",
    "seymour_graph",
    "split_to_clique",
    "very_dense_immersion",
    "verify_immersion",
    "verify_line_minor",
    "write_graph",
]
