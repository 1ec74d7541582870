"""Community detection via subgraph-similarity agglomeration.

Three detectors over undirected simple graphs: a fast most-similar-link
agglomeration, classic greedy modularity merging, and a hybrid that runs
one linking round before the greedy phase. All runs are deterministic.
"""

__version__ = "0.1.0"

from .agglom import (RoundLinks, RunTrace, link_components,
                     most_similar_links, xcz_one_round, xcz_run)
from .graphs import (Graph, LabelMap, NoEdgesError, ParseError,
                     load_edge_list, load_gml, validate, write_edge_list)
from .greedy import cnm_run, hybrid_run
from .partition import (Partition, QuotientGraph, build_quotient, delta_q,
                        merge_blocks, modularity, singleton_partition)
from .similarity import (SimilarityTable, candidate_pairs, node_similarity,
                         similarity_table, subgraph_similarity)

__all__ = [
    "Graph", "LabelMap", "NoEdgesError", "ParseError",
    "load_edge_list", "load_gml", "validate", "write_edge_list",
    "Partition", "QuotientGraph", "singleton_partition", "build_quotient",
    "modularity", "delta_q", "merge_blocks",
    "SimilarityTable", "subgraph_similarity", "node_similarity",
    "candidate_pairs", "similarity_table",
    "RoundLinks", "RunTrace", "most_similar_links", "link_components",
    "xcz_run", "xcz_one_round", "cnm_run", "hybrid_run",
]
