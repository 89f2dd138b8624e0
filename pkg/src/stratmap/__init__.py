"""Hierarchical clustering and mapping of citation networks."""

from .clustering import (
    ClusterParams,
    Clustering,
    NormalizedGraph,
    VOSClustering,
    association_strength,
    brute_force_optimum,
    cluster,
    merge_small_clusters,
    quality,
)
from .compare import chi_square, cramers_v, reclassified_fraction, set_overlap
from .decompose import DecomposeParams, DecompositionTree, decompose, emit_index, emit_tree, run_level
from .graph import (
    DirectedGraph,
    NetworkStats,
    SymGraph,
    induced_subgraph,
    largest_component,
    network_stats,
    remove_isolates,
    symmetrize,
)
from .layout import LayoutParams, VOSLayout, canonicalize, layout, layout_energy
from .pajek import parse_map_file, parse_network_file, parse_pajek, write_map_file, write_network_file, write_pajek

__version__ = "0.1.0"
