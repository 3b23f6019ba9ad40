"""
Unsupervised network alignment: untrained graph-convolution embeddings guide a
minimum-degree graph compression, and nodes are matched by embedding similarity
on the compressed graphs.
"""
from .align import AlignmentResult, align_compressed, align_sets, score, similarity, similarity_attributed
from .compress import CompressedGraph, make_guiding_lists, merge, merge_step
from .embed import embed_graphs, normalized_joint_adjacency, supernode_embedding
from .features import extract_features, structural_features
from .graph import Graph, GraphFormatError, load_attributes, load_edge_list
from .pipeline import RunConfig, StageError, align_graphs, build_problem, run_align, run_grid
from .synth import GroundTruth, add_attribute_noise, add_edge_noise, permute, preferential_attachment

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult", "CompressedGraph", "Graph", "GraphFormatError", "GroundTruth", "RunConfig", "StageError",
    "add_attribute_noise", "add_edge_noise", "align_compressed", "align_graphs", "align_sets", "build_problem",
    "embed_graphs", "extract_features", "load_attributes", "load_edge_list", "make_guiding_lists", "merge",
    "merge_step", "normalized_joint_adjacency", "permute", "preferential_attachment", "run_align", "run_grid",
    "score", "similarity", "similarity_attributed", "structural_features", "supernode_embedding",
]
