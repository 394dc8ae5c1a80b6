"""Distance-generalized (k,h)-core decomposition."""

from .decomp import CoreResult, extract_core, peel_baseline, peel_khcore, validate_core
from .graph import Graph, load_edge_list, read_edge_list
from .metrics import precision, top_s_precision
from .parallel import peel_parallel
from .sampling import peel_sample

__all__ = [
    "CoreResult",
    "Graph",
    "extract_core",
    "load_edge_list",
    "peel_baseline",
    "peel_khcore",
    "peel_parallel",
    "peel_sample",
    "precision",
    "read_edge_list",
    "top_s_precision",
    "validate_core",
]
