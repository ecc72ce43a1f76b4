"""Network-diffusion features and positive-unlabeled relabeling on graphs."""

from netpu.config import PipelineConfig
from netpu.graph import Graph, build_graph, largest_connected_component
from netpu.pipeline import PipelineResult, run_labeling
from netpu.seeds import SeedSet, load_seeds, make_seed_set, mask_seeds

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "PipelineConfig",
    "PipelineResult",
    "SeedSet",
    "build_graph",
    "largest_connected_component",
    "load_seeds",
    "make_seed_set",
    "mask_seeds",
    "run_labeling",
    "__version__",
]
