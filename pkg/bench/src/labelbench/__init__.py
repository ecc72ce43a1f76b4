from labelbench.bench import CLASSIFIERS, BenchRun, bench
from labelbench.io import read_features_tsv, read_labels_tsv

__all__ = ["BenchRun", "CLASSIFIERS", "bench", "read_features_tsv",
           "read_labels_tsv"]
__version__ = "0.1.0"
