"""ADMET benchmark harness.

Fetches the ten TDC benchmark splits, computes MapLight-style molecular
descriptors, augments them through the `hamfex` command line (always as a
subprocess, never an import), trains the fixed gradient-boosted-tree
classifier, and writes the per-run records and aggregate tables.
"""

from .data import data_available, fetch_benchmark
from .descriptors import DESCRIPTOR_VERSION, maplight_descriptors
from .errors import DataUnavailableError, HarnessError, SmilesError
from .gbdt import GBDT_PARAMS, BenchmarkRun, gbdt_train_eval
from .runner import run_matrix, run_one
from .shap_values import ImportanceBreakdown, shap_importance
from .smiles import parse_smiles
from .tasks import MODES, SEEDS, TASKS, metric_for

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRun",
    "DESCRIPTOR_VERSION",
    "DataUnavailableError",
    "GBDT_PARAMS",
    "HarnessError",
    "ImportanceBreakdown",
    "MODES",
    "SEEDS",
    "SmilesError",
    "TASKS",
    "data_available",
    "fetch_benchmark",
    "gbdt_train_eval",
    "maplight_descriptors",
    "metric_for",
    "parse_smiles",
    "run_matrix",
    "run_one",
    "shap_importance",
    "__version__",
]
