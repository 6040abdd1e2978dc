"""hamfex: mutual-information-guided Hamiltonian feature extraction.

Selects correlated descriptor bits by MI against the label, compiles the
selected pairs/triads into a diagonal Pauli-Z Hamiltonian per molecule,
simulates the time evolution exactly, and measures expectation values that
augment the original descriptor matrix.
"""

from .dataset import (
    FeatureMatrix,
    LabeledDataset,
    SplitView,
    binarize,
    fit_view,
    load_labeled_csv,
    save_labeled_csv,
)
from .errors import CacheError, ValidationError
from .mi import (
    MiScore,
    conditional_mi,
    interaction_information,
    ksg_mi,
    plug_in_mi,
)
from .pipeline import (
    ComparisonResult,
    MetricReport,
    PipelineConfig,
    auprc,
    auroc,
    evaluate_features,
    paired_ttest,
    run_extraction,
    train_eval_linear,
)
from .qsim import (
    ExpectationSet,
    HamiltonianSpec,
    StateVector,
    apply_mixing,
    build_hamiltonian,
    evolve_diagonal,
    extract_features,
    measure_expectations,
    prepare_state,
)
from .selection import (
    CouplingTable,
    MiRanking,
    PairSet,
    TriadSet,
    derive_couplings,
    derive_qubit_map,
    polynomial_interactions,
    prefilter_top_k,
    select_pairs,
    select_triads,
)

__version__ = "0.1.0"

__all__ = [
    "CacheError",
    "ComparisonResult",
    "CouplingTable",
    "ExpectationSet",
    "FeatureMatrix",
    "HamiltonianSpec",
    "LabeledDataset",
    "MetricReport",
    "MiRanking",
    "MiScore",
    "PairSet",
    "PipelineConfig",
    "SplitView",
    "StateVector",
    "TriadSet",
    "ValidationError",
    "apply_mixing",
    "auprc",
    "auroc",
    "binarize",
    "build_hamiltonian",
    "conditional_mi",
    "derive_couplings",
    "derive_qubit_map",
    "evaluate_features",
    "evolve_diagonal",
    "extract_features",
    "fit_view",
    "interaction_information",
    "ksg_mi",
    "load_labeled_csv",
    "measure_expectations",
    "paired_ttest",
    "plug_in_mi",
    "polynomial_interactions",
    "prefilter_top_k",
    "prepare_state",
    "run_extraction",
    "save_labeled_csv",
    "select_pairs",
    "select_triads",
    "train_eval_linear",
    "__version__",
]
