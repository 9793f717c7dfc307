"""Twin least-squares classifiers with fuzzy extensions.

Four linear binary classifiers behind one API: a soft-margin SVM baseline,
the crisp least-squares twin model, a membership-weighted variant (m1),
and a fuzzy-hyperplane variant (m2), plus dataset tooling and a seeded
cross-validation benchmark harness.
"""

from .core import (
    ClassSplit,
    Hyperplane,
    TrainConfig,
    TwinModel,
    plane_distance,
    predict_twin,
    train_lstsvm,
)
from .data import (
    CsvSchema,
    Dataset,
    NormalizationStats,
    fit_normalization,
    generate_xor,
    load_csv,
    load_manifest,
    normalize,
)
from .errors import DataFormatError, ModelError
from .evaluate import (
    ConfusionCounts,
    CVReport,
    GridSearchResult,
    TrainerSpec,
    accuracy,
    benchmark,
    count_confusion,
    decision_grid,
    default_grid,
    grid_search,
    kfold_cv,
    records_to_jsonl,
    stratified_folds,
)
from .linalg import augment_with_ones, solve_spd
from .m1 import M1Model, assign_memberships, train_m1, validate_memberships
from .m2 import (
    FuzzyDistance,
    FuzzyHyperplane,
    M2Config,
    M2Model,
    TriangularFuzzyNumber,
    fuzzy_distance,
    hyperplane_membership,
    predict_m2,
    train_m2,
)
from .model_io import dumps, load_model, loads, save_model
from .svm import SvmConfig, SvmModel, hinge_objective, predict_svm, train_linear_svm

__version__ = "0.1.0"

__all__ = [
    "ClassSplit",
    "ConfusionCounts",
    "CsvSchema",
    "CVReport",
    "Dataset",
    "DataFormatError",
    "FuzzyDistance",
    "FuzzyHyperplane",
    "GridSearchResult",
    "Hyperplane",
    "M1Model",
    "M2Config",
    "M2Model",
    "ModelError",
    "NormalizationStats",
    "SvmConfig",
    "SvmModel",
    "TrainConfig",
    "TrainerSpec",
    "TriangularFuzzyNumber",
    "TwinModel",
    "accuracy",
    "assign_memberships",
    "augment_with_ones",
    "benchmark",
    "count_confusion",
    "decision_grid",
    "default_grid",
    "dumps",
    "fit_normalization",
    "fuzzy_distance",
    "generate_xor",
    "grid_search",
    "hinge_objective",
    "hyperplane_membership",
    "kfold_cv",
    "load_csv",
    "load_manifest",
    "load_model",
    "loads",
    "normalize",
    "plane_distance",
    "predict_m2",
    "predict_svm",
    "predict_twin",
    "records_to_jsonl",
    "save_model",
    "solve_spd",
    "stratified_folds",
    "train_linear_svm",
    "train_lstsvm",
    "train_m1",
    "train_m2",
    "validate_memberships",
]
