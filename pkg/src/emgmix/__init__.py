"""Surface-EMG gesture classification: filtering, features, classifiers,
and a mixture of class-pair experts, with deterministic experiments.

Typical flow: generate or load recordings, filter and window them, extract
per-window features (build_dataset does all three), fit any of the
classifiers or the mixture model, and score predictions with the
evaluation helpers. Everything is seeded; equal seeds give equal bytes.
"""

from .config import (
    MODEL_NAMES,
    PipelineConfig,
    build_trainers,
    config_from_dict,
    load_config,
    make_subject_datasets,
    subject_recordings,
)
from .dataset import (
    DEFAULT_GESTURES,
    Dataset,
    GestureLabel,
    SynthClass,
    SynthSpec,
    build_dataset,
    default_synth_classes,
    generate_synthetic,
    load_feature_csv,
    load_recording_csv,
    save_feature_csv,
    save_recording_csv,
    stratified_split,
)
from .errors import ConfigError, DataError, EmgMixError, ModelError
from .evaluation import (
    ConfusionMatrix,
    ExperimentResult,
    MetricsReport,
    compute_metrics,
    confusion_matrix,
    run_experiment,
    write_confusion_csv,
    write_metrics_csv,
    write_summary_csv,
)
from .features import (
    FEATURE_NAMES,
    FREQ_FEATURE_NAMES,
    TIME_FEATURE_NAMES,
    FeatureSpec,
    FeatureVector,
    extract_frequency_features,
    extract_time_features,
    extract_window_features,
    feature_column_names,
    power_spectrum,
)
from .meet import (
    ExpertPlan,
    MeetModel,
    combine_expert_gate,
    fit_meet,
    plan_experts,
    predict_meet,
)
from .models import (
    BoostModel,
    EnsembleConfig,
    EnsembleModel,
    GaussianNbModel,
    KnnModel,
    LogisticModel,
    SplitCandidate,
    TreeModel,
    TreeNode,
    derive_seed,
    entropy,
    et_split_score,
    fit_adaboost,
    fit_ensemble,
    samme_alpha,
    fit_gaussian_nb,
    fit_knn,
    fit_logistic_regression,
    knn_predict,
    fit_tree,
    information_gain,
)
from .serialize import load_model, model_from_dict, model_to_dict, save_model
from .signals import (
    FilterSpec,
    Recording,
    Window,
    WindowSpec,
    apply_bandpass,
    apply_notch,
    segment_windows,
    window_count,
)

__version__ = "1.0.0"

__all__ = [
    "MODEL_NAMES",
    "PipelineConfig",
    "build_trainers",
    "config_from_dict",
    "load_config",
    "make_subject_datasets",
    "subject_recordings",
    "DEFAULT_GESTURES",
    "Dataset",
    "GestureLabel",
    "SynthClass",
    "SynthSpec",
    "build_dataset",
    "default_synth_classes",
    "generate_synthetic",
    "load_feature_csv",
    "load_recording_csv",
    "save_feature_csv",
    "save_recording_csv",
    "stratified_split",
    "ConfigError",
    "DataError",
    "EmgMixError",
    "ModelError",
    "ConfusionMatrix",
    "ExperimentResult",
    "MetricsReport",
    "compute_metrics",
    "confusion_matrix",
    "run_experiment",
    "write_confusion_csv",
    "write_metrics_csv",
    "write_summary_csv",
    "FEATURE_NAMES",
    "FREQ_FEATURE_NAMES",
    "TIME_FEATURE_NAMES",
    "FeatureSpec",
    "FeatureVector",
    "extract_frequency_features",
    "extract_time_features",
    "extract_window_features",
    "feature_column_names",
    "power_spectrum",
    "ExpertPlan",
    "MeetModel",
    "combine_expert_gate",
    "fit_meet",
    "plan_experts",
    "predict_meet",
    "BoostModel",
    "EnsembleConfig",
    "EnsembleModel",
    "GaussianNbModel",
    "KnnModel",
    "LogisticModel",
    "SplitCandidate",
    "TreeModel",
    "TreeNode",
    "derive_seed",
    "entropy",
    "et_split_score",
    "fit_adaboost",
    "fit_ensemble",
    "fit_gaussian_nb",
    "fit_knn",
    "fit_logistic_regression",
    "fit_tree",
    "information_gain",
    "knn_predict",
    "samme_alpha",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "FilterSpec",
    "Recording",
    "Window",
    "WindowSpec",
    "apply_bandpass",
    "apply_notch",
    "segment_windows",
    "window_count",
    "__version__",
]
