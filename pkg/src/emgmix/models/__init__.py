"""Classifier zoo: trees, ensembles, boosting, neighbors, Bayes, logistic."""

from .base import (
    SPLIT_EXHAUSTIVE,
    SPLIT_RANDOM_CUT,
    EnsembleConfig,
    derive_seed,
)
from .bayes import VAR_FLOOR, GaussianNbModel, fit_gaussian_nb
from .boosting import ALPHA_CAP, BoostModel, fit_adaboost, samme_alpha
from .ensemble import EnsembleModel, fit_ensemble
from .linear import (
    LogisticModel,
    fit_logistic_regression,
    lr_gradient,
    lr_loss,
    softmax,
)
from .neighbors import KnnModel, fit_knn, knn_predict
from .tree import (
    SplitCandidate,
    TreeModel,
    TreeNode,
    best_exhaustive_split,
    best_random_split,
    entropy,
    et_split_score,
    fit_tree,
    information_gain,
)

__all__ = [
    "SPLIT_EXHAUSTIVE",
    "SPLIT_RANDOM_CUT",
    "EnsembleConfig",
    "derive_seed",
    "VAR_FLOOR",
    "GaussianNbModel",
    "fit_gaussian_nb",
    "ALPHA_CAP",
    "BoostModel",
    "fit_adaboost",
    "samme_alpha",
    "EnsembleModel",
    "fit_ensemble",
    "LogisticModel",
    "fit_logistic_regression",
    "lr_gradient",
    "lr_loss",
    "softmax",
    "KnnModel",
    "fit_knn",
    "knn_predict",
    "SplitCandidate",
    "TreeModel",
    "TreeNode",
    "best_exhaustive_split",
    "best_random_split",
    "entropy",
    "et_split_score",
    "fit_tree",
    "information_gain",
]
