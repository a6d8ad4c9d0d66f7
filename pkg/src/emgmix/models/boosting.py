"""Adaptive boosting of decision stumps for multiclass problems.

Each round fits a depth-1 exhaustive tree under the current row weights,
measures the weighted error rate eps, and keeps the stump with coefficient

    alpha = 0.5 * ln((1 - eps) / eps) + ln(K - 1)

which reduces to the classic two-class form at K=2. Misclassified rows are
up-weighted by exp(alpha) and weights renormalized. A round with eps at or
above the random-guess rate (K-1)/K is discarded and the weights reset to
uniform; eps = 0 caps alpha at ALPHA_CAP and stops early, since a perfect
learner leaves the weights unchanged. Prediction sums alpha over stumps
voting for each class; the posterior is that vote share.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..errors import ConfigError, DataError, ModelError
from .base import EnsembleConfig, PosteriorMixin, as_class_array, class_indices
from .tree import TreeModel, fit_tree

ALPHA_CAP = 10.0


def samme_alpha(eps: float, class_count: int) -> float:
    """Round coefficient 0.5*ln((1-eps)/eps) + ln(K-1), capped at ALPHA_CAP
    when eps is 0. At K=2 the correction term vanishes and this is the
    classic two-class coefficient."""
    if class_count < 2:
        raise ConfigError(f"class_count must be >= 2, got {class_count}")
    if not 0.0 <= eps < 1.0:
        raise ConfigError(f"eps must be in [0, 1), got {eps}")
    if eps == 0.0:
        return ALPHA_CAP
    return float(0.5 * np.log((1.0 - eps) / eps) + np.log(class_count - 1.0))


@dataclass
class BoostModel(PosteriorMixin):
    """Kept stumps with their vote weights and per-round weighted errors."""

    stumps: List[TreeModel]
    alphas: np.ndarray
    round_errors: np.ndarray
    classes: np.ndarray
    n_features: int

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.classes.size), dtype=np.float64)
        for stump, alpha in zip(self.stumps, self.alphas):
            winner = np.argmax(stump._posterior(X), axis=1)
            votes[np.arange(X.shape[0]), winner] += alpha
        return votes / votes.sum(axis=1, keepdims=True)


def fit_adaboost(
    features: np.ndarray,
    labels: np.ndarray,
    rounds: int = 50,
    classes=None,
    min_split: int = 2,
) -> BoostModel:
    """Boost `rounds` weighted stumps; may keep fewer on early stop.

    Raises ModelError if every round is discarded (no stump beats random
    guessing on this data).
    """
    if rounds < 1:
        raise ConfigError(f"rounds must be >= 1, got {rounds}")
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot boost on an empty sample")
    cls = as_class_array(classes, y)
    class_indices(cls, y)
    k = cls.size
    if k < 2:
        raise DataError("boosting needs at least two classes")
    stump_config = EnsembleConfig.decision_tree(min_split=min_split, max_depth=1)

    n = X.shape[0]
    w = np.full(n, 1.0 / n)
    stumps: List[TreeModel] = []
    alphas: List[float] = []
    errors: List[float] = []
    for _ in range(rounds):
        stump = fit_tree(X, y, stump_config, classes=cls, sample_weight=w)
        predicted = stump.predict_label(X)
        miss = predicted != y
        eps = float(w[miss].sum())
        if eps == 0.0:
            stumps.append(stump)
            alphas.append(ALPHA_CAP)
            errors.append(eps)
            break
        if eps >= (k - 1) / k:
            w = np.full(n, 1.0 / n)
            continue
        alpha = samme_alpha(eps, k)
        stumps.append(stump)
        alphas.append(alpha)
        errors.append(eps)
        w = w * np.exp(alpha * miss)
        w = w / w.sum()
    if not stumps:
        raise ModelError(
            "boosting kept no rounds: every stump was at or below random guessing"
        )
    return BoostModel(
        stumps=stumps,
        alphas=np.asarray(alphas),
        round_errors=np.asarray(errors),
        classes=cls,
        n_features=X.shape[1],
    )
