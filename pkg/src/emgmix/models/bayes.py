"""Gaussian naive Bayes.

Class priors are training frequencies; each feature gets an independent
normal likelihood with per-class mean and population variance (ddof 0),
floored at VAR_FLOOR so constant features stay usable. Posteriors are
computed in log space and normalized with log-sum-exp.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..errors import DataError
from .base import PosteriorMixin, as_class_array, class_indices

VAR_FLOOR = 1e-9


@dataclass
class GaussianNbModel(PosteriorMixin):
    """Per-class priors, feature means, and floored feature variances."""

    priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    classes: np.ndarray
    n_features: int

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        # log p(x|c) + log p(c), summed over independent features
        diff = X[:, None, :] - self.means[None, :, :]
        log_like = -0.5 * (
            np.log(2.0 * np.pi * self.variances)[None, :, :]
            + diff ** 2 / self.variances[None, :, :]
        ).sum(axis=2)
        joint = log_like + np.log(self.priors)[None, :]
        return np.exp(joint - logsumexp(joint, axis=1, keepdims=True))


def fit_gaussian_nb(features: np.ndarray, labels: np.ndarray,
                    classes=None) -> GaussianNbModel:
    """Estimate priors and per-class feature statistics.

    Every class in the model's class set must appear in the training rows.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot fit naive Bayes on an empty sample")
    cls = as_class_array(classes, y)
    yi = class_indices(cls, y)
    k, d = cls.size, X.shape[1]
    counts = np.bincount(yi, minlength=k)
    if np.any(counts == 0):
        missing = cls[counts == 0][0]
        raise DataError(f"class {missing} has no training rows")
    means = np.empty((k, d))
    variances = np.empty((k, d))
    for c in range(k):
        rows = X[yi == c]
        means[c] = rows.mean(axis=0)
        variances[c] = np.maximum(rows.var(axis=0), VAR_FLOOR)
    return GaussianNbModel(
        priors=counts / counts.sum(),
        means=means,
        variances=variances,
        classes=cls,
        n_features=d,
    )
