"""k-nearest-neighbor classifier with Euclidean distance.

Distances are the root of summed squared coordinate differences. Neighbor
selection sorts distances with a stable order, so exact distance ties break
toward the lower training-row index. The posterior is the label frequency
among the k neighbors.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DataError
from .base import PosteriorMixin, as_class_array, class_indices


@dataclass
class KnnModel(PosteriorMixin):
    """Stored training matrix, its class indices, and the neighbor count."""

    train_features: np.ndarray
    train_class_idx: np.ndarray
    k: int
    classes: np.ndarray
    n_features: int

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        out = np.empty((X.shape[0], self.classes.size), dtype=np.float64)
        for i, row in enumerate(X):
            # Differences computed directly so a query equal to a training
            # row gets distance exactly 0 and ties stay index-ordered.
            dist = np.sqrt(((self.train_features - row) ** 2).sum(axis=1))
            nearest = np.argsort(dist, kind="stable")[: self.k]
            counts = np.bincount(self.train_class_idx[nearest],
                                 minlength=self.classes.size)
            out[i] = counts / self.k
        return out


def fit_knn(features: np.ndarray, labels: np.ndarray, k: int = 5,
            classes=None) -> KnnModel:
    """Memorize the training set; k must be in [1, n_rows]."""
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot fit nearest neighbors on an empty sample")
    if not 1 <= k <= X.shape[0]:
        raise ConfigError(f"k must be in [1, {X.shape[0]}], got {k}")
    cls = as_class_array(classes, y)
    yi = class_indices(cls, y)
    return KnnModel(train_features=X, train_class_idx=yi, k=k, classes=cls,
                    n_features=X.shape[1])


def knn_predict(train_features: np.ndarray, train_labels: np.ndarray,
                query: np.ndarray, k: int = 5, classes=None) -> np.ndarray:
    """One-shot posterior for `query` without keeping the model around."""
    model = fit_knn(train_features, train_labels, k=k, classes=classes)
    return model.predict_posterior(query)
