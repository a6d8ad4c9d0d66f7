"""Multiclass logistic regression trained by full-batch gradient descent.

Inputs are z-scored with training-set statistics stored in the model, so
prediction applies the same shift and scale. Weights and biases start at
zero (a uniform posterior) and descend the mean cross-entropy loss; the l2
penalty applies to weights only, never biases. The loss and gradient are
module-level functions so the gradient can be checked against finite
differences directly.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import ConfigError, DataError, ModelError
from .base import PosteriorMixin, as_class_array, class_indices


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted by the row max for stability."""
    z = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def lr_loss(weights: np.ndarray, bias: np.ndarray, features: np.ndarray,
            class_idx: np.ndarray, l2: float = 0.0) -> float:
    """Mean cross-entropy plus 0.5*l2*||weights||^2 (bias unpenalized)."""
    probs = softmax(features @ weights.T + bias)
    n = features.shape[0]
    picked = probs[np.arange(n), class_idx]
    # A picked probability can underflow to 0 when training diverges; the
    # resulting inf loss is how the caller detects that, so keep it quiet.
    with np.errstate(divide="ignore"):
        loss = -np.mean(np.log(picked))
    return float(loss + 0.5 * l2 * np.sum(weights ** 2))


def lr_gradient(weights: np.ndarray, bias: np.ndarray, features: np.ndarray,
                class_idx: np.ndarray, l2: float = 0.0
                ) -> Tuple[np.ndarray, np.ndarray]:
    """Analytic gradient of lr_loss with respect to (weights, bias)."""
    n, k = features.shape[0], weights.shape[0]
    probs = softmax(features @ weights.T + bias)
    probs[np.arange(n), class_idx] -= 1.0
    grad_w = probs.T @ features / n + l2 * weights
    grad_b = probs.mean(axis=0)
    return grad_w, grad_b


@dataclass
class LogisticModel(PosteriorMixin):
    """Softmax weights/bias plus the standardization statistics."""

    weights: np.ndarray
    bias: np.ndarray
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    classes: np.ndarray
    n_features: int
    final_loss: float = 0.0

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.feature_mean) / self.feature_scale
        return softmax(Z @ self.weights.T + self.bias)


def fit_logistic_regression(
    features: np.ndarray,
    labels: np.ndarray,
    learning_rate: float = 0.1,
    epochs: int = 500,
    l2: float = 0.0,
    classes=None,
) -> LogisticModel:
    """Gradient-descend the softmax cross-entropy from a zero start.

    A non-finite loss during training aborts with a ModelError naming the
    learning rate, the usual culprit.
    """
    if learning_rate <= 0.0:
        raise ConfigError(f"learning_rate must be positive, got {learning_rate}")
    if epochs < 1:
        raise ConfigError(f"epochs must be >= 1, got {epochs}")
    if l2 < 0.0:
        raise ConfigError(f"l2 must be nonnegative, got {l2}")
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot fit logistic regression on an empty sample")
    cls = as_class_array(classes, y)
    yi = class_indices(cls, y)
    k, d = cls.size, X.shape[1]

    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0  # constant features pass through unscaled
    Z = (X - mean) / scale

    W = np.zeros((k, d))
    b = np.zeros(k)
    loss = lr_loss(W, b, Z, yi, l2)
    for _ in range(epochs):
        grad_w, grad_b = lr_gradient(W, b, Z, yi, l2)
        W = W - learning_rate * grad_w
        b = b - learning_rate * grad_b
        loss = lr_loss(W, b, Z, yi, l2)
        if not np.isfinite(loss):
            raise ModelError(
                f"training diverged (loss became non-finite); "
                f"reduce learning_rate={learning_rate}"
            )
    return LogisticModel(
        weights=W,
        bias=b,
        feature_mean=mean,
        feature_scale=scale,
        classes=cls,
        n_features=d,
        final_loss=loss,
    )
