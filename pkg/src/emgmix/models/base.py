"""Shared model plumbing: ensemble configuration, prediction contract, seeds."""

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from ..errors import ConfigError, ModelError

SPLIT_EXHAUSTIVE = "exhaustive"
SPLIT_RANDOM_CUT = "random-cut"


@dataclass
class EnsembleConfig:
    """Tree / forest hyperparameters.

    attrs_per_node is the number of candidate features drawn at each node:
    an integer, "sqrt" for ceil(sqrt(feature count)), or "all". min_split is
    the minimum node size eligible for splitting. split_mode selects the
    exhaustive midpoint search or the random-cut scheme. max_depth of None
    grows unpruned trees; 1 gives stumps.
    """

    tree_count: int = 100
    attrs_per_node: Union[int, str] = "sqrt"
    min_split: int = 2
    bootstrap: bool = False
    split_mode: str = SPLIT_EXHAUSTIVE
    seed: int = 0
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.tree_count < 1:
            raise ConfigError(f"tree_count must be >= 1, got {self.tree_count}")
        if self.min_split < 2:
            raise ConfigError(f"min_split must be >= 2, got {self.min_split}")
        if self.split_mode not in (SPLIT_EXHAUSTIVE, SPLIT_RANDOM_CUT):
            raise ConfigError(f"unknown split_mode {self.split_mode!r}")
        if isinstance(self.attrs_per_node, str):
            if self.attrs_per_node not in ("sqrt", "all"):
                raise ConfigError(
                    f"attrs_per_node must be an int, 'sqrt', or 'all', "
                    f"got {self.attrs_per_node!r}"
                )
        elif self.attrs_per_node < 1:
            raise ConfigError(f"attrs_per_node must be >= 1, got {self.attrs_per_node}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError(f"max_depth must be >= 0, got {self.max_depth}")

    def resolve_attrs(self, n_features: int) -> int:
        if self.attrs_per_node == "sqrt":
            return min(n_features, math.ceil(math.sqrt(n_features)))
        if self.attrs_per_node == "all":
            return n_features
        if self.attrs_per_node > n_features:
            raise ConfigError(
                f"attrs_per_node={self.attrs_per_node} exceeds feature count {n_features}"
            )
        return self.attrs_per_node

    @classmethod
    def decision_tree(cls, seed: int = 0, **kw) -> "EnsembleConfig":
        """Single exhaustive tree over all features."""
        return cls(tree_count=1, attrs_per_node="all", bootstrap=False,
                   split_mode=SPLIT_EXHAUSTIVE, seed=seed, **kw)

    @classmethod
    def random_forest(cls, tree_count: int = 100, seed: int = 0, **kw) -> "EnsembleConfig":
        """Bootstrapped exhaustive trees on sqrt-sized feature subsets."""
        return cls(tree_count=tree_count, attrs_per_node="sqrt", bootstrap=True,
                   split_mode=SPLIT_EXHAUSTIVE, seed=seed, **kw)

    @classmethod
    def bagging(cls, tree_count: int = 100, seed: int = 0, **kw) -> "EnsembleConfig":
        """Bootstrapped exhaustive trees over all features."""
        return cls(tree_count=tree_count, attrs_per_node="all", bootstrap=True,
                   split_mode=SPLIT_EXHAUSTIVE, seed=seed, **kw)

    @classmethod
    def extra_trees(cls, tree_count: int = 100, seed: int = 0, **kw) -> "EnsembleConfig":
        """Random-cut trees on the full (non-bootstrapped) sample."""
        return cls(tree_count=tree_count, attrs_per_node="sqrt", bootstrap=False,
                   split_mode=SPLIT_RANDOM_CUT, seed=seed, **kw)

    def single_tree(self) -> "EnsembleConfig":
        return replace(self, tree_count=1)


def derive_seed(seed: int, *index: int) -> int:
    """Deterministic child seed for sub-model `index` of a parent seed."""
    seq = np.random.SeedSequence(seed, spawn_key=tuple(index))
    return int(seq.generate_state(1, np.uint64)[0])


class PosteriorMixin:
    """Uniform predict contract: subclasses define classes, n_features, and
    _posterior(X) over a 2-D matrix; this provides shape handling, dimension
    checks, and argmax labels with ties to the lowest class id."""

    def _check_matrix(self, features: np.ndarray) -> np.ndarray:
        X = np.asarray(features, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ModelError(
                f"feature dimension mismatch: model expects {self.n_features}, "
                f"got shape {np.asarray(features).shape}"
            )
        return X

    def predict_posterior(self, features: np.ndarray) -> np.ndarray:
        """Per-class probability vector(s); 1-D input yields a 1-D posterior."""
        single = np.asarray(features).ndim == 1
        post = self._posterior(self._check_matrix(features))
        return post[0] if single else post

    def predict_label(self, features: np.ndarray) -> np.ndarray:
        """Argmax class id(s); ties resolve to the lowest class id."""
        single = np.asarray(features).ndim == 1
        post = self._posterior(self._check_matrix(features))
        labels = self.classes[np.argmax(post, axis=1)]
        return labels[0] if single else labels


def as_class_array(classes, labels: np.ndarray) -> np.ndarray:
    """Validate/derive the ascending class-id array for a training set."""
    if classes is None:
        return np.unique(labels)
    arr = np.asarray(classes, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0 or np.any(np.diff(arr) <= 0):
        raise ConfigError("classes must be a strictly increasing 1-D array of ids")
    return arr


def class_indices(classes: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Map raw labels to indices into `classes`, validating membership."""
    idx = np.searchsorted(classes, labels)
    idx = np.clip(idx, 0, classes.size - 1)
    if np.any(classes[idx] != labels):
        bad = labels[classes[idx] != labels][0]
        raise ModelError(f"label {bad} is not in the model's class set {classes.tolist()}")
    return idx
