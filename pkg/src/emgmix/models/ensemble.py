"""Tree ensembles: bootstrap aggregation, random forests, extra trees.

One trainer covers all three; the configuration picks the variant:

  - random forest: bootstrap=True, exhaustive splits, attrs_per_node "sqrt"
  - bagging:       bootstrap=True, exhaustive splits, attrs_per_node "all"
  - extra trees:   bootstrap=False, random-cut splits, attrs_per_node "sqrt"

Tree i draws its rng (bootstrap indices first, then split randomness) from
child i of SeedSequence(config.seed), so results depend only on the seed and
the tree index, never on worker count or build order. The ensemble posterior
is the unweighted mean of the tree posteriors.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..errors import ConfigError, DataError
from .base import EnsembleConfig, PosteriorMixin, as_class_array, class_indices
from .tree import TreeModel, fit_tree


@dataclass
class EnsembleModel(PosteriorMixin):
    """A fitted forest: member trees plus the shared class set."""

    trees: List[TreeModel]
    classes: np.ndarray
    n_features: int
    config: EnsembleConfig = field(default_factory=EnsembleConfig)

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        stacked = np.stack([tree._posterior(X) for tree in self.trees])
        return stacked.mean(axis=0)


def fit_ensemble(
    features: np.ndarray,
    labels: np.ndarray,
    config: Optional[EnsembleConfig] = None,
    classes=None,
    workers: int = 1,
) -> EnsembleModel:
    """Train config.tree_count trees, optionally across worker threads.

    With tree_count=1, no bootstrap, and exhaustive splits this reproduces
    fit_tree exactly. Bootstrap resamples n rows with replacement per tree.
    """
    config = config or EnsembleConfig()
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot fit an ensemble on an empty sample")
    cls = as_class_array(classes, y)
    class_indices(cls, y)  # validate labels before spawning workers
    seeds = np.random.SeedSequence(config.seed).spawn(config.tree_count)

    def build(i: int) -> TreeModel:
        rng = np.random.default_rng(seeds[i])
        if config.bootstrap:
            idx = rng.integers(0, X.shape[0], size=X.shape[0])
            Xi, yi = X[idx], y[idx]
        else:
            Xi, yi = X, y
        return fit_tree(Xi, yi, config, classes=cls, rng=rng)

    if workers == 1:
        trees = [build(i) for i in range(config.tree_count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trees = list(pool.map(build, range(config.tree_count)))
    return EnsembleModel(trees=trees, classes=cls, n_features=X.shape[1],
                         config=config)
