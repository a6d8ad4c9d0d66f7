"""Shared helpers for the test suite."""

import numpy as np


def make_blobs(rng, n_per_class=30, n_features=4, n_classes=3, spread=0.3):
    """Well-separated Gaussian clusters, one centered at 3*c on every axis."""
    feats, labs = [], []
    for c in range(n_classes):
        center = np.full(n_features, 3.0 * c)
        feats.append(center + spread * rng.standard_normal((n_per_class, n_features)))
        labs.append(np.full(n_per_class, c, dtype=np.int64))
    x = np.vstack(feats)
    y = np.concatenate(labs)
    order = rng.permutation(y.size)
    return x[order], y[order]
