"""Binary classification trees with exhaustive and random-cut split search.

Impurity is Shannon entropy in bits. A split's information gain is

    IG = H(parent) - (n_left/n * H(left) + n_right/n * H(right))

computed in exactly that arithmetic shape so results are reproducible
bit-for-bit against a direct enumeration of the same formula. Exhaustive
search tries midpoints between consecutive distinct sorted values of each
candidate feature and keeps the highest gain, breaking ties toward the lower
feature index and then the lower threshold; nodes split only when the best
gain is positive. Random-cut search draws one uniform threshold strictly
inside (min, max) per candidate feature and scores candidates by

    S = 2 * IG / (H_split + H_class)

the gain normalized by the sum of the binary split entropy and the node's
class entropy (zero denominator scores 0); the best candidate always becomes
a split. Rows with feature value <= threshold go left.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..errors import DataError
from .base import (
    SPLIT_EXHAUSTIVE,
    SPLIT_RANDOM_CUT,
    EnsembleConfig,
    PosteriorMixin,
    as_class_array,
    class_indices,
)


def entropy(probabilities) -> float:
    """Shannon entropy in bits of a probability vector; 0 log 0 taken as 0."""
    p = np.asarray(probabilities, dtype=np.float64)
    if p.size == 0:
        raise DataError("entropy of an empty distribution is undefined")
    if np.any(p < 0.0):
        raise DataError("probabilities must be nonnegative")
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def _class_probs(labels: np.ndarray) -> np.ndarray:
    _, counts = np.unique(labels, return_counts=True)
    return counts.astype(np.float64) / float(labels.size)


def information_gain(parent_labels, children_labels) -> float:
    """Entropy reduction of partitioning `parent_labels` into the children.

    The children must jointly hold exactly the parent's label multiset.
    Roundoff can push a zero gain a few ulp negative, so the result is
    clamped at 0.
    """
    parent = np.asarray(parent_labels).ravel()
    if parent.size == 0:
        raise DataError("information gain of an empty sample is undefined")
    children = [np.asarray(c).ravel() for c in children_labels]
    merged = np.concatenate(children) if children else np.empty(0, parent.dtype)
    if not np.array_equal(np.sort(merged), np.sort(parent)):
        raise DataError("children do not partition the parent labels")
    n = float(parent.size)
    h_parent = entropy(_class_probs(parent))
    weighted = 0.0
    for child in children:
        if child.size == 0:
            continue
        weighted += (child.size / n) * entropy(_class_probs(child))
    return max(0.0, h_parent - weighted)


def et_split_score(labels, left_mask) -> float:
    """Normalized gain 2*IG/(H_split + H_class) of a binary split.

    `left_mask` marks the rows sent left. Scores 0 when the denominator is
    0 (a single-class node split at one extreme).
    """
    y = np.asarray(labels).ravel()
    mask = np.asarray(left_mask, dtype=bool).ravel()
    if y.size == 0 or y.size != mask.size:
        raise DataError("left_mask must match the label count")
    if not (0 < mask.sum() < mask.size):
        raise DataError("a split must leave both sides nonempty")
    gain = information_gain(y, [y[mask], y[~mask]])
    n = float(y.size)
    h_split = entropy([mask.sum() / n, (~mask).sum() / n])
    h_class = entropy(_class_probs(y))
    denom = h_split + h_class
    if denom == 0.0:
        return 0.0
    return 2.0 * gain / denom


@dataclass
class SplitCandidate:
    """One evaluated split: feature/threshold plus its quality measures."""

    feature: int
    threshold: float
    information_gain: float
    split_entropy: float
    class_entropy: float
    score: float


@dataclass
class TreeNode:
    """Internal node (feature/threshold/left/right) or leaf (posterior)."""

    feature: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    posterior: Optional[np.ndarray] = None

    @property
    def is_leaf(self) -> bool:
        return self.posterior is not None


def _entropy_rows(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    # Row-wise -sum(p log2 p) with zero-count classes contributing 0.
    p = counts / totals[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, p * np.log2(p), 0.0)
    return -np.sum(terms, axis=1)


def _entropy_counts(counts: np.ndarray, total: float) -> float:
    p = counts / total
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def best_exhaustive_split(
    features: np.ndarray,
    label_idx: np.ndarray,
    weights: np.ndarray,
    feature_subset: np.ndarray,
    n_classes: int,
) -> Optional[SplitCandidate]:
    """Highest-gain midpoint split over the given feature subset.

    Candidate thresholds per feature are midpoints between consecutive
    distinct sorted values. Returns None when no candidate has positive
    gain. Ties keep the lowest feature index, then the lowest threshold.
    `weights` generalizes row counts; with unit weights the arithmetic is
    the textbook unweighted formula, exactly.
    """
    n = label_idx.size
    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), label_idx] = weights
    parent_counts = onehot.sum(axis=0)
    total = float(parent_counts.sum())
    h_parent = _entropy_counts(parent_counts, total)

    best: Optional[SplitCandidate] = None
    for f in np.sort(feature_subset):
        col = features[:, f]
        order = np.argsort(col, kind="stable")
        v = col[order]
        boundaries = np.flatnonzero(v[1:] != v[:-1]) + 1
        if boundaries.size == 0:
            continue
        cum = np.cumsum(onehot[order], axis=0)
        left_counts = cum[boundaries - 1]
        right_counts = parent_counts[None, :] - left_counts
        left_tot = left_counts.sum(axis=1)
        right_tot = right_counts.sum(axis=1)
        h_left = _entropy_rows(left_counts, left_tot)
        h_right = _entropy_rows(right_counts, right_tot)
        w_left = left_tot / total
        w_right = right_tot / total
        gains = np.maximum(h_parent - (w_left * h_left + w_right * h_right), 0.0)
        k = int(np.argmax(gains))
        gain = float(gains[k])
        if gain <= 0.0 or (best is not None and gain <= best.information_gain):
            continue
        b = boundaries[k]
        thr = (v[b - 1] + v[b]) / 2.0
        h_split = _entropy_counts(np.array([left_tot[k], right_tot[k]]), total)
        denom = h_split + h_parent
        score = 0.0 if denom == 0.0 else 2.0 * gain / denom
        best = SplitCandidate(int(f), float(thr), gain, h_split, h_parent, score)
    return best


def best_random_split(
    features: np.ndarray,
    label_idx: np.ndarray,
    weights: np.ndarray,
    attrs_per_node: int,
    n_classes: int,
    rng: np.random.Generator,
) -> Optional[SplitCandidate]:
    """Best of `attrs_per_node` random cuts, ranked by normalized gain.

    Candidate features are sampled without replacement from the non-constant
    features (fewer candidates when fewer exist; None when all features are
    constant). Each gets one threshold drawn uniformly from (min, max), so
    both children are always nonempty, and the best score always splits.
    """
    mins = features.min(axis=0)
    maxs = features.max(axis=0)
    pool = np.flatnonzero(maxs > mins)
    if pool.size == 0:
        return None
    take = min(attrs_per_node, pool.size)
    feats = np.sort(rng.choice(pool, size=take, replace=False))

    counts = np.bincount(label_idx, weights=weights, minlength=n_classes)
    total = float(counts.sum())
    h_class = _entropy_counts(counts, total)

    best: Optional[SplitCandidate] = None
    for f in feats:
        thr = float(rng.uniform(mins[f], maxs[f]))
        if thr >= maxs[f]:
            thr = float(np.nextafter(maxs[f], mins[f]))
        left = features[:, f] <= thr
        left_counts = np.bincount(label_idx[left], weights=weights[left],
                                  minlength=n_classes)
        right_counts = counts - left_counts
        left_tot = float(left_counts.sum())
        right_tot = total - left_tot
        w_left = left_tot / total
        w_right = right_tot / total
        h_left = _entropy_counts(left_counts, left_tot)
        h_right = _entropy_counts(right_counts, right_tot)
        gain = max(0.0, h_class - (w_left * h_left + w_right * h_right))
        h_split = _entropy_counts(np.array([left_tot, right_tot]), total)
        denom = h_split + h_class
        score = 0.0 if denom == 0.0 else 2.0 * gain / denom
        if best is None or score > best.score:
            best = SplitCandidate(int(f), thr, gain, h_split, h_class, score)
    return best


@dataclass
class TreeModel(PosteriorMixin):
    """A fitted tree: root node, class ids, and expected feature count."""

    root: TreeNode
    classes: np.ndarray
    n_features: int
    config: EnsembleConfig = field(default_factory=EnsembleConfig)

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        out = np.empty((X.shape[0], self.classes.size), dtype=np.float64)
        _predict_into(self.root, X, np.arange(X.shape[0]), out)
        return out

    def node_count(self) -> int:
        def count(node):
            if node.is_leaf:
                return 1
            return 1 + count(node.left) + count(node.right)
        return count(self.root)

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)


def _predict_into(node: TreeNode, X: np.ndarray, idx: np.ndarray,
                  out: np.ndarray) -> None:
    if idx.size == 0:
        return
    if node.is_leaf:
        out[idx] = node.posterior
        return
    go_left = X[idx, node.feature] <= node.threshold
    _predict_into(node.left, X, idx[go_left], out)
    _predict_into(node.right, X, idx[~go_left], out)


def fit_tree(
    features: np.ndarray,
    labels: np.ndarray,
    config: Optional[EnsembleConfig] = None,
    classes=None,
    sample_weight: Optional[np.ndarray] = None,
    rng: Optional[np.random.Generator] = None,
) -> TreeModel:
    """Grow one tree per `config` (tree_count and bootstrap are ignored here;
    resampling belongs to the ensemble trainer).

    Growth stops at pure nodes, nodes smaller than min_split, max_depth, or
    when the search yields no candidate (exhaustive mode additionally
    requires positive gain). Leaf posteriors are weighted class frequencies.
    `sample_weight` must be positive; it feeds boosted trees. The rng drives
    feature-subset and threshold draws; when omitted it derives from
    config.seed the same way an ensemble derives its first tree's stream.
    """
    config = config or EnsembleConfig.decision_tree()
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DataError(
            f"features must be (n, d) with n matching labels, got {X.shape} "
            f"and {y.shape}"
        )
    if X.shape[0] == 0:
        raise DataError("cannot fit a tree on an empty sample")
    cls = as_class_array(classes, y)
    yi = class_indices(cls, y)
    if sample_weight is None:
        w = np.ones(y.size, dtype=np.float64)
    else:
        w = np.asarray(sample_weight, dtype=np.float64)
        if w.shape != y.shape or np.any(w <= 0.0) or not np.all(np.isfinite(w)):
            raise DataError("sample_weight must be positive, finite, one per row")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(1)[0])
    n_attrs = config.resolve_attrs(X.shape[1])
    n_classes = cls.size
    all_features = np.arange(X.shape[1])

    def grow(idx: np.ndarray, depth: int) -> TreeNode:
        y_node = yi[idx]
        w_node = w[idx]
        counts = np.bincount(y_node, weights=w_node, minlength=n_classes)
        leaf = TreeNode(posterior=counts / counts.sum())
        if (
            idx.size < config.min_split
            or np.all(y_node == y_node[0])
            or (config.max_depth is not None and depth >= config.max_depth)
        ):
            return leaf
        X_node = X[idx]
        if config.split_mode == SPLIT_EXHAUSTIVE:
            if n_attrs >= X.shape[1]:
                subset = all_features
            else:
                subset = rng.choice(X.shape[1], size=n_attrs, replace=False)
            cand = best_exhaustive_split(X_node, y_node, w_node, subset, n_classes)
        else:
            cand = best_random_split(X_node, y_node, w_node, n_attrs, n_classes, rng)
        if cand is None:
            return leaf
        go_left = X_node[:, cand.feature] <= cand.threshold
        if not (0 < go_left.sum() < idx.size):
            return leaf
        return TreeNode(
            feature=cand.feature,
            threshold=cand.threshold,
            left=grow(idx[go_left], depth + 1),
            right=grow(idx[~go_left], depth + 1),
        )

    root = grow(np.arange(X.shape[0]), 0)
    return TreeModel(root=root, classes=cls, n_features=X.shape[1], config=config)
