"""Entropy arithmetic, split search, and single decision trees."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from emgmix.errors import ConfigError, DataError, ModelError
from emgmix.models import (
    EnsembleConfig,
    best_exhaustive_split,
    best_random_split,
    entropy,
    et_split_score,
    fit_tree,
    information_gain,
)


def oracle_entropy(labels):
    labels = np.asarray(labels)
    h = 0.0
    for c in np.unique(labels):
        p = np.sum(labels == c) / labels.size
        h -= p * np.log2(p)
    return h


def oracle_best_gain(X, y):
    # exhaustive scan over midpoints of consecutive distinct values, scored
    # with the same arithmetic shape as the library (weighted child entropy
    # subtracted from the parent entropy, clamped at zero)
    n = y.size
    h_parent = oracle_entropy(y)
    best = 0.0
    for f in range(X.shape[1]):
        vals = np.unique(X[:, f])
        for i in range(vals.size - 1):
            thr = (vals[i] + vals[i + 1]) / 2.0
            left = X[:, f] <= thr
            w_left = left.sum() / n
            w_right = (~left).sum() / n
            gain = max(0.0, h_parent - (w_left * oracle_entropy(y[left])
                                        + w_right * oracle_entropy(y[~left])))
            best = max(best, gain)
    return best


def random_dataset(rng, max_rows=30, max_features=3, max_classes=3):
    n = int(rng.integers(2, max_rows + 1))
    d = int(rng.integers(1, max_features + 1))
    k = int(rng.integers(2, max_classes + 1))
    # coarse grid makes duplicate values (and threshold ties) common
    X = rng.integers(0, 5, size=(n, d)).astype(np.float64)
    y = rng.integers(0, k, size=n)
    return X, y


def walk(node, visit):
    visit(node)
    if not node.is_leaf:
        walk(node.left, visit)
        walk(node.right, visit)


class TestEntropy:
    def test_hand_values(self):
        assert entropy([0.5, 0.5]) == 1.0
        assert entropy([1.0]) == 0.0
        assert entropy([0.25, 0.25, 0.25, 0.25]) == 2.0

    def test_zero_probabilities_contribute_nothing(self):
        assert entropy([0.5, 0.5, 0.0]) == 1.0

    def test_empty_distribution_rejected(self):
        with pytest.raises(DataError):
            entropy([])

    def test_negative_probability_rejected(self):
        with pytest.raises(DataError):
            entropy([1.2, -0.2])


class TestInformationGain:
    def test_perfect_split_recovers_parent_entropy(self):
        gain = information_gain([0, 0, 1, 1], [[0, 0], [1, 1]])
        assert gain == 1.0

    def test_identically_distributed_children_gain_nothing(self):
        gain = information_gain([0, 1, 0, 1], [[0, 1], [0, 1]])
        assert gain == 0.0

    def test_three_one_split_hand_value(self):
        gain = information_gain([0, 0, 1, 1], [[0, 0, 1], [1]])
        assert_allclose(gain, 0.3113, atol=1e-3)

    def test_children_must_partition_the_parent(self):
        with pytest.raises(DataError, match="partition"):
            information_gain([0, 0, 1, 1], [[0, 0], [1, 0]])

    def test_gain_never_negative(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            y = rng.integers(0, 3, size=int(rng.integers(2, 20)))
            cut = int(rng.integers(1, y.size))
            assert information_gain(y, [y[:cut], y[cut:]]) >= 0.0


class TestEtSplitScore:
    def test_balanced_perfect_split_scores_one(self):
        mask = np.array([True, True, False, False])
        assert et_split_score([0, 0, 1, 1], mask) == 1.0

    def test_uninformative_split_scores_zero(self):
        mask = np.array([True, True, False, False])
        assert et_split_score([0, 1, 0, 1], mask) == 0.0

    def test_single_class_scores_zero(self):
        mask = np.array([True, False, False, False])
        assert et_split_score([0, 0, 0, 0], mask) == 0.0

    def test_empty_side_rejected(self):
        with pytest.raises(DataError):
            et_split_score([0, 1], np.array([True, True]))

    def test_score_stays_in_unit_interval(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            n = int(rng.integers(2, 20))
            y = rng.integers(0, 4, size=n)
            mask = np.zeros(n, dtype=bool)
            mask[:int(rng.integers(1, n))] = True
            rng.shuffle(mask)
            if mask.all() or not mask.any():
                continue
            assert 0.0 <= et_split_score(y, mask) <= 1.0


class TestExhaustiveSplitSearch:
    def test_root_gain_matches_brute_force_exactly(self):
        rng = np.random.default_rng(10)
        for _ in range(80):
            X, y = random_dataset(rng)
            classes, label_idx = np.unique(y, return_inverse=True)
            cand = best_exhaustive_split(X, label_idx, np.ones(y.size),
                                         np.arange(X.shape[1]), classes.size)
            found = 0.0 if cand is None else cand.information_gain
            assert found == oracle_best_gain(X, y)

    def test_no_candidate_when_all_features_constant(self):
        X = np.ones((6, 2))
        y = np.array([0, 1, 0, 1, 0, 1])
        cand = best_exhaustive_split(X, y, np.ones(6), np.arange(2), 2)
        assert cand is None

    def test_threshold_is_midpoint_of_adjacent_values(self):
        X = np.array([[1.0], [3.0], [5.0], [7.0]])
        y = np.array([0, 0, 1, 1])
        cand = best_exhaustive_split(X, y, np.ones(4), np.array([0]), 2)
        assert cand.threshold == 4.0
        assert cand.information_gain == 1.0

    def test_ties_prefer_the_lower_feature_index(self):
        # both columns separate the labels perfectly
        X = np.array([[0.0, 10.0], [1.0, 11.0], [2.0, 12.0], [3.0, 13.0]])
        y = np.array([0, 0, 1, 1])
        cand = best_exhaustive_split(X, y, np.ones(4), np.arange(2), 2)
        assert cand.feature == 0

    def test_ties_prefer_the_lower_threshold(self):
        # splitting before or after the middle value gains the same
        X = np.array([[1.0], [2.0], [3.0]])
        y = np.array([0, 1, 0])
        cand = best_exhaustive_split(X, y, np.ones(3), np.array([0]), 2)
        assert cand.threshold == 1.5


class TestRandomSplitSearch:
    def test_threshold_lies_strictly_inside_the_value_range(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            X = rng.uniform(-5, 5, size=(12, 3))
            y = rng.integers(0, 3, size=12)
            cand = best_random_split(X, y, np.ones(12), 3, 3,
                                     np.random.default_rng(int(rng.integers(1 << 30))))
            col = X[:, cand.feature]
            assert col.min() < cand.threshold < col.max()

    def test_constant_features_are_never_cut(self):
        rng = np.random.default_rng(14)
        X = np.column_stack([np.full(20, 7.0), rng.uniform(0, 1, 20)])
        y = rng.integers(0, 2, size=20)
        for seed in range(20):
            cand = best_random_split(X, y, np.ones(20), 2, 2,
                                     np.random.default_rng(seed))
            assert cand.feature == 1

    def test_all_constant_features_give_no_candidate(self):
        X = np.ones((8, 2))
        y = np.array([0, 1] * 4)
        cand = best_random_split(X, y, np.ones(8), 2, 2,
                                 np.random.default_rng(0))
        assert cand is None

    def test_score_agrees_with_public_scorer(self):
        rng = np.random.default_rng(16)
        for seed in range(25):
            X = rng.uniform(0, 1, size=(15, 2))
            y = rng.integers(0, 3, size=15)
            cand = best_random_split(X, y, np.ones(15), 2, 3,
                                     np.random.default_rng(seed))
            mask = X[:, cand.feature] <= cand.threshold
            assert_allclose(cand.score, et_split_score(y, mask), rtol=1e-12)


class TestFitTree:
    def test_sign_of_single_feature_learned_by_a_stump(self):
        rng = np.random.default_rng(18)
        x = rng.uniform(-1, 1, size=200)
        x = x[np.abs(x) > 0.05][:, None]
        y = (x[:, 0] > 0).astype(int)
        model = fit_tree(x, y, EnsembleConfig.decision_tree(max_depth=1))
        assert model.depth() == 1
        assert np.mean(model.predict_label(x) == y) == 1.0
        assert abs(model.root.threshold) < 0.1

    def test_same_config_reproduces_the_tree(self):
        rng = np.random.default_rng(20)
        X = rng.uniform(0, 1, size=(40, 3))
        y = rng.integers(0, 3, size=40)
        cfg = EnsembleConfig.decision_tree(seed=5)
        a = fit_tree(X, y, cfg).predict_posterior(X)
        b = fit_tree(X, y, cfg).predict_posterior(X)
        assert_allclose(a, b, rtol=0, atol=0)

    def test_posterior_rows_are_distributions(self):
        rng = np.random.default_rng(22)
        X = rng.uniform(0, 1, size=(50, 4))
        y = rng.integers(0, 4, size=50)
        post = fit_tree(X, y, EnsembleConfig.decision_tree()).predict_posterior(X)
        assert post.shape == (50, 4)
        assert np.all(post >= 0)
        assert_allclose(post.sum(axis=1), 1.0, rtol=1e-12)

    def test_depth_zero_returns_class_priors(self):
        X = np.arange(8, dtype=float)[:, None]
        y = np.array([0, 0, 0, 0, 0, 0, 1, 1])
        model = fit_tree(X, y, EnsembleConfig.decision_tree(max_depth=0))
        assert model.node_count() == 1
        assert_allclose(model.predict_posterior([3.0]), [0.75, 0.25])

    def test_min_split_stops_growth(self):
        X = np.arange(6, dtype=float)[:, None]
        y = np.array([0, 1, 0, 1, 0, 1])
        model = fit_tree(X, y, EnsembleConfig.decision_tree(min_split=7))
        assert model.node_count() == 1

    def test_pure_nodes_become_leaves(self):
        X = np.arange(10, dtype=float)[:, None]
        y = np.zeros(10, dtype=int)
        model = fit_tree(X, y, EnsembleConfig.decision_tree())
        assert model.node_count() == 1
        assert_allclose(model.predict_posterior([[4.0]]), [[1.0]])

    def test_training_rows_memorized_when_separable(self):
        rng = np.random.default_rng(24)
        X = rng.uniform(0, 1, size=(60, 3))
        y = rng.integers(0, 3, size=60)  # distinct rows: fully separable
        model = fit_tree(X, y, EnsembleConfig.decision_tree())
        assert np.array_equal(model.predict_label(X), y)

    def test_explicit_class_set_adds_empty_posterior_columns(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 0, 2, 2])
        model = fit_tree(X, y, EnsembleConfig.decision_tree(), classes=[0, 1, 2])
        post = model.predict_posterior(X)
        assert_allclose(post[:, 1], 0.0)
        assert set(np.unique(model.predict_label(X))) <= {0, 2}

    def test_label_outside_class_set_rejected(self):
        X = np.zeros((3, 1))
        with pytest.raises(ModelError):
            fit_tree(X, np.array([0, 1, 5]), EnsembleConfig.decision_tree(),
                     classes=[0, 1])

    def test_feature_count_checked_at_prediction(self):
        X = np.random.default_rng(26).uniform(0, 1, (10, 3))
        y = np.arange(10) % 2
        model = fit_tree(X, y, EnsembleConfig.decision_tree())
        with pytest.raises(ModelError):
            model.predict_posterior(np.zeros((2, 5)))

    def test_prediction_invariant_under_monotone_feature_transform(self):
        rng = np.random.default_rng(28)
        for _ in range(20):
            X, y = random_dataset(rng, max_rows=25)
            X = X + rng.uniform(0, 0.3, size=X.shape)  # break exact ties
            cfg = EnsembleConfig.decision_tree()
            before = fit_tree(X, y, cfg).predict_label(X)
            Xt = X.copy()
            f = int(rng.integers(X.shape[1]))
            Xt[:, f] = np.exp(Xt[:, f])
            after = fit_tree(Xt, y, cfg).predict_label(Xt)
            assert np.array_equal(before, after)

    def test_duplicating_a_row_equals_doubling_its_weight(self):
        rng = np.random.default_rng(30)
        X = rng.uniform(0, 1, size=(20, 2))
        y = rng.integers(0, 2, size=20)
        dup = fit_tree(np.vstack([X, X[:1]]), np.append(y, y[0]),
                       EnsembleConfig.decision_tree())
        w = np.ones(20)
        w[0] = 2.0
        weighted = fit_tree(X, y, EnsembleConfig.decision_tree(), sample_weight=w)
        grid = rng.uniform(0, 1, size=(50, 2))
        assert_allclose(dup.predict_posterior(grid),
                        weighted.predict_posterior(grid), rtol=0, atol=0)

    def test_nonpositive_weights_rejected(self):
        X = np.zeros((3, 1))
        y = np.array([0, 1, 0])
        with pytest.raises(DataError):
            fit_tree(X, y, sample_weight=np.array([1.0, -1.0, 1.0]))
        with pytest.raises(DataError):
            fit_tree(X, y, sample_weight=np.array([1.0, np.inf, 1.0]))

    def test_random_cut_tree_never_splits_constant_feature(self):
        rng = np.random.default_rng(32)
        X = np.column_stack([np.full(40, 3.0), rng.uniform(0, 1, 40)])
        y = (X[:, 1] > 0.5).astype(int)
        cfg = EnsembleConfig(tree_count=1, attrs_per_node="all",
                             split_mode="random-cut")
        model = fit_tree(X, y, cfg)
        seen = []
        walk(model.root, lambda n: seen.append(n.feature) if not n.is_leaf else None)
        assert seen and all(f == 1 for f in seen)

    def test_random_cut_tree_fits_separable_data(self):
        rng = np.random.default_rng(34)
        X = rng.uniform(0, 1, size=(80, 3))
        y = (X[:, 0] + X[:, 2] > 1.0).astype(int)
        cfg = EnsembleConfig.extra_trees(tree_count=1, seed=3).single_tree()
        model = fit_tree(X, y, cfg)
        assert np.mean(model.predict_label(X) == y) == 1.0

    def test_argmax_tie_breaks_to_the_lower_class(self):
        X = np.array([[0.0], [0.0]])
        y = np.array([0, 1])
        model = fit_tree(X, y, EnsembleConfig.decision_tree())
        assert model.predict_label([0.0]) == 0
