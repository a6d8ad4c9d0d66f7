"""Expert planning, gate fusion arithmetic, and the combined classifier."""

import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import make_blobs
from emgmix.dataset import Dataset
from emgmix.errors import ConfigError, DataError
from emgmix.meet import combine_expert_gate, fit_meet, plan_experts, predict_meet
from emgmix.models import EnsembleConfig, derive_seed, fit_ensemble
from emgmix.serialize import model_to_dict


def random_posteriors(rng, plan, rows=1):
    gate = rng.uniform(0.01, 1.0, size=(rows, plan.class_count))
    gate /= gate.sum(axis=1, keepdims=True)
    experts = []
    for members in plan.groups:
        p = rng.uniform(0.01, 1.0, size=(rows, len(members)))
        experts.append(p / p.sum(axis=1, keepdims=True))
    return experts, gate


def blob_dataset(rng, n_classes=4, n_per_class=25):
    X, y = make_blobs(rng, n_per_class=n_per_class, n_classes=n_classes)
    return Dataset(X, y, n_classes)


class TestPlanExperts:
    def test_six_classes_pair_into_three_experts_plus_gate(self):
        plan = plan_experts(6)
        assert plan.groups == ((0, 1), (2, 3), (4, 5))
        assert plan.expert_count == 3
        assert plan.total_classifiers == 4

    def test_classifier_count_follows_half_the_classes_rounded_up(self):
        for n in range(2, 13):
            plan = plan_experts(n)
            assert plan.total_classifiers == math.ceil(n / 2) + 1

    def test_groups_partition_the_class_ids(self):
        for n in range(2, 13):
            plan = plan_experts(n)
            flat = [c for g in plan.groups for c in g]
            assert sorted(flat) == list(range(n))

    def test_odd_class_count_leaves_a_singleton(self):
        plan = plan_experts(5)
        assert plan.groups == ((0, 1), (2, 3), (4,))

    def test_two_classes_need_one_expert_and_the_gate(self):
        plan = plan_experts(2)
        assert plan.groups == ((0, 1),)
        assert plan.total_classifiers == 2

    def test_permuted_order_regroups_but_stays_sorted_within_groups(self):
        plan = plan_experts(6, order=[5, 0, 3, 2, 4, 1])
        assert plan.groups == ((0, 5), (2, 3), (1, 4))

    def test_group_of_maps_every_class_to_its_expert(self):
        plan = plan_experts(7)
        for e, members in enumerate(plan.groups):
            for c in members:
                assert plan.group_of(c) == e

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ConfigError):
            plan_experts(1)
        with pytest.raises(ConfigError):
            plan_experts(4, order=[0, 1, 2])
        with pytest.raises(ConfigError):
            plan_experts(4, order=[0, 1, 2, 2])


class TestCombineExpertGate:
    def test_worked_example_with_six_classes(self):
        plan = plan_experts(6)
        gate = np.array([0.1, 0.1, 0.3, 0.3, 0.1, 0.1])
        experts = [np.array([0.9, 0.1]), np.array([0.6, 0.4]),
                   np.array([0.5, 0.5])]
        scores = combine_expert_gate(experts, gate, plan)
        # hand arithmetic: group weights are the gate mass per pair, each
        # class score is its group's weight times the expert's probability
        weights = [gate[0] + gate[1], gate[2] + gate[3], gate[4] + gate[5]]
        expected = np.array([weights[0] * 0.9, weights[0] * 0.1,
                             weights[1] * 0.6, weights[1] * 0.4,
                             weights[2] * 0.5, weights[2] * 0.5])
        expected /= expected.sum()
        assert_allclose(scores, expected, rtol=0, atol=0)
        assert_allclose(scores, [0.18, 0.02, 0.36, 0.24, 0.10, 0.10],
                        rtol=0, atol=1e-15)
        assert int(np.argmax(scores)) == 2

    def test_one_hot_gate_and_expert_concentrate_all_mass(self):
        plan = plan_experts(4)
        gate = np.array([1.0, 0.0, 0.0, 0.0])
        experts = [np.array([1.0, 0.0]), np.array([0.5, 0.5])]
        scores = combine_expert_gate(experts, gate, plan)
        assert_allclose(scores, [1.0, 0.0, 0.0, 0.0])

    def test_uniform_gate_keeps_the_expert_argmax(self):
        # even class count: every group gets the same gate mass, so the
        # fused argmax is the argmax of the concatenated expert posteriors
        plan = plan_experts(6)
        rng = np.random.default_rng(3)
        for _ in range(50):
            experts, _ = random_posteriors(rng, plan)
            gate = np.full((1, 6), 1.0 / 6.0)
            fused = combine_expert_gate(experts, gate, plan)
            flat = np.concatenate([e[0] for e in experts])
            assert int(np.argmax(fused)) == int(np.argmax(flat))

    def test_positive_scaling_of_expert_scores_keeps_the_argmax(self):
        plan = plan_experts(6)
        rng = np.random.default_rng(5)
        for _ in range(50):
            experts, gate = random_posteriors(rng, plan)
            scale = float(rng.uniform(0.1, 10.0))
            base = combine_expert_gate(experts, gate, plan)
            scaled = combine_expert_gate([e * scale for e in experts], gate, plan)
            assert int(np.argmax(scaled)) == int(np.argmax(base))

    def test_result_is_a_distribution(self):
        plan = plan_experts(5)
        rng = np.random.default_rng(7)
        experts, gate = random_posteriors(rng, plan, rows=20)
        fused = combine_expert_gate(experts, gate, plan)
        assert fused.shape == (20, 5)
        assert np.all(fused >= 0)
        assert_allclose(fused.sum(axis=1), 1.0, rtol=1e-12)

    def test_all_zero_scores_fall_back_to_uniform(self):
        plan = plan_experts(4)
        gate = np.array([0.0, 0.0, 0.0, 0.0])
        experts = [np.array([0.5, 0.5]), np.array([0.5, 0.5])]
        assert_allclose(combine_expert_gate(experts, gate, plan),
                        np.full(4, 0.25))

    def test_shape_mismatches_rejected(self):
        plan = plan_experts(4)
        gate = np.full(4, 0.25)
        with pytest.raises(DataError):
            combine_expert_gate([np.full(2, 0.5)], gate, plan)
        with pytest.raises(DataError):
            combine_expert_gate([np.full(3, 1 / 3), np.full(2, 0.5)], gate, plan)
        with pytest.raises(DataError):
            combine_expert_gate([np.full(2, 0.5), np.full(2, 0.5)],
                                np.full(5, 0.2), plan)


class TestFitMeet:
    def test_blob_accuracy_and_prediction_consistency(self):
        rng = np.random.default_rng(9)
        ds = blob_dataset(rng)
        cfg = EnsembleConfig.extra_trees(tree_count=15, seed=2)
        model = fit_meet(ds, cfg)
        acc = np.mean(model.predict_label(ds.features) == ds.labels)
        assert acc >= 0.95
        posterior, label = predict_meet(model, ds.features)
        assert np.array_equal(label, model.predict_label(ds.features))
        assert_allclose(posterior, model.predict_posterior(ds.features),
                        rtol=0, atol=0)

    def test_experts_match_standalone_fits_on_their_rows(self):
        # expert g sees only its group's rows, with a seed derived from
        # (config.seed, g); the gate comes last in the derivation order
        rng = np.random.default_rng(11)
        ds = blob_dataset(rng)
        cfg = EnsembleConfig.extra_trees(tree_count=8, seed=17)
        model = fit_meet(ds, cfg)
        probe = rng.uniform(-1, 10, size=(15, ds.features.shape[1]))
        for g, members in enumerate(model.plan.groups):
            rows = np.isin(ds.labels, members)
            sub = replace(cfg, seed=derive_seed(cfg.seed, g))
            alone = fit_ensemble(ds.features[rows], ds.labels[rows], sub,
                                 classes=np.asarray(members, dtype=np.int64))
            assert_allclose(model.experts[g].predict_posterior(probe),
                            alone.predict_posterior(probe), rtol=0, atol=0)

    def test_singleton_expert_always_answers_its_class(self):
        rng = np.random.default_rng(13)
        ds = blob_dataset(rng, n_classes=5)
        model = fit_meet(ds, EnsembleConfig.extra_trees(tree_count=5, seed=1))
        lone = model.experts[-1]
        probe = rng.uniform(-5, 20, size=(20, ds.features.shape[1]))
        assert_allclose(lone.predict_posterior(probe), 1.0, rtol=0, atol=0)
        assert np.all(lone.predict_label(probe) == 4)

    def test_same_seed_gives_identical_serialized_models(self):
        rng = np.random.default_rng(15)
        ds = blob_dataset(rng, n_classes=3, n_per_class=15)
        cfg = EnsembleConfig.extra_trees(tree_count=6, seed=23)
        assert model_to_dict(fit_meet(ds, cfg)) == model_to_dict(fit_meet(ds, cfg))

    def test_two_class_dataset_degenerates_cleanly(self):
        rng = np.random.default_rng(17)
        ds = blob_dataset(rng, n_classes=2)
        model = fit_meet(ds, EnsembleConfig.extra_trees(tree_count=5, seed=3))
        assert model.plan.groups == ((0, 1),)
        acc = np.mean(model.predict_label(ds.features) == ds.labels)
        assert acc >= 0.95

    def test_worker_count_does_not_change_the_model(self):
        rng = np.random.default_rng(19)
        ds = blob_dataset(rng, n_classes=3, n_per_class=12)
        cfg = EnsembleConfig.extra_trees(tree_count=6, seed=29)
        probe = rng.uniform(-1, 8, size=(10, ds.features.shape[1]))
        a = fit_meet(ds, cfg, workers=1).predict_posterior(probe)
        b = fit_meet(ds, cfg, workers=3).predict_posterior(probe)
        assert_allclose(a, b, rtol=0, atol=0)

    def test_missing_class_rejected(self):
        X = np.zeros((4, 2))
        ds = Dataset(X, np.array([0, 0, 2, 2]), 3)
        with pytest.raises(DataError, match="class 1"):
            fit_meet(ds)

    def test_plan_class_count_must_match_dataset(self):
        rng = np.random.default_rng(21)
        ds = blob_dataset(rng, n_classes=3)
        with pytest.raises(ConfigError):
            fit_meet(ds, plan=plan_experts(4))

    def test_custom_plan_changes_the_grouping(self):
        rng = np.random.default_rng(23)
        ds = blob_dataset(rng, n_classes=4)
        plan = plan_experts(4, order=[0, 2, 1, 3])
        model = fit_meet(ds, EnsembleConfig.extra_trees(tree_count=5, seed=5),
                         plan=plan)
        assert model.plan.groups == ((0, 2), (1, 3))
        assert model.experts[0].classes.tolist() == [0, 2]
