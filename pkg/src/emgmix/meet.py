"""Mixture of class-pair experts with a gating ensemble.

For N classes the plan pairs consecutive class ids: expert 0 owns classes
(0, 1), expert 1 owns (2, 3), and so on, with a final single-class expert
when N is odd. That yields ceil(N/2) experts plus one gate, so six classes
train four classifiers in total. Each expert is a random-cut tree ensemble
trained only on its own classes' rows and emits a posterior over those
classes; the gate is the same kind of ensemble trained on all rows over all
classes.

Prediction combines the two stages multiplicatively: the gate's posterior
mass over an expert's class group weights that expert, each class's score is
its group weight times the expert's within-group probability for it, and
the scores normalize to a posterior whose argmax is the label. Sub-model
seeds derive from the configured seed and the sub-model's position (experts
in group order, then the gate), so a given expert's trees depend only on its
own rows and the seed.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, DataError
from .models.base import EnsembleConfig, PosteriorMixin, derive_seed
from .models.ensemble import EnsembleModel, fit_ensemble


@dataclass(frozen=True)
class ExpertPlan:
    """Class groups, one per expert, covering 0..class_count-1 exactly."""

    class_count: int
    groups: Tuple[Tuple[int, ...], ...]

    @property
    def expert_count(self) -> int:
        return len(self.groups)

    @property
    def total_classifiers(self) -> int:
        """Experts plus the gate."""
        return len(self.groups) + 1

    def group_of(self, class_id: int) -> int:
        for g, members in enumerate(self.groups):
            if class_id in members:
                return g
        raise ConfigError(f"class {class_id} is outside the plan")


def plan_experts(class_count: int,
                 order: Optional[Sequence[int]] = None) -> ExpertPlan:
    """Pair consecutive class ids into expert groups.

    `order` optionally permutes the ids before pairing; it must be a
    permutation of range(class_count). With N classes this plans ceil(N/2)
    experts (the last a singleton when N is odd) and ceil(N/2)+1 total
    classifiers including the gate.
    """
    if class_count < 2:
        raise ConfigError(f"need at least 2 classes, got {class_count}")
    if order is None:
        ids = list(range(class_count))
    else:
        ids = [int(c) for c in order]
        if sorted(ids) != list(range(class_count)):
            raise ConfigError(
                f"order must be a permutation of range({class_count}), got {order}"
            )
    # Members stored ascending so expert posterior columns align with the
    # sub-model's class order regardless of the pairing permutation.
    groups = tuple(
        tuple(sorted(ids[i: i + 2])) for i in range(0, class_count, 2)
    )
    return ExpertPlan(class_count=class_count, groups=groups)


def combine_expert_gate(
    expert_posteriors: Sequence[np.ndarray],
    gate_posterior: np.ndarray,
    plan: ExpertPlan,
) -> np.ndarray:
    """Fuse per-group expert posteriors with the gate posterior.

    Expert e's weight is the gate's total probability on its group; class
    c's raw score is that weight times expert e's probability for c. The
    returned vector is the scores normalized to sum to 1 (uniform if all
    scores vanish). Accepts single vectors or row-stacked batches.
    """
    gate = np.asarray(gate_posterior, dtype=np.float64)
    single = gate.ndim == 1
    if single:
        gate = gate[None, :]
    if gate.shape[1] != plan.class_count:
        raise DataError(
            f"gate posterior has {gate.shape[1]} classes, plan expects "
            f"{plan.class_count}"
        )
    if len(expert_posteriors) != plan.expert_count:
        raise DataError(
            f"got {len(expert_posteriors)} expert posteriors, plan has "
            f"{plan.expert_count} experts"
        )
    scores = np.zeros_like(gate)
    for members, post in zip(plan.groups, expert_posteriors):
        post = np.asarray(post, dtype=np.float64)
        if single and post.ndim == 1:
            post = post[None, :]
        if post.shape != (gate.shape[0], len(members)):
            raise DataError(
                f"expert posterior for group {members} has shape {post.shape}, "
                f"expected ({gate.shape[0]}, {len(members)})"
            )
        weight = gate[:, list(members)].sum(axis=1, keepdims=True)
        scores[:, list(members)] = weight * post
    totals = scores.sum(axis=1, keepdims=True)
    uniform = 1.0 / plan.class_count
    out = np.where(totals > 0.0, scores / np.where(totals > 0.0, totals, 1.0),
                   uniform)
    return out[0] if single else out


@dataclass
class MeetModel(PosteriorMixin):
    """Fitted plan: per-group experts plus the gate over all classes."""

    plan: ExpertPlan
    experts: List[EnsembleModel]
    gate: EnsembleModel
    classes: np.ndarray
    n_features: int

    def _posterior(self, X: np.ndarray) -> np.ndarray:
        gate_post = self.gate._posterior(X)
        expert_posts = [e._posterior(X) for e in self.experts]
        return combine_expert_gate(expert_posts, gate_post, self.plan)


def fit_meet(
    train: Dataset,
    config: Optional[EnsembleConfig] = None,
    plan: Optional[ExpertPlan] = None,
    workers: int = 1,
) -> MeetModel:
    """Train the experts and gate for `train`'s classes.

    `config` (default: a random-cut tree ensemble) is the template for every
    sub-model; sub-model i uses a seed derived from (config.seed, i) with
    experts first, the gate last. Every class in the dataset's class range
    must have at least one row.
    """
    config = config or EnsembleConfig.extra_trees()
    n_classes = train.class_count
    counts = train.class_counts()
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0])
        raise DataError(f"class {missing} has no training rows")
    if plan is None:
        plan = plan_experts(n_classes)
    elif plan.class_count != n_classes:
        raise ConfigError(
            f"plan covers {plan.class_count} classes, dataset has {n_classes}"
        )
    experts = []
    for g, members in enumerate(plan.groups):
        rows = np.isin(train.labels, members)
        sub = replace(config, seed=derive_seed(config.seed, g))
        experts.append(
            fit_ensemble(train.features[rows], train.labels[rows], sub,
                         classes=np.asarray(members, dtype=np.int64),
                         workers=workers)
        )
    gate_config = replace(config, seed=derive_seed(config.seed, plan.expert_count))
    gate = fit_ensemble(train.features, train.labels, gate_config,
                        classes=np.arange(n_classes), workers=workers)
    return MeetModel(
        plan=plan,
        experts=experts,
        gate=gate,
        classes=np.arange(n_classes),
        n_features=train.features.shape[1],
    )


def predict_meet(model: MeetModel, features: np.ndarray):
    """Posterior and label for one feature vector (or a batch)."""
    posterior = model.predict_posterior(features)
    label = model.predict_label(features)
    return posterior, label
