"""Model persistence: a self-describing JSON text format.

Every file carries {"format": "emgmix-model", "version": 1, "kind": ...}
followed by the model payload. Floats serialize via Python's repr (the json
module's default), which round-trips IEEE doubles exactly, so a saved model
predicts bit-identically after loading. Trees nest as plain dicts; the
mixture model embeds its experts and gate as sub-payloads.
"""

import json
from pathlib import Path

import numpy as np

from .errors import DataError
from .meet import ExpertPlan, MeetModel
from .models.base import EnsembleConfig
from .models.bayes import GaussianNbModel
from .models.boosting import BoostModel
from .models.ensemble import EnsembleModel
from .models.linear import LogisticModel
from .models.neighbors import KnnModel
from .models.tree import TreeModel, TreeNode

FORMAT_NAME = "emgmix-model"
FORMAT_VERSION = 1


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"posterior": node.posterior.tolist()}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(data: dict) -> TreeNode:
    if "posterior" in data:
        return TreeNode(posterior=np.asarray(data["posterior"], dtype=np.float64))
    return TreeNode(
        feature=int(data["feature"]),
        threshold=float(data["threshold"]),
        left=_node_from_dict(data["left"]),
        right=_node_from_dict(data["right"]),
    )


def _config_to_dict(config: EnsembleConfig) -> dict:
    return {
        "tree_count": config.tree_count,
        "attrs_per_node": config.attrs_per_node,
        "min_split": config.min_split,
        "bootstrap": config.bootstrap,
        "split_mode": config.split_mode,
        "seed": config.seed,
        "max_depth": config.max_depth,
    }


def _config_from_dict(data: dict) -> EnsembleConfig:
    return EnsembleConfig(**data)


def _tree_payload(model: TreeModel) -> dict:
    return {
        "root": _node_to_dict(model.root),
        "classes": model.classes.tolist(),
        "n_features": model.n_features,
        "config": _config_to_dict(model.config),
    }


def _tree_from_payload(data: dict) -> TreeModel:
    return TreeModel(
        root=_node_from_dict(data["root"]),
        classes=np.asarray(data["classes"], dtype=np.int64),
        n_features=int(data["n_features"]),
        config=_config_from_dict(data["config"]),
    )


def _ensemble_payload(model: EnsembleModel) -> dict:
    return {
        "trees": [_tree_payload(t) for t in model.trees],
        "classes": model.classes.tolist(),
        "n_features": model.n_features,
        "config": _config_to_dict(model.config),
    }


def _ensemble_from_payload(data: dict) -> EnsembleModel:
    return EnsembleModel(
        trees=[_tree_from_payload(t) for t in data["trees"]],
        classes=np.asarray(data["classes"], dtype=np.int64),
        n_features=int(data["n_features"]),
        config=_config_from_dict(data["config"]),
    )


def model_to_dict(model) -> dict:
    """Tagged dict form of any supported model."""
    if isinstance(model, TreeModel):
        kind, payload = "tree", _tree_payload(model)
    elif isinstance(model, EnsembleModel):
        kind, payload = "ensemble", _ensemble_payload(model)
    elif isinstance(model, BoostModel):
        kind, payload = "adaboost", {
            "stumps": [_tree_payload(s) for s in model.stumps],
            "alphas": model.alphas.tolist(),
            "round_errors": model.round_errors.tolist(),
            "classes": model.classes.tolist(),
            "n_features": model.n_features,
        }
    elif isinstance(model, KnnModel):
        kind, payload = "knn", {
            "train_features": model.train_features.tolist(),
            "train_class_idx": model.train_class_idx.tolist(),
            "k": model.k,
            "classes": model.classes.tolist(),
            "n_features": model.n_features,
        }
    elif isinstance(model, GaussianNbModel):
        kind, payload = "gaussian_nb", {
            "priors": model.priors.tolist(),
            "means": model.means.tolist(),
            "variances": model.variances.tolist(),
            "classes": model.classes.tolist(),
            "n_features": model.n_features,
        }
    elif isinstance(model, LogisticModel):
        kind, payload = "logistic", {
            "weights": model.weights.tolist(),
            "bias": model.bias.tolist(),
            "feature_mean": model.feature_mean.tolist(),
            "feature_scale": model.feature_scale.tolist(),
            "classes": model.classes.tolist(),
            "n_features": model.n_features,
            "final_loss": model.final_loss,
        }
    elif isinstance(model, MeetModel):
        kind, payload = "meet", {
            "class_count": model.plan.class_count,
            "groups": [list(g) for g in model.plan.groups],
            "experts": [_ensemble_payload(e) for e in model.experts],
            "gate": _ensemble_payload(model.gate),
            "classes": model.classes.tolist(),
            "n_features": model.n_features,
        }
    else:
        raise DataError(f"cannot serialize model of type {type(model).__name__}")
    return {"format": FORMAT_NAME, "version": FORMAT_VERSION, "kind": kind,
            **payload}


def model_from_dict(data: dict):
    """Inverse of model_to_dict; validates the format tag and version."""
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise DataError("not a recognized model file (missing format tag)")
    if data.get("version") != FORMAT_VERSION:
        raise DataError(
            f"unsupported model format version {data.get('version')!r}"
        )
    kind = data.get("kind")
    if kind == "tree":
        return _tree_from_payload(data)
    if kind == "ensemble":
        return _ensemble_from_payload(data)
    if kind == "adaboost":
        return BoostModel(
            stumps=[_tree_from_payload(s) for s in data["stumps"]],
            alphas=np.asarray(data["alphas"], dtype=np.float64),
            round_errors=np.asarray(data["round_errors"], dtype=np.float64),
            classes=np.asarray(data["classes"], dtype=np.int64),
            n_features=int(data["n_features"]),
        )
    if kind == "knn":
        return KnnModel(
            train_features=np.asarray(data["train_features"], dtype=np.float64),
            train_class_idx=np.asarray(data["train_class_idx"], dtype=np.int64),
            k=int(data["k"]),
            classes=np.asarray(data["classes"], dtype=np.int64),
            n_features=int(data["n_features"]),
        )
    if kind == "gaussian_nb":
        return GaussianNbModel(
            priors=np.asarray(data["priors"], dtype=np.float64),
            means=np.asarray(data["means"], dtype=np.float64),
            variances=np.asarray(data["variances"], dtype=np.float64),
            classes=np.asarray(data["classes"], dtype=np.int64),
            n_features=int(data["n_features"]),
        )
    if kind == "logistic":
        return LogisticModel(
            weights=np.asarray(data["weights"], dtype=np.float64),
            bias=np.asarray(data["bias"], dtype=np.float64),
            feature_mean=np.asarray(data["feature_mean"], dtype=np.float64),
            feature_scale=np.asarray(data["feature_scale"], dtype=np.float64),
            classes=np.asarray(data["classes"], dtype=np.int64),
            n_features=int(data["n_features"]),
            final_loss=float(data["final_loss"]),
        )
    if kind == "meet":
        plan = ExpertPlan(
            class_count=int(data["class_count"]),
            groups=tuple(tuple(int(c) for c in g) for g in data["groups"]),
        )
        return MeetModel(
            plan=plan,
            experts=[_ensemble_from_payload(e) for e in data["experts"]],
            gate=_ensemble_from_payload(data["gate"]),
            classes=np.asarray(data["classes"], dtype=np.int64),
            n_features=int(data["n_features"]),
        )
    raise DataError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    """Write the model as pretty-printed JSON with sorted keys."""
    text = json.dumps(model_to_dict(model), indent=1, sort_keys=True)
    Path(path).write_text(text + "\n")


def load_model(path):
    """Load any model saved by save_model."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"model file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {p} is not valid JSON: {exc}") from exc
    return model_from_dict(data)
