"""Pipeline configuration: flat TOML in, spec objects and trainers out.

The config file is a single flat table; every key below is optional and
falls back to the listed default. Unknown keys are rejected so typos fail
loudly instead of silently running defaults.

  seed = 42                 run seed; everything else derives from it
  out_dir = "runs"          where experiment artifacts land
  subjects = ["S1"]         synthetic subject names
  models = [...]            subset of: dt rf et bag adaboost knn nb lr meet
  train_fraction = 0.7      stratified split fraction
  workers = 1               threads for ensemble tree building

  sample_rate_hz = 2000.0
  notch_hz = 50.0           mains notch center
  notch_q = 30.0
  band_low_hz = 10.0        bandpass edges and order
  band_high_hz = 500.0
  band_order = 4
  zero_phase = false        forward-backward filtering when true

  window_ms = 256.0         analysis window length
  window_overlap = 0.25     fraction of overlap between windows

  zc_threshold = 0.0        zero-crossing amplitude threshold
  wamp_threshold = 0.05     Willison amplitude threshold
  myop_threshold = 0.016    myopulse threshold

  duration_s = 2.0          synthetic recording length per repetition
  repetitions = 16          recordings per gesture class
  channel_gains = [1.0, 0.65]
  noise_floor_mv = 0.02
  envelope_taper = 0.25

  tree_count = 100          trees per ensemble
  min_split = 2             smallest splittable node
  adaboost_rounds = 50
  knn_k = 5
  lr_rate = 0.1             logistic regression step size
  lr_epochs = 500
  lr_l2 = 0.0001
"""

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dataset import Dataset, SynthSpec, build_dataset, generate_synthetic
from .errors import ConfigError
from .features import FeatureSpec
from .meet import fit_meet
from .models.base import EnsembleConfig, derive_seed
from .models.bayes import fit_gaussian_nb
from .models.boosting import fit_adaboost
from .models.ensemble import fit_ensemble
from .models.linear import fit_logistic_regression
from .models.neighbors import fit_knn
from .models.tree import fit_tree
from .signals import FilterSpec, WindowSpec

MODEL_NAMES = ("dt", "rf", "et", "bag", "adaboost", "knn", "nb", "lr", "meet")


@dataclass
class PipelineConfig:
    """Every tunable of the pipeline, as plain values (see module docs)."""

    seed: int = 42
    out_dir: str = "runs"
    subjects: List[str] = field(default_factory=lambda: ["S1"])
    models: List[str] = field(default_factory=lambda: list(MODEL_NAMES))
    train_fraction: float = 0.7
    workers: int = 1

    sample_rate_hz: float = 2000.0
    notch_hz: float = 50.0
    notch_q: float = 30.0
    band_low_hz: float = 10.0
    band_high_hz: float = 500.0
    band_order: int = 4
    zero_phase: bool = False

    window_ms: float = 256.0
    window_overlap: float = 0.25

    zc_threshold: float = 0.0
    wamp_threshold: float = 0.05
    myop_threshold: float = 0.016

    duration_s: float = 2.0
    repetitions: int = 16
    channel_gains: Tuple[float, ...] = (1.0, 0.65)
    noise_floor_mv: float = 0.02
    envelope_taper: float = 0.25

    tree_count: int = 100
    min_split: int = 2
    adaboost_rounds: int = 50
    knn_k: int = 5
    lr_rate: float = 0.1
    lr_epochs: int = 500
    lr_l2: float = 1e-4

    def __post_init__(self):
        if not self.subjects:
            raise ConfigError("subjects must not be empty")
        if len(set(self.subjects)) != len(self.subjects):
            raise ConfigError("subject names must be unique")
        unknown = [m for m in self.models if m not in MODEL_NAMES]
        if unknown:
            raise ConfigError(
                f"unknown model name(s) {unknown}; choose from {list(MODEL_NAMES)}"
            )
        if not self.models:
            raise ConfigError("models must not be empty")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        # Spec objects validate the rest on construction.
        self.filter_spec()
        self.window_spec()
        self.feature_spec()

    def filter_spec(self) -> FilterSpec:
        return FilterSpec(
            notch_hz=self.notch_hz,
            notch_q=self.notch_q,
            band_low_hz=self.band_low_hz,
            band_high_hz=self.band_high_hz,
            band_order=self.band_order,
            zero_phase=self.zero_phase,
        )

    def window_spec(self) -> WindowSpec:
        return WindowSpec(length_ms=self.window_ms,
                          overlap_fraction=self.window_overlap)

    def feature_spec(self) -> FeatureSpec:
        return FeatureSpec(
            zc_threshold=self.zc_threshold,
            wamp_threshold=self.wamp_threshold,
            myop_threshold=self.myop_threshold,
        )

    def synth_spec(self, seed: int) -> SynthSpec:
        return SynthSpec(
            seed=seed,
            duration_s=self.duration_s,
            repetitions=self.repetitions,
            sample_rate_hz=self.sample_rate_hz,
            channel_gains=tuple(self.channel_gains),
            noise_floor_mv=self.noise_floor_mv,
            envelope_taper=self.envelope_taper,
        )

    def to_flat_dict(self) -> dict:
        """JSON-ready echo of every key, for run manifests."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a config from a flat mapping, rejecting unknown keys."""
    known = {f.name for f in fields(PipelineConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    kwargs = dict(data)
    if "channel_gains" in kwargs:
        kwargs["channel_gains"] = tuple(kwargs["channel_gains"])
    if "subjects" in kwargs:
        kwargs["subjects"] = list(kwargs["subjects"])
    if "models" in kwargs:
        kwargs["models"] = list(kwargs["models"])
    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config value: {exc}") from exc


def load_config(path) -> PipelineConfig:
    """Parse a flat TOML file into a PipelineConfig."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid TOML: {exc}") from exc
    return config_from_dict(data)


def subject_recordings(cfg: PipelineConfig, subject_index: int):
    """Synthetic recordings for one subject, seeded by (run seed, index).

    The derivation namespace (leading 0) is disjoint from the split and
    model-seed namespaces used by the experiment driver.
    """
    spec = cfg.synth_spec(derive_seed(cfg.seed, 0, subject_index))
    return generate_synthetic(spec)


def make_subject_datasets(cfg: PipelineConfig) -> Dict[str, Dataset]:
    """Feature datasets for every configured subject, in config order."""
    out: Dict[str, Dataset] = {}
    for i, name in enumerate(cfg.subjects):
        recordings = subject_recordings(cfg, i)
        out[name] = build_dataset(recordings, cfg.filter_spec(),
                                  cfg.window_spec(), cfg.feature_spec())
    return out


def build_trainers(cfg: PipelineConfig) -> Dict[str, Callable]:
    """Name -> (train_dataset, seed) -> fitted model, in cfg.models order."""

    def dt(ds: Dataset, seed: int):
        return fit_tree(ds.features, ds.labels,
                        EnsembleConfig.decision_tree(seed=seed,
                                                     min_split=cfg.min_split),
                        classes=np.arange(ds.class_count))

    def rf(ds: Dataset, seed: int):
        return fit_ensemble(ds.features, ds.labels,
                            EnsembleConfig.random_forest(cfg.tree_count,
                                                         seed=seed,
                                                         min_split=cfg.min_split),
                            classes=np.arange(ds.class_count),
                            workers=cfg.workers)

    def et(ds: Dataset, seed: int):
        return fit_ensemble(ds.features, ds.labels,
                            EnsembleConfig.extra_trees(cfg.tree_count,
                                                       seed=seed,
                                                       min_split=cfg.min_split),
                            classes=np.arange(ds.class_count),
                            workers=cfg.workers)

    def bag(ds: Dataset, seed: int):
        return fit_ensemble(ds.features, ds.labels,
                            EnsembleConfig.bagging(cfg.tree_count, seed=seed,
                                                   min_split=cfg.min_split),
                            classes=np.arange(ds.class_count),
                            workers=cfg.workers)

    def adaboost(ds: Dataset, seed: int):
        return fit_adaboost(ds.features, ds.labels,
                            rounds=cfg.adaboost_rounds,
                            classes=np.arange(ds.class_count),
                            min_split=cfg.min_split)

    def knn(ds: Dataset, seed: int):
        return fit_knn(ds.features, ds.labels, k=cfg.knn_k,
                       classes=np.arange(ds.class_count))

    def nb(ds: Dataset, seed: int):
        return fit_gaussian_nb(ds.features, ds.labels,
                               classes=np.arange(ds.class_count))

    def lr(ds: Dataset, seed: int):
        return fit_logistic_regression(ds.features, ds.labels,
                                       learning_rate=cfg.lr_rate,
                                       epochs=cfg.lr_epochs, l2=cfg.lr_l2,
                                       classes=np.arange(ds.class_count))

    def meet(ds: Dataset, seed: int):
        return fit_meet(ds, EnsembleConfig.extra_trees(cfg.tree_count,
                                                       seed=seed,
                                                       min_split=cfg.min_split),
                        workers=cfg.workers)

    registry = {"dt": dt, "rf": rf, "et": et, "bag": bag, "adaboost": adaboost,
                "knn": knn, "nb": nb, "lr": lr, "meet": meet}
    return {name: registry[name] for name in cfg.models}
