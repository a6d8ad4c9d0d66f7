"""Recording ingestion, feature-matrix construction, splitting, and synthesis.

File formats (documented contracts):

Recording CSV
    line 1: ``# sample_rate_hz=<real>``
    line 2: ``ch1,ch2[,label]`` header
    data  : one row per sample, channel values in millivolts, optional
            gesture label as a name (e.g. ``TE``) or integer id.

Feature-matrix CSV
    header: 17 x n_channels feature columns (see features.feature_column_names)
            followed by ``label``; values use shortest round-trip float
            formatting so a written matrix reloads value-identical.
"""

import csv
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import signal as sps

from .errors import ConfigError, DataError
from .features import FeatureSpec, feature_column_names, extract_window_features
from .signals import FilterSpec, Recording, WindowSpec, apply_bandpass, apply_notch, segment_windows


@dataclass(frozen=True)
class GestureLabel:
    """Contiguous integer id plus short display name."""

    id: int
    name: str


DEFAULT_GESTURES = (
    GestureLabel(0, "TE"),     # thumb extension
    GestureLabel(1, "ME"),     # middle extension
    GestureLabel(2, "FME"),    # fore-middle extension
    GestureLabel(3, "FMTE"),   # fore-middle-thumb extension
    GestureLabel(4, "FMRE"),   # fore-middle-ring extension
    GestureLabel(5, "HC"),     # hand close
)


@dataclass
class Dataset:
    """Labeled feature matrix: one row per analysis window."""

    features: np.ndarray
    labels: np.ndarray
    class_count: int
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[0] != self.labels.shape[0]:
            raise DataError(
                f"feature matrix {self.features.shape} does not match "
                f"{self.labels.shape[0]} labels"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.class_count):
            raise DataError(
                f"labels must lie in [0, {self.class_count}), "
                f"got range [{self.labels.min()}, {self.labels.max()}]"
            )

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)


def _label_maps(gestures: Sequence[GestureLabel]):
    by_name = {g.name: g.id for g in gestures}
    by_id = {g.id: g.name for g in gestures}
    return by_name, by_id


def load_recording_csv(path, gestures: Sequence[GestureLabel] = DEFAULT_GESTURES,
                       sample_rate_hz: Optional[float] = None) -> Recording:
    """Read a recording CSV (format in module docstring).

    The sample rate comes from the ``# sample_rate_hz=`` header comment, or
    from the sample_rate_hz argument when the comment is absent.

    Raises:
        DataError: ragged rows, non-numeric cells, or unknown labels,
            reported with their 1-based file line number.
    """
    by_name, _ = _label_maps(gestures)
    with open(path, "r", newline="") as fh:
        lines = fh.read().splitlines()

    line_no = 0
    fs = sample_rate_hz
    for raw in lines:
        line_no += 1
        if raw.startswith("#"):
            body = raw.lstrip("#").strip()
            if body.startswith("sample_rate_hz="):
                try:
                    fs = float(body.split("=", 1)[1])
                except ValueError:
                    raise DataError(f"{path}: line {line_no}: bad sample rate {body!r}") from None
            continue
        if raw.strip():
            break
    if fs is None:
        raise DataError(f"{path}: no '# sample_rate_hz=' header and no explicit sample rate")

    header = [h.strip() for h in raw.split(",")]
    has_label = header and header[-1] == "label"
    channel_cols = header[:-1] if has_label else header
    expected = [f"ch{i + 1}" for i in range(len(channel_cols))]
    if not channel_cols or channel_cols != expected:
        raise DataError(
            f"{path}: line {line_no}: header must be ch1..chN[,label], got {header}"
        )

    columns = [[] for _ in channel_cols]
    labels = [] if has_label else None
    reader = csv.reader(lines[line_no:])
    for offset, row in enumerate(reader):
        data_line = line_no + 1 + offset
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise DataError(
                f"{path}: line {data_line}: expected {len(header)} cells, got {len(row)}"
            )
        for c, cell in enumerate(row[:len(channel_cols)]):
            try:
                columns[c].append(float(cell))
            except ValueError:
                raise DataError(
                    f"{path}: line {data_line}: non-numeric cell {cell!r} in column {header[c]}"
                ) from None
        if has_label:
            cell = row[-1].strip()
            if cell in by_name:
                labels.append(by_name[cell])
            else:
                try:
                    labels.append(int(cell))
                except ValueError:
                    raise DataError(
                        f"{path}: line {data_line}: unknown label {cell!r}"
                    ) from None
    if not columns[0]:
        raise DataError(f"{path}: no sample rows")
    return Recording(np.array(columns), fs, np.array(labels) if has_label else None)


def save_recording_csv(path, rec: Recording,
                       gestures: Sequence[GestureLabel] = DEFAULT_GESTURES) -> None:
    """Write a recording CSV; labels are stored as gesture names when known."""
    _, by_id = _label_maps(gestures)
    with open(path, "w", newline="") as fh:
        fh.write(f"# sample_rate_hz={rec.sample_rate_hz!r}\n")
        cols = [f"ch{i + 1}" for i in range(rec.n_channels)]
        if rec.labels is not None:
            cols.append("label")
        fh.write(",".join(cols) + "\n")
        for i in range(rec.n_samples):
            cells = [repr(float(v)) for v in rec.channels[:, i]]
            if rec.labels is not None:
                lab = int(rec.labels[i])
                cells.append(by_id.get(lab, str(lab)))
            fh.write(",".join(cells) + "\n")


def build_dataset(recordings: Sequence[Recording], filter_spec: FilterSpec,
                  window_spec: WindowSpec, feature_spec: FeatureSpec,
                  class_count: Optional[int] = None) -> Dataset:
    """Filter each recording, segment it, and extract one feature row per window.

    All recordings must share sample rate and channel count, and must be
    labeled (training data without labels is rejected).
    """
    if not recordings:
        raise DataError("no recordings given")
    fs = recordings[0].sample_rate_hz
    n_ch = recordings[0].n_channels
    rows, labels = [], []
    for i, rec in enumerate(recordings):
        if rec.sample_rate_hz != fs or rec.n_channels != n_ch:
            raise DataError(
                f"recording {i} has rate {rec.sample_rate_hz} Hz / {rec.n_channels} channels; "
                f"expected {fs} Hz / {n_ch}"
            )
        if rec.labels is None:
            raise DataError(f"recording {i} is unlabeled: training data must be labeled")
        filtered = apply_bandpass(apply_notch(rec, filter_spec), filter_spec)
        for win in segment_windows(filtered, window_spec):
            fv = extract_window_features(win.samples, fs, feature_spec, win.label)
            rows.append(fv.values)
            labels.append(fv.label)
    labels = np.array(labels)
    if class_count is None:
        class_count = int(labels.max()) + 1
    return Dataset(np.vstack(rows), labels, class_count, feature_column_names(n_ch))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(ds: Dataset, train_fraction: float = 0.7,
                     seed: int = 0) -> Tuple[Dataset, Dataset]:
    """Per-class split into train and test partitions.

    Each class contributes round-half-up(train_fraction * rows) training rows
    (clamped so both partitions keep at least one row per class); the last
    class is then adjusted so the overall train size matches
    round-half-up(train_fraction * total). Deterministic for a fixed seed.

    Raises:
        ConfigError: train_fraction outside (0, 1).
        DataError: any class with fewer than 2 rows.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(
            f"train_fraction must be in (0, 1) so neither partition is empty, "
            f"got {train_fraction}"
        )
    counts = ds.class_counts()
    for c, cnt in enumerate(counts):
        if cnt < 2:
            raise DataError(f"class {c} has {cnt} rows; stratified split needs >= 2")

    n_train = [min(max(_round_half_up(train_fraction * c), 1), c - 1) for c in counts]
    target = _round_half_up(train_fraction * ds.n_rows)
    n_train[-1] = min(max(n_train[-1] + (target - sum(n_train)), 1), counts[-1] - 1)

    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for c in range(ds.class_count):
        perm = rng.permutation(np.flatnonzero(ds.labels == c))
        train_idx.append(perm[:n_train[c]])
        test_idx.append(perm[n_train[c]:])
    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.sort(np.concatenate(test_idx))

    def take(idx):
        return Dataset(ds.features[idx], ds.labels[idx], ds.class_count, ds.feature_names)

    return take(train_idx), take(test_idx)


def save_feature_csv(path, ds: Dataset) -> None:
    """Write the feature matrix with shortest round-trip float formatting."""
    names = ds.feature_names or [f"f{i}" for i in range(ds.features.shape[1])]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(list(names) + ["label"]) + "\n")
        for row, lab in zip(ds.features, ds.labels):
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(lab)}\n")


def load_feature_csv(path, class_count: Optional[int] = None) -> Dataset:
    """Read a feature-matrix CSV written by save_feature_csv."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if not header or header[-1] != "label":
            raise DataError(f"{path}: last column must be 'label', got {header[-1:]}")
        rows, labels = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}: line {line_no}: expected {len(header)} cells, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row[:-1]])
                labels.append(int(row[-1]))
            except ValueError as exc:
                raise DataError(f"{path}: line {line_no}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    labels = np.array(labels)
    if class_count is None:
        class_count = int(labels.max()) + 1
    return Dataset(np.array(rows), labels, class_count, header[:-1])


@dataclass
class SynthClass:
    """Spectral recipe for one synthetic gesture: band-limited noise centred
    at centroid_hz, bandwidth_hz wide, scaled to amplitude_mv RMS."""

    name: str
    centroid_hz: float
    bandwidth_hz: float
    amplitude_mv: float


def default_synth_classes() -> List[SynthClass]:
    """Six desk-scale gestures with distinct spectral centroids inside the
    10-500 Hz passband and non-monotone amplitudes."""
    return [
        SynthClass("TE", 80.0, 60.0, 1.0),
        SynthClass("ME", 150.0, 60.0, 0.6),
        SynthClass("FME", 220.0, 60.0, 1.2),
        SynthClass("FMTE", 290.0, 60.0, 0.8),
        SynthClass("FMRE", 360.0, 60.0, 1.4),
        SynthClass("HC", 430.0, 60.0, 1.0),
    ]


@dataclass
class SynthSpec:
    """Reproducible synthetic-recording generator parameters.

    Each (class, repetition) pair yields one labeled Recording of
    duration_s seconds: per channel, unit-RMS band-limited Gaussian noise is
    scaled by the class amplitude and channel gain, shaped by a tapered
    (Tukey) contraction envelope, and summed with a white noise floor.
    """

    seed: int = 42
    classes: List[SynthClass] = field(default_factory=default_synth_classes)
    duration_s: float = 2.0
    repetitions: int = 16
    sample_rate_hz: float = 2000.0
    channel_gains: Tuple[float, ...] = (1.0, 0.65)
    noise_floor_mv: float = 0.02
    envelope_taper: float = 0.25

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise ConfigError("duration_s and sample_rate_hz must be positive")
        if not self.channel_gains:
            raise ConfigError("need at least one channel gain")
        if not 0 <= self.envelope_taper <= 1:
            raise ConfigError(f"envelope_taper must be in [0, 1], got {self.envelope_taper}")
        nyq = self.sample_rate_hz / 2.0
        for cls in self.classes:
            if cls.bandwidth_hz <= 0:
                raise ConfigError(f"class {cls.name}: bandwidth must be positive")
            lo = cls.centroid_hz - cls.bandwidth_hz / 2.0
            hi = cls.centroid_hz + cls.bandwidth_hz / 2.0
            if lo <= 0 or hi >= nyq:
                raise ConfigError(
                    f"class {cls.name}: band [{lo}, {hi}] Hz must lie inside (0, {nyq}) Hz"
                )


def generate_synthetic(spec: SynthSpec) -> List[Recording]:
    """Generate one Recording per (class, repetition), class-major order.

    Byte-identical for a fixed seed: every (class, repetition) pair draws
    from its own generator seeded by (seed, class_id, repetition).
    """
    n = int(round(spec.duration_s * spec.sample_rate_hz))
    envelope_shape = sps.windows.tukey(n, alpha=spec.envelope_taper)
    out = []
    for class_id, cls in enumerate(spec.classes):
        lo = cls.centroid_hz - cls.bandwidth_hz / 2.0
        hi = cls.centroid_hz + cls.bandwidth_hz / 2.0
        sos = sps.butter(4, [lo, hi], btype="bandpass", output="sos",
                         fs=spec.sample_rate_hz)
        for rep in range(spec.repetitions):
            rng = np.random.default_rng([spec.seed, class_id, rep])
            channels = np.empty((len(spec.channel_gains), n))
            for c, gain in enumerate(spec.channel_gains):
                burst = sps.sosfiltfilt(sos, rng.standard_normal(n))
                rms = np.sqrt(np.mean(burst ** 2))
                if rms > 0:
                    burst = burst / rms
                channels[c] = (
                    gain * cls.amplitude_mv * envelope_shape * burst
                    + spec.noise_floor_mv * rng.standard_normal(n)
                )
            out.append(Recording(channels, spec.sample_rate_hz,
                                 np.full(n, class_id, dtype=np.int64)))
    return out
