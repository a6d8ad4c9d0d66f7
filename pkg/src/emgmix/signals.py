"""Raw sEMG preprocessing: mains notch, bandpass filtering, window segmentation."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal as sps

from .errors import ConfigError, DataError


@dataclass
class Recording:
    """Multichannel sEMG recording in millivolts.

    channels is stored as a (n_channels, n_samples) float64 array; a list of
    equal-length per-channel sequences is accepted and stacked. labels, when
    present, holds one integer gesture id per sample.
    """

    channels: np.ndarray
    sample_rate_hz: float
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        try:
            arr = np.atleast_2d(np.asarray(self.channels, dtype=np.float64))
        except ValueError as exc:
            raise DataError(f"channels are ragged or non-numeric: {exc}") from None
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise DataError(f"channels must be 2-D with >= 1 sample, got shape {arr.shape}")
        self.channels = arr
        if self.sample_rate_hz <= 0:
            raise ConfigError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (arr.shape[1],):
                raise DataError(
                    f"labels length {lab.shape} does not match sample count {arr.shape[1]}"
                )
            self.labels = lab

    @property
    def n_channels(self) -> int:
        return self.channels.shape[0]

    @property
    def n_samples(self) -> int:
        return self.channels.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz


@dataclass
class FilterSpec:
    """Notch + bandpass parameters.

    Causal single-pass filtering by default; set zero_phase for
    forward-backward (zero-lag) filtering.
    """

    notch_hz: float = 50.0
    notch_q: float = 30.0
    band_low_hz: float = 10.0
    band_high_hz: float = 500.0
    band_order: int = 4
    zero_phase: bool = False

    def __post_init__(self):
        if self.notch_q <= 0:
            raise ConfigError(f"notch_q must be positive, got {self.notch_q}")
        if self.band_order < 1:
            raise ConfigError(f"band_order must be >= 1, got {self.band_order}")
        if not 0 < self.band_low_hz < self.band_high_hz:
            raise ConfigError(
                f"need 0 < band_low_hz < band_high_hz, got "
                f"[{self.band_low_hz}, {self.band_high_hz}]"
            )


@dataclass
class WindowSpec:
    """Analysis window length and overlap between successive windows."""

    length_ms: float = 256.0
    overlap_fraction: float = 0.25

    def __post_init__(self):
        if self.length_ms <= 0:
            raise ConfigError(f"length_ms must be positive, got {self.length_ms}")
        if not 0 <= self.overlap_fraction < 1:
            raise ConfigError(
                f"overlap_fraction must be in [0, 1), got {self.overlap_fraction}"
            )

    def window_samples(self, sample_rate_hz: float) -> int:
        n = int(round(self.length_ms / 1000.0 * sample_rate_hz))
        if n < 2:
            raise ConfigError(
                f"window of {self.length_ms} ms at {sample_rate_hz} Hz "
                f"spans {n} samples; need >= 2"
            )
        return n

    def stride_samples(self, sample_rate_hz: float) -> int:
        n = self.window_samples(sample_rate_hz)
        stride = int(round(n * (1.0 - self.overlap_fraction)))
        return max(stride, 1)


@dataclass
class Window:
    """One analysis segment: (n_channels, window_samples) plus its start index
    and the majority gesture label of its samples (None when unlabeled)."""

    samples: np.ndarray
    start: int
    label: Optional[int] = None


def apply_notch(rec: Recording, spec: FilterSpec) -> Recording:
    """Remove the mains component with a second-order IIR notch.

    Args:
        rec: input recording.
        spec: filter parameters; notch_hz must be below Nyquist.

    Returns:
        New Recording with identical shape, sample rate, and labels.
    """
    nyq = rec.sample_rate_hz / 2.0
    if spec.notch_hz >= nyq:
        raise ConfigError(
            f"notch_hz={spec.notch_hz} must be below Nyquist ({nyq} Hz)"
        )
    b, a = sps.iirnotch(spec.notch_hz, spec.notch_q, fs=rec.sample_rate_hz)
    if spec.zero_phase:
        filtered = sps.filtfilt(b, a, rec.channels, axis=1)
    else:
        filtered = sps.lfilter(b, a, rec.channels, axis=1)
    return Recording(filtered, rec.sample_rate_hz, rec.labels)


def apply_bandpass(rec: Recording, spec: FilterSpec) -> Recording:
    """Butterworth bandpass keeping the usable sEMG band.

    Args:
        rec: input recording.
        spec: filter parameters; band_high_hz must be below Nyquist.

    Returns:
        New Recording with identical shape, sample rate, and labels.
    """
    nyq = rec.sample_rate_hz / 2.0
    if spec.band_high_hz >= nyq:
        raise ConfigError(
            f"band_high_hz={spec.band_high_hz} must be below Nyquist ({nyq} Hz)"
        )
    sos = sps.butter(
        spec.band_order,
        [spec.band_low_hz, spec.band_high_hz],
        btype="bandpass",
        output="sos",
        fs=rec.sample_rate_hz,
    )
    if spec.zero_phase:
        filtered = sps.sosfiltfilt(sos, rec.channels, axis=1)
    else:
        filtered = sps.sosfilt(sos, rec.channels, axis=1)
    return Recording(filtered, rec.sample_rate_hz, rec.labels)


def window_count(n_samples: int, window_samples: int, stride_samples: int) -> int:
    """Number of full windows: floor((n - window)/stride) + 1."""
    if n_samples < window_samples:
        return 0
    return (n_samples - window_samples) // stride_samples + 1


def segment_windows(rec: Recording, spec: WindowSpec) -> list:
    """Cut the recording into overlapping windows starting at 0, stride, 2*stride, ...

    Every window lies fully inside the recording. Each window carries the
    majority gesture label of its samples; ties break toward the lowest
    class id.

    Raises:
        DataError: recording shorter than one window.
    """
    win = spec.window_samples(rec.sample_rate_hz)
    stride = spec.stride_samples(rec.sample_rate_hz)
    if rec.n_samples < win:
        raise DataError(
            f"recording has {rec.n_samples} samples, shorter than one "
            f"{win}-sample ({spec.length_ms} ms) window"
        )
    windows = []
    for start in range(0, rec.n_samples - win + 1, stride):
        label = None
        if rec.labels is not None:
            seg = rec.labels[start:start + win]
            if seg.min() < 0:
                raise DataError(f"negative gesture label at sample {start + int(seg.argmin())}")
            label = int(np.bincount(seg).argmax())
        windows.append(Window(rec.channels[:, start:start + win], start, label))
    return windows
