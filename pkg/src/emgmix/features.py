"""Handcrafted per-window features: 11 time-domain + 6 frequency-domain.

Normative definitions (n samples x_i, mean mu, eps = 1e-12):

    MAV   = sum(|x_i|) / n
    VAR   = sum((x_i - mu)^2) / (n - 1)
    DASDV = sqrt(sum((x_{i+1} - x_i)^2) / (n - 1))
    WL    = sum(|x_{i+1} - x_i|)
    iEMG  = sum(|x_i|)
    LOG   = exp(sum(log(|x_i| + eps)) / n)
    RMS   = sqrt(sum(x_i^2) / n)
    AAC   = WL / (n - 1)
    ZC    = count of sign changes (x_i * x_{i+1} < 0) with |x_{i+1} - x_i| > zc_threshold
    WAMP  = count of |x_{i+1} - x_i| > wamp_threshold
    MYOP  = count of |x_i| > myop_threshold, divided by n

Spectral features come from the one-sided periodogram of the mean-removed,
unwindowed segment. With X = rfft(x - mu), the power in bin k is
P_k = s_k * |X_k|^2 / n^2 where s_k = 2 except at DC and (for even n) the
Nyquist bin where s_k = 1. Under this normalization sum(P) equals the
time-domain mean power sum((x_i - mu)^2) / n, which pins down:

    TP  = sum(P)
    MNP = TP / bin_count
    PKF = frequency of the largest P_k
    MNF = sum(f_k * P_k) / TP
    MDF = smallest f_k whose cumulative power reaches TP / 2
    FR  = power in fr_low_band / power in fr_high_band
          (bands are half-open [low, high) so the defaults stay disjoint)

Feature vectors concatenate the 17 features per channel, channels in order.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, DataError

TIME_FEATURE_NAMES = ("mav", "var", "dasdv", "wl", "iemg", "log", "rms",
                      "aac", "zc", "wamp", "myop")
FREQ_FEATURE_NAMES = ("tp", "fr", "mdf", "pkf", "mnf", "mnp")
FEATURE_NAMES = TIME_FEATURE_NAMES + FREQ_FEATURE_NAMES

LOG_EPSILON = 1e-12


@dataclass
class FeatureSpec:
    """Thresholds (millivolts) and FR bands (Hz) for feature extraction.

    on_undefined_spectrum controls the degenerate case where the spectral
    ratio features have a zero denominator (all-zero window, or no power in
    the FR high band): "error" raises, "zero" substitutes 0.0.
    """

    zc_threshold: float = 0.0
    wamp_threshold: float = 0.05
    myop_threshold: float = 0.016
    fr_low_band_hz: Tuple[float, float] = (10.0, 100.0)
    fr_high_band_hz: Tuple[float, float] = (100.0, 500.0)
    on_undefined_spectrum: str = "error"

    def __post_init__(self):
        for name in ("zc_threshold", "wamp_threshold", "myop_threshold"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        lo, hi = tuple(self.fr_low_band_hz), tuple(self.fr_high_band_hz)
        if not (lo[0] < lo[1] <= hi[0] < hi[1]):
            raise ConfigError(
                f"FR bands must be ordered and disjoint, got {lo} and {hi}"
            )
        self.fr_low_band_hz = lo
        self.fr_high_band_hz = hi
        if self.on_undefined_spectrum not in ("error", "zero"):
            raise ConfigError(
                f"on_undefined_spectrum must be 'error' or 'zero', "
                f"got {self.on_undefined_spectrum!r}"
            )


@dataclass
class FeatureVector:
    """17 features per channel, channels concatenated, plus the window label."""

    values: np.ndarray
    label: Optional[int] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(self.values)):
            raise DataError("feature vector contains non-finite values")


def feature_column_names(n_channels: int) -> list:
    """Stable column order for feature matrices: mav_ch1 ... mnp_ch1, mav_ch2 ..."""
    return [f"{name}_ch{c + 1}" for c in range(n_channels) for name in FEATURE_NAMES]


def extract_time_features(window: np.ndarray, spec: FeatureSpec) -> np.ndarray:
    """Compute [MAV, VAR, DASDV, WL, iEMG, LOG, RMS, AAC, ZC, WAMP, MYOP].

    Args:
        window: 1-D samples in millivolts, length >= 2.
        spec: thresholds for ZC / WAMP / MYOP.
    """
    x = np.asarray(window, dtype=np.float64)
    n = x.size
    if x.ndim != 1 or n < 2:
        raise DataError(f"time features need a 1-D window of >= 2 samples, got shape {x.shape}")

    absx = np.abs(x)
    diffs = np.diff(x)
    mav = absx.sum() / n
    var = np.sum((x - x.mean()) ** 2) / (n - 1)
    dasdv = np.sqrt(np.sum(diffs ** 2) / (n - 1))
    wl = np.abs(diffs).sum()
    iemg = absx.sum()
    log_det = np.exp(np.sum(np.log(absx + LOG_EPSILON)) / n)
    rms = np.sqrt(np.sum(x ** 2) / n)
    aac = wl / (n - 1)
    zc = int(np.sum((x[:-1] * x[1:] < 0) & (np.abs(diffs) > spec.zc_threshold)))
    wamp = int(np.sum(np.abs(diffs) > spec.wamp_threshold))
    myop = np.sum(absx > spec.myop_threshold) / n
    return np.array([mav, var, dasdv, wl, iemg, log_det, rms, aac, zc, wamp, myop])


def power_spectrum(window: np.ndarray, sample_rate_hz: float) -> Tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram of the mean-removed, unwindowed segment.

    Returns (freqs_hz, power) normalized so that power.sum() equals the
    time-domain mean power of the mean-removed signal (see module docstring).
    """
    x = np.asarray(window, dtype=np.float64)
    n = x.size
    spectrum = np.fft.rfft(x - x.mean())
    power = np.abs(spectrum) ** 2 / n ** 2
    scale = np.full(power.shape, 2.0)
    scale[0] = 1.0
    if n % 2 == 0:
        scale[-1] = 1.0
    freqs = np.fft.rfftfreq(n, d=1.0 / sample_rate_hz)
    return freqs, scale * power


def _band_power(freqs: np.ndarray, power: np.ndarray, band: Tuple[float, float]) -> float:
    mask = (freqs >= band[0]) & (freqs < band[1])
    return float(power[mask].sum())


def extract_frequency_features(window: np.ndarray, sample_rate_hz: float,
                               spec: FeatureSpec) -> np.ndarray:
    """Compute [TP, FR, MDF, PKF, MNF, MNP] from the one-sided periodogram.

    Args:
        window: 1-D samples, length >= 8.
        sample_rate_hz: sampling rate of the window.
        spec: FR band edges and undefined-spectrum policy.

    Raises:
        DataError: window too short, or zero-power spectrum / zero FR
            denominator when spec.on_undefined_spectrum == "error".
    """
    x = np.asarray(window, dtype=np.float64)
    if x.ndim != 1 or x.size < 8:
        raise DataError(
            f"frequency features need a 1-D window of >= 8 samples, got shape {x.shape}"
        )
    freqs, power = power_spectrum(x, sample_rate_hz)
    tp = float(power.sum())
    mnp = tp / power.size
    if tp == 0.0:
        if spec.on_undefined_spectrum == "error":
            raise DataError("all-zero window: spectral ratio features are undefined")
        return np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0])

    pkf = float(freqs[int(np.argmax(power))])
    mnf = float(np.sum(freqs * power) / tp)
    mdf = float(freqs[int(np.searchsorted(np.cumsum(power), tp / 2.0))])
    high = _band_power(freqs, power, spec.fr_high_band_hz)
    if high == 0.0:
        if spec.on_undefined_spectrum == "error":
            raise DataError(
                f"no power in FR high band {spec.fr_high_band_hz}: FR is undefined"
            )
        fr = 0.0
    else:
        fr = _band_power(freqs, power, spec.fr_low_band_hz) / high
    return np.array([tp, fr, mdf, pkf, mnf, mnp])


def extract_channel_features(window: np.ndarray, sample_rate_hz: float,
                             spec: FeatureSpec) -> np.ndarray:
    """All 17 features of one channel, time-domain block first."""
    return np.concatenate([
        extract_time_features(window, spec),
        extract_frequency_features(window, sample_rate_hz, spec),
    ])


def extract_window_features(samples: np.ndarray, sample_rate_hz: float,
                            spec: FeatureSpec, label: Optional[int] = None) -> FeatureVector:
    """Feature vector for one multichannel window.

    Args:
        samples: (n_channels, window_samples) array.
        sample_rate_hz: sampling rate.
        spec: feature parameters.
        label: gesture label to attach, if any.

    Returns:
        FeatureVector of length 17 * n_channels (channels concatenated in order).
    """
    arr = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    values = np.concatenate([
        extract_channel_features(arr[c], sample_rate_hz, spec)
        for c in range(arr.shape[0])
    ])
    return FeatureVector(values, label)
