"""Core signal types, preprocessing, and recording-validity screening.

A skin-conductance recording is held as a :class:`UniformSeries`. The
preprocessing chain is causal low-pass filtering, integer-ratio decimation,
and trimming, after which :func:`screen_validity` decides whether the
recording is usable for model fitting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal as _sig

from .errors import InvalidParameterError

__all__ = [
    "UniformSeries",
    "EventSchedule",
    "ValidityReport",
    "ScreeningConfig",
    "butterworth_lowpass",
    "butterworth_coefficients",
    "decimate",
    "trim",
    "screen_validity",
    "detect_responses",
]


@dataclass(frozen=True)
class UniformSeries:
    """A uniformly sampled scalar signal (microsiemens for skin conductance).

    Immutable after construction; the sample buffer is marked read-only.

    Attributes:
        samples: sample values, finite, length >= 1.
        sample_interval: seconds between samples, > 0.
        start_time: time of the first sample, seconds into the recording.
    """

    samples: np.ndarray
    sample_interval: float
    start_time: float = 0.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidParameterError("samples must be a 1-D array of length >= 1")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("samples must be finite (no NaN/Inf)")
        if not (self.sample_interval > 0 and np.isfinite(self.sample_interval)):
            raise InvalidParameterError("sample_interval must be positive and finite")
        if not np.isfinite(self.start_time):
            raise InvalidParameterError("start_time must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_interval", float(self.sample_interval))
        object.__setattr__(self, "start_time", float(self.start_time))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def rate_hz(self) -> float:
        return 1.0 / self.sample_interval

    @property
    def duration(self) -> float:
        """Span from first to last sample, seconds."""
        return (len(self) - 1) * self.sample_interval

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    def times(self) -> np.ndarray:
        return self.start_time + self.sample_interval * np.arange(len(self))

    def with_samples(self, samples: np.ndarray) -> "UniformSeries":
        """Same timing metadata, new sample values."""
        return UniformSeries(samples, self.sample_interval, self.start_time)


@dataclass(frozen=True)
class EventSchedule:
    """Stimulus onsets with per-onset condition labels."""

    onsets: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        onsets = tuple(float(t) for t in self.onsets)
        labels = tuple(str(s) for s in self.labels)
        if len(onsets) != len(labels):
            raise InvalidParameterError("onsets and labels must have equal length")
        if any(b <= a for a, b in zip(onsets, onsets[1:])):
            raise InvalidParameterError("onsets must be strictly increasing")
        object.__setattr__(self, "onsets", onsets)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.onsets)


@dataclass(frozen=True)
class ScreeningConfig:
    """Thresholds for recording-validity screening.

    The defaults quantify the qualitative exclusion criteria (flat stretches
    at the floor of the recording, step-like electrode dropouts, absence of
    any detectable response).
    """

    flat_min_duration: float = 10.0    # s
    flat_epsilon: float = 1e-4         # µS
    drop_threshold: float = 0.5        # µS within one sample step
    min_scr_amplitude: float = 0.01    # µS


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of screening one recording.

    ``usable`` is true iff there are no flat segments, no drop artifacts,
    and at least one detected response.
    """

    flat_segments: tuple[tuple[float, float], ...]
    drop_artifacts: tuple[tuple[float, float], ...]
    has_scr: bool
    usable: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "usable",
            not self.flat_segments and not self.drop_artifacts and self.has_scr,
        )


def butterworth_coefficients(cutoff_hz: float, order: int,
                             rate_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """Digital Butterworth low-pass coefficients (bilinear transform).

    Returns (b, a) with unit DC gain and -3.01 dB magnitude at ``cutoff_hz``.
    """
    if not 1 <= order <= 4:
        raise InvalidParameterError(f"filter order must be in 1..4, got {order}")
    nyquist = 0.5 * rate_hz
    if not 0 < cutoff_hz < nyquist:
        raise InvalidParameterError(
            f"cutoff {cutoff_hz} Hz must lie strictly below the Nyquist "
            f"frequency {nyquist} Hz")
    b, a = _sig.butter(order, cutoff_hz, btype="low", fs=rate_hz)
    return b, a


def butterworth_lowpass(series: UniformSeries, cutoff_hz: float,
                        order: int = 2) -> UniformSeries:
    """Causal Butterworth low-pass filter.

    The filter runs forward only, with its internal state initialized to the
    steady state for the first sample value so a recording that starts at a
    nonzero tonic level does not produce a startup transient.
    """
    b, a = butterworth_coefficients(cutoff_hz, order, series.rate_hz)
    zi = _sig.lfilter_zi(b, a) * series.samples[0]
    filtered, _ = _sig.lfilter(b, a, series.samples, zi=zi)
    return series.with_samples(filtered)


def decimate(series: UniformSeries, target_rate_hz: float) -> UniformSeries:
    """Keep every k-th sample, where k is the exact integer rate ratio.

    The series must already be low-pass filtered below the target Nyquist;
    no anti-alias filtering happens here. Non-integer ratios are an error
    (interpolating resamplers are out of scope).
    """
    if target_rate_hz <= 0:
        raise InvalidParameterError("target rate must be positive")
    ratio = series.rate_hz / target_rate_hz
    k = int(round(ratio))
    if k < 1 or abs(ratio - k) > 1e-9 * ratio:
        raise InvalidParameterError(
            f"rate ratio {series.rate_hz}/{target_rate_hz} = {ratio:g} "
            "is not an integer")
    if k == 1:
        return series
    return UniformSeries(series.samples[::k], series.sample_interval * k,
                         series.start_time)


def trim(series: UniformSeries, t0: float, t1: float) -> UniformSeries:
    """Sub-series covering [t0, t1]; start_time moves to the first kept sample."""
    if t0 >= t1:
        raise InvalidParameterError(f"require t0 < t1, got [{t0}, {t1}]")
    dt = series.sample_interval
    tol = 1e-9 * max(1.0, abs(t0), abs(t1))
    if t0 < series.start_time - tol or t1 > series.end_time + tol:
        raise InvalidParameterError(
            f"[{t0}, {t1}] exceeds recording span "
            f"[{series.start_time}, {series.end_time}]")
    i0 = int(np.ceil((t0 - series.start_time) / dt - 1e-9))
    i1 = int(np.floor((t1 - series.start_time) / dt + 1e-9))
    i0 = max(i0, 0)
    i1 = min(i1, len(series) - 1)
    return UniformSeries(series.samples[i0:i1 + 1], dt,
                         series.start_time + i0 * dt)


def detect_responses(samples: np.ndarray,
                     min_amplitude: float) -> list[tuple[int, int, float]]:
    """Valley/peak pairs with rise >= ``min_amplitude`` (trough-to-peak).

    Local extrema come from sign changes of the first difference; on a
    plateau the extremum is placed at the plateau's first sample. Each
    valley pairs with the next peak; unpaired trailing valleys are dropped.

    Returns a list of (valley_index, peak_index, amplitude).
    """
    x = np.asarray(samples, dtype=float)
    d = np.diff(x)
    signs = np.sign(d)
    nz = np.nonzero(signs)[0]
    if nz.size == 0:
        return []

    # walk the compressed sign sequence; a -+ transition is a valley, +- a peak
    extrema: list[tuple[str, int]] = []
    for prev, cur in zip(nz[:-1], nz[1:]):
        if signs[prev] < 0 and signs[cur] > 0:
            extrema.append(("valley", prev + 1))
        elif signs[prev] > 0 and signs[cur] < 0:
            extrema.append(("peak", prev + 1))

    pairs: list[tuple[int, int, float]] = []
    pending_valley: int | None = None
    for kind, idx in extrema:
        if kind == "valley":
            pending_valley = idx
        elif pending_valley is not None:
            rise = x[idx] - x[pending_valley]
            if rise >= min_amplitude:
                pairs.append((pending_valley, idx, float(rise)))
            pending_valley = None
    return pairs


def screen_validity(series: UniformSeries,
                    config: ScreeningConfig = ScreeningConfig()) -> ValidityReport:
    """Flag flat-at-minimum segments, step-like drops, and missing responses.

    A flat segment is a run of at least ``flat_min_duration`` seconds whose
    per-sample change stays below ``flat_epsilon`` while the value sits
    within ``flat_epsilon`` of the series minimum. A drop artifact is a
    single-step decrease of at least ``drop_threshold``.
    """
    x = series.samples
    dt = series.sample_interval
    t0 = series.start_time

    floor = x.min()
    near_min = np.abs(x - floor) <= config.flat_epsilon
    small_step = np.empty(len(x), dtype=bool)
    small_step[0] = True
    small_step[1:] = np.abs(np.diff(x)) < config.flat_epsilon
    flat_mask = near_min & small_step

    min_run = max(1, int(round(config.flat_min_duration / dt)))
    flat_segments = []
    run_start = None
    for i, flag in enumerate(np.append(flat_mask, False)):
        if flag and run_start is None:
            run_start = i
        elif not flag and run_start is not None:
            if i - run_start >= min_run:
                flat_segments.append((t0 + run_start * dt, t0 + (i - 1) * dt))
            run_start = None

    drops = np.nonzero(np.diff(x) <= -config.drop_threshold)[0]
    drop_artifacts = [(t0 + i * dt, t0 + (i + 1) * dt) for i in drops]

    has_scr = bool(detect_responses(x, config.min_scr_amplitude))
    return ValidityReport(tuple(flat_segments), tuple(drop_artifacts), has_scr)
