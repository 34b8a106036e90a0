"""Collapse frame series into utterance-level features via a statistics bank,
and assemble the two named acoustic feature sets.

Feature counts and orders of gemaps_core (30) and spectral_set (30) are
frozen; tests pin the exact name lists. Their name sets are disjoint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .acoustic import (
    AcousticConfig,
    FrameSeries,
    Spectrum,
    analysis_frames,
    f0_track,
    frame_scalars,
    hnr_series,
    jitter_shimmer_hnr,
    mfcc,
    pick_cycle_peaks,
    poly_features,
    spectra,
    spectral_contrast,
    spectral_flux_onset,
    spectral_shape,
    tempogram_tempo,
)
from .audio_io import AudioBuffer

_KNOWN_STATS = {"mean", "stddev", "min", "max", "median", "range", "slope", "delta_mean_abs"}
_PERCENTILE_RE = re.compile(r"^p(\d+(?:\.\d+)?)$")


@dataclass(frozen=True)
class FunctionalBank:
    """Ordered statistics to apply per series.

    Allowed: mean, stddev (population), min, max, median, range, slope,
    delta_mean_abs, and percentiles written "p<value>" with value in (0,100).
    """

    stats: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.stats:
            raise ValueError("FunctionalBank needs at least one statistic")
        for s in self.stats:
            if s in _KNOWN_STATS:
                continue
            m = _PERCENTILE_RE.match(s)
            if m and 0.0 < float(m.group(1)) < 100.0:
                continue
            raise ValueError(f"unknown statistic {s!r}")


DEFAULT_BANK = FunctionalBank(("mean", "stddev", "min", "max", "p10"))


@dataclass(frozen=True)
class FeatureVector:
    """Named utterance-level feature values; NaN propagates, never dropped."""

    names: tuple[str, ...]
    values: np.ndarray
    source_id: str = ""

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != values.size:
            raise ValueError(f"{len(self.names)} names for {values.size} values")
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, (float(v) for v in self.values)))

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


def concat_vectors(parts: list[FeatureVector], source_id: str = "") -> FeatureVector:
    names: list[str] = []
    values: list[float] = []
    for part in parts:
        names.extend(part.names)
        values.extend(part.values)
    return FeatureVector(tuple(names), np.asarray(values), source_id)


def _stat(values: np.ndarray, indices: np.ndarray, stat: str) -> float:
    """One statistic over the non-NaN values (indices = original positions)."""
    if values.size == 0:
        return np.nan
    if stat == "mean":
        return float(values.mean())
    if stat == "stddev":
        return float(values.std())
    if stat == "min":
        return float(values.min())
    if stat == "max":
        return float(values.max())
    if stat == "median":
        return float(np.median(values))
    if stat == "range":
        return float(values.max() - values.min())
    if stat == "slope":
        if values.size < 2 or np.ptp(indices) == 0:
            return np.nan
        x = indices.astype(np.float64)
        xc = x - x.mean()
        return float((xc @ (values - values.mean())) / (xc @ xc))
    if stat == "delta_mean_abs":
        adjacent = np.diff(indices) == 1
        if not np.any(adjacent):
            return np.nan
        deltas = np.diff(values)[adjacent]
        return float(np.mean(np.abs(deltas)))
    pct = float(_PERCENTILE_RE.match(stat).group(1))
    return float(np.percentile(values, pct))


def apply_bank(series: FrameSeries, bank: FunctionalBank = DEFAULT_BANK) -> FeatureVector:
    """One feature per (series, stat) pair, named "<series>_<stat>".

    NaN frames are excluded; slope regresses against the original frame
    index, and delta_mean_abs only spans adjacent frames that are both
    defined. An all-NaN series maps to all-NaN features.
    """
    keep = ~np.isnan(series.values)
    values = series.values[keep]
    indices = np.flatnonzero(keep)
    names = tuple(f"{series.name}_{s}" for s in bank.stats)
    vals = np.array([_stat(values, indices, s) for s in bank.stats])
    return FeatureVector(names, vals)


# ---------------------------------------------------------------------------
# named feature sets
# ---------------------------------------------------------------------------

_MEAN_STD = FunctionalBank(("mean", "stddev"))

GEMAPS_SERIES = (
    "f0_semitone", "loudness", "jitter", "shimmer", "hnr",
    "slope_0_500", "slope_500_1500", "alpha_ratio", "hammarberg",
    "mfcc1", "mfcc2", "mfcc3", "mfcc4",
)
GEMAPS_SCALARS = ("voiced_fraction", "jitter_local", "shimmer_local", "hnr_db")
GEMAPS_FEATURE_NAMES = tuple(
    f"{series}_{stat}" for series in GEMAPS_SERIES for stat in ("mean", "stddev")
) + GEMAPS_SCALARS  # 13*2 + 4 = 30

SPECTRAL_FEATURE_NAMES = (
    "centroid_mean", "centroid_stddev",
    "bandwidth_mean", "bandwidth_stddev",
    "flatness_mean", "flatness_stddev",
    "rolloff_mean", "rolloff_stddev",
    "contrast_b0_mean", "contrast_b0_stddev",
    "contrast_b1_mean", "contrast_b1_stddev",
    "contrast_b2_mean", "contrast_b2_stddev",
    "contrast_b3_mean", "contrast_b3_stddev",
    "flux_mean", "flux_stddev",
    "rms_mean", "rms_stddev", "rms_min", "rms_max", "rms_median",
    "zcr_mean", "zcr_stddev",
    "poly_slope_mean", "poly_slope_stddev",
    "poly_intercept_mean", "poly_intercept_stddev",
    "tempo_bpm",
)  # 30


def _band_slope(spec: Spectrum, lo: float, hi: float) -> float:
    freqs = spec.frequencies
    sel = (freqs >= lo) & (freqs <= hi)
    if sel.sum() < 2:
        return np.nan
    sub = Spectrum(spec.magnitudes[sel], spec.bin_hz)
    # shift of the frequency origin changes only the intercept, not the slope
    return float(np.polyfit(freqs[sel], spec.magnitudes[sel], 1)[0])


def _alpha_ratio(spec: Spectrum) -> float:
    freqs = spec.frequencies
    power = spec.magnitudes ** 2
    low = float(power[(freqs >= 50.0) & (freqs <= 1000.0)].sum())
    high = float(power[(freqs > 1000.0) & (freqs <= 5000.0)].sum())
    if low <= 0 or high <= 0:
        return np.nan
    return 10.0 * np.log10(low / high)


def _hammarberg(spec: Spectrum) -> float:
    freqs = spec.frequencies
    low = spec.magnitudes[(freqs >= 0.0) & (freqs <= 2000.0)]
    high = spec.magnitudes[(freqs > 2000.0) & (freqs <= 5000.0)]
    if low.size == 0 or high.size == 0 or low.max() <= 0 or high.max() <= 0:
        return np.nan
    return 20.0 * np.log10(float(low.max()) / float(high.max()))


def gemaps_core(buf: AudioBuffer, config: AcousticConfig | None = None) -> FeatureVector:
    """The 30-feature voice-quality set (a core subset of the eGeMAPS idea).

    Thirteen series with {mean, stddev} each: F0 in semitones relative to
    27.5 Hz (voiced frames), loudness (frame RMS), per-cycle jitter and
    shimmer, HNR, two band-restricted spectral slopes, alpha ratio,
    Hammarberg index, MFCC 1-4; plus scalars voiced_fraction, jitter_local,
    shimmer_local, hnr_db.
    """
    config = config or AcousticConfig()
    f0 = f0_track(buf, config.f_min_hz, config.f_max_hz, config.hop_seconds,
                  config.yin_threshold)
    hop_s = config.hop_seconds

    voiced_mask = ~np.isnan(f0.values)
    semitones = np.where(voiced_mask, 12.0 * np.log2(np.where(voiced_mask, f0.values, 1.0) / 27.5),
                         np.nan)
    series = [FrameSeries("f0_semitone", semitones, hop_s)]

    frames = analysis_frames(buf, config)
    scalars = frame_scalars(frames)
    series.append(FrameSeries("loudness", scalars["rms"].values, hop_s))

    times, amps = pick_cycle_peaks(buf.samples, buf.sample_rate_hz, f0)
    if times.size >= 3:
        periods = np.diff(times)
        jit = np.abs(np.diff(periods)) / np.mean(periods)
        shim = np.abs(np.diff(amps)) / abs(np.mean(amps)) if np.mean(amps) != 0 else \
            np.full(amps.size - 1, np.nan)
    else:
        jit = np.empty(0)
        shim = np.empty(0)
    series.append(FrameSeries("jitter", jit, hop_s))
    series.append(FrameSeries("shimmer", shim, hop_s))
    series.append(hnr_series(buf, f0))

    specs = spectra(frames, config.n_fft)
    series.append(FrameSeries("slope_0_500", [_band_slope(s, 0.0, 500.0) for s in specs], hop_s))
    series.append(FrameSeries("slope_500_1500",
                              [_band_slope(s, 500.0, 1500.0) for s in specs], hop_s))
    series.append(FrameSeries("alpha_ratio", [_alpha_ratio(s) for s in specs], hop_s))
    series.append(FrameSeries("hammarberg", [_hammarberg(s) for s in specs], hop_s))
    coeffs = np.stack([mfcc(s, config.n_mels, 5) for s in specs])
    for k in range(1, 5):
        series.append(FrameSeries(f"mfcc{k}", coeffs[:, k], hop_s))

    parts = [apply_bank(s, _MEAN_STD) for s in series]

    report = jitter_shimmer_hnr(buf, f0)
    voiced_fraction = float(voiced_mask.mean()) if f0.values.size else np.nan
    parts.append(FeatureVector(
        GEMAPS_SCALARS,
        np.array([voiced_fraction, report.jitter_local, report.shimmer_local, report.hnr_db]),
    ))
    out = concat_vectors(parts, buf.source_id)
    assert out.names == GEMAPS_FEATURE_NAMES
    return out


def spectral_set(buf: AudioBuffer, config: AcousticConfig | None = None) -> FeatureVector:
    """The 30-feature spectrogram set: shape, contrast, flux, energy,
    polynomial fit, and tempo."""
    config = config or AcousticConfig()
    frames = analysis_frames(buf, config)
    specs = spectra(frames, config.n_fft)
    hop_s = config.hop_seconds

    shapes = [spectral_shape(s) for s in specs]
    contrasts = np.stack([
        spectral_contrast(s, config.contrast_bands, config.contrast_fmin_hz,
                          config.contrast_quantile)
        for s in specs
    ])
    scalars = frame_scalars(frames)
    flux = spectral_flux_onset(specs, hop_s) if len(specs) >= 2 else \
        FrameSeries("flux", np.zeros(len(specs)), hop_s)
    polys = np.stack([poly_features(s, 1) for s in specs])
    tempo, _ = tempogram_tempo(flux, config.tempo_window)

    parts = [
        apply_bank(FrameSeries("centroid", [sh["centroid_hz"] for sh in shapes], hop_s), _MEAN_STD),
        apply_bank(FrameSeries("bandwidth", [sh["bandwidth_hz"] for sh in shapes], hop_s),
                   _MEAN_STD),
        apply_bank(FrameSeries("flatness", [sh["flatness"] for sh in shapes], hop_s), _MEAN_STD),
        apply_bank(FrameSeries("rolloff", [sh["rolloff_hz"] for sh in shapes], hop_s), _MEAN_STD),
    ]
    for b in range(config.contrast_bands):
        parts.append(apply_bank(FrameSeries(f"contrast_b{b}", contrasts[:, b], hop_s), _MEAN_STD))
    parts.append(apply_bank(flux, _MEAN_STD))
    parts.append(apply_bank(scalars["rms"],
                            FunctionalBank(("mean", "stddev", "min", "max", "median"))))
    parts.append(apply_bank(scalars["zcr"], _MEAN_STD))
    parts.append(apply_bank(FrameSeries("poly_slope", polys[:, 0], hop_s), _MEAN_STD))
    parts.append(apply_bank(FrameSeries("poly_intercept", polys[:, 1], hop_s), _MEAN_STD))
    parts.append(FeatureVector(("tempo_bpm",), np.array([tempo])))

    out = concat_vectors(parts, buf.source_id)
    if config.contrast_bands == 4:
        assert out.names == SPECTRAL_FEATURE_NAMES
    return out


# static mirror of the series lld_series() produces at default settings; a
# single-frame signal has no flux series, so consumers NaN-fill that slot
LLD_SERIES_NAMES = (
    "f0", "hnr", "rms", "zcr", "centroid", "bandwidth", "flatness", "rolloff",
    "flux",
) + tuple(f"mfcc{k}" for k in range(13))


def lld_series(buf: AudioBuffer, config: AcousticConfig | None = None) -> list[FrameSeries]:
    """Every frame-level descriptor, for user-enlarged functional banks."""
    config = config or AcousticConfig()
    frames = analysis_frames(buf, config)
    specs = spectra(frames, config.n_fft)
    hop_s = config.hop_seconds
    f0 = f0_track(buf, config.f_min_hz, config.f_max_hz, hop_s, config.yin_threshold)
    scalars = frame_scalars(frames)
    shapes = [spectral_shape(s) for s in specs]
    out = [
        f0,
        hnr_series(buf, f0),
        scalars["rms"],
        scalars["zcr"],
        FrameSeries("centroid", [sh["centroid_hz"] for sh in shapes], hop_s),
        FrameSeries("bandwidth", [sh["bandwidth_hz"] for sh in shapes], hop_s),
        FrameSeries("flatness", [sh["flatness"] for sh in shapes], hop_s),
        FrameSeries("rolloff", [sh["rolloff_hz"] for sh in shapes], hop_s),
    ]
    if len(specs) >= 2:
        out.append(spectral_flux_onset(specs, hop_s))
    coeffs = np.stack([mfcc(s, config.n_mels, config.n_mfcc) for s in specs])
    for k in range(config.n_mfcc):
        out.append(FrameSeries(f"mfcc{k}", coeffs[:, k], hop_s))
    return out
