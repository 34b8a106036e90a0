"""Frame-level acoustic descriptors.

Pitch (difference-function method), jitter/shimmer/HNR from picked glottal
cycles, MFCC, spectral shape/contrast/flux, energy scalars, tempo, and
polynomial spectrum fits. Everything here is pure and deterministic: the
same AudioBuffer always yields bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.fft import dct

from .audio_io import AudioBuffer, FrameMatrix, frame_signal
from .errors import (
    InvalidBandConfig,
    InvalidFftSize,
    InvalidOrder,
    InvalidRange,
    TooFewFrames,
)

SPECTRAL_FLOOR = 1e-10  # applied before any log so silence stays finite


@dataclass(frozen=True)
class FrameSeries:
    """One descriptor sampled per frame; NaN marks undefined frames."""

    name: str
    values: np.ndarray
    hop_seconds: float

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        finite_ok = np.all(np.isfinite(values[~np.isnan(values)]))
        if not finite_ok:
            raise ValueError(f"series {self.name!r} contains non-finite non-NaN values")


@dataclass(frozen=True)
class Spectrum:
    """Single-frame magnitude spectrum over n_fft/2+1 bins."""

    magnitudes: np.ndarray
    bin_hz: float

    def __post_init__(self) -> None:
        mags = np.asarray(self.magnitudes, dtype=np.float64)
        object.__setattr__(self, "magnitudes", mags)
        if mags.ndim != 1 or not np.all(np.isfinite(mags)) or np.any(mags < 0):
            raise ValueError("magnitudes must be a finite non-negative vector")

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.magnitudes.size) * self.bin_hz

    @property
    def nyquist_hz(self) -> float:
        return (self.magnitudes.size - 1) * self.bin_hz


@dataclass(frozen=True)
class JitterShimmerReport:
    jitter_local: float
    shimmer_local: float
    hnr_db: float
    n_cycles: int
    f0_mean_hz: float


@dataclass(frozen=True)
class AcousticConfig:
    """Analysis defaults: 25 ms frames, 10 ms hop, hann window."""

    frame_seconds: float = 0.025
    hop_seconds: float = 0.010
    window: str = "hann"
    f_min_hz: float = 60.0
    f_max_hz: float = 500.0
    yin_threshold: float = 0.15
    n_fft: int | None = None  # None: next power of two >= frame length
    n_mels: int = 26
    n_mfcc: int = 13
    rolloff_fraction: float = 0.85
    contrast_bands: int = 4
    contrast_fmin_hz: float = 200.0
    contrast_quantile: float = 0.02
    tempo_window: int = 384


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def analysis_frames(buf: AudioBuffer, config: AcousticConfig) -> FrameMatrix:
    frame_len = int(round(config.frame_seconds * buf.sample_rate_hz))
    hop = int(round(config.hop_seconds * buf.sample_rate_hz))
    return frame_signal(buf, frame_len, hop, config.window)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def power_spectrum(frame: np.ndarray, n_fft: int, sample_rate_hz: int) -> Spectrum:
    """Magnitude spectrum of one windowed frame, zero-padded to n_fft.

    n_fft must be a power of two not smaller than the frame. Parseval's
    identity holds over the full transform: sum |X[k]|^2 = n_fft * sum x[n]^2.
    """
    frame = np.asarray(frame, dtype=np.float64)
    if n_fft < frame.size or n_fft < 2 or (n_fft & (n_fft - 1)) != 0:
        raise InvalidFftSize(
            f"n_fft must be a power of two >= frame length {frame.size}, got {n_fft}"
        )
    mags = np.abs(np.fft.rfft(frame, n_fft))
    return Spectrum(mags, sample_rate_hz / n_fft)


def spectra(frames: FrameMatrix, n_fft: int | None = None) -> list[Spectrum]:
    """Per-frame spectra; batched transform, same math as power_spectrum."""
    if n_fft is None:
        n_fft = _next_pow2(frames.frame_len)
    if n_fft < frames.frame_len or (n_fft & (n_fft - 1)) != 0:
        raise InvalidFftSize(f"n_fft {n_fft} invalid for frame length {frames.frame_len}")
    mags = np.abs(np.fft.rfft(frames.frames, n_fft, axis=1))
    bin_hz = frames.sample_rate_hz / n_fft
    return [Spectrum(row, bin_hz) for row in mags]


# ---------------------------------------------------------------------------
# pitch
# ---------------------------------------------------------------------------

def f0_track(
    buf: AudioBuffer,
    f_min: float = 60.0,
    f_max: float = 500.0,
    hop_seconds: float = 0.010,
    threshold: float = 0.15,
) -> FrameSeries:
    """Fundamental frequency per frame via the cumulative-mean-normalized
    difference function with parabolic lag interpolation.

    A frame is unvoiced (NaN) when no normalized-difference dip falls below
    the voicing threshold, or when the interpolated frequency leaves
    [f_min, f_max]. The integration window is one maximum period, so each
    frame consumes 2*ceil(sr/f_min) samples.
    """
    if not 0 < f_min < f_max:
        raise InvalidRange(f"need 0 < f_min < f_max, got {f_min}, {f_max}")
    sr = buf.sample_rate_hz
    if f_max >= sr / 2:
        raise InvalidRange(f"f_max {f_max} must be below Nyquist {sr / 2}")

    x = buf.samples
    tau_min = max(2, int(sr / f_max))
    tau_max = int(np.ceil(sr / f_min))
    w = tau_max
    chunk = w + tau_max
    hop = int(round(hop_seconds * sr))
    n = x.size
    if n < chunk:
        return FrameSeries("f0", np.empty(0), hop_seconds)
    n_frames = 1 + (n - chunk) // hop

    idx = np.arange(chunk)[None, :] + hop * np.arange(n_frames)[:, None]
    segs = x[idx]
    n_fft = _next_pow2(2 * chunk)
    # windowed cross term C(tau) = sum_{n<w} x[n] x[n+tau] via one batched fft
    spec_full = np.fft.rfft(segs, n_fft, axis=1)
    spec_head = np.fft.rfft(segs[:, :w], n_fft, axis=1)
    cross = np.fft.irfft(np.conj(spec_head) * spec_full, n_fft, axis=1)[:, : tau_max + 1]

    sq = segs * segs
    csum = np.concatenate([np.zeros((n_frames, 1)), np.cumsum(sq, axis=1)], axis=1)
    taus = np.arange(tau_max + 1)
    energy_0 = csum[:, w][:, None]
    energy_tau = csum[:, taus + w] - csum[:, taus]
    diff = np.maximum(energy_0 + energy_tau - 2.0 * cross, 0.0)

    # cumulative mean normalization; digital silence keeps dp at 1 (unvoiced)
    run = np.cumsum(diff[:, 1:], axis=1)
    dp = np.ones_like(diff)
    positive = run > 0
    dp[:, 1:] = np.where(positive, diff[:, 1:] * taus[1:] / np.where(positive, run, 1.0), 1.0)

    f0 = np.full(n_frames, np.nan)
    for i in range(n_frames):
        row = dp[i]
        tau = -1
        below = np.flatnonzero(row[tau_min:tau_max] < threshold)
        if below.size:
            t = tau_min + int(below[0])
            while t + 1 <= tau_max - 1 and row[t + 1] < row[t]:
                t += 1
            tau = t
        else:
            t = tau_min + int(np.argmin(row[tau_min: tau_max + 1]))
            if row[t] < threshold:
                tau = t
        if tau < 0:
            continue
        if 1 <= tau < tau_max:
            a, b, c = row[tau - 1], row[tau], row[tau + 1]
            denom = a - 2 * b + c
            delta = float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5)) if denom != 0 else 0.0
        else:
            delta = 0.0
        freq = sr / (tau + delta)
        if f_min <= freq <= f_max:
            f0[i] = freq
    return FrameSeries("f0", f0, hop_seconds)


# ---------------------------------------------------------------------------
# jitter / shimmer / HNR
# ---------------------------------------------------------------------------

def _refine_peak(x: np.ndarray, i: int) -> tuple[float, float]:
    """Parabolic sub-sample refinement of a local maximum at index i."""
    if i <= 0 or i >= x.size - 1:
        return float(i), float(x[i])
    a, b, c = x[i - 1], x[i], x[i + 1]
    denom = a - 2 * b + c
    if denom == 0:
        return float(i), float(b)
    delta = float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))
    return i + delta, float(b - 0.25 * (a - c) * delta)


def pick_cycle_peaks(
    x: np.ndarray, sample_rate_hz: int, f0: FrameSeries
) -> tuple[np.ndarray, np.ndarray]:
    """Locate one positive peak per glottal cycle inside voiced regions.

    The F0 track bounds the search: from each accepted peak the next is the
    maximum within [0.8, 1.25] local periods ahead. Returns sub-sample peak
    times (in samples) and interpolated amplitudes.
    """
    hop = int(round(f0.hop_seconds * sample_rate_hz))
    voiced = np.flatnonzero(~np.isnan(f0.values))
    if voiced.size == 0:
        return np.empty(0), np.empty(0)
    times: list[float] = []
    amps: list[float] = []
    regions = np.split(voiced, np.flatnonzero(np.diff(voiced) > 1) + 1)
    for region in regions:
        i0, i1 = int(region[0]), int(region[-1])
        start = i0 * hop
        slowest = float(np.nanmin(f0.values[region]))
        end = min(x.size, i1 * hop + int(2 * sample_rate_hz / slowest))
        period = sample_rate_hz / f0.values[i0]
        seed_end = min(x.size, start + int(1.5 * period))
        if seed_end - start < 3:
            continue
        p = start + int(np.argmax(x[start:seed_end]))
        t, a = _refine_peak(x, p)
        times.append(t)
        amps.append(a)
        while True:
            fi = min(max(int(round(p / hop)), i0), i1)
            f_here = f0.values[fi]
            if np.isnan(f_here):
                f_here = f0.values[i0]
            period = sample_rate_hz / f_here
            lo = p + int(np.floor(0.8 * period))
            hi = p + int(np.ceil(1.25 * period)) + 1
            if hi > end or lo >= x.size - 1:
                break
            q = lo + int(np.argmax(x[lo:hi]))
            t, a = _refine_peak(x, q)
            times.append(t)
            amps.append(a)
            p = q
    return np.asarray(times), np.asarray(amps)


def _hnr_at_frame(x: np.ndarray, start: int, sample_rate_hz: int, f0_hz: float) -> float:
    period = sample_rate_hz / f0_hz
    lag = int(round(period))
    w = int(round(2 * period))
    if start + w + lag + 1 >= x.size or lag < 2:
        return np.nan
    seg = x[start: start + w + lag + 1]
    base = seg[:w]
    norm0 = float(base @ base)
    if norm0 <= 0:
        return np.nan
    rs = []
    for ell in (lag - 1, lag, lag + 1):
        shifted = seg[ell: ell + w]
        denom = np.sqrt(norm0 * float(shifted @ shifted))
        rs.append(float(base @ shifted) / denom if denom > 0 else 0.0)
    a, b, c = rs
    denom = a - 2 * b + c
    if denom != 0:
        delta = float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))
        r = b - 0.25 * (a - c) * delta
    else:
        r = b
    r = float(np.clip(r, 1e-12, 1 - 1e-12))  # caps HNR at about +/-120 dB
    return 10.0 * np.log10(r / (1.0 - r))


def hnr_series(buf: AudioBuffer, f0: FrameSeries) -> FrameSeries:
    """Harmonics-to-noise ratio per voiced frame, NaN when unvoiced."""
    hop = int(round(f0.hop_seconds * buf.sample_rate_hz))
    vals = np.full(f0.values.size, np.nan)
    for i, f in enumerate(f0.values):
        if not np.isnan(f):
            vals[i] = _hnr_at_frame(buf.samples, i * hop, buf.sample_rate_hz, f)
    return FrameSeries("hnr", vals, f0.hop_seconds)


def jitter_shimmer_hnr(buf: AudioBuffer, f0: FrameSeries) -> JitterShimmerReport:
    """Local jitter and shimmer over picked cycles, plus mean HNR.

    jitter_local = mean |T_i - T_{i-1}| / mean T; shimmer_local is the same
    ratio over cycle peak amplitudes. Fewer than 2 cycles yields NaN for
    both; degenerate inputs never raise.
    """
    times, amps = pick_cycle_peaks(buf.samples, buf.sample_rate_hz, f0)
    n_cycles = max(0, times.size - 1)
    jitter = shimmer = np.nan
    if n_cycles >= 2:
        periods = np.diff(times)
        mean_period = float(np.mean(periods))
        if mean_period > 0:
            jitter = float(np.mean(np.abs(np.diff(periods)))) / mean_period
        mean_amp = float(np.mean(amps))
        if mean_amp != 0:
            shimmer = float(np.mean(np.abs(np.diff(amps)))) / abs(mean_amp)
    hnr = hnr_series(buf, f0).values
    hnr_db = float(np.nanmean(hnr)) if np.any(~np.isnan(hnr)) else np.nan
    voiced = f0.values[~np.isnan(f0.values)]
    f0_mean = float(voiced.mean()) if voiced.size else np.nan
    return JitterShimmerReport(
        jitter_local=jitter,
        shimmer_local=shimmer,
        hnr_db=hnr_db,
        n_cycles=int(n_cycles),
        f0_mean_hz=f0_mean,
    )


# ---------------------------------------------------------------------------
# MFCC
# ---------------------------------------------------------------------------

def hz_to_mel(f: np.ndarray | float) -> np.ndarray | float:
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m: np.ndarray | float) -> np.ndarray | float:
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_mels: int, n_bins: int, bin_hz: float, fmin: float, fmax: float) -> np.ndarray:
    """Triangular filters (n_mels, n_bins) with edges equally spaced in mel."""
    mel_points = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    freqs = np.arange(n_bins) * bin_hz
    bank = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        left, centre, right = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        up = (freqs - left) / (centre - left)
        down = (right - freqs) / (right - centre)
        bank[m] = np.maximum(0.0, np.minimum(up, down))
    return bank


def mfcc(
    spec: Spectrum,
    n_mels: int = 26,
    n_coeffs: int = 13,
    fmin: float = 0.0,
    fmax: float | None = None,
) -> np.ndarray:
    """Mel-frequency cepstral coefficients of one spectrum.

    Power spectrum -> triangular mel filterbank -> floored natural log ->
    orthonormal type-II DCT, first n_coeffs kept.
    """
    nyquist = spec.nyquist_hz
    if fmax is None:
        fmax = nyquist
    if n_coeffs > n_mels or n_mels < 1:
        raise InvalidBandConfig(f"need 1 <= n_coeffs <= n_mels, got {n_coeffs} > {n_mels}")
    if not 0 <= fmin < fmax or fmax > nyquist + 1e-9:
        raise InvalidBandConfig(f"need 0 <= fmin < fmax <= {nyquist}, got [{fmin}, {fmax}]")
    bank = mel_filterbank(n_mels, spec.magnitudes.size, spec.bin_hz, fmin, fmax)
    energies = bank @ (spec.magnitudes ** 2)
    logs = np.log(np.maximum(energies, SPECTRAL_FLOOR))
    return dct(logs, type=2, norm="ortho")[:n_coeffs]


# ---------------------------------------------------------------------------
# spectral descriptors
# ---------------------------------------------------------------------------

def spectral_shape(spec: Spectrum) -> dict[str, float]:
    """Centroid, bandwidth, rolloff, flatness; all NaN for a silent frame."""
    mags = spec.magnitudes
    total = float(mags.sum())
    if total <= 0:
        return {
            "centroid_hz": np.nan,
            "bandwidth_hz": np.nan,
            "rolloff_hz": np.nan,
            "flatness": np.nan,
        }
    freqs = spec.frequencies
    centroid = float((freqs * mags).sum()) / total
    bandwidth = float(np.sqrt((mags * (freqs - centroid) ** 2).sum() / total))
    power = mags ** 2
    cumulative = np.cumsum(power)
    rolloff_idx = int(np.searchsorted(cumulative, 0.85 * cumulative[-1]))
    rolloff = float(freqs[min(rolloff_idx, freqs.size - 1)])
    if power.max() == power.min():
        flatness = 1.0  # uniform limit, kept exact instead of exp(log()) round-trip
    else:
        floored = np.maximum(power, SPECTRAL_FLOOR)
        flatness = float(np.exp(np.mean(np.log(floored))) / np.mean(floored))
        flatness = float(np.clip(flatness, 0.0, 1.0))
    return {
        "centroid_hz": centroid,
        "bandwidth_hz": bandwidth,
        "rolloff_hz": rolloff,
        "flatness": flatness,
    }


def spectral_contrast(
    spec: Spectrum,
    n_bands: int = 4,
    fmin: float = 200.0,
    quantile: float = 0.02,
) -> np.ndarray:
    """Octave-band peak-to-valley contrast in nats.

    Band i spans [fmin*2^i, fmin*2^(i+1)) clipped to Nyquist; contrast is
    log(mean of the top-quantile magnitudes) - log(mean of the bottom
    quantile), at least one bin per side. Empty bands yield NaN.
    """
    if n_bands < 1:
        raise InvalidBandConfig(f"n_bands must be >= 1, got {n_bands}")
    freqs = spec.frequencies
    out = np.full(n_bands, np.nan)
    for i in range(n_bands):
        lo = fmin * 2.0 ** i
        hi = min(fmin * 2.0 ** (i + 1), spec.nyquist_hz)
        sel = (freqs >= lo) & (freqs < hi) if hi < spec.nyquist_hz else (freqs >= lo) & (freqs <= hi)
        band = spec.magnitudes[sel]
        if band.size == 0:
            continue
        count = max(1, int(quantile * band.size))
        ordered = np.sort(band)
        valley = max(float(ordered[:count].mean()), SPECTRAL_FLOOR)
        peak = max(float(ordered[-count:].mean()), SPECTRAL_FLOOR)
        out[i] = np.log(peak) - np.log(valley)
    return out


def frame_scalars(frames: FrameMatrix) -> dict[str, FrameSeries]:
    """Zero-crossing rate (pre-window samples) and RMS (windowed samples)."""
    raw = frames.raw
    signs = raw[:, :-1] * raw[:, 1:]
    zcr = (signs < 0).sum(axis=1) / (frames.frame_len - 1)
    rms = np.sqrt(np.mean(frames.frames ** 2, axis=1))
    return {
        "zcr": FrameSeries("zcr", zcr, frames.hop_seconds),
        "rms": FrameSeries("rms", rms, frames.hop_seconds),
    }


def spectral_flux_onset(spectrogram: Sequence[Spectrum], hop_seconds: float) -> FrameSeries:
    """Onset strength: mean positive log-magnitude increase per frame."""
    if len(spectrogram) < 2:
        raise TooFewFrames(f"flux needs >= 2 frames, got {len(spectrogram)}")
    mags = np.stack([s.magnitudes for s in spectrogram])
    logs = np.log(np.maximum(mags, SPECTRAL_FLOOR))
    rises = np.maximum(0.0, logs[1:] - logs[:-1]).mean(axis=1)
    return FrameSeries("flux", np.concatenate([[0.0], rises]), hop_seconds)


def tempogram_tempo(onset: FrameSeries, window: int = 384) -> tuple[float, np.ndarray]:
    """Tempo estimate and windowed-autocorrelation tempogram.

    Lags are restricted to [30, 300] BPM. An envelope with no positive
    autocorrelation anywhere in range (e.g. all-zero onsets) reports NaN.
    """
    env = onset.values
    hop_s = onset.hop_seconds
    w = min(window, env.size)
    if w < 2:
        return np.nan, np.zeros((0, 0))
    lag_min = max(1, int(np.ceil(60.0 / (300.0 * hop_s))))
    lag_max = min(w - 1, int(np.floor(60.0 / (30.0 * hop_s))))
    if lag_max < lag_min:
        return np.nan, np.zeros((0, 0))
    step = max(1, w // 4)
    starts = list(range(0, max(env.size - w, 0) + 1, step))
    lags = np.arange(lag_min, lag_max + 1)
    gram = np.zeros((len(starts), lags.size))
    for r, s in enumerate(starts):
        seg = env[s: s + w]
        for j, lag in enumerate(lags):
            gram[r, j] = float(seg[:-lag] @ seg[lag:])
    agg = gram.mean(axis=0)
    if np.all(agg <= 0):
        return np.nan, gram
    best = lags[int(np.argmax(agg))]
    return 60.0 / (best * hop_s), gram


def poly_features(spec: Spectrum, order: int) -> np.ndarray:
    """Least-squares polynomial fit of magnitude vs frequency.

    Coefficients are returned highest degree first (order 1 -> [slope,
    intercept]).
    """
    if order not in (0, 1, 2):
        raise InvalidOrder(f"order must be 0, 1, or 2, got {order}")
    if spec.magnitudes.size < order + 1:
        raise InvalidOrder(f"need >= {order + 1} bins for order {order}")
    return np.polyfit(spec.frequencies, spec.magnitudes, order)
