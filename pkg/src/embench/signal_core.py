"""Complex baseband signal container plus the power/SNR/spectrum primitives
everything else is built on.

Conventions used throughout the package:

* power is mean |x|^2 over samples, no impedance constant;
* SNR/JSR are power ratios in dB;
* spectra are DC-centered periodograms normalized so that the bin sum equals
  the time-domain mean power (Parseval).

Samples are held as complex128 in memory and serialized as interleaved
little-endian float32 (I0, Q0, I1, Q1, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Canonical corpus geometry: 1024 complex samples at 20 MHz (51.2 us window).
CANONICAL_SAMPLE_RATE_HZ = 20_000_000.0
CANONICAL_LENGTH = 1024

# Corpus SNR range in dB; "low SNR" means noise power exceeds signal power.
SNR_RANGE_DB = (-20.0, 20.0)


def is_low_snr(snr_db: float) -> bool:
    """True when the SNR is below 0 dB (noise power exceeds signal power)."""
    return snr_db < 0.0


@dataclass(frozen=True)
class IqSignal:
    """Immutable complex baseband sample sequence with its sample rate."""

    samples: np.ndarray
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {arr.shape}")
        if arr.size < 1:
            raise ValueError("empty signal")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("samples contain NaN or Inf")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    def to_bytes(self) -> bytes:
        """Interleaved little-endian float32: I0, Q0, I1, Q1, ..."""
        inter = np.empty(2 * len(self), dtype="<f4")
        inter[0::2] = self.samples.real
        inter[1::2] = self.samples.imag
        return inter.tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ) -> "IqSignal":
        flat = np.frombuffer(raw, dtype="<f4")
        if flat.size % 2 != 0:
            raise ValueError("IQ byte stream must hold an even number of float32 values")
        samples = flat[0::2].astype(np.float64) + 1j * flat[1::2].astype(np.float64)
        return cls(samples=samples, sample_rate_hz=sample_rate_hz)


def write_iq(signal: IqSignal, path: str | Path) -> None:
    Path(path).write_bytes(signal.to_bytes())


def read_iq(path: str | Path, sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ) -> IqSignal:
    return IqSignal.from_bytes(Path(path).read_bytes(), sample_rate_hz=sample_rate_hz)


@dataclass(frozen=True)
class Spectrum:
    """DC-centered power spectrum; bins[k] covers frequency (k - N//2) * bin_width_hz.

    Normalized so sum(bins) equals the time-domain mean power.
    """

    bins: np.ndarray
    bin_width_hz: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.bins, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "bins", arr)

    @property
    def freqs_hz(self) -> np.ndarray:
        n = self.bins.size
        return (np.arange(n) - n // 2) * self.bin_width_hz

    def total_power(self) -> float:
        return float(np.sum(self.bins))


def mean_power(signal: IqSignal) -> float:
    """Mean |x|^2 over the signal; >= 0, exactly 0 only for the all-zero signal."""
    if len(signal) < 1:
        raise ValueError("empty signal")
    return float(np.mean(np.abs(signal.samples) ** 2))


def measured_snr_db(clean: IqSignal, noisy: IqSignal) -> float:
    """SNR realized in `noisy` relative to `clean`, with noise = noisy - clean."""
    if len(clean) != len(noisy):
        raise ValueError(f"length mismatch: {len(clean)} vs {len(noisy)}")
    p_clean = mean_power(clean)
    p_noise = float(np.mean(np.abs(noisy.samples - clean.samples) ** 2))
    if p_noise == 0.0:
        raise ValueError("infinite SNR: noisy equals clean")
    if p_clean == 0.0:
        raise ValueError("zero-power clean signal")
    return 10.0 * np.log10(p_clean / p_noise)


def normalize_power(signal: IqSignal, target_power: float = 1.0) -> IqSignal:
    """Rescale so mean power equals target_power exactly (up to float rounding)."""
    if target_power <= 0:
        raise ValueError("target_power must be positive")
    p = mean_power(signal)
    if p == 0.0:
        raise ValueError("cannot normalize a zero-power signal")
    scale = np.sqrt(target_power / p)
    return IqSignal(samples=signal.samples * scale, sample_rate_hz=signal.sample_rate_hz)


def periodogram(signal: IqSignal) -> Spectrum:
    """Rectangular-window periodogram, DC-centered.

    bins[k] = |X_k|^2 / N^2 after fftshift, so sum(bins) equals mean |x|^2.
    """
    n = len(signal)
    if n < 2:
        raise ValueError("periodogram requires length >= 2")
    spectrum = np.fft.fftshift(np.fft.fft(signal.samples))
    bins = (np.abs(spectrum) ** 2) / float(n) ** 2
    return Spectrum(bins=bins, bin_width_hz=signal.sample_rate_hz / n)
