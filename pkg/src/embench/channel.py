"""Exact-SNR additive noise, parallel high/low-SNR pair construction, and
jamming injection with segment ground truth.

Noise draws come from a counter-based Philox generator keyed by the seed, so
pair construction and parallel generation are schedule-independent. The drawn
noise realization is rescaled to its exact target power, which makes the
realized SNR/JSR equal the requested value to float precision instead of
merely in expectation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signal_core import IqSignal, mean_power
from .waveforms import SignalMeta

RADAR_JAM_KINDS = (
    "spot_noise",
    "barrage_noise",
    "swept_noise",
    "comb_spectrum",
    "false_target",
    "dense_false_targets",
    "range_gate_pull_off",
    "velocity_deception",
    "interrupted_sampling",
    "smart_noise",
    "narrowband_cw",
    "chirp_slice",
)

COMM_JAM_KINDS = (
    "single_tone",
    "multitone",
    "narrowband_noise",
    "broadband_noise",
    "swept_tone",
    "pulsed_noise",
    "comb",
    "follower",
    "modulated_carrier",
)

JAM_KINDS = {"radar": RADAR_JAM_KINDS, "comm": COMM_JAM_KINDS}

JSR_RANGE_DB = (-10.0, 30.0)


def jam_kind_label(kind: str) -> str:
    """Human-readable label used in answers and option pools."""
    return kind.replace("_", " ")


def _unit_noise(n: int, seed: int) -> np.ndarray:
    """Circular complex Gaussian realization with mean power exactly 1."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    eta = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    p = np.mean(np.abs(eta) ** 2)
    return eta / np.sqrt(p)


def add_awgn(signal: IqSignal, snr_db: float, seed: int) -> IqSignal:
    """Add complex AWGN hitting the requested SNR exactly.

    Noise variance is P_signal / 10^(snr/10), split equally across I and Q;
    the realization is rescaled so the realized noise power matches exactly.
    """
    p_sig = mean_power(signal)
    if p_sig == 0.0:
        raise ValueError("cannot set an SNR on a zero-power signal")
    sigma = np.sqrt(p_sig / 10.0 ** (snr_db / 10.0))
    eta = _unit_noise(len(signal), seed)
    return IqSignal(signal.samples + sigma * eta, signal.sample_rate_hz)


@dataclass(frozen=True)
class SnrPair:
    """High/low-SNR versions of one clean signal sharing a single noise draw."""

    clean: IqSignal
    high: IqSignal
    low: IqSignal
    snr_high_db: float
    snr_low_db: float
    noise_seed: int


def make_snr_pair(clean: IqSignal, snr_high_db: float, snr_low_db: float, seed: int) -> SnrPair:
    """Build a parallel pair: identical clean part and noise realization, two scales."""
    if not (snr_high_db >= 0.0 > snr_low_db):
        raise ValueError(
            f"need snr_high >= 0 dB > snr_low, got ({snr_high_db}, {snr_low_db})"
        )
    p_sig = mean_power(clean)
    if p_sig == 0.0:
        raise ValueError("cannot set an SNR on a zero-power signal")
    eta = _unit_noise(len(clean), seed)
    sigma_high = np.sqrt(p_sig / 10.0 ** (snr_high_db / 10.0))
    sigma_low = np.sqrt(p_sig / 10.0 ** (snr_low_db / 10.0))
    return SnrPair(
        clean=clean,
        high=IqSignal(clean.samples + sigma_high * eta, clean.sample_rate_hz),
        low=IqSignal(clean.samples + sigma_low * eta, clean.sample_rate_hz),
        snr_high_db=float(snr_high_db),
        snr_low_db=float(snr_low_db),
        noise_seed=int(seed),
    )


@dataclass
class JammingSpec:
    domain: str  # "radar" or "comm"
    kind: str
    jsr_db: float
    segment: tuple[int, int]  # half-open [start, end)
    params: dict = field(default_factory=dict)


def _validate_jamming_spec(spec: JammingSpec, length: int) -> None:
    if spec.domain not in JAM_KINDS:
        raise ValueError(f"unknown jamming domain: {spec.domain!r}")
    if spec.kind not in JAM_KINDS[spec.domain]:
        raise ValueError(f"unknown {spec.domain} jamming kind: {spec.kind!r}")
    start, end = spec.segment
    if not (0 <= start < end <= length):
        raise ValueError(f"jam segment {spec.segment} out of bounds for length {length}")
    if not (JSR_RANGE_DB[0] <= spec.jsr_db <= JSR_RANGE_DB[1]):
        raise ValueError(f"jsr_db {spec.jsr_db} outside {JSR_RANGE_DB}")


def _tone(n: np.ndarray, freq_hz: float, fs: float, phase: float = 0.0) -> np.ndarray:
    return np.exp(1j * (2.0 * np.pi * freq_hz * n / fs + phase))


def _band_noise(seg_len: int, bw_hz: float, fs: float, rng: np.random.Generator, center_hz: float = 0.0) -> np.ndarray:
    freqs = np.fft.fftfreq(seg_len, d=1.0 / fs)
    mask = np.abs(freqs - center_hz) <= bw_hz / 2.0
    if not np.any(mask):
        nearest = np.argmin(np.abs(freqs - center_hz))
        mask = np.zeros(seg_len, dtype=bool)
        mask[nearest] = True
    spec = np.zeros(seg_len, dtype=np.complex128)
    k = int(np.count_nonzero(mask))
    spec[mask] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return np.fft.ifft(spec)


def _delayed_replica(x: np.ndarray, start: int, end: int, delay: int) -> np.ndarray:
    idx = np.arange(start, end) - delay
    out = np.zeros(end - start, dtype=np.complex128)
    valid = idx >= 0
    out[valid] = x[idx[valid]]
    return out


def _jammer_waveform(
    x: np.ndarray,
    spec: JammingSpec,
    fs: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Unscaled jammer samples over the segment; power calibration happens later."""
    start, end = spec.segment
    seg_len = end - start
    n = np.arange(seg_len)
    p = spec.params
    kind = spec.kind

    if kind in ("spot_noise", "narrowband_noise"):
        bw = p.get("bandwidth_hz", 2e6)
        center = p.get("center_hz", rng.uniform(-4e6, 4e6))
        return _band_noise(seg_len, bw, fs, rng, center_hz=center)
    if kind in ("barrage_noise", "broadband_noise"):
        bw = p.get("bandwidth_hz", 0.8 * fs)
        return _band_noise(seg_len, bw, fs, rng)
    if kind == "swept_noise":
        base = _band_noise(seg_len, p.get("bandwidth_hz", 0.5e6), fs, rng)
        f0 = p.get("start_hz", -6e6)
        f1 = p.get("stop_hz", 6e6)
        sweep = np.exp(1j * 2.0 * np.pi * (f0 * n + (f1 - f0) * n**2 / (2.0 * seg_len)) / fs)
        return base * sweep
    if kind in ("comb_spectrum", "comb"):
        k = int(p.get("num_tones", 8))
        span = p.get("span_hz", 0.8 * fs)
        freqs = -span / 2.0 + (np.arange(k) + 0.5) * span / k
        phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
        return sum(_tone(n, f, fs, ph) for f, ph in zip(freqs, phases))
    if kind == "multitone":
        k = int(p.get("num_tones", 4))
        freqs = rng.uniform(-6e6, 6e6, size=k)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
        return sum(_tone(n, f, fs, ph) for f, ph in zip(freqs, phases))
    if kind in ("narrowband_cw", "single_tone"):
        f = p.get("center_hz", rng.uniform(-6e6, 6e6))
        return _tone(n, f, fs, rng.uniform(0.0, 2.0 * np.pi))
    if kind == "swept_tone":
        f0 = p.get("start_hz", -6e6)
        f1 = p.get("stop_hz", 6e6)
        return np.exp(1j * 2.0 * np.pi * (f0 * n + (f1 - f0) * n**2 / (2.0 * seg_len)) / fs)
    if kind in ("false_target", "follower"):
        delay = int(p.get("delay_samples", rng.integers(8, 65)))
        return _delayed_replica(x, start, end, delay)
    if kind == "dense_false_targets":
        delays = p.get("delays_samples")
        if delays is None:
            delays = rng.integers(8, 129, size=4)
        return sum(_delayed_replica(x, start, end, int(d)) for d in delays)
    if kind == "range_gate_pull_off":
        # Delay walks outward in steps across the segment.
        d0 = int(p.get("delay_samples", 8))
        steps = int(p.get("num_steps", 8))
        rate = int(p.get("step_samples", 8))
        out = np.zeros(seg_len, dtype=np.complex128)
        bounds = np.linspace(0, seg_len, steps + 1).astype(int)
        for i in range(steps):
            a, b = bounds[i], bounds[i + 1]
            out[a:b] = _delayed_replica(x, start + a, start + b, d0 + i * rate)
        return out
    if kind == "velocity_deception":
        delay = int(p.get("delay_samples", rng.integers(8, 65)))
        doppler = p.get("doppler_hz", rng.uniform(0.2e6, 1e6) * rng.choice([-1.0, 1.0]))
        return _delayed_replica(x, start, end, delay) * _tone(n, doppler, fs)
    if kind == "interrupted_sampling":
        # Sample a short slice of the victim, retransmit it back-to-back.
        slice_len = int(p.get("slice_samples", 32))
        repeats = int(p.get("repeats", 3))
        out = np.zeros(seg_len, dtype=np.complex128)
        pos = 0
        while pos + slice_len <= seg_len:
            chunk = x[start + pos : start + pos + slice_len]
            for r in range(1, repeats + 1):
                a = pos + r * slice_len
                if a + slice_len > seg_len:
                    break
                out[a : a + slice_len] = chunk
            pos += slice_len * (repeats + 1)
        return out
    if kind == "smart_noise":
        delay = int(p.get("delay_samples", rng.integers(8, 65)))
        replica = _delayed_replica(x, start, end, delay)
        am = 1.0 + 0.5 * rng.standard_normal(seg_len)
        return replica * am
    if kind == "chirp_slice":
        slice_len = int(p.get("slice_samples", 64))
        rate = p.get("sweep_hz_per_s", 2e11)
        t = np.arange(slice_len) / fs
        chirp = np.exp(1j * np.pi * rate * t**2)
        reps = int(np.ceil(seg_len / slice_len))
        return np.tile(chirp, reps)[:seg_len]
    if kind == "pulsed_noise":
        period = int(p.get("period_samples", 96))
        duty = float(p.get("duty", 0.8))
        noise = _band_noise(seg_len, p.get("bandwidth_hz", 0.8 * fs), fs, rng)
        gate = (np.arange(seg_len) % period) < int(duty * period)
        return noise * gate
    if kind == "modulated_carrier":
        sps = int(p.get("samples_per_symbol", 8))
        center = p.get("center_hz", rng.uniform(-4e6, 4e6))
        bits = rng.integers(0, 2, size=seg_len // sps + 1) * 2.0 - 1.0
        bb = np.repeat(bits, sps)[:seg_len]
        return bb * _tone(n, center, fs)
    raise ValueError(f"unhandled jamming kind: {kind!r}")  # pragma: no cover


def inject_jamming(
    signal: IqSignal,
    spec: JammingSpec,
    seed: int,
    meta: SignalMeta | None = None,
) -> tuple[IqSignal, SignalMeta]:
    """Add a jammer of the requested kind inside the segment only.

    The jammer is scaled so its mean power over the segment is jsr_db above
    the victim's full-window mean power (exactly, by construction). Samples
    outside the segment are bit-identical to the input.
    """
    _validate_jamming_spec(spec, len(signal))
    p_sig = mean_power(signal)
    if p_sig == 0.0:
        raise ValueError("cannot set a JSR against a zero-power signal")
    rng = np.random.Generator(np.random.Philox(key=seed))
    j = _jammer_waveform(signal.samples, spec, signal.sample_rate_hz, rng)
    p_jam = np.mean(np.abs(j) ** 2)
    if p_jam == 0.0:
        raise ValueError(
            f"{spec.kind!r} jammer has no energy in segment {spec.segment}"
        )
    target = p_sig * 10.0 ** (spec.jsr_db / 10.0)
    j = j * np.sqrt(target / p_jam)

    out = signal.samples.copy()
    start, end = spec.segment
    out[start:end] += j
    if meta is None:
        meta = SignalMeta(domain=spec.domain, family="unknown")
    meta = meta.with_jamming(spec.kind, spec.segment, spec.jsr_db)
    return IqSignal(out, signal.sample_rate_hz), meta
