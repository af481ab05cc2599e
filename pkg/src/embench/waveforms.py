"""Deterministic waveform generators for every signal family in the corpus.

Radar families are pulse trains (LFM chirp, Barker/Frank phase codes, stepped
frequency, rectangular, band-limited noise) plus a continuous sinusoid; comm
families cover 14 modulation classes and 8 fixed protocol bundles. Every
generator returns the signal together with a SignalMeta that records the
*realized* ground truth (pulse widths and PRIs are quantized to the sample
grid first, so the metadata is exact, not merely requested).

All generators are pure functions of (spec, sample_rate, length, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.signal import hilbert

from .signal_core import CANONICAL_LENGTH, CANONICAL_SAMPLE_RATE_HZ, IqSignal

RADAR_KINDS = ("LFM", "Barker", "Frank", "SteppedFreq", "Rectangular", "NoiseWaveform", "Sinusoid")

# 14-class modulation set for the MOD task, following common modulation
# recognition corpora.
MOD_CLASSES = (
    "BPSK", "QPSK", "8PSK", "16QAM", "64QAM", "256QAM", "GFSK",
    "CPFSK", "PAM4", "AM-DSB", "AM-SSB", "WBFM", "OOK", "4FSK",
)

LINEAR_MODS = ("BPSK", "QPSK", "8PSK", "16QAM", "64QAM", "256QAM", "PAM4", "OOK")
FREQ_MODS = ("GFSK", "CPFSK", "4FSK")
ANALOG_MODS = ("AM-DSB", "AM-SSB", "WBFM")

BARKER_CODES = {
    5: (1, 1, 1, -1, 1),
    7: (1, 1, 1, -1, -1, 1, -1),
    11: (1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1),
    13: (1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1),
}

# Protocol bundles for the PI task: name -> (modulation, samples/symbol,
# preamble symbol indices). The preamble distinguishes bundles that share a
# modulation.
PROTOCOL_BUNDLES = {
    "telemetry": ("BPSK", 40, (0, 0, 0, 1, 1, 0, 1, 0)),
    "beacon": ("BPSK", 10, (1, 0, 1, 0, 1, 0, 1, 0)),
    "command": ("QPSK", 20, (0, 1, 2, 3, 0, 1, 2, 3)),
    "datalink": ("QPSK", 5, (3, 3, 0, 0, 3, 3, 0, 0)),
    "satcom": ("16QAM", 10, (0, 5, 10, 15, 0, 5, 10, 15)),
    "broadcast": ("64QAM", 10, (0, 9, 18, 27, 36, 45, 54, 63)),
    "relay": ("256QAM", 20, (0, 85, 170, 255, 0, 85, 170, 255)),
    "pager": ("GFSK", 20, (1, 1, 0, 1, 0, 0, 1, 0)),
}
PROTOCOL_NAMES = tuple(PROTOCOL_BUNDLES)

# The 14 L-3 sub-task identifiers. The first ten are single-choice perception
# tasks; the last four are open-ended strategy tasks.
PERCEPTION_TASKS = ("MOD", "PE.BW", "PE.DC", "PE.NoP", "PE.PRF", "PE.PW", "PI", "RJR", "CJR", "SD")
REASONING_TASKS = ("Anti-CJ", "Anti-RJ", "CJS", "RJS")
TASK_IDS = PERCEPTION_TASKS + REASONING_TASKS

# Sampler ranges sized to the 51.2 us window (1024 samples at 20 MHz).
PW_RANGE_S = (0.5e-6, 10e-6)
PRF_RANGE_HZ = (50e3, 500e3)
NUM_PULSES_RANGE = (2, 10)
BANDWIDTH_RANGE_HZ = (0.5e6, 8e6)
# Duty capped at 45%: the pulse-parameter oracle thresholds at
# 0.5*(max+median) of the envelope, and above ~50% duty the median sits on
# the pulse top instead of the gap floor.
DUTY_RANGE = (0.05, 0.45)
# Chirps need enough time-bandwidth product for the 99%-occupied-power
# estimate to land near the swept bandwidth.
MIN_TIME_BANDWIDTH = 16.0


@dataclass
class SignalMeta:
    """Generation ground truth attached to every synthesized signal."""

    domain: str  # "radar" or "comm"
    family: str  # waveform kind or modulation name
    params: dict = field(default_factory=dict)
    snr_db: Optional[float] = None
    jamming_kind: Optional[str] = None
    jam_segment: Optional[tuple[int, int]] = None
    jsr_db: Optional[float] = None
    task_id: Optional[str] = None

    def with_jamming(self, kind: str, segment: tuple[int, int], jsr_db: float) -> "SignalMeta":
        return replace(self, jamming_kind=kind, jam_segment=(int(segment[0]), int(segment[1])), jsr_db=float(jsr_db))

    def with_snr(self, snr_db: float) -> "SignalMeta":
        return replace(self, snr_db=float(snr_db))

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "family": self.family,
            "params": dict(self.params),
            "snr_db": self.snr_db,
            "jamming_kind": self.jamming_kind,
            "jam_segment": list(self.jam_segment) if self.jam_segment is not None else None,
            "jsr_db": self.jsr_db,
            "task_id": self.task_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignalMeta":
        seg = d.get("jam_segment")
        return cls(
            domain=d["domain"],
            family=d["family"],
            params=dict(d.get("params", {})),
            snr_db=d.get("snr_db"),
            jamming_kind=d.get("jamming_kind"),
            jam_segment=tuple(seg) if seg is not None else None,
            jsr_db=d.get("jsr_db"),
            task_id=d.get("task_id"),
        )


@dataclass
class RadarWaveformSpec:
    kind: str
    pulse_width_s: float = 5e-6
    prf_hz: float = 100e3
    num_pulses: int = 4
    bandwidth_hz: float = 0.0
    barker_length: int = 13
    frank_phases: int = 4
    num_steps: int = 8
    carrier_offset_hz: float = 0.0
    amplitude: float = 1.0


@dataclass
class CommWaveformSpec:
    kind: str
    samples_per_symbol: int = 8
    rolloff: float = 0.35
    seed: int = 0
    preamble: tuple = ()
    # For analog classes the "symbol rate" field is reused as the message
    # bandwidth; for digital classes it is derived from samples_per_symbol.
    message_bandwidth_hz: float = 1e6

    def symbol_rate_hz(self, sample_rate_hz: float) -> float:
        return sample_rate_hz / self.samples_per_symbol


def _validate_radar_spec(spec: RadarWaveformSpec, sample_rate_hz: float, length: int) -> None:
    if spec.kind not in RADAR_KINDS:
        raise ValueError(f"unknown radar waveform kind: {spec.kind!r}")
    if spec.kind == "Sinusoid":
        return
    if spec.pulse_width_s <= 0 or spec.prf_hz <= 0:
        raise ValueError("pulse_width_s and prf_hz must be positive")
    if spec.num_pulses < 1:
        raise ValueError("num_pulses must be >= 1")
    if spec.pulse_width_s * spec.prf_hz > 1.0 + 1e-12:
        raise ValueError(
            f"duty cycle {spec.pulse_width_s * spec.prf_hz:.3f} exceeds 100%"
        )
    window_s = length / sample_rate_hz
    if spec.num_pulses / spec.prf_hz > window_s + 1e-12:
        raise ValueError(
            f"{spec.num_pulses} pulses at PRF {spec.prf_hz:.0f} Hz do not fit "
            f"in the {window_s * 1e6:.1f} us window"
        )
    if spec.kind == "Barker" and spec.barker_length not in BARKER_CODES:
        raise ValueError(f"barker_length must be one of {sorted(BARKER_CODES)}")
    if spec.kind == "Frank" and spec.frank_phases not in (4, 6, 8):
        raise ValueError("frank_phases must be 4, 6 or 8")
    if spec.kind in ("LFM", "SteppedFreq", "NoiseWaveform") and spec.bandwidth_hz <= 0:
        raise ValueError(f"{spec.kind} requires a positive bandwidth_hz")
    if spec.bandwidth_hz > sample_rate_hz:
        raise ValueError("bandwidth_hz exceeds the sample rate")


def _band_limited_noise(n: int, bandwidth_hz: float, sample_rate_hz: float, rng: np.random.Generator) -> np.ndarray:
    """Complex noise with a brick-wall spectrum of the given width, unit power."""
    freqs = np.fft.fftfreq(n, d=1.0 / sample_rate_hz)
    mask = np.abs(freqs) <= bandwidth_hz / 2.0
    spec = np.zeros(n, dtype=np.complex128)
    k = int(np.count_nonzero(mask))
    spec[mask] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    x = np.fft.ifft(spec)
    p = np.mean(np.abs(x) ** 2)
    if p == 0:
        raise ValueError("degenerate band-limited noise (bandwidth below one bin)")
    return x / np.sqrt(p)


def _pulse_baseband(spec: RadarWaveformSpec, pw_n: int, sample_rate_hz: float, rng: np.random.Generator) -> np.ndarray:
    t = np.arange(pw_n) / sample_rate_hz
    if spec.kind == "LFM":
        # Instantaneous frequency sweeps -B/2 .. +B/2 across the pulse.
        pw_s = pw_n / sample_rate_hz
        b = spec.bandwidth_hz
        phase = 2.0 * np.pi * (-0.5 * b * t + b / (2.0 * pw_s) * t**2)
        return np.exp(1j * phase)
    if spec.kind == "Barker":
        code = np.asarray(BARKER_CODES[spec.barker_length], dtype=np.float64)
        chip_n = pw_n // code.size
        return np.repeat(code, chip_n).astype(np.complex128)
    if spec.kind == "Frank":
        m = spec.frank_phases
        i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        phases = 2.0 * np.pi * (i * j) / m
        chip_n = pw_n // (m * m)
        return np.exp(1j * np.repeat(phases.ravel(), chip_n))
    if spec.kind == "SteppedFreq":
        step_n = pw_n // spec.num_steps
        freqs = -spec.bandwidth_hz / 2.0 + (np.arange(spec.num_steps) + 0.5) * (
            spec.bandwidth_hz / spec.num_steps
        )
        # Phase-continuous staircase.
        inst = np.repeat(freqs, step_n)
        phase = 2.0 * np.pi * np.cumsum(inst) / sample_rate_hz
        return np.exp(1j * phase)
    if spec.kind == "Rectangular":
        return np.ones(pw_n, dtype=np.complex128)
    if spec.kind == "NoiseWaveform":
        return _band_limited_noise(pw_n, spec.bandwidth_hz, sample_rate_hz, rng)
    raise ValueError(f"no per-pulse baseband for kind {spec.kind!r}")


def _quantized_pulse_samples(spec: RadarWaveformSpec, sample_rate_hz: float) -> int:
    """Pulse width in samples, re-quantized so phase codes get whole chips."""
    pw_n = max(1, int(round(spec.pulse_width_s * sample_rate_hz)))
    if spec.kind == "Barker":
        code_len = spec.barker_length
        chip = pw_n // code_len
        if chip < 1:
            raise ValueError(f"pulse too short for a Barker-{code_len} code")
        pw_n = chip * code_len
    elif spec.kind == "Frank":
        chips = spec.frank_phases**2
        chip = pw_n // chips
        if chip < 1:
            raise ValueError(f"pulse too short for a Frank code with M={spec.frank_phases}")
        pw_n = chip * chips
    elif spec.kind == "SteppedFreq":
        step = pw_n // spec.num_steps
        if step < 1:
            raise ValueError(f"pulse too short for {spec.num_steps} frequency steps")
        pw_n = step * spec.num_steps
    return pw_n


def gen_radar(
    spec: RadarWaveformSpec,
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ,
    length: int = CANONICAL_LENGTH,
    seed: int = 0,
) -> tuple[IqSignal, SignalMeta]:
    """Synthesize a radar pulse train (or continuous sinusoid) with exact metadata.

    Unit mean power over the active (pulse) samples, scaled by spec.amplitude.
    """
    _validate_radar_spec(spec, sample_rate_hz, length)
    rng = np.random.default_rng(np.random.SeedSequence((0x5AD, seed)))
    n = np.arange(length)

    if spec.kind == "Sinusoid":
        x = np.exp(2j * np.pi * spec.carrier_offset_hz * n / sample_rate_hz)
        x *= spec.amplitude
        meta = SignalMeta(
            domain="radar",
            family="Sinusoid",
            params={
                "carrier_offset_hz": float(spec.carrier_offset_hz),
                "num_pulses": 1,
                "duty_cycle": 1.0,
                "pulse_width_s": length / sample_rate_hz,
            },
        )
        return IqSignal(x, sample_rate_hz), meta

    pri_n = int(round(sample_rate_hz / spec.prf_hz))
    pw_n = _quantized_pulse_samples(spec, sample_rate_hz)
    if pw_n > pri_n:
        raise ValueError(f"pulse width {pw_n} samples exceeds PRI {pri_n} samples")
    if spec.num_pulses * pri_n > length:
        raise ValueError(
            f"{spec.num_pulses} pulses with PRI {pri_n} samples exceed the {length}-sample window"
        )

    pulse = _pulse_baseband(spec, pw_n, sample_rate_hz, rng)
    x = np.zeros(length, dtype=np.complex128)
    for p in range(spec.num_pulses):
        start = p * pri_n
        x[start : start + pw_n] = pulse
    if spec.carrier_offset_hz != 0.0:
        x *= np.exp(2j * np.pi * spec.carrier_offset_hz * n / sample_rate_hz)

    active_power = np.sum(np.abs(x) ** 2) / (spec.num_pulses * pw_n)
    x *= spec.amplitude / np.sqrt(active_power)

    params = {
        "pulse_width_s": pw_n / sample_rate_hz,
        "prf_hz": sample_rate_hz / pri_n,
        "num_pulses": int(spec.num_pulses),
        "duty_cycle": pw_n / pri_n,
        "carrier_offset_hz": float(spec.carrier_offset_hz),
    }
    if spec.kind in ("LFM", "SteppedFreq", "NoiseWaveform"):
        params["bandwidth_hz"] = float(spec.bandwidth_hz)
    if spec.kind == "Barker":
        params["barker_length"] = int(spec.barker_length)
    if spec.kind == "Frank":
        params["frank_phases"] = int(spec.frank_phases)
    meta = SignalMeta(domain="radar", family=spec.kind, params=params)
    return IqSignal(x, sample_rate_hz), meta


# --- comm waveforms ---------------------------------------------------------


def _rrc_taps(sps: int, rolloff: float, span_symbols: int = 8) -> np.ndarray:
    """Root-raised-cosine taps, unit energy, odd length span_symbols*sps + 1."""
    if not 0.0 < rolloff <= 1.0:
        raise ValueError("rolloff must be in (0, 1]")
    n_taps = span_symbols * sps + 1
    t = (np.arange(n_taps) - (n_taps - 1) / 2) / sps  # in symbol periods
    h = np.zeros(n_taps)
    for idx, ti in enumerate(t):
        if np.isclose(ti, 0.0):
            h[idx] = 1.0 - rolloff + 4.0 * rolloff / np.pi
        elif np.isclose(abs(ti), 1.0 / (4.0 * rolloff)):
            h[idx] = (rolloff / np.sqrt(2.0)) * (
                (1 + 2 / np.pi) * np.sin(np.pi / (4 * rolloff))
                + (1 - 2 / np.pi) * np.cos(np.pi / (4 * rolloff))
            )
        else:
            num = np.sin(np.pi * ti * (1 - rolloff)) + 4 * rolloff * ti * np.cos(np.pi * ti * (1 + rolloff))
            den = np.pi * ti * (1 - (4 * rolloff * ti) ** 2)
            h[idx] = num / den
    return h / np.sqrt(np.sum(h**2))


def _gaussian_taps(sps: int, bt: float = 0.35, span_symbols: int = 4) -> np.ndarray:
    n_taps = span_symbols * sps + 1
    t = (np.arange(n_taps) - (n_taps - 1) / 2) / sps
    sigma = np.sqrt(np.log(2.0)) / (2.0 * np.pi * bt)
    h = np.exp(-(t**2) / (2.0 * sigma**2))
    return h / np.sum(h)


def _constellation(kind: str) -> np.ndarray:
    """Symbol alphabet normalized to unit average power."""
    if kind == "BPSK":
        pts = np.array([1.0, -1.0], dtype=np.complex128)
    elif kind == "QPSK":
        pts = np.exp(1j * (np.pi / 4 + np.pi / 2 * np.arange(4)))
    elif kind == "8PSK":
        pts = np.exp(1j * (np.pi / 8 + np.pi / 4 * np.arange(8)))
    elif kind in ("16QAM", "64QAM", "256QAM"):
        m = {"16QAM": 4, "64QAM": 8, "256QAM": 16}[kind]
        levels = np.arange(m) * 2.0 - (m - 1)
        re, im = np.meshgrid(levels, levels, indexing="ij")
        pts = (re + 1j * im).ravel()
    elif kind == "PAM4":
        pts = np.array([-3.0, -1.0, 1.0, 3.0], dtype=np.complex128)
    elif kind == "OOK":
        pts = np.array([0.0, 1.0], dtype=np.complex128)
    else:
        raise ValueError(f"no constellation for kind {kind!r}")
    power = np.mean(np.abs(pts) ** 2)
    if power > 0:
        pts = pts / np.sqrt(power)
    return pts


def _linear_mod(spec: CommWaveformSpec, sample_rate_hz: float, length: int) -> tuple[np.ndarray, dict]:
    sps = spec.samples_per_symbol
    const = _constellation(spec.kind)
    n_sym = length // sps
    if n_sym < 4:
        raise ValueError("window too short for the requested samples_per_symbol")
    rng = np.random.default_rng(np.random.SeedSequence((0xC0DE, spec.seed)))
    idx = rng.integers(0, const.size, size=n_sym)
    for k, sym in enumerate(spec.preamble[: n_sym]):
        idx[k] = sym % const.size
    symbols = const[idx]

    taps = _rrc_taps(sps, spec.rolloff)
    impulses = np.zeros(n_sym * sps, dtype=np.complex128)
    impulses[::sps] = symbols
    shaped = np.convolve(impulses, taps)
    delay = (taps.size - 1) // 2
    x = shaped[delay : delay + length]
    if x.size < length:
        x = np.pad(x, (0, length - x.size))
    params = {
        "modulation": spec.kind,
        "samples_per_symbol": int(sps),
        "symbol_rate_hz": spec.symbol_rate_hz(sample_rate_hz),
        "rolloff": float(spec.rolloff),
        "symbol_seed": int(spec.seed),
        "num_symbols": int(n_sym),
    }
    return x, params


def _freq_mod(spec: CommWaveformSpec, sample_rate_hz: float, length: int) -> tuple[np.ndarray, dict]:
    sps = spec.samples_per_symbol
    n_sym = length // sps
    if n_sym < 4:
        raise ValueError("window too short for the requested samples_per_symbol")
    rng = np.random.default_rng(np.random.SeedSequence((0xC0DE, spec.seed)))
    if spec.kind == "4FSK":
        levels = np.array([-3.0, -1.0, 1.0, 3.0])
        sym = levels[rng.integers(0, 4, size=n_sym)]
        mod_index = 0.5
    else:
        sym = rng.integers(0, 2, size=n_sym) * 2.0 - 1.0
        mod_index = 0.5
    for k, s in enumerate(spec.preamble[: n_sym]):
        sym[k] = (s % 2) * 2.0 - 1.0
    drive = np.repeat(sym, sps)
    if spec.kind == "GFSK":
        drive = np.convolve(drive, _gaussian_taps(sps), mode="same")
    phase = np.pi * mod_index * np.cumsum(drive) / sps
    x = np.exp(1j * phase)
    if x.size < length:
        x = np.pad(x, (0, length - x.size), constant_values=x[-1] if x.size else 0)
    x = x[:length]
    params = {
        "modulation": spec.kind,
        "samples_per_symbol": int(sps),
        "symbol_rate_hz": spec.symbol_rate_hz(sample_rate_hz),
        "symbol_seed": int(spec.seed),
        "num_symbols": int(n_sym),
        "modulation_index": mod_index,
    }
    return x, params


def _analog_message(n: int, bandwidth_hz: float, sample_rate_hz: float, rng: np.random.Generator) -> np.ndarray:
    """Band-limited real message with unit RMS."""
    freqs = np.fft.fftfreq(n, d=1.0 / sample_rate_hz)
    mask = (np.abs(freqs) <= bandwidth_hz) & (np.abs(freqs) > 0)
    spec = np.zeros(n, dtype=np.complex128)
    k = int(np.count_nonzero(mask))
    spec[mask] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    # Hermitian symmetry for a real message.
    m = np.fft.ifft(spec).real
    rms = np.sqrt(np.mean(m**2))
    if rms == 0:
        raise ValueError("degenerate analog message")
    return m / rms


def _analog_mod(spec: CommWaveformSpec, sample_rate_hz: float, length: int) -> tuple[np.ndarray, dict]:
    rng = np.random.default_rng(np.random.SeedSequence((0xC0DE, spec.seed)))
    msg = _analog_message(length, spec.message_bandwidth_hz, sample_rate_hz, rng)
    if spec.kind == "AM-DSB":
        x = (1.0 + 0.5 * msg).astype(np.complex128)
    elif spec.kind == "AM-SSB":
        x = hilbert(msg)  # analytic signal: upper sideband only
    elif spec.kind == "WBFM":
        deviation = 4.0 * spec.message_bandwidth_hz
        phase = 2.0 * np.pi * deviation * np.cumsum(msg) / sample_rate_hz
        x = np.exp(1j * phase)
    else:
        raise ValueError(f"no analog modulator for kind {spec.kind!r}")
    params = {
        "modulation": spec.kind,
        "message_bandwidth_hz": float(spec.message_bandwidth_hz),
        "symbol_seed": int(spec.seed),
    }
    return np.asarray(x, dtype=np.complex128), params


def gen_comm(
    spec: CommWaveformSpec,
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ,
    length: int = CANONICAL_LENGTH,
) -> tuple[IqSignal, SignalMeta]:
    """Synthesize a communication waveform with mean power exactly 1."""
    if spec.kind in LINEAR_MODS:
        x, params = _linear_mod(spec, sample_rate_hz, length)
    elif spec.kind in FREQ_MODS:
        x, params = _freq_mod(spec, sample_rate_hz, length)
    elif spec.kind in ANALOG_MODS:
        x, params = _analog_mod(spec, sample_rate_hz, length)
    else:
        raise ValueError(f"unsupported modulation kind: {spec.kind!r}")
    if spec.samples_per_symbol < 2 and spec.kind not in ANALOG_MODS:
        raise ValueError("samples_per_symbol must be >= 2")
    power = np.mean(np.abs(x) ** 2)
    if power == 0:
        raise ValueError(f"{spec.kind} produced a zero-power waveform")
    x = x / np.sqrt(power)
    meta = SignalMeta(domain="comm", family=spec.kind, params=params)
    return IqSignal(x, sample_rate_hz), meta


def gen_protocol(
    name: str,
    seed: int,
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ,
    length: int = CANONICAL_LENGTH,
) -> tuple[IqSignal, SignalMeta]:
    """Synthesize one of the 8 fixed protocol bundles for the PI task."""
    if name not in PROTOCOL_BUNDLES:
        raise ValueError(f"unknown protocol: {name!r}")
    mod, sps, preamble = PROTOCOL_BUNDLES[name]
    spec = CommWaveformSpec(kind=mod, samples_per_symbol=sps, seed=seed, preamble=preamble)
    signal, meta = gen_comm(spec, sample_rate_hz, length)
    meta.params["protocol"] = name
    return signal, meta


# --- task-driven sampling ---------------------------------------------------


def _sample_pulse_grid(rng: np.random.Generator, length: int, min_pw_n: int = 10) -> tuple[int, int, int]:
    """Draw (pri_n, pw_n, num_pulses) on the sample grid within the spec ranges."""
    pri_lo = max(40, int(np.ceil(min_pw_n / DUTY_RANGE[1])))  # PRF <= 500 kHz at 20 MHz
    pri_hi = 400  # PRF 50 kHz
    for _ in range(64):
        pri_n = int(rng.integers(pri_lo, pri_hi + 1))
        np_max = min(NUM_PULSES_RANGE[1], length // pri_n)
        if np_max < NUM_PULSES_RANGE[0]:
            continue
        num_pulses = int(rng.integers(NUM_PULSES_RANGE[0], np_max + 1))
        pw_lo = max(min_pw_n, int(np.ceil(DUTY_RANGE[0] * pri_n)))
        pw_hi = min(int(DUTY_RANGE[1] * pri_n), 200)
        if pw_lo > pw_hi:
            continue
        pw_n = int(rng.integers(pw_lo, pw_hi + 1))
        return pri_n, pw_n, num_pulses
    raise RuntimeError("failed to sample a feasible pulse grid")


def sample_radar_spec(
    rng: np.random.Generator,
    families: Sequence[str] = ("LFM", "Barker", "Frank", "SteppedFreq", "Rectangular"),
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ,
    length: int = CANONICAL_LENGTH,
) -> RadarWaveformSpec:
    """Random radar spec whose realized parameters stay estimator-friendly."""
    kind = str(rng.choice(list(families)))
    # LFM/stepped minimums keep MIN_TIME_BANDWIDTH feasible below the 8 MHz cap.
    min_pw = {"Frank": 32, "SteppedFreq": 40, "NoiseWaveform": 64, "Barker": 26, "LFM": 40}.get(kind, 10)
    pri_n, pw_n, num_pulses = _sample_pulse_grid(rng, length, min_pw_n=min_pw)
    spec = RadarWaveformSpec(
        kind=kind,
        pulse_width_s=pw_n / sample_rate_hz,
        prf_hz=sample_rate_hz / pri_n,
        num_pulses=num_pulses,
    )
    if kind == "LFM":
        pw_s = pw_n / sample_rate_hz
        b_lo = max(BANDWIDTH_RANGE_HZ[0], MIN_TIME_BANDWIDTH / pw_s)
        b_hi = BANDWIDTH_RANGE_HZ[1]
        if b_lo > b_hi:
            b_lo = b_hi
        spec.bandwidth_hz = rng.uniform(b_lo, b_hi)
    elif kind == "SteppedFreq":
        spec.num_steps = 8
        pw_s = pw_n / sample_rate_hz
        step_s = (pw_n // 8) / sample_rate_hz
        # Keep per-step tones narrower than the span and the overall
        # time-bandwidth product high enough for the occupied-power oracle.
        b_lo = max(1e6, 2.0 / step_s, MIN_TIME_BANDWIDTH / pw_s)
        spec.bandwidth_hz = rng.uniform(min(b_lo, BANDWIDTH_RANGE_HZ[1]), BANDWIDTH_RANGE_HZ[1])
    elif kind == "NoiseWaveform":
        spec.bandwidth_hz = rng.uniform(1e6, BANDWIDTH_RANGE_HZ[1])
    elif kind == "Barker":
        choices = [b for b in sorted(BARKER_CODES) if pw_n // b >= 2]
        spec.barker_length = int(rng.choice(choices))
    elif kind == "Frank":
        choices = [m for m in (4, 6, 8) if pw_n // (m * m) >= 2]
        spec.frank_phases = int(rng.choice(choices)) if choices else 4
    if kind in ("Barker", "Rectangular", "Frank"):
        spec.carrier_offset_hz = float(rng.uniform(-2e6, 2e6))
    return spec


def sample_comm_spec(rng: np.random.Generator, classes: Sequence[str] = MOD_CLASSES) -> CommWaveformSpec:
    kind = str(rng.choice(list(classes)))
    seed = int(rng.integers(0, 2**31 - 1))
    if kind in ANALOG_MODS:
        return CommWaveformSpec(kind=kind, seed=seed, message_bandwidth_hz=float(rng.uniform(0.2e6, 1.0e6)))
    sps = int(rng.choice([4, 8, 16]))
    rolloff = float(rng.uniform(0.2, 0.5))
    return CommWaveformSpec(kind=kind, samples_per_symbol=sps, rolloff=rolloff, seed=seed)


def sample_jam_segment(rng: np.random.Generator, length: int = CANONICAL_LENGTH) -> tuple[int, int]:
    seg_len = int(rng.integers(256, 769))
    start = int(rng.integers(0, length - seg_len + 1))
    return start, start + seg_len


def synth_from_task(
    task_id: str,
    rng: np.random.Generator,
    sample_rate_hz: float = CANONICAL_SAMPLE_RATE_HZ,
    length: int = CANONICAL_LENGTH,
    mod_classes: Optional[Sequence[str]] = None,
) -> tuple[IqSignal, SignalMeta]:
    """Sample a clean (noise-free) signal whose metadata answers the sub-task.

    Jamming tasks return the jammed-but-noiseless signal; AWGN at the labeled
    SNR is applied later by the corpus builder.
    """
    # Imported here to avoid a module cycle: channel depends on waveforms
    # for replica jammers.
    from .channel import RADAR_JAM_KINDS, COMM_JAM_KINDS, JammingSpec, inject_jamming

    if task_id not in TASK_IDS:
        raise ValueError(f"unknown task id: {task_id!r}")

    if task_id == "MOD":
        spec = sample_comm_spec(rng, classes=mod_classes or MOD_CLASSES)
        signal, meta = gen_comm(spec, sample_rate_hz, length)
    elif task_id.startswith("PE."):
        families = ("LFM", "SteppedFreq", "NoiseWaveform") if task_id == "PE.BW" else (
            "LFM", "Barker", "Frank", "SteppedFreq", "Rectangular"
        )
        spec = sample_radar_spec(rng, families=families, sample_rate_hz=sample_rate_hz, length=length)
        signal, meta = gen_radar(spec, sample_rate_hz, length, seed=int(rng.integers(0, 2**31 - 1)))
    elif task_id == "PI":
        name = str(rng.choice(list(PROTOCOL_NAMES)))
        signal, meta = gen_protocol(name, seed=int(rng.integers(0, 2**31 - 1)), sample_rate_hz=sample_rate_hz, length=length)
    elif task_id in ("RJR", "SD", "Anti-RJ", "CJR", "Anti-CJ"):
        # SD pairs comm victims with the 9 comm jamming kinds: continuous
        # envelopes keep the labeled segment energetically identifiable.
        radar_domain = task_id in ("RJR", "Anti-RJ")
        if radar_domain:
            victim_families = ("LFM", "Barker", "NoiseWaveform", "Frank", "Sinusoid", "Rectangular")
            kinds, domain = RADAR_JAM_KINDS, "radar"
        else:
            victim_families = None
            kinds, domain = COMM_JAM_KINDS, "comm"
        jam_kind = str(rng.choice(list(kinds)))
        jsr_db = float(rng.uniform(10.0, 25.0))
        # Replica jammers need victim energy inside the segment; retry with
        # fresh draws when a sparse pulse train leaves the segment empty.
        last_err: Exception | None = None
        for _ in range(20):
            if radar_domain:
                fam = str(rng.choice(list(victim_families)))
                if fam == "Sinusoid":
                    spec_r = RadarWaveformSpec(kind="Sinusoid", carrier_offset_hz=float(rng.uniform(-4e6, 4e6)))
                else:
                    spec_r = sample_radar_spec(rng, families=(fam,), sample_rate_hz=sample_rate_hz, length=length)
                victim, meta = gen_radar(spec_r, sample_rate_hz, length, seed=int(rng.integers(0, 2**31 - 1)))
            else:
                spec_c = sample_comm_spec(rng, classes=("BPSK", "QPSK", "16QAM", "64QAM", "GFSK"))
                victim, meta = gen_comm(spec_c, sample_rate_hz, length)
            segment = sample_jam_segment(rng, length)
            jspec = JammingSpec(domain=domain, kind=jam_kind, jsr_db=jsr_db, segment=segment)
            try:
                signal, meta = inject_jamming(victim, jspec, seed=int(rng.integers(0, 2**31 - 1)), meta=meta)
                break
            except ValueError as err:
                last_err = err
        else:
            raise RuntimeError(f"could not place {jam_kind!r} jamming: {last_err}")
    elif task_id == "RJS":
        fam = str(rng.choice(["LFM", "Barker", "Frank", "SteppedFreq", "Rectangular"]))
        spec_r = sample_radar_spec(rng, families=(fam,), sample_rate_hz=sample_rate_hz, length=length)
        signal, meta = gen_radar(spec_r, sample_rate_hz, length, seed=int(rng.integers(0, 2**31 - 1)))
    elif task_id == "CJS":
        spec_c = sample_comm_spec(rng, classes=("BPSK", "QPSK", "16QAM", "64QAM", "GFSK"))
        signal, meta = gen_comm(spec_c, sample_rate_hz, length)
    else:  # pragma: no cover - TASK_IDS is exhaustive above
        raise ValueError(f"unhandled task id: {task_id!r}")

    meta.task_id = task_id
    return signal, meta
