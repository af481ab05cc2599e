"""Deterministic instruction/answer rendering for all 14 sub-tasks.

Each task has several instruction paraphrases (selected by the caller's rng)
that state the task and embed the sampling rate and SNR; the response is the
canonical ground-truth string so that exact string matching is well defined.
Reasoning answers come from a fixed strategy table shipped as package data.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from .channel import jam_kind_label
from .waveforms import REASONING_TASKS, TASK_IDS, SignalMeta

SIGNIFICANT_DIGITS = 4


@lru_cache(maxsize=1)
def strategy_table() -> dict:
    raw = resources.files("embench.data").joinpath("strategies.json").read_text()
    return json.loads(raw)


def format_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed significant digits with trailing zeros trimmed: 5.0 -> '5'."""
    return f"{float(value):.{digits}g}"


def _require(meta: SignalMeta, *fields: str) -> dict:
    values = {}
    for name in fields:
        if name == "snr_db":
            value = meta.snr_db
        elif name == "jamming_kind":
            value = meta.jamming_kind
        elif name == "jam_segment":
            value = meta.jam_segment
        else:
            value = meta.params.get(name)
        if value is None:
            raise ValueError(f"meta is missing required field {name!r}")
        values[name] = value
    return values


def anti_jamming_strategy(domain: str, jamming_kind: str) -> str:
    table = strategy_table()["anti_jamming"].get(domain, {})
    if jamming_kind not in table:
        raise ValueError(f"no anti-jamming strategy for {domain}/{jamming_kind!r}")
    return table[jamming_kind]


def jamming_strategy(domain: str, victim_kind: str) -> str:
    table = strategy_table()["jamming_strategy"].get(domain, {})
    if victim_kind not in table:
        raise ValueError(f"no jamming strategy against {domain}/{victim_kind!r}")
    return table[victim_kind]


def gold_answer(task_id: str, meta: SignalMeta) -> str:
    """Canonical ground-truth answer string for a task, derived from meta alone."""
    if task_id == "MOD":
        return str(_require(meta, "modulation")["modulation"])
    if task_id == "PE.BW":
        bw = _require(meta, "bandwidth_hz")["bandwidth_hz"]
        return f"{format_sig(bw / 1e6)} MHz"
    if task_id == "PE.DC":
        dc = _require(meta, "duty_cycle")["duty_cycle"]
        return f"{format_sig(dc * 100.0)} %"
    if task_id == "PE.NoP":
        return str(int(_require(meta, "num_pulses")["num_pulses"]))
    if task_id == "PE.PRF":
        prf = _require(meta, "prf_hz")["prf_hz"]
        return f"{format_sig(prf / 1e3)} kHz"
    if task_id == "PE.PW":
        pw = _require(meta, "pulse_width_s")["pulse_width_s"]
        return f"{format_sig(pw * 1e6)} µs"
    if task_id == "PI":
        return str(_require(meta, "protocol")["protocol"])
    if task_id in ("RJR", "CJR"):
        return jam_kind_label(_require(meta, "jamming_kind")["jamming_kind"])
    if task_id == "SD":
        seg = _require(meta, "jam_segment")["jam_segment"]
        return f"samples {int(seg[0])} to {int(seg[1])}"
    if task_id in ("Anti-RJ", "Anti-CJ"):
        kind = _require(meta, "jamming_kind")["jamming_kind"]
        return anti_jamming_strategy(meta.domain, kind)
    if task_id in ("RJS", "CJS"):
        key = meta.family if meta.domain == "radar" else meta.params.get("modulation")
        if key is None:
            raise ValueError("meta is missing required field 'modulation'")
        return jamming_strategy(meta.domain, str(key))
    raise ValueError(f"unknown task id: {task_id!r}")


def gold_numeric(task_id: str, meta: SignalMeta):
    """Numeric value behind the gold answer, or None for categorical tasks."""
    if task_id == "PE.BW":
        return meta.params["bandwidth_hz"]
    if task_id == "PE.DC":
        return meta.params["duty_cycle"]
    if task_id == "PE.NoP":
        return float(meta.params["num_pulses"])
    if task_id == "PE.PRF":
        return meta.params["prf_hz"]
    if task_id == "PE.PW":
        return meta.params["pulse_width_s"]
    return None


_TASK_QUESTIONS = {
    "MOD": (
        "Identify the modulation scheme of this emission.",
        "Which modulation class is present in the capture?",
        "Classify the modulation type carried by the signal.",
        "Determine what modulation the transmitter is using.",
    ),
    "PE.BW": (
        "Estimate the occupied bandwidth of the signal.",
        "What bandwidth does this waveform sweep?",
        "Report the signal bandwidth.",
    ),
    "PE.DC": (
        "Estimate the transmit duty cycle of the pulse train.",
        "What fraction of time is the emitter transmitting, as a duty cycle?",
        "Report the duty cycle of this pulsed signal.",
    ),
    "PE.NoP": (
        "Count the number of pulses present in the capture window.",
        "How many pulses does the window contain?",
        "Report the pulse count for this capture.",
    ),
    "PE.PRF": (
        "Estimate the pulse repetition frequency.",
        "At what rate do the pulses repeat?",
        "Report the PRF of the pulse train.",
    ),
    "PE.PW": (
        "Estimate the pulse width of the emission.",
        "How long is each transmitted pulse?",
        "Report the pulse width.",
    ),
    "PI": (
        "Identify the transmission protocol of this link.",
        "Which protocol bundle does this emission belong to?",
        "Name the signal protocol in use.",
    ),
    "RJR": (
        "Identify the type of radar jamming affecting this signal.",
        "Which radar jamming technique is present?",
        "Classify the jamming observed against this radar emission.",
    ),
    "CJR": (
        "Identify the type of communication jamming affecting this link.",
        "Which communication jamming technique is present?",
        "Classify the interference observed on this communication signal.",
    ),
    "SD": (
        "Locate the jammed segment: report its start and end sample indices.",
        "Which sample range of the capture is affected by the interference?",
        "Report the start and end points of the interfered segment.",
    ),
    "Anti-RJ": (
        "The radar is affected by {jam_label} jamming. Propose an anti-jamming strategy.",
        "Given the {jam_label} interference on this radar, recommend countermeasures.",
        "Suggest how the radar should be protected against the identified {jam_label} jamming.",
    ),
    "Anti-CJ": (
        "The link suffers {jam_label} jamming. Propose an anti-jamming strategy.",
        "Given the {jam_label} interference on this communication signal, recommend countermeasures.",
        "Suggest how the receiver should mitigate the identified {jam_label} jamming.",
    ),
    "RJS": (
        "The capture shows a {victim} radar emission. Propose an effective jamming strategy against it.",
        "Recommend a jamming technique suited to this {victim} radar waveform.",
        "As the jammer, how would you attack this {victim} radar signal?",
    ),
    "CJS": (
        "The capture shows a {victim} communication signal. Propose an effective jamming strategy against it.",
        "Recommend a jamming technique suited to this {victim} link.",
        "As the jammer, how would you attack this {victim} transmission?",
    ),
}

_PREFIXES = (
    "The following IQ capture was recorded at {rate} MHz with an estimated SNR of {snr} dB.",
    "You are given an IQ recording (sampling rate {rate} MHz, SNR {snr} dB).",
    "Consider this baseband IQ sequence sampled at {rate} MHz; the SNR is about {snr} dB.",
    "An IQ snapshot taken at {rate} MHz and roughly {snr} dB SNR follows.",
)


def render_question(task_id: str, meta: SignalMeta, rng: np.random.Generator) -> str:
    """Instruction text: a context prefix (rate, SNR) plus a task question."""
    if task_id not in TASK_IDS:
        raise ValueError(f"unknown task id: {task_id!r}")
    snr = _require(meta, "snr_db")["snr_db"]
    rate_mhz = format_sig(meta.params.get("sample_rate_hz", 20e6) / 1e6)
    prefix = _PREFIXES[int(rng.integers(0, len(_PREFIXES)))]
    question = _TASK_QUESTIONS[task_id][int(rng.integers(0, len(_TASK_QUESTIONS[task_id])))]
    if task_id in ("Anti-RJ", "Anti-CJ"):
        kind = _require(meta, "jamming_kind")["jamming_kind"]
        question = question.format(jam_label=jam_kind_label(kind))
    elif task_id in ("RJS", "CJS"):
        victim = meta.family if meta.domain == "radar" else meta.params.get("modulation", meta.family)
        question = question.format(victim=victim)
    return prefix.format(rate=rate_mhz, snr=f"{snr:.1f}") + " " + question


def render_template(task_id: str, meta: SignalMeta, rng: np.random.Generator) -> tuple[str, str]:
    """(instruction_text, response_text) for one sample.

    The instruction paraphrase is drawn by rng; the response is the canonical
    ground-truth string, fully determined by the metadata.
    """
    instruction = render_question(task_id, meta, rng)
    response = gold_answer(task_id, meta)
    return instruction, response


def is_reasoning_task(task_id: str) -> bool:
    return task_id in REASONING_TASKS
