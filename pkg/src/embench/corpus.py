"""Instruction corpus and parallel distillation dataset builders.

Layout of a corpus directory:

    corpus.jsonl          one InstructionSample per line
    signals/<id>.iq       float32 interleaved IQ, one file per sample
    manifest.json         per-task counts, seed, config echo, content hash

A KD dataset directory mirrors this with kd.jsonl holding (high, low, Q, A)
tuples plus replay entries copied from a stage-1 corpus. All generation is a
pure function of (config, seed): per-item randomness is derived from the item
index, so worker count never changes the output bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from functools import partial
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .channel import add_awgn, make_snr_pair
from .signal_core import CANONICAL_SAMPLE_RATE_HZ, IqSignal, read_iq, write_iq
from .storage import dump_json, parallel_map, read_jsonl, read_manifest, sha256_bytes, write_manifest
from .templates import gold_answer, render_template
from .waveforms import TASK_IDS, SignalMeta, synth_from_task

SCHEMA_VERSION = 1


@dataclass
class CorpusConfig:
    out_dir: str
    seed: int = 0
    per_task: int = 100
    tasks: Sequence[str] = TASK_IDS
    snr_range_db: tuple[float, float] = (-20.0, 20.0)
    mod_classes: Optional[Sequence[str]] = None
    workers: int = 1

    def echo(self) -> dict:
        d = asdict(self)
        d["tasks"] = list(self.tasks)
        d["mod_classes"] = list(self.mod_classes) if self.mod_classes else None
        d["snr_range_db"] = list(self.snr_range_db)
        return d


@dataclass
class KdDataConfig:
    out_dir: str
    corpus_dir: str  # stage-1 corpus used for replay entries
    seed: int = 0
    n_pairs: int = 1000
    replay_fraction: float = 0.2
    snr_high_range_db: tuple[float, float] = (0.0, 20.0)
    snr_low_range_db: tuple[float, float] = (-20.0, 0.0)
    tasks: Sequence[str] = ("MOD",)
    mod_classes: Optional[Sequence[str]] = None
    workers: int = 1

    def echo(self) -> dict:
        d = asdict(self)
        d["tasks"] = list(self.tasks)
        d["mod_classes"] = list(self.mod_classes) if self.mod_classes else None
        d["snr_high_range_db"] = list(self.snr_high_range_db)
        d["snr_low_range_db"] = list(self.snr_low_range_db)
        return d


def _make_instruction_sample(spec: tuple, config: CorpusConfig) -> tuple[dict, bytes]:
    """Worker: one (record, iq_bytes) pair, fully determined by the spec tuple."""
    task_id, index, master_seed = spec
    ss = np.random.SeedSequence((master_seed, TASK_IDS.index(task_id), index))
    rng = np.random.default_rng(ss)
    clean, meta = synth_from_task(task_id, rng, mod_classes=config.mod_classes)
    snr_db = float(rng.uniform(*config.snr_range_db))
    noisy = add_awgn(clean, snr_db, seed=int(rng.integers(0, 2**63 - 1)))
    meta = meta.with_snr(snr_db)
    meta.params["sample_rate_hz"] = CANONICAL_SAMPLE_RATE_HZ
    instruction, response = render_template(task_id, meta, rng)
    sample_id = f"c-{task_id}-{index:06d}"
    record = {
        "id": sample_id,
        "task_id": task_id,
        "signal_ref": f"signals/{sample_id}.iq",
        "conversation": [{"instruction_text": instruction, "response_text": response}],
        "meta": meta.to_dict(),
    }
    return record, noisy.to_bytes()


def build_corpus(config: CorpusConfig) -> dict:
    """Generate the instruction corpus; returns the manifest dict."""
    if config.per_task <= 0:
        raise ValueError("per_task must be positive")
    unknown = set(config.tasks) - set(TASK_IDS)
    if unknown:
        raise ValueError(f"unknown tasks in config: {sorted(unknown)}")
    out = Path(config.out_dir)
    (out / "signals").mkdir(parents=True, exist_ok=True)

    specs = [
        (task_id, index, config.seed)
        for task_id in config.tasks
        for index in range(config.per_task)
    ]
    results = parallel_map(partial(_make_instruction_sample, config=config), specs, config.workers)

    hasher_chunks: list[bytes] = []
    records = []
    for (record, iq_bytes) in results:
        (out / record["signal_ref"]).write_bytes(iq_bytes)
        records.append(record)
        hasher_chunks.append(iq_bytes)
    jsonl_bytes = "".join(dump_json(r) + "\n" for r in records).encode("utf-8")
    (out / "corpus.jsonl").write_bytes(jsonl_bytes)

    manifest = {
        "type": "corpus",
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "num_samples": len(records),
        "per_task_counts": {t: config.per_task for t in config.tasks},
        "content_hash": sha256_bytes(jsonl_bytes, *hasher_chunks),
        "config": config.echo(),
    }
    write_manifest(out, manifest)
    return manifest


def load_corpus(corpus_dir: str | Path) -> list[dict]:
    """Records from a corpus directory (signals stay on disk)."""
    return read_jsonl(Path(corpus_dir) / "corpus.jsonl")


def load_signal(root: str | Path, ref: str) -> IqSignal:
    return read_iq(Path(root) / ref)


def _make_kd_pair(spec: tuple, config: KdDataConfig) -> tuple[dict, bytes, bytes]:
    index, master_seed = spec
    ss = np.random.SeedSequence((master_seed, 0x4B44, index))
    rng = np.random.default_rng(ss)
    task_id = str(rng.choice(list(config.tasks)))
    clean, meta = synth_from_task(task_id, rng, mod_classes=config.mod_classes)
    snr_high = float(rng.uniform(*config.snr_high_range_db))
    snr_low = float(rng.uniform(*config.snr_low_range_db))
    pair = make_snr_pair(clean, snr_high, snr_low, seed=int(rng.integers(0, 2**63 - 1)))
    # The question describes the student's view of the pair.
    meta = meta.with_snr(snr_low)
    meta.params["sample_rate_hz"] = CANONICAL_SAMPLE_RATE_HZ
    question, answer = render_template(task_id, meta, rng)
    pair_id = f"k-{index:06d}"
    record = {
        "id": pair_id,
        "task_id": task_id,
        "high_ref": f"signals/{pair_id}.high.iq",
        "low_ref": f"signals/{pair_id}.low.iq",
        "question_text": question,
        "answer_text": answer,
        "is_replay": False,
        "snr_high_db": snr_high,
        "snr_low_db": snr_low,
        "meta": meta.to_dict(),
    }
    return record, pair.high.to_bytes(), pair.low.to_bytes()


def build_kd_dataset(config: KdDataConfig) -> dict:
    """Parallel (I_high, I_low, Q, A) pairs plus replayed stage-1 samples."""
    if not 0.0 <= config.replay_fraction < 1.0:
        raise ValueError("replay_fraction must be in [0, 1)")
    lo, hi = config.snr_high_range_db
    if not (0.0 <= lo <= hi <= 20.0):
        raise ValueError("snr_high_range_db must lie within [0, 20]")
    lo, hi = config.snr_low_range_db
    if not (-20.0 <= lo <= hi < 0.0 or (-20.0 <= lo < hi <= 0.0)):
        raise ValueError("snr_low_range_db must lie within [-20, 0)")
    if config.n_pairs <= 0:
        raise ValueError("n_pairs must be positive")

    out = Path(config.out_dir)
    (out / "signals").mkdir(parents=True, exist_ok=True)
    n_replay = int(round(config.replay_fraction * config.n_pairs))
    n_fresh = config.n_pairs - n_replay

    specs = [(index, config.seed) for index in range(n_fresh)]
    results = parallel_map(partial(_make_kd_pair, config=config), specs, config.workers)

    records = []
    chunks: list[bytes] = []
    for record, high_bytes, low_bytes in results:
        (out / record["high_ref"]).write_bytes(high_bytes)
        (out / record["low_ref"]).write_bytes(low_bytes)
        records.append(record)
        chunks.append(high_bytes)
        chunks.append(low_bytes)

    if n_replay > 0:
        corpus_records = load_corpus(config.corpus_dir)
        if len(corpus_records) < n_replay:
            raise ValueError(
                f"corpus has {len(corpus_records)} samples, cannot replay {n_replay}"
            )
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, 0x5250)))
        chosen = rng.choice(len(corpus_records), size=n_replay, replace=False)
        for j, corpus_idx in enumerate(sorted(int(c) for c in chosen)):
            src = corpus_records[corpus_idx]
            replay_id = f"k-replay-{j:06d}"
            ref = f"signals/{replay_id}.iq"
            iq_bytes = (Path(config.corpus_dir) / src["signal_ref"]).read_bytes()
            (out / ref).write_bytes(iq_bytes)
            turn = src["conversation"][0]
            records.append({
                "id": replay_id,
                "task_id": src["task_id"],
                "high_ref": ref,
                "low_ref": ref,
                "question_text": turn["instruction_text"],
                "answer_text": turn["response_text"],
                "is_replay": True,
                "snr_high_db": src["meta"].get("snr_db"),
                "snr_low_db": src["meta"].get("snr_db"),
                "meta": src["meta"],
            })
            chunks.append(iq_bytes)

    jsonl_bytes = "".join(dump_json(r) + "\n" for r in records).encode("utf-8")
    (out / "kd.jsonl").write_bytes(jsonl_bytes)
    manifest = {
        "type": "kd",
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "n_pairs": config.n_pairs,
        "n_fresh": n_fresh,
        "n_replay": n_replay,
        "content_hash": sha256_bytes(jsonl_bytes, *chunks),
        "config": config.echo(),
    }
    write_manifest(out, manifest)
    return manifest


def load_kd_dataset(kd_dir: str | Path) -> list[dict]:
    return read_jsonl(Path(kd_dir) / "kd.jsonl")


def check_corpus_consistency(corpus_dir: str | Path, limit: Optional[int] = None) -> int:
    """Re-render every response from stored metadata and compare.

    Returns the number of checked samples; raises on the first mismatch.
    """
    records = load_corpus(corpus_dir)
    if limit is not None:
        records = records[:limit]
    for rec in records:
        meta = SignalMeta.from_dict(rec["meta"])
        expected = gold_answer(rec["task_id"], meta)
        got = rec["conversation"][0]["response_text"]
        if expected != got:
            raise AssertionError(f"{rec['id']}: response {got!r} != re-rendered {expected!r}")
    return len(records)
