"""Evaluation benchmark construction: 300 items per sub-task by default,
single-choice (A-E) for the ten perception tasks and constrained open-ended
strategy questions for the four reasoning tasks.

Perception options hold the gold answer, three distractors sampled from the
gold answers of other items of the same task, and the fixed option E
"Unable to answer". SNR is stratified over [-20, 20] dB in 5 dB bins so
accuracy can be reported per bin.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from functools import partial
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .channel import add_awgn
from .signal_core import CANONICAL_SAMPLE_RATE_HZ, IqSignal
from .storage import dump_json, parallel_map, sha256_bytes, write_manifest, read_jsonl
from .templates import gold_answer, gold_numeric, render_question
from .waveforms import PERCEPTION_TASKS, REASONING_TASKS, TASK_IDS, SignalMeta, synth_from_task

UNABLE_OPTION = "Unable to answer"
OPTION_LETTERS = ("A", "B", "C", "D")
SNR_BIN_EDGES = tuple(float(x) for x in range(-20, 25, 5))  # eight 5 dB bins
NUMERIC_DISTRACTOR_MIN_REL = 0.10
SEGMENT_DISTRACTOR_MIN_SAMPLES = 64


@dataclass
class BenchConfig:
    out_dir: str
    seed: int = 0
    per_task: int = 300
    tasks: Sequence[str] = TASK_IDS
    mod_classes: Optional[Sequence[str]] = None
    workers: int = 1

    def echo(self) -> dict:
        d = asdict(self)
        d["tasks"] = list(self.tasks)
        d["mod_classes"] = list(self.mod_classes) if self.mod_classes else None
        return d


@dataclass
class BenchItem:
    id: str
    task_id: str
    question_text: str
    signal_ref: str
    options: Optional[dict]  # {"A": ..., "E": "Unable to answer"} or None
    gold: str  # option letter for perception, reference text for reasoning
    snr_db: float
    snr_bin: int
    meta: dict

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "task_id": self.task_id,
            "question_text": self.question_text,
            "signal_ref": self.signal_ref,
            "options": self.options,
            "gold": self.gold,
            "snr_db": self.snr_db,
            "snr_bin": self.snr_bin,
            "meta": self.meta,
        }


def snr_bin_index(snr_db: float) -> int:
    idx = int(np.searchsorted(SNR_BIN_EDGES, snr_db, side="right")) - 1
    return int(np.clip(idx, 0, len(SNR_BIN_EDGES) - 2))


def _distractor_ok(task_id: str, gold_num, cand_num, gold_str: str, cand_str: str) -> bool:
    if cand_str == gold_str:
        return False
    if task_id == "SD":
        # Segments must be distinguishable by more than the detector tolerance.
        ds = abs(cand_num[0] - gold_num[0])
        de = abs(cand_num[1] - gold_num[1])
        return max(ds, de) >= SEGMENT_DISTRACTOR_MIN_SAMPLES
    if gold_num is not None and cand_num is not None:
        denom = max(abs(gold_num), 1e-12)
        return abs(cand_num - gold_num) / denom >= NUMERIC_DISTRACTOR_MIN_REL - 1e-9
    return True


def build_choice_item(
    task_id: str,
    signal_ref: str,
    meta: SignalMeta,
    answer_pool: Sequence[tuple[str, object]],
    rng: np.random.Generator,
    item_id: str,
    question_text: Optional[str] = None,
) -> BenchItem:
    """Single-choice item: gold + 3 pool distractors shuffled into A-D, E fixed.

    answer_pool holds (answer_string, numeric_value) tuples drawn from the
    gold answers of other items of the same task.
    """
    gold_str = gold_answer(task_id, meta)
    gold_num = meta.jam_segment if task_id == "SD" else gold_numeric(task_id, meta)

    distractors: list[str] = []
    tries = 0
    order = rng.permutation(len(answer_pool))
    for idx in order:
        cand_str, cand_num = answer_pool[int(idx)]
        tries += 1
        if cand_str in distractors:
            continue
        if _distractor_ok(task_id, gold_num, cand_num, gold_str, cand_str):
            distractors.append(cand_str)
        if len(distractors) == 3:
            break
    if len(distractors) < 3:
        raise ValueError(
            f"answer pool for {task_id} too small to draw 3 valid distractors "
            f"(pool {len(answer_pool)}, found {len(distractors)})"
        )

    texts = [gold_str] + distractors
    perm = rng.permutation(4)
    options = {letter: texts[int(perm[k])] for k, letter in enumerate(OPTION_LETTERS)}
    options["E"] = UNABLE_OPTION
    gold_letter = OPTION_LETTERS[int(np.flatnonzero(perm == 0)[0])]

    if question_text is None:
        question_text = render_question(task_id, meta, rng)
    return BenchItem(
        id=item_id,
        task_id=task_id,
        question_text=question_text,
        signal_ref=signal_ref,
        options=options,
        gold=gold_letter,
        snr_db=float(meta.snr_db),
        snr_bin=snr_bin_index(float(meta.snr_db)),
        meta=meta.to_dict(),
    )


def build_reasoning_item(
    task_id: str,
    signal_ref: str,
    meta: SignalMeta,
    rng: np.random.Generator,
    item_id: str,
) -> BenchItem:
    """Open-ended strategy item; the gold is the strategy-table reference text."""
    if task_id not in REASONING_TASKS:
        raise ValueError(f"{task_id!r} is not a reasoning task")
    reference = gold_answer(task_id, meta)  # raises on unknown kind
    question_text = render_question(task_id, meta, rng)
    return BenchItem(
        id=item_id,
        task_id=task_id,
        question_text=question_text,
        signal_ref=signal_ref,
        options=None,
        gold=reference,
        snr_db=float(meta.snr_db),
        snr_bin=snr_bin_index(float(meta.snr_db)),
        meta=meta.to_dict(),
    )


def _make_bench_signal(spec: tuple, config: BenchConfig) -> tuple[dict, bytes]:
    """Worker: synthesize one bench signal with its stratified SNR."""
    task_id, index, master_seed = spec
    ss = np.random.SeedSequence((master_seed, 0xBE, TASK_IDS.index(task_id), index))
    rng = np.random.default_rng(ss)
    n_bins = len(SNR_BIN_EDGES) - 1
    bin_idx = index % n_bins
    snr_db = float(rng.uniform(SNR_BIN_EDGES[bin_idx], SNR_BIN_EDGES[bin_idx + 1]))
    clean, meta = synth_from_task(task_id, rng, mod_classes=config.mod_classes)
    noisy = add_awgn(clean, snr_db, seed=int(rng.integers(0, 2**63 - 1)))
    meta = meta.with_snr(snr_db)
    meta.params["sample_rate_hz"] = CANONICAL_SAMPLE_RATE_HZ
    item_id = f"b-{task_id}-{index:06d}"
    payload = {
        "item_id": item_id,
        "task_id": task_id,
        "index": index,
        "signal_ref": f"signals/{task_id}/{item_id}.iq",
        "meta": meta.to_dict(),
    }
    return payload, noisy.to_bytes()


def build_bench(config: BenchConfig) -> dict:
    """Construct the benchmark; returns the manifest dict."""
    if config.per_task <= 0:
        raise ValueError("per_task must be positive")
    unknown = set(config.tasks) - set(TASK_IDS)
    if unknown:
        raise ValueError(f"unknown tasks in config: {sorted(unknown)}")
    out = Path(config.out_dir)

    specs = [
        (task_id, index, config.seed)
        for task_id in config.tasks
        for index in range(config.per_task)
    ]
    results = parallel_map(partial(_make_bench_signal, config=config), specs, config.workers)

    by_task: dict[str, list[tuple[dict, bytes]]] = {t: [] for t in config.tasks}
    for payload, iq in results:
        by_task[payload["task_id"]].append((payload, iq))

    items: list[BenchItem] = []
    chunks: list[bytes] = []
    for task_id in config.tasks:
        rows = by_task[task_id]
        (out / "signals" / task_id).mkdir(parents=True, exist_ok=True)
        metas = [SignalMeta.from_dict(p["meta"]) for p, _ in rows]
        golds = [gold_answer(task_id, m) for m in metas]
        nums = [m.jam_segment if task_id == "SD" else gold_numeric(task_id, m) for m in metas]
        for k, (payload, iq) in enumerate(rows):
            (out / payload["signal_ref"]).write_bytes(iq)
            chunks.append(iq)
            rng = np.random.default_rng(
                np.random.SeedSequence((config.seed, 0x17E4, TASK_IDS.index(task_id), k))
            )
            if task_id in PERCEPTION_TASKS:
                pool = [(golds[j], nums[j]) for j in range(len(rows)) if j != k]
                item = build_choice_item(
                    task_id, payload["signal_ref"], metas[k], pool, rng, payload["item_id"]
                )
            else:
                item = build_reasoning_item(
                    task_id, payload["signal_ref"], metas[k], rng, payload["item_id"]
                )
            items.append(item)

    jsonl_bytes = "".join(dump_json(i.to_dict()) + "\n" for i in items).encode("utf-8")
    (out / "bench.jsonl").write_bytes(jsonl_bytes)
    manifest = {
        "type": "bench",
        "schema_version": 1,
        "seed": config.seed,
        "num_items": len(items),
        "per_task_counts": {t: config.per_task for t in config.tasks},
        "snr_bin_edges": list(SNR_BIN_EDGES),
        "content_hash": sha256_bytes(jsonl_bytes, *chunks),
        "config": config.echo(),
    }
    write_manifest(out, manifest)
    return manifest


def load_bench(bench_dir: str | Path) -> list[dict]:
    return read_jsonl(Path(bench_dir) / "bench.jsonl")


def validate_bench_item(item: dict) -> None:
    """Schema/invariant check for one serialized bench item; raises on violation."""
    required = {"id", "task_id", "question_text", "signal_ref", "options", "gold", "snr_db", "snr_bin", "meta"}
    missing = required - set(item)
    if missing:
        raise AssertionError(f"{item.get('id')}: missing fields {sorted(missing)}")
    task_id = item["task_id"]
    if task_id in PERCEPTION_TASKS:
        opts = item["options"]
        if opts is None or sorted(opts) != ["A", "B", "C", "D", "E"]:
            raise AssertionError(f"{item['id']}: perception item needs options A-E")
        if opts["E"] != UNABLE_OPTION:
            raise AssertionError(f"{item['id']}: option E must be {UNABLE_OPTION!r}")
        if item["gold"] not in OPTION_LETTERS:
            raise AssertionError(f"{item['id']}: gold letter {item['gold']!r} invalid")
        meta = SignalMeta.from_dict(item["meta"])
        truth = gold_answer(task_id, meta)
        values = [opts[letter] for letter in OPTION_LETTERS]
        if values.count(truth) != 1 or opts[item["gold"]] != truth:
            raise AssertionError(f"{item['id']}: gold answer must appear exactly once")
        if len(set(values)) != 4:
            raise AssertionError(f"{item['id']}: options A-D must be distinct")
    elif task_id in REASONING_TASKS:
        if item["options"] is not None:
            raise AssertionError(f"{item['id']}: reasoning item must not have options")
        if not item["gold"]:
            raise AssertionError(f"{item['id']}: empty reference text")
    else:
        raise AssertionError(f"{item['id']}: unknown task {task_id!r}")
