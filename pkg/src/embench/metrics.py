"""Scoring: letter-accuracy for single-choice items, ROUGE-L and BLEU for
open-ended strategy answers, reported per sub-task with a per-SNR-bin
accuracy breakdown.

Tokenization for the text metrics is fixed: lowercase, split on
non-alphanumeric characters. BLEU is sentence-level with uniform 1-4 gram
weights, brevity penalty, and add-one smoothing on zero-count precisions for
n >= 2.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .bench import SNR_BIN_EDGES, load_bench
from .storage import read_jsonl
from .waveforms import PERCEPTION_TASKS, REASONING_TASKS

_CHOICE_RE = re.compile(r"\b([A-Ea-e])\b")
_TOKEN_RE = re.compile(r"[a-z0-9]+")


def extract_choice(response_text: str) -> Optional[str]:
    """First standalone letter A-E (case-insensitive), or None."""
    m = _CHOICE_RE.search(response_text)
    return m.group(1).upper() if m else None


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    # Standard O(len(a)*len(b)) dynamic program, two rows.
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate_tokens: Sequence[str], reference_tokens: Sequence[str]) -> tuple[float, float, float]:
    """(precision, recall, f1) from the longest common subsequence."""
    if len(reference_tokens) == 0:
        raise ValueError("empty reference")
    if len(candidate_tokens) == 0:
        return (0.0, 0.0, 0.0)
    lcs = _lcs_length(candidate_tokens, reference_tokens)
    precision = lcs / len(candidate_tokens)
    recall = lcs / len(reference_tokens)
    if precision + recall == 0:
        return (0.0, 0.0, 0.0)
    f1 = 2.0 * precision * recall / (precision + recall)
    return (precision, recall, f1)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate_tokens: Sequence[str], reference_tokens: Sequence[str], max_n: int = 4) -> float:
    """Sentence BLEU: clipped n-gram precision geometric mean times brevity penalty.

    Zero-count precisions for n >= 2 get add-one smoothing; a zero unigram
    precision keeps the whole score at 0.
    """
    if len(reference_tokens) == 0:
        raise ValueError("empty reference")
    if len(candidate_tokens) == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand = _ngrams(candidate_tokens, n)
        ref = _ngrams(reference_tokens, n)
        total = sum(cand.values())
        clipped = sum(min(c, ref[g]) for g, c in cand.items())
        if clipped == 0 and n >= 2:
            precision = 1.0 / (total + 1.0)
        elif total == 0:
            precision = 0.0  # can only happen for n == 1 on empty input
        else:
            precision = clipped / total
        if precision == 0.0:
            return 0.0
        log_sum += math.log(precision) / max_n
    bp = 1.0
    if len(candidate_tokens) < len(reference_tokens):
        bp = math.exp(1.0 - len(reference_tokens) / len(candidate_tokens))
    return bp * math.exp(log_sum)


@dataclass
class MetricReport:
    """Per-task metrics plus the per-SNR-bin accuracy breakdown."""

    accuracy: dict = field(default_factory=dict)  # task -> float, perception only
    rouge_l_f: dict = field(default_factory=dict)  # task -> float, reasoning only
    bleu: dict = field(default_factory=dict)  # task -> float, reasoning only
    macro_avg_accuracy: float = 0.0
    snr_bins: list = field(default_factory=list)  # rows: task, bin_low, bin_high, n, accuracy
    num_items: int = 0

    def to_dict(self) -> dict:
        return {
            "accuracy": dict(sorted(self.accuracy.items())),
            "rouge_l_f": dict(sorted(self.rouge_l_f.items())),
            "bleu": dict(sorted(self.bleu.items())),
            "macro_avg_accuracy": self.macro_avg_accuracy,
            "num_items": self.num_items,
            "snr_bins": self.snr_bins,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def snr_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["task_id", "snr_bin_low_db", "snr_bin_high_db", "n", "accuracy"])
        for row in self.snr_bins:
            writer.writerow(row)
        return buf.getvalue()


def score_items(items: Sequence[dict], responses: dict[str, str]) -> MetricReport:
    """Score a full response set against bench items.

    Perception: exact gold-letter match (no letter, or 'Unable to answer',
    scores 0 because the gold is never E by construction). Reasoning: mean
    ROUGE-L F and BLEU against the reference text.
    """
    missing = [it["id"] for it in items if it["id"] not in responses]
    if missing:
        raise ValueError(f"responses missing {len(missing)} item ids: {missing[:5]}...")

    acc_counts: dict[str, list[int]] = {}
    rouge_sums: dict[str, list[float]] = {}
    bleu_sums: dict[str, list[float]] = {}
    bin_counts: dict[tuple[str, int], list[int]] = {}

    for item in items:
        task = item["task_id"]
        text = responses[item["id"]]
        if task in PERCEPTION_TASKS:
            choice = extract_choice(text)
            correct = int(choice is not None and choice == item["gold"])
            acc_counts.setdefault(task, [0, 0])
            acc_counts[task][0] += correct
            acc_counts[task][1] += 1
            key = (task, int(item["snr_bin"]))
            bin_counts.setdefault(key, [0, 0])
            bin_counts[key][0] += correct
            bin_counts[key][1] += 1
        elif task in REASONING_TASKS:
            cand = tokenize(text)
            ref = tokenize(item["gold"])
            _, _, f1 = rouge_l(cand, ref)
            rouge_sums.setdefault(task, []).append(f1)
            bleu_sums.setdefault(task, []).append(bleu(cand, ref))
        else:
            raise ValueError(f"unknown task {task!r} in bench items")

    report = MetricReport(num_items=len(items))
    for task, (good, total) in acc_counts.items():
        report.accuracy[task] = good / total
    for task, vals in rouge_sums.items():
        report.rouge_l_f[task] = sum(vals) / len(vals)
    for task, vals in bleu_sums.items():
        report.bleu[task] = sum(vals) / len(vals)
    if report.accuracy:
        report.macro_avg_accuracy = sum(report.accuracy.values()) / len(report.accuracy)
    for (task, b), (good, total) in sorted(bin_counts.items()):
        report.snr_bins.append(
            [task, SNR_BIN_EDGES[b], SNR_BIN_EDGES[b + 1], total, good / total]
        )
    return report


def load_responses(path: str | Path) -> dict[str, str]:
    """Responses file: JSONL of {"id": ..., "text": ...}."""
    out = {}
    for rec in read_jsonl(path):
        out[rec["id"]] = rec["text"]
    return out


def evaluate_run(bench_dir: str | Path, responses_path: str | Path, out_dir: str | Path | None = None) -> MetricReport:
    """Score a responses file against a bench directory; optionally write
    report.json and snr_bins.csv under out_dir."""
    items = load_bench(bench_dir)
    responses = load_responses(responses_path)
    report = score_items(items, responses)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
        (out / "snr_bins.csv").write_text(report.snr_csv())
    return report
