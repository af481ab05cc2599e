"""Closed answer vocabulary and tokenizer for the signal-to-text model.

Numbers tokenize digit by digit (with '.' and '%' as their own tokens) so
parameter answers are genuine multi-token sequences; label names, unit words
and question keywords are single tokens. Everything else maps to <unk>.
"""

from __future__ import annotations

import re

PAD, UNK, EOS = "<pad>", "<unk>", "<eos>"

_TOKEN_RE = re.compile(r"%|\d|\.|[a-zµ][a-z0-9µ]*")

_WORDS = (
    # digits and punctuation used in numeric answers
    [str(d) for d in range(10)] + [".", "%"]
    # units and connectors
    + ["µs", "mhz", "khz", "hz", "db", "samples", "to"]
    # modulation labels (multi-word labels split into these pieces)
    + ["bpsk", "qpsk", "psk", "qam", "gfsk", "cpfsk", "pam4", "am", "dsb",
       "ssb", "wbfm", "ook", "fsk"]
    # radar waveform families
    + ["lfm", "barker", "frank", "steppedfreq", "rectangular", "noisewaveform", "sinusoid"]
    # protocol bundle names
    + ["telemetry", "beacon", "command", "datalink", "satcom", "broadcast", "relay", "pager"]
    # jamming kind words
    + ["spot", "noise", "barrage", "swept", "comb", "spectrum", "false", "target",
       "targets", "dense", "range", "gate", "pull", "off", "velocity", "deception",
       "interrupted", "sampling", "smart", "narrowband", "cw", "chirp", "slice",
       "single", "tone", "multitone", "broadband", "pulsed", "follower", "modulated",
       "carrier"]
    # question keywords (pooled question context)
    + ["modulation", "bandwidth", "duty", "cycle", "pulse", "pulses", "width",
       "repetition", "frequency", "protocol", "jamming", "segment", "strategy",
       "radar", "communication", "identify", "estimate", "report", "count",
       "start", "end", "snr", "iq", "signal", "interference", "anti", "unable",
       "answer"]
)


def build_vocab() -> tuple[str, ...]:
    seen: list[str] = [PAD, UNK, EOS]
    for w in _WORDS:
        if w not in seen:
            seen.append(w)
    return tuple(seen)


VOCAB = build_vocab()
TOKEN_TO_ID = {t: i for i, t in enumerate(VOCAB)}
PAD_ID = TOKEN_TO_ID[PAD]
UNK_ID = TOKEN_TO_ID[UNK]
EOS_ID = TOKEN_TO_ID[EOS]


def tokenize_text(text: str, vocab_map: dict[str, int] | None = None) -> list[int]:
    """Token ids without an EOS; unknown words map to <unk>."""
    table = TOKEN_TO_ID if vocab_map is None else vocab_map
    unk = table[UNK]
    return [table.get(tok, unk) for tok in _TOKEN_RE.findall(text.lower())]


def tokenize_answer(text: str, vocab_map: dict[str, int] | None = None) -> list[int]:
    """Token ids for an answer sequence, EOS-terminated."""
    table = TOKEN_TO_ID if vocab_map is None else vocab_map
    return tokenize_text(text, table) + [table[EOS]]


def detokenize(ids, vocab: tuple[str, ...] = VOCAB) -> str:
    words = []
    for i in ids:
        tok = vocab[int(i)]
        if tok == EOS:
            break
        if tok != PAD:
            words.append(tok)
    return " ".join(words)
