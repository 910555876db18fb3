"""Stream sources: synthetic generators and text-corpus ingestion.

Two on-disk formats are understood:

* UCI docword ("bag of words"): three header lines D, W, NNZ followed by NNZ
  lines of `docID wordID count` with 1-based ids. Items are words (internal
  id wordID - 1), universe = W.
* FIMI transaction baskets: one transaction per line, whitespace-separated
  non-negative integer item ids, each occurrence counting once. Universe =
  max id + 1 over the whole file.

Either corpus splits into two halves (by document id resp. line index, the
first half taking the extra element when odd), which is how paired streams
for inner-product experiments are made; Whole always equals FirstHalf +
SecondHalf elementwise. Ingestion never holds more than one line plus the
accumulating counts in memory.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import DatasetFormatError
from .theory import FrequencyVector
from .tug_of_war import StreamUpdate


class Split(enum.Enum):
    WHOLE = "whole"
    FIRST_HALF = "first"
    SECOND_HALF = "second"


def generate_synthetic(distinct: int, freq_lo: int, freq_hi: int, seed: int) -> FrequencyVector:
    """Every one of `distinct` items gets a frequency uniform on [lo, hi]."""
    if distinct < 1:
        raise ValueError(f"distinct must be >= 1, got {distinct}")
    if not 1 <= freq_lo <= freq_hi:
        raise ValueError(f"need 1 <= freq_lo <= freq_hi, got [{freq_lo}, {freq_hi}]")
    rng = random.Random(seed)
    return FrequencyVector(rng.randint(freq_lo, freq_hi) for _ in range(distinct))


def _header_int(line: str, path, lineno: int, what: str) -> int:
    try:
        value = int(line.strip())
    except ValueError:
        raise DatasetFormatError(f"{path}:{lineno}: malformed header ({what}): {line!r}") from None
    if value < 0:
        raise DatasetFormatError(f"{path}:{lineno}: negative header value ({what})")
    return value


def load_bag_of_words(path, split: Split = Split.WHOLE) -> FrequencyVector:
    """Word counts over the corpus (or one half of its documents)."""
    with open(path) as fh:
        lines = iter(enumerate(fh, start=1))

        def next_line(what):
            try:
                return next(lines)
            except StopIteration:
                raise DatasetFormatError(f"{path}: missing header line ({what})") from None

        lineno, line = next_line("D")
        docs = _header_int(line, path, lineno, "D")
        lineno, line = next_line("W")
        vocab = _header_int(line, path, lineno, "W")
        lineno, line = next_line("NNZ")
        nnz = _header_int(line, path, lineno, "NNZ")

        half = math.ceil(docs / 2)
        counts = [0] * vocab
        seen = 0
        for lineno, line in lines:
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DatasetFormatError(f"{path}:{lineno}: expected 'docID wordID count'")
            try:
                doc, word, count = (int(p) for p in parts)
            except ValueError:
                raise DatasetFormatError(f"{path}:{lineno}: malformed line: {line.strip()!r}") from None
            if not 1 <= doc <= docs:
                raise DatasetFormatError(f"{path}:{lineno}: docID {doc} out of range [1, {docs}]")
            if not 1 <= word <= vocab:
                raise DatasetFormatError(f"{path}:{lineno}: wordID {word} out of range [1, {vocab}]")
            if count < 0:
                raise DatasetFormatError(f"{path}:{lineno}: negative count")
            seen += 1
            if split is Split.FIRST_HALF and doc > half:
                continue
            if split is Split.SECOND_HALF and doc <= half:
                continue
            counts[word - 1] += count
        if seen != nnz:
            raise DatasetFormatError(f"{path}: header promises {nnz} entries, found {seen}")
    return FrequencyVector(counts)


def load_fimi(path, split: Split = Split.WHOLE) -> FrequencyVector:
    """Item occurrence counts over the baskets (or one half of the lines).

    The universe (max id + 1) always comes from the whole file so the two
    halves stay elementwise compatible.
    """
    total_lines = 0
    max_id = -1
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            total_lines += 1
            for col, token in enumerate(line.split(), start=1):
                try:
                    item = int(token)
                except ValueError:
                    raise DatasetFormatError(
                        f"{path}:{lineno}: malformed token {token!r} (column {col})"
                    ) from None
                if item < 0:
                    raise DatasetFormatError(
                        f"{path}:{lineno}: negative item id {item} (column {col})"
                    )
                max_id = max(max_id, item)
    counts = [0] * (max_id + 1)
    half = math.ceil(total_lines / 2)
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if split is Split.FIRST_HALF and lineno > half:
                continue
            if split is Split.SECOND_HALF and lineno <= half:
                continue
            for token in line.split():
                counts[int(token)] += 1
    return FrequencyVector(counts)


@dataclass(frozen=True)
class StreamSpec:
    """Declarative stream source, the `stream` object of experiment configs.

    kind 'synthetic' takes distinct / freq_lo / freq_hi / seed; kinds 'bow'
    and 'fimi' take path / split. declared_universe pads the vector with
    zero-count items up to a larger universe (the F2 control variate sums
    over the declared universe).
    """

    kind: str
    distinct: int = 0
    freq_lo: int = 1
    freq_hi: int = 1
    seed: int = 0
    path: Optional[str] = None
    split: Split = Split.WHOLE
    declared_universe: Optional[int] = None

    @classmethod
    def from_dict(cls, raw: dict) -> "StreamSpec":
        kind = raw.get("kind")
        if kind not in ("synthetic", "bow", "fimi"):
            raise ValueError(f"stream kind must be synthetic|bow|fimi, got {kind!r}")
        if kind == "synthetic":
            return cls(
                kind=kind,
                distinct=int(raw["distinct"]),
                freq_lo=int(raw.get("freq_lo", 1)),
                freq_hi=int(raw.get("freq_hi", 1)),
                seed=int(raw.get("seed", 0)),
                declared_universe=raw.get("declared_universe"),
            )
        return cls(
            kind=kind,
            path=raw["path"],
            split=Split(raw.get("split", "whole")),
            declared_universe=raw.get("declared_universe"),
        )

    def to_dict(self) -> dict:
        if self.kind == "synthetic":
            out = {
                "kind": self.kind,
                "distinct": self.distinct,
                "freq_lo": self.freq_lo,
                "freq_hi": self.freq_hi,
                "seed": self.seed,
            }
        else:
            out = {"kind": self.kind, "path": self.path, "split": self.split.value}
        if self.declared_universe is not None:
            out["declared_universe"] = self.declared_universe
        return out

    def load(self) -> FrequencyVector:
        if self.kind == "synthetic":
            vec = generate_synthetic(self.distinct, self.freq_lo, self.freq_hi, self.seed)
        elif self.kind == "bow":
            vec = load_bag_of_words(self.path, self.split)
        else:
            vec = load_fimi(self.path, self.split)
        if self.declared_universe is not None:
            vec = pad_universe(vec, self.declared_universe)
        return vec


def pad_universe(v: FrequencyVector, universe: int) -> FrequencyVector:
    """Re-declare the universe, padding new items with zero counts."""
    if universe < v.universe:
        raise ValueError(
            f"declared universe {universe} smaller than the vector's {v.universe}"
        )
    if universe == v.universe:
        return v
    return FrequencyVector(v.counts + (0,) * (universe - v.universe))


def as_updates(v: FrequencyVector, shuffle_seed: Optional[int] = None) -> Iterator[StreamUpdate]:
    """One update per nonzero item, by item id or in a seeded shuffle.

    Sketches are order-independent, so both orders produce identical
    counters.
    """
    items = [i for i, c in enumerate(v.counts) if c]
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(items)
    return (StreamUpdate(item=i, delta=v.counts[i]) for i in items)
