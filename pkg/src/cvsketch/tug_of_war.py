"""The tug-of-war sketch: one signed counter driven by a +-1 item hash.

Processing an update (j, c) adds c * sign(j) to the counter, so after a
stream with net frequencies f the counter holds sum_j f_j * sign(j). Squaring
it estimates the second frequency moment; the product of two counters built
on one shared sign hash estimates the inner product of two streams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ItemOutOfRangeError, MismatchedHashError
from .hashing import SignHash, sign_hash

_I64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class StreamUpdate:
    """One turnstile update: item id plus a signed count delta."""

    item: int
    delta: int


def _same_hash(a: object, b: object) -> bool:
    # identity for shared handles; structural equality covers sketches that
    # were serialized and rebuilt from the same seed
    return a is b or a == b


class TugOfWarSketch:
    """Single-counter sketch bound to a sign hash over [0, universe).

    Single-writer: interleave updates and reads from one thread at a time.
    Independent copies (distinct seeds) are free to run in parallel.
    """

    __slots__ = ("hash", "universe", "counter")

    def __init__(self, hash: SignHash, universe: int):
        if universe < 1:
            raise ValueError(f"universe must be >= 1, got {universe}")
        self.hash = hash
        self.universe = universe
        self.counter = 0

    @classmethod
    def with_seed(cls, universe: int, seed: int, degree: int = 4) -> "TugOfWarSketch":
        return cls(sign_hash(universe, seed, degree), universe)

    @classmethod
    def from_vector(cls, hash: SignHash, counts: Sequence[int]) -> "TugOfWarSketch":
        """Sketch of a whole frequency vector in one pass (kernel fast path)."""
        sketch = cls(hash, len(counts))
        if isinstance(hash, SignHash):
            arr = np.ascontiguousarray(counts, dtype=np.int64)
            sketch.counter = kernels.tow_counter_dense(
                hash.inner.coefficients, hash.inner.prime, arr
            )
        else:  # duck-typed sign providers (test stubs, enumerated signs)
            sketch.counter = sum(
                int(c) * hash.sign(i) for i, c in enumerate(counts) if c
            )
        return sketch

    @classmethod
    def pair_from_vectors(
        cls, hash: SignHash, f_counts: Sequence[int], g_counts: Sequence[int]
    ) -> tuple["TugOfWarSketch", "TugOfWarSketch"]:
        """Two sketches sharing one hash, hashing each item once."""
        if isinstance(hash, SignHash):
            f_arr = np.ascontiguousarray(f_counts, dtype=np.int64)
            g_arr = np.ascontiguousarray(g_counts, dtype=np.int64)
            cf, cg = kernels.ip_trial(
                hash.inner.coefficients, hash.inner.prime, f_arr, g_arr
            )
            sf = cls(hash, len(f_counts))
            sg = cls(hash, len(g_counts))
            sf.counter, sg.counter = cf, cg
            return sf, sg
        return cls.from_vector(hash, f_counts), cls.from_vector(hash, g_counts)

    def update(self, item: int, delta: int = 1) -> None:
        """Process one update: counter += delta * sign(item)."""
        if not 0 <= item < self.universe:
            raise ItemOutOfRangeError(
                f"item {item} outside universe [0, {self.universe})"
            )
        counter = self.counter + delta * self.hash.sign(item)
        if not -_I64_MAX - 1 <= counter <= _I64_MAX:
            raise OverflowError("sketch counter left the 64-bit range")
        self.counter = counter

    def update_many(self, updates: Iterable[StreamUpdate]) -> None:
        for u in updates:
            self.update(u.item, u.delta)

    def estimate_f2(self) -> int:
        """Counter squared: unbiased for F2 with variance 2(F2^2 - F4)."""
        return self.counter * self.counter

    def to_json(self) -> str:
        """State as {seed, degree, universe, counter} for CLI persistence."""
        if not isinstance(self.hash, SignHash):
            raise TypeError("only seed-backed sketches serialize")
        return json.dumps(
            {
                "seed": self.hash.seed,
                "degree": self.hash.degree,
                "universe": self.universe,
                "counter": self.counter,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TugOfWarSketch":
        state = json.loads(text)
        sketch = cls.with_seed(state["universe"], state["seed"], state["degree"])
        sketch.counter = state["counter"]
        return sketch


def estimate_ip(sf: TugOfWarSketch, sg: TugOfWarSketch) -> int:
    """Product of two counters sharing one hash: unbiased for <f, g>."""
    if not _same_hash(sf.hash, sg.hash) or sf.universe != sg.universe:
        raise MismatchedHashError(
            "inner-product estimation needs sketches sharing one sign hash"
        )
    return sf.counter * sg.counter


def merge(a: TugOfWarSketch, b: TugOfWarSketch) -> TugOfWarSketch:
    """Sketch of the concatenated streams; counters add by linearity."""
    if not _same_hash(a.hash, b.hash) or a.universe != b.universe:
        raise MismatchedHashError("merging needs sketches sharing one sign hash")
    out = TugOfWarSketch(a.hash, a.universe)
    counter = a.counter + b.counter
    if not -_I64_MAX - 1 <= counter <= _I64_MAX:
        raise OverflowError("merged counter left the 64-bit range")
    out.counter = counter
    return out
