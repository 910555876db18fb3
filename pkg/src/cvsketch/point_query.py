"""Count-min and count-sketch point-frequency queries with CV corrections.

Both sketches keep t rows of k counters with independent 2-universal bucket
hashes per row. A count-min row answers with its counter (an overestimate on
non-negative streams, min taken across rows); a count-sketch row answers
g(a) * counter (unbiased, median across rows).

The control variate for a query item a is stream-independent and computable
by inspecting the hash row: for count-min, Z = |{j : h(j) = h(a)}| with
E[Z] = 1 + (n-1)/k; for count-sketch, Z = g(a) * sum of g(j) over colliding
j with E[Z] = 1. Both give the coefficient -(||f||_1 - f_a)/(n - 1). The
analysis is per row; the correction is applied to each row independently and
the rows are then combined with the sketch's native min / median, and both
the raw and corrected combines are reported (a corrected row may undershoot,
so the overestimate guarantee is not claimed for the corrected value).
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kernels
from .control_variates import CvEstimate, CvMomentSpec, cv_correct
from .errors import ItemOutOfRangeError
from .hashing import BUCKET_DEGREE, PolyHashFamily, derive_seed, new_family


@dataclass(frozen=True)
class PointQueryCvResult:
    """Row-corrected point query: native combine of raw and corrected rows,
    plus the per-row correction bundles."""

    raw: float
    corrected: float
    rows: tuple[CvEstimate, ...]

    @property
    def coefficient(self) -> float:
        """Median of the per-row coefficients (they differ only under the
        per-row raw proxy)."""
        return statistics.median(r.coefficient for r in self.rows)

    @property
    def cv_value(self) -> float:
        return statistics.median(r.cv_value for r in self.rows)


def table_params(epsilon: float, delta: float, *, count_sketch: bool = False) -> tuple[int, int]:
    """(k buckets, t rows) from an accuracy/confidence target.

    count-min: k = ceil(2 / epsilon); count-sketch: k = ceil(3 / epsilon^2);
    both: t = ceil(log2(1 / delta)). Floors of k = 2 and t = 1 apply.
    """
    if not 0 < epsilon or not 0 < delta < 1:
        raise ValueError("need epsilon > 0 and 0 < delta < 1")
    k = math.ceil(3 / epsilon**2) if count_sketch else math.ceil(2 / epsilon)
    t = math.ceil(math.log2(1 / delta))
    return max(2, k), max(1, t)


class _TableSketch:
    """Shared table plumbing for the two point-query sketches."""

    def __init__(self, buckets: int, rows: int, universe: int, seed: int = 0):
        if buckets < 2:
            raise ValueError(f"need at least 2 buckets, got {buckets}")
        if rows < 1:
            raise ValueError(f"need at least 1 row, got {rows}")
        if universe < 1:
            raise ValueError(f"universe must be >= 1, got {universe}")
        self.buckets = buckets
        self.rows = rows
        self.universe = universe
        self.seed = seed
        self.row_hashes = [
            new_family(BUCKET_DEGREE, buckets, universe, derive_seed(seed, r))
            for r in range(rows)
        ]
        self.table = [[0] * buckets for _ in range(rows)]
        self._z_cache: dict[tuple[int, int], int] = {}

    def _check_item(self, item: int) -> None:
        if not 0 <= item < self.universe:
            raise ItemOutOfRangeError(f"item {item} outside universe [0, {self.universe})")

    def _collision_count(self, row: int, a: int) -> int:
        """Z for count-min: how many universe items share a's bucket (a too).

        Stream-independent, so cached per (row, item) for the sketch's life.
        """
        key = (row, a)
        if key not in self._z_cache:
            h = self.row_hashes[row]
            if isinstance(h, PolyHashFamily):
                z = kernels.bucket_collision_count(
                    h.coefficients, h.prime, h.range, self.universe, a
                )
            else:
                target = h(a)
                z = sum(1 for j in range(self.universe) if h(j) == target)
            self._z_cache[key] = z
        return self._z_cache[key]

    def _state_dict(self) -> dict:
        return {
            "params": {
                "buckets": self.buckets,
                "rows": self.rows,
                "universe": self.universe,
            },
            "seed": self.seed,
            "counters": self.table,
        }

    @classmethod
    def _restore(cls, state: dict):
        params = state["params"]
        sketch = cls(params["buckets"], params["rows"], params["universe"], state["seed"])
        counters = state["counters"]
        if len(counters) != sketch.rows or any(len(r) != sketch.buckets for r in counters):
            raise ValueError("counter table shape does not match params")
        sketch.table = [list(r) for r in counters]
        return sketch

    def to_json(self) -> str:
        return json.dumps(self._state_dict())

    @classmethod
    def from_json(cls, text: str):
        return cls._restore(json.loads(text))


class CountMinSketch(_TableSketch):
    """t x k table of non-negative-stream counters; query = min over rows."""

    def update(self, item: int, delta: int = 1) -> None:
        self._check_item(item)
        for r, h in enumerate(self.row_hashes):
            self.table[r][h(item)] += delta

    def row_estimate(self, row: int, a: int) -> int:
        return self.table[row][self.row_hashes[row](a)]

    def query(self, a: int) -> int:
        """Min over rows; >= f_a on non-negative streams."""
        self._check_item(a)
        return min(self.row_estimate(r, a) for r in range(self.rows))

    def cv_moments(self, f1: float, fa_proxy: float) -> CvMomentSpec:
        """Single-row moments: Cov = ((||f||_1 - f_a)/k)(1 - 1/k),
        Var[Z] = ((n-1)/k)(1 - 1/k), E[Z] = 1 + (n-1)/k."""
        n, k = self.universe, self.buckets
        shrink = (1 / k) * (1 - 1 / k)
        return CvMomentSpec(
            cov_xz=(f1 - fa_proxy) * shrink,
            var_z=(n - 1) * shrink,
            mean_z=1 + (n - 1) / k,
        )

    def cv_query(self, a: int, f1: float, fa_proxy: Optional[float] = None) -> PointQueryCvResult:
        """Correct each row with c = -(||f||_1 - f_a)/(n-1), then take mins.

        fa_proxy None uses each row's own raw estimate as the f_a stand-in;
        a float pins the ground-truth coefficient for validation.
        """
        self._check_item(a)
        if self.universe < 2:
            raise ValueError("control variate needs a universe of at least 2")
        bundles = []
        for r in range(self.rows):
            x = self.row_estimate(r, a)
            z = self._collision_count(r, a)
            spec = self.cv_moments(f1, x if fa_proxy is None else fa_proxy)
            bundles.append(cv_correct(x, spec, z))
        return PointQueryCvResult(
            raw=min(b.raw for b in bundles),
            corrected=min(b.corrected for b in bundles),
            rows=tuple(bundles),
        )


class CountSketch(_TableSketch):
    """t x k table of signed counters; query = median of g(a) * counter."""

    def __init__(self, buckets: int, rows: int, universe: int, seed: int = 0):
        super().__init__(buckets, rows, universe, seed)
        # independent sign hashes, seeded apart from the bucket hashes
        self.row_signs = [
            new_family(BUCKET_DEGREE, 2, universe, derive_seed(seed, 10_000 + r))
            for r in range(rows)
        ]

    def _sign(self, row: int, item: int) -> int:
        return 2 * self.row_signs[row](item) - 1

    def update(self, item: int, delta: int = 1) -> None:
        self._check_item(item)
        for r, h in enumerate(self.row_hashes):
            self.table[r][h(item)] += delta * self._sign(r, item)

    def row_estimate(self, row: int, a: int) -> int:
        return self._sign(row, a) * self.table[row][self.row_hashes[row](a)]

    def query(self, a: int) -> float:
        """Median over rows (mean of the central two when t is even)."""
        self._check_item(a)
        return statistics.median(self.row_estimate(r, a) for r in range(self.rows))

    def _signed_collision_sum(self, row: int, a: int) -> int:
        key = (row, a)
        if key not in self._z_cache:
            h = self.row_hashes[row]
            g = self.row_signs[row]
            if isinstance(h, PolyHashFamily) and isinstance(g, PolyHashFamily):
                z = kernels.signed_collision_sum(
                    h.coefficients, g.coefficients, h.prime, h.range, self.universe, a
                )
            else:
                target = h(a)
                total = sum(
                    self._sign(row, j) for j in range(self.universe) if h(j) == target
                )
                z = self._sign(row, a) * total
            self._z_cache[key] = z
        return self._z_cache[key]

    def cv_moments(self, f1: float, fa_proxy: float) -> CvMomentSpec:
        """Single-row moments: Cov = (||f||_1 - f_a)/k, Var[Z] = (n-1)/k,
        E[Z] = 1."""
        n, k = self.universe, self.buckets
        return CvMomentSpec(
            cov_xz=(f1 - fa_proxy) / k,
            var_z=(n - 1) / k,
            mean_z=1.0,
        )

    def cv_query(self, a: int, f1: float, fa_proxy: Optional[float] = None) -> PointQueryCvResult:
        """Correct each row with c = -(||f||_1 - f_a)/(n-1), then medians."""
        self._check_item(a)
        if self.universe < 2:
            raise ValueError("control variate needs a universe of at least 2")
        bundles = []
        for r in range(self.rows):
            x = self.row_estimate(r, a)
            z = self._signed_collision_sum(r, a)
            spec = self.cv_moments(f1, x if fa_proxy is None else fa_proxy)
            bundles.append(cv_correct(x, spec, z))
        return PointQueryCvResult(
            raw=statistics.median(b.raw for b in bundles),
            corrected=statistics.median(b.corrected for b in bundles),
            rows=tuple(bundles),
        )


def stream_into(sketch, updates: Sequence) -> None:
    """Feed StreamUpdate-like (item, delta) pairs into a table sketch."""
    for u in updates:
        sketch.update(u.item, u.delta)
