"""Closed-form moments and variance-reduction formulas.

Everything here is computed from exact ground-truth frequency vectors in
wide-integer arithmetic, with floats only at the reporting boundary. These
formulas feed coefficient computation, the ratio sweeps behind the headline
variance-ratio figures, and the cross-checks against the enumeration oracle.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .control_variates import IpMomentMode, _ordered_pair_sums


class Moments(NamedTuple):
    f0: int
    f1: int
    f2: int
    f4: int


class FrequencyVector:
    """Exact per-item counts over the universe [0, n): the ground truth that
    oracles, coefficients and reports are measured against."""

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[int]):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise ValueError("frequency counts must be non-negative")
        self.counts = counts

    @property
    def universe(self) -> int:
        return len(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, item: int) -> int:
        return self.counts[item]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FrequencyVector) and self.counts == other.counts

    def __repr__(self) -> str:
        return f"FrequencyVector(n={self.universe}, f1={sum(self.counts)})"

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    def to_csv(self, path) -> None:
        """Two-column `item,count` CSV, one row per universe item."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["item", "count"])
            for item, count in enumerate(self.counts):
                writer.writerow([item, count])

    @classmethod
    def from_csv(cls, path) -> "FrequencyVector":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["item", "count"]:
                raise ValueError(f"expected 'item,count' header, got {header}")
            counts = []
            for row in reader:
                item, count = int(row[0]), int(row[1])
                if item != len(counts):
                    raise ValueError(f"non-contiguous item id {item}")
                counts.append(count)
        return cls(counts)


def moments(v: FrequencyVector) -> Moments:
    """F0 (strictly-positive entries), F1, F2 and F4, exactly."""
    f0 = f1 = f2 = f4 = 0
    for c in v.counts:
        if c > 0:
            f0 += 1
        f1 += c
        sq = c * c
        f2 += sq
        f4 += sq * sq
    return Moments(f0, f1, f2, f4)


def inner_product(f: FrequencyVector, g: FrequencyVector) -> int:
    if f.universe != g.universe:
        raise ValueError("vectors must share a universe")
    return sum(a * b for a, b in zip(f.counts, g.counts))


def ams_f2_variance(v: FrequencyVector) -> int:
    """Variance 2 (F2^2 - F4) of the single-copy tug-of-war F2 estimator."""
    m = moments(v)
    return 2 * (m.f2 * m.f2 - m.f4)


def ip_variance(f: FrequencyVector, g: FrequencyVector) -> int:
    """Variance of the inner-product estimator over ordered pairs,
    sum_{i != j} f_i^2 g_j^2 + sum_{i != j} f_i g_i f_j g_j, in O(n)."""
    if f.universe != g.universe:
        raise ValueError("vectors must share a universe")
    f2 = g2 = ip = f2g2 = 0
    for fi, gi in zip(f.counts, g.counts):
        f2 += fi * fi
        g2 += gi * gi
        ip += fi * gi
        f2g2 += fi * fi * gi * gi
    return (f2 * g2 - f2g2) + (ip * ip - f2g2)


@dataclass(frozen=True)
class VarianceReport:
    """Raw-estimator variance against its control-variate reduction.

    ratio is cv_var / ams_var (1.0 for a degenerate zero-variance raw
    estimator). cv_var < 0 is not asserted away; negative_cv_var flags it
    for the caller instead.
    """

    ams_var: float
    cv_reduction: float
    cv_var: float
    ratio: float

    @property
    def negative_cv_var(self) -> bool:
        return self.cv_var < 0


def _make_report(ams_var, reduction) -> VarianceReport:
    ams_f = float(ams_var)
    red_f = float(reduction)
    cv_f = ams_f - red_f
    ratio = cv_f / ams_f if ams_f > 0 else 1.0
    return VarianceReport(ams_var=ams_f, cv_reduction=red_f, cv_var=cv_f, ratio=ratio)


def f2_cv_report(v: FrequencyVector) -> VarianceReport:
    """Reduction 2 (F1^2 - F2)^2 / (F0 (F0 - 1)); zero when F0 < 2.

    The reduction is Cov^2 / Var[Z] with Cov = 2 (F1^2 - F2) and
    Var[Z] = 2 F0 (F0 - 1), the enumeration-exact control-variate moments.
    """
    m = moments(v)
    ams = 2 * (m.f2 * m.f2 - m.f4)
    if m.f0 < 2:
        reduction = Fraction(0)
    else:
        num = m.f1 * m.f1 - m.f2
        reduction = Fraction(2 * num * num, m.f0 * (m.f0 - 1))
    return _make_report(ams, reduction)


def ip_cv_report(
    f2: float,
    g2: float,
    ip: float,
    mode: IpMomentMode = IpMomentMode.GAUSSIAN,
    fvec: Optional[FrequencyVector] = None,
    gvec: Optional[FrequencyVector] = None,
) -> VarianceReport:
    """Inner-product variance report in one consistent moment mode.

    Gaussian mode pairs the limit reduction 2 (ip (F2+G2))^2 / (2 ip^2 +
    F2^2 + G2^2) with the limit estimator variance F2 G2 + ip^2, keeping the
    ratio inside [0, 1]. Exact mode derives both sides from the vectors.
    """
    if mode is IpMomentMode.GAUSSIAN:
        denom = 2 * ip * ip + f2 * f2 + g2 * g2
        reduction = 0.0 if denom == 0 else 2 * (ip * (f2 + g2)) ** 2 / denom
        ams = f2 * g2 + ip * ip
        return _make_report(ams, reduction)
    if fvec is None or gvec is None:
        raise ValueError("exact-mode report needs both frequency vectors")
    cov, var_z = _ordered_pair_sums(fvec.counts, gvec.counts)
    reduction = Fraction(0) if var_z == 0 else Fraction(cov * cov, var_z)
    return _make_report(ip_variance(fvec, gvec), reduction)


@dataclass(frozen=True)
class SweepRow:
    sweep: str
    param1: float
    param2: float
    ams_var: float
    cv_reduction: float
    cv_var: float
    ratio: float


SWEEP_CSV_HEADER = ["sweep", "param1", "param2", "ams_var", "cv_reduction", "cv_var", "ratio"]


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for r in rows:
            writer.writerow(
                [r.sweep, repr(float(r.param1)), repr(float(r.param2)),
                 repr(r.ams_var), repr(r.cv_reduction), repr(r.cv_var), repr(r.ratio)]
            )


def ratio_sweep_f2(
    distinct: int = 1000,
    freq_caps: Sequence[int] = (1, 2, 5, 10, 20, 50, 100),
    seed: int = 0,
) -> list[SweepRow]:
    """Variance ratio cv/ams as item frequencies grow at fixed n.

    Each point samples frequencies uniformly on [1, cap] (so the x-axis
    F1/n sweeps upward with cap) and evaluates the closed forms.
    param1 = F1/n, param2 = cap.
    """
    rows = []
    for idx, cap in enumerate(freq_caps):
        rng = random.Random((seed << 20) ^ idx)
        v = FrequencyVector([rng.randint(1, cap) for _ in range(distinct)])
        rep = f2_cv_report(v)
        m = moments(v)
        rows.append(
            SweepRow("f2", m.f1 / v.universe, float(cap),
                     rep.ams_var, rep.cv_reduction, rep.cv_var, rep.ratio)
        )
    return rows


def make_angled_pair(
    distinct: int,
    theta_deg: float,
    norm_ratio: float,
    seed: int,
    freq_hi: int = 100,
    max_attempts: int = 100,
) -> tuple[FrequencyVector, FrequencyVector]:
    """Integer vector pair with a prescribed angle and F2/G2 ratio.

    f occupies the first half of the universe with entries uniform on
    [1, freq_hi]; g is built from cos(theta) * f-direction plus sin(theta)
    times a positive direction on the disjoint second half, scaled so that
    F2/G2 hits norm_ratio, then rounded to non-negative integers. Rounding
    is accepted only within |cos angle - cos theta| <= 0.02 and 2% on the
    norm ratio; otherwise the pair is resampled.
    """
    if distinct < 2:
        raise ValueError("need a universe of at least 2 to split support")
    theta = math.radians(theta_deg)
    half = distinct // 2
    for attempt in range(max_attempts):
        rng = random.Random((seed << 24) ^ attempt)
        f = np.zeros(distinct)
        f[:half] = [rng.randint(1, freq_hi) for _ in range(half)]
        ortho = np.zeros(distinct)
        ortho[half:] = [rng.uniform(0.5, 1.0) * freq_hi for _ in range(distinct - half)]
        u = f / np.linalg.norm(f)
        v = ortho / np.linalg.norm(ortho)
        target_norm = np.linalg.norm(f) / math.sqrt(norm_ratio)
        g_real = target_norm * (math.cos(theta) * u + math.sin(theta) * v)
        g = np.maximum(np.rint(g_real), 0.0)
        fv = FrequencyVector(int(c) for c in f)
        gv = FrequencyVector(int(c) for c in g)
        mg = moments(gv)
        mf = moments(fv)
        if mg.f2 == 0:
            continue
        cos_angle = inner_product(fv, gv) / math.sqrt(mf.f2 * mg.f2)
        if abs(cos_angle - math.cos(theta)) > 0.02:
            continue
        if abs(mf.f2 / mg.f2 - norm_ratio) > 0.02 * norm_ratio:
            continue
        return fv, gv
    raise RuntimeError(
        f"no admissible pair for theta={theta_deg}, ratio={norm_ratio} "
        f"after {max_attempts} attempts"
    )


def ratio_sweep_ip(
    distinct: int = 1000,
    thetas_deg: Sequence[float] = (10.0, 30.0, 60.0, 90.0),
    norm_ratios: Sequence[float] = (0.1, 0.4, 0.7, 1.0),
    seed: int = 0,
    freq_hi: int = 100,
) -> list[SweepRow]:
    """Gaussian-mode cv/ams ratio over an (angle, norm-ratio) grid.

    param1 = theta in degrees, param2 = F2/G2 target. At 90 degrees the
    supports are disjoint, the inner product is exactly zero and the ratio
    is exactly 1.0.
    """
    rows = []
    for ti, theta in enumerate(thetas_deg):
        for ri, ratio in enumerate(norm_ratios):
            f, g = make_angled_pair(
                distinct, theta, ratio, seed=(seed << 8) ^ (ti * 97 + ri), freq_hi=freq_hi
            )
            rep = ip_cv_report(
                moments(f).f2, moments(g).f2, inner_product(f, g), IpMomentMode.GAUSSIAN
            )
            rows.append(
                SweepRow("ip", float(theta), float(ratio),
                         rep.ams_var, rep.cv_reduction, rep.cv_var, rep.ratio)
            )
    return rows
