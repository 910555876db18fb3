"""Experiment driver: repeated-trial estimation with full reporting.

A run streams one dataset materialization through `trials` independently
seeded sketches (trial i uses derive_seed(master_seed, i)), records raw and
CV-corrected estimates per trial, and summarizes: five-number box statistics,
mean/variance, mean absolute error against the exact ground truth, and a
median-of-means combine over a seeded shuffle of the trials. Everything is
deterministic for a fixed config, including across thread counts; the
report CSV is byte-identical between runs.

Report CSV columns: trial,raw,corrected,c_hat,z. The summary JSON carries
the ExperimentReport.summary fields and is recomputable from the rows
(load() verifies this).
"""

from __future__ import annotations

import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from .aggregation import MoMPlan, median_of_means
from .control_variates import IpMomentMode, cv_estimate_f2, cv_estimate_ip
from .datasets import StreamSpec, as_updates
from .hashing import derive_seed, sign_hash
from .point_query import CountMinSketch, CountSketch, stream_into
from .theory import FrequencyVector, inner_product, moments
from .tug_of_war import TugOfWarSketch

TASKS = ("f2", "ip", "cms-query", "cs-query")
PROXY_POLICIES = ("raw_estimate", "ground_truth")

THREADS_ENV = "CV_SKETCH_THREADS"


@dataclass(frozen=True)
class MoMConfig:
    groups: int = 20
    per_group: int = 50
    shuffle_seed: int = 0


@dataclass
class ExperimentConfig:
    task: str
    stream: StreamSpec
    stream2: Optional[StreamSpec] = None
    trials: int = 1000
    master_seed: int = 1
    proxy_policy: str = "raw_estimate"
    ip_mode: str = "gaussian"
    mom: Optional[MoMConfig] = field(default_factory=MoMConfig)
    output: Optional[str] = None
    query_item: int = 0
    sketch_buckets: int = 32
    sketch_rows: int = 1
    exhaustive: bool = False
    threads: Optional[int] = None

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.proxy_policy not in PROXY_POLICIES:
            raise ValueError(f"proxy_policy must be one of {PROXY_POLICIES}")
        if self.ip_mode not in ("gaussian", "exact"):
            raise ValueError("ip_mode must be gaussian|exact")
        if self.task == "ip" and self.stream2 is None:
            raise ValueError("inner-product experiments need a second stream")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mom is not None and not self.exhaustive and self.trials != self.mom.groups * self.mom.per_group:
            raise ValueError(
                f"median-of-means needs trials == groups x per_group "
                f"({self.mom.groups} x {self.mom.per_group}), got {self.trials}"
            )

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {
            "task", "stream", "stream2", "trials", "master_seed", "proxy_policy",
            "ip_mode", "mom", "output", "query_item", "sketch_buckets",
            "sketch_rows", "exhaustive", "threads",
        }
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        mom_raw = raw.get("mom", {})
        mom = None if mom_raw is None else MoMConfig(**mom_raw)
        cfg = cls(
            task=raw.get("task", ""),
            stream=StreamSpec.from_dict(raw["stream"]),
            stream2=StreamSpec.from_dict(raw["stream2"]) if raw.get("stream2") else None,
            trials=int(raw.get("trials", 1000)),
            master_seed=int(raw.get("master_seed", 1)),
            proxy_policy=raw.get("proxy_policy", "raw_estimate"),
            ip_mode=raw.get("ip_mode", "gaussian"),
            mom=mom,
            output=raw.get("output"),
            query_item=int(raw.get("query_item", 0)),
            sketch_buckets=int(raw.get("sketch_buckets", 32)),
            sketch_rows=int(raw.get("sketch_rows", 1)),
            exhaustive=bool(raw.get("exhaustive", False)),
            threads=raw.get("threads"),
        )
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        out = {
            "task": self.task,
            "stream": self.stream.to_dict(),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "proxy_policy": self.proxy_policy,
            "ip_mode": self.ip_mode,
            "mom": None if self.mom is None else asdict(self.mom),
            "output": self.output,
            "query_item": self.query_item,
            "sketch_buckets": self.sketch_buckets,
            "sketch_rows": self.sketch_rows,
            "exhaustive": self.exhaustive,
        }
        if self.stream2 is not None:
            out["stream2"] = self.stream2.to_dict()
        return out


@dataclass(frozen=True)
class TrialRow:
    trial: int
    raw: float
    corrected: float
    c_hat: float
    z: float


@dataclass(frozen=True)
class ColumnSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    variance: float
    mae: float


@dataclass(frozen=True)
class Summary:
    ground_truth: float
    trials: int
    raw: ColumnSummary
    corrected: ColumnSummary
    mom_raw: Optional[float]
    mom_corrected: Optional[float]


@dataclass
class ExperimentReport:
    config: dict
    rows: list[TrialRow]
    summary: Summary

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("trial,raw,corrected,c_hat,z\n")
            for r in self.rows:
                fh.write(f"{r.trial},{r.raw!r},{r.corrected!r},{r.c_hat!r},{r.z!r}\n")

    def write_summary_json(self, path) -> None:
        payload = {"config": self.config, "summary": _summary_dict(self.summary)}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _summary_dict(s: Summary) -> dict:
    return asdict(s)


def _quantile(sorted_xs: list[float], q: float) -> float:
    """Linear interpolation between order statistics (the 'type 7' rule)."""
    if not sorted_xs:
        raise ValueError("no data")
    h = (len(sorted_xs) - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, len(sorted_xs) - 1)
    return sorted_xs[lo] + (h - lo) * (sorted_xs[hi] - sorted_xs[lo])


def _column_summary(values: list[float], truth: float) -> ColumnSummary:
    xs = sorted(values)
    t = len(xs)
    mean = math.fsum(xs) / t
    variance = math.fsum((x - mean) ** 2 for x in xs) / (t - 1) if t > 1 else 0.0
    mae = math.fsum(abs(x - truth) for x in values) / t
    return ColumnSummary(
        min=xs[0],
        q1=_quantile(xs, 0.25),
        median=_quantile(xs, 0.5),
        q3=_quantile(xs, 0.75),
        max=xs[-1],
        mean=mean,
        variance=variance,
        mae=mae,
    )


def summarize(rows: list[TrialRow], ground_truth: float, mom: Optional[MoMConfig]) -> Summary:
    """Box statistics, mean/variance (1/(T-1)), MAE, and the seeded-shuffle
    median-of-means over the trial estimates (skipped when the plan size
    does not match the trial count)."""
    raw = [r.raw for r in rows]
    corrected = [r.corrected for r in rows]
    mom_raw = mom_corrected = None
    if mom is not None and len(rows) == mom.groups * mom.per_group:
        order = list(range(len(rows)))
        random.Random(mom.shuffle_seed).shuffle(order)
        plan = MoMPlan(groups=mom.groups, per_group=mom.per_group)
        mom_raw = median_of_means([raw[i] for i in order], plan)
        mom_corrected = median_of_means([corrected[i] for i in order], plan)
    return Summary(
        ground_truth=float(ground_truth),
        trials=len(rows),
        raw=_column_summary(raw, ground_truth),
        corrected=_column_summary(corrected, ground_truth),
        mom_raw=mom_raw,
        mom_corrected=mom_corrected,
    )


class _EnumeratedSigns:
    """Sign assignment read off the bits of a trial index: the exhaustive
    'oracle mode' where 2^n trials sweep every sign vector once."""

    __slots__ = ("mask", "universe")

    def __init__(self, mask: int, universe: int):
        self.mask = mask
        self.universe = universe

    def sign(self, x: int) -> int:
        return 1 if (self.mask >> x) & 1 else -1


def _resolve_threads(cfg_threads: Optional[int]) -> int:
    if cfg_threads is not None:
        return max(1, int(cfg_threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return 1


def _trial_runner(cfg: ExperimentConfig) -> tuple[Callable[[int], TrialRow], float, int]:
    """Build (per-trial function, ground truth, effective trial count)."""
    vec = cfg.stream.load()
    n = vec.universe
    m = moments(vec)
    counts = vec.as_array()
    ground_truth_proxy = cfg.proxy_policy == "ground_truth"

    if cfg.exhaustive and cfg.task not in ("f2", "ip"):
        raise ValueError("exhaustive mode applies to the f2 and ip tasks")
    if cfg.exhaustive and n > 20:
        raise ValueError("exhaustive mode is limited to universes of 20 items")

    def make_hash(i: int):
        if cfg.exhaustive:
            return _EnumeratedSigns(i, n)
        return sign_hash(n, derive_seed(cfg.master_seed, i))

    if cfg.task == "f2":
        truth = float(m.f2)

        def run(i: int) -> TrialRow:
            sketch = TugOfWarSketch.from_vector(make_hash(i), counts)
            est = cv_estimate_f2(
                sketch, f1=m.f1, f0=n, f2_proxy=m.f2 if ground_truth_proxy else None
            )
            return TrialRow(i, float(est.raw), float(est.corrected),
                            float(est.coefficient), float(est.cv_value))

        return run, truth, (1 << n) if cfg.exhaustive else cfg.trials

    if cfg.task == "ip":
        vec2 = cfg.stream2.load()
        if vec2.universe != n:
            raise ValueError(
                f"paired streams must share a universe ({n} vs {vec2.universe}); "
                "set declared_universe to align them"
            )
        g_counts = vec2.as_array()
        m2 = moments(vec2)
        truth = float(inner_product(vec, vec2))
        mode = IpMomentMode(cfg.ip_mode)
        fvec = vec.counts if mode is IpMomentMode.EXACT else None
        gvec = vec2.counts if mode is IpMomentMode.EXACT else None

        def run(i: int) -> TrialRow:
            sf, sg = TugOfWarSketch.pair_from_vectors(make_hash(i), counts, g_counts)
            est = cv_estimate_ip(
                sf, sg, f2=m.f2, g2=m2.f2,
                ip_proxy=truth if ground_truth_proxy else None,
                mode=mode, fvec=fvec, gvec=gvec,
            )
            return TrialRow(i, float(est.raw), float(est.corrected),
                            float(est.coefficient), float(est.cv_value))

        return run, truth, (1 << n) if cfg.exhaustive else cfg.trials

    # point-query tasks
    a = cfg.query_item
    if not 0 <= a < n:
        raise ValueError(f"query_item {a} outside universe [0, {n})")
    truth = float(vec.counts[a])
    sketch_cls = CountMinSketch if cfg.task == "cms-query" else CountSketch

    def run(i: int) -> TrialRow:
        sketch = sketch_cls(
            cfg.sketch_buckets, cfg.sketch_rows, n, seed=derive_seed(cfg.master_seed, i)
        )
        stream_into(sketch, as_updates(vec))
        res = sketch.cv_query(a, f1=m.f1, fa_proxy=truth if ground_truth_proxy else None)
        return TrialRow(i, float(res.raw), float(res.corrected),
                        float(res.coefficient), float(res.cv_value))

    return run, truth, cfg.trials


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run all trials and assemble the report; deterministic end to end."""
    cfg.validate()
    run, truth, trials = _trial_runner(cfg)
    threads = _resolve_threads(cfg.threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, range(trials)))
    else:
        rows = [run(i) for i in range(trials)]
    summary = summarize(rows, truth, cfg.mom)
    return ExperimentReport(config=cfg.to_dict(), rows=rows, summary=summary)


def output_paths(output: str) -> tuple[str, str]:
    """Report CSV path and the summary JSON path derived from it."""
    csv_path = output if output.endswith(".csv") else output + ".csv"
    return csv_path, csv_path[:-4] + ".summary.json"


def write_report(report: ExperimentReport, output: str) -> tuple[str, str]:
    csv_path, summary_path = output_paths(output)
    report.write_csv(csv_path)
    report.write_summary_json(summary_path)
    return csv_path, summary_path


def load_report(csv_path, summary_path, validate: bool = True) -> ExperimentReport:
    """Load a persisted report; recompute the summary from the rows and
    insist it matches what was stored."""
    rows = []
    with open(csv_path, newline="") as fh:
        header = fh.readline().strip()
        if header != "trial,raw,corrected,c_hat,z":
            raise ValueError(f"unexpected report header: {header!r}")
        for line in fh:
            t, raw, corrected, c_hat, z = line.strip().split(",")
            rows.append(TrialRow(int(t), float(raw), float(corrected), float(c_hat), float(z)))
    with open(summary_path) as fh:
        payload = json.load(fh)
    stored = payload["summary"]
    config = payload["config"]
    mom = None if config.get("mom") is None else MoMConfig(**config["mom"])
    summary = summarize(rows, stored["ground_truth"], mom)
    if validate and _summary_dict(summary) != stored:
        raise ValueError("stored summary does not match the recomputed one")
    return ExperimentReport(config=config, rows=rows, summary=summary)
