"""Command-line driver.

Subcommands: estimate-f2, estimate-ip, experiment, sweep-ratio, verify,
gen-synthetic, ingest. Exit codes: 0 success, 1 config error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import kernels
from .control_variates import cv_estimate_f2, cv_estimate_ip, IpMomentMode
from .datasets import Split, StreamSpec, generate_synthetic, load_bag_of_words, load_fimi
from .errors import DatasetFormatError
from .harness import ExperimentConfig, run_experiment, write_report
from .hashing import sign_hash
from .theory import (
    FrequencyVector,
    ams_f2_variance,
    f2_cv_report,
    inner_product,
    ip_variance,
    moments,
    ratio_sweep_f2,
    ratio_sweep_ip,
    write_sweep_csv,
)
from .tug_of_war import TugOfWarSketch
from .oracle import (
    enumerate_point_query,
    enumerate_tow,
    enumerate_tow_corrected,
)


def _stream_spec(text: str) -> StreamSpec:
    return StreamSpec.from_dict(json.loads(text))


def _estimate_f2(args) -> int:
    spec = _stream_spec(args.stream) if args.stream else None
    vec = spec.load() if spec else None
    if args.load_sketch:
        with open(args.load_sketch) as fh:
            sketch = TugOfWarSketch.from_json(fh.read())
        if vec is not None:
            for i, c in enumerate(vec.counts):
                if c:
                    sketch.update(i, c)
        if args.f1 is None:
            raise ValueError("--f1 is required when resuming from a stored sketch")
        f1, f0 = args.f1, sketch.universe
    else:
        if vec is None:
            raise ValueError("need --stream or --load-sketch")
        sketch = TugOfWarSketch.from_vector(sign_hash(vec.universe, args.seed), vec.as_array())
        m = moments(vec)
        f1, f0 = float(m.f1), vec.universe
    truth = float(moments(vec).f2) if vec is not None else None
    proxy = truth if (args.proxy == "truth" and truth is not None) else None
    est = cv_estimate_f2(sketch, f1=f1, f0=f0, f2_proxy=proxy)
    if args.save_sketch:
        with open(args.save_sketch, "w") as fh:
            fh.write(sketch.to_json())
    print(json.dumps({
        "raw": est.raw, "corrected": est.corrected, "c_hat": est.coefficient,
        "z": est.cv_value, "universe": sketch.universe,
        "ground_truth_f2": truth,
    }))
    return 0


def _estimate_ip(args) -> int:
    f = _stream_spec(args.stream).load()
    g = _stream_spec(args.stream2).load()
    if f.universe != g.universe:
        raise ValueError("paired streams must share a universe")
    mf, mg = moments(f), moments(g)
    truth = float(inner_product(f, g))
    sf, sg = TugOfWarSketch.pair_from_vectors(
        sign_hash(f.universe, args.seed), f.as_array(), g.as_array()
    )
    mode = IpMomentMode(args.mode)
    est = cv_estimate_ip(
        sf, sg, f2=mf.f2, g2=mg.f2,
        ip_proxy=truth if args.proxy == "truth" else None,
        mode=mode,
        fvec=f.counts if mode is IpMomentMode.EXACT else None,
        gvec=g.counts if mode is IpMomentMode.EXACT else None,
    )
    print(json.dumps({
        "raw": est.raw, "corrected": est.corrected, "c_hat": est.coefficient,
        "z": est.cv_value, "ground_truth_ip": truth,
    }))
    return 0


def _experiment(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    for key in ("trials", "master_seed", "proxy_policy", "ip_mode", "output", "task"):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    if args.threads is not None:
        raw["threads"] = args.threads
    cfg = ExperimentConfig.from_dict(raw)
    if cfg.output is None:
        raise ValueError("an output path is required (config 'output' or --output)")
    report = run_experiment(cfg)
    csv_path, summary_path = write_report(report, cfg.output)
    print(json.dumps({"csv": csv_path, "summary": summary_path,
                      "ground_truth": report.summary.ground_truth}))
    return 0


def _sweep_ratio(args) -> int:
    if args.task == "f2":
        caps = [int(x) for x in args.freq_caps.split(",")]
        rows = ratio_sweep_f2(distinct=args.distinct, freq_caps=caps, seed=args.seed)
    else:
        thetas = [float(x) for x in args.thetas.split(",")]
        ratios = [float(x) for x in args.norm_ratios.split(",")]
        rows = ratio_sweep_ip(
            distinct=args.distinct, thetas_deg=thetas, norm_ratios=ratios,
            seed=args.seed, freq_hi=args.freq_hi,
        )
    write_sweep_csv(rows, args.output)
    print(json.dumps({"rows": len(rows), "output": args.output}))
    return 0


def _gen_synthetic(args) -> int:
    vec = generate_synthetic(args.distinct, args.freq_lo, args.freq_hi, args.seed)
    vec.to_csv(args.output)
    m = moments(vec)
    print(json.dumps({"output": args.output, "f0": m.f0, "f1": m.f1, "f2": m.f2}))
    return 0


def _ingest(args) -> int:
    split = Split(args.split)
    if args.format == "bow":
        vec = load_bag_of_words(args.path, split)
    else:
        vec = load_fimi(args.path, split)
    vec.to_csv(args.output)
    m = moments(vec)
    print(json.dumps({
        "output": args.output, "universe": vec.universe,
        "f0": m.f0, "f1": m.f1, "f2": m.f2, "f4": m.f4,
    }))
    return 0


def _verify(args) -> int:
    """Oracle fixture suite: enumeration against every closed form in play."""
    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        if ok:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name} {detail}")

    fixtures = [(1, 2, 3), (5,), (2, 2), (1, 1, 1, 1), (3, 0, 4, 1), (7, 1, 2, 5, 1)]
    for f in fixtures:
        v = FrequencyVector(f)
        m = moments(v)
        o = enumerate_tow(f, estimator="f2")
        n = len(f)
        check(f"f2 mean {f}", o.mean == m.f2, f"{o.mean} != {m.f2}")
        check(f"f2 variance {f}", o.variance == ams_f2_variance(v))
        check(f"f2 cv mean {f}", o.cv_mean == 0)
        check(f"f2 cv variance {f}", o.cv_variance == 2 * n * (n - 1),
              f"{o.cv_variance} != {2 * n * (n - 1)}")
        check(f"f2 cv covariance {f}", o.covariance_with_cv == 2 * (m.f1**2 - m.f2))
        if n >= 2:
            c = Fraction(-(m.f1**2 - m.f2), n * (n - 1))
            mean, var = enumerate_tow_corrected(f, None, "f2", c)
            expected = o.variance - (
                Fraction(o.covariance_with_cv) ** 2 / o.cv_variance
                if o.cv_variance else 0
            )
            check(f"f2 corrected mean {f}", mean == m.f2)
            check(f"f2 corrected variance {f}", var == expected, f"{var} != {expected}")

    pairs = [((1, 0), (0, 1)), ((1, 1), (1, 1)), ((2, 1, 3), (1, 4, 1))]
    for f, g in pairs:
        vf, vg = FrequencyVector(f), FrequencyVector(g)
        o = enumerate_tow(f, g, estimator="ip")
        check(f"ip mean {f}x{g}", o.mean == inner_product(vf, vg))
        check(f"ip variance {f}x{g}", o.variance == ip_variance(vf, vg))
        check(f"ip cv mean {f}x{g}", o.cv_mean == moments(vf).f2 + moments(vg).f2)

    pq = enumerate_point_query([4, 2, 2], 0, "cms", 2)
    check("cms mean (4,2,2)", pq.mean == Fraction(6))
    check("cms variance (4,2,2)", pq.variance == 2)
    cs = enumerate_point_query([3, 1], 0, "cs", 2)
    check("cs mean (3,1)", cs.mean == 3)
    check("cs variance (3,1)", cs.variance == Fraction(1, 2))

    check("kernel backend", kernels.BACKEND in ("compiled", "pure"), kernels.BACKEND)
    print(f"{'OK' if failures == 0 else 'FAILED'} ({failures} failures, backend={kernels.BACKEND})")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvsketch")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-f2", help="one-shot F2 estimate of a stream")
    p.add_argument("--stream", help="stream spec as inline JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--proxy", choices=("raw", "truth"), default="raw")
    p.add_argument("--f1", type=float, default=None)
    p.add_argument("--load-sketch", dest="load_sketch")
    p.add_argument("--save-sketch", dest="save_sketch")
    p.set_defaults(func=_estimate_f2)

    p = sub.add_parser("estimate-ip", help="one-shot inner-product estimate")
    p.add_argument("--stream", required=True)
    p.add_argument("--stream2", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--proxy", choices=("raw", "truth"), default="raw")
    p.add_argument("--mode", choices=("gaussian", "exact"), default="gaussian")
    p.set_defaults(func=_estimate_ip)

    p = sub.add_parser("experiment", help="run a repeated-trial experiment")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--master-seed", dest="master_seed", type=int, default=None)
    p.add_argument("--proxy-policy", dest="proxy_policy",
                   choices=("raw_estimate", "ground_truth"), default=None)
    p.add_argument("--ip-mode", dest="ip_mode", choices=("gaussian", "exact"), default=None)
    p.add_argument("--task", choices=("f2", "ip", "cms-query", "cs-query"), default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_experiment)

    p = sub.add_parser("sweep-ratio", help="theoretical variance-ratio sweeps")
    p.add_argument("--task", choices=("f2", "ip"), required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--distinct", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freq-caps", dest="freq_caps", default="1,2,5,10,20,50,100")
    p.add_argument("--thetas", default="10,30,60,90")
    p.add_argument("--norm-ratios", dest="norm_ratios", default="0.1,0.4,0.7,1.0")
    p.add_argument("--freq-hi", dest="freq_hi", type=int, default=100)
    p.set_defaults(func=_sweep_ratio)

    p = sub.add_parser("verify", help="run the oracle fixture suite")
    p.set_defaults(func=_verify)

    p = sub.add_parser("gen-synthetic", help="write a synthetic frequency vector CSV")
    p.add_argument("--distinct", type=int, required=True)
    p.add_argument("--freq-lo", dest="freq_lo", type=int, default=1)
    p.add_argument("--freq-hi", dest="freq_hi", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_gen_synthetic)

    p = sub.add_parser("ingest", help="parse a corpus file into a frequency vector CSV")
    p.add_argument("--format", choices=("bow", "fimi"), required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--split", choices=("whole", "first", "second"), default="whole")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_ingest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except DatasetFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
