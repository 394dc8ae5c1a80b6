"""Command-line entry point: ``khcore {decompose,precision,verify,bench}``."""

from __future__ import annotations

import argparse
import random
import sys
import time
from contextlib import nullcontext

import numpy as np

from . import oracle
from .decomp import CoreResult, peel_baseline, peel_khcore
from .graph import EdgeListParseError, EmptyGraphError, Graph, read_edge_list
from .metrics import MetricContractError, precision, top_s_precision
from .parallel import default_threads, peel_parallel
from .results import read_cores, summary_block, write_cores
from .sampling import SamplingParameterError, peel_sample

ALGOS = ("baseline", "khcore", "khcore-bitmap", "sample")
DEFAULT_RATE = 0.1


def run_algorithm(
    g: Graph, h: int, algo: str, threads: int = 1, rate: float | None = None, seed: int | None = None
) -> CoreResult:
    if threads > 1:
        return peel_parallel(g, h, algo, threads, rate=rate, seed=seed or 0)
    if algo == "baseline":
        return peel_baseline(g, h)
    if algo == "khcore":
        return peel_khcore(g, h, "set_based")
    if algo == "khcore-bitmap":
        return peel_khcore(g, h, "bitmap")
    return peel_sample(g, h, rate, seed)


def _open_out(path: str | None):
    return open(path, "w") if path and path != "-" else nullcontext(sys.stdout)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def cmd_decompose(args: argparse.Namespace) -> int:
    if args.rate is not None and args.algo != "sample":
        args.parser.error("--rate is only valid with --algo sample")
    rate = args.rate
    seed = args.seed
    if args.algo == "sample":
        rate = DEFAULT_RATE if rate is None else rate
        if seed is None:
            seed = random.SystemRandom().randrange(2**63)
            print(f"seed={seed}", file=sys.stderr)
    g = read_edge_list(args.input)
    threads = args.threads or default_threads()
    result = run_algorithm(g, args.h, args.algo, threads, rate, seed)
    if args.algo == "sample":
        result.meta.update(rate=rate, seed=seed)
    with _open_out(args.output) as out:
        write_cores(result, g, out)
    summary = summary_block(result, g, threads)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(summary)
    else:
        sys.stderr.write(summary)
    return 0


def _load_result(path: str) -> dict[int, int]:
    with open(path) as fh:
        return read_cores(fh)


def cmd_precision(args: argparse.Namespace) -> int:
    exact_map = _load_result(args.exact)
    est_map = _load_result(args.estimate)
    if set(exact_map) != set(est_map):
        raise MetricContractError("result files cover different vertex sets")
    if args.top_s is not None:
        if not args.graph:
            args.parser.error("--top-s requires --graph")
        g = read_edge_list(args.graph)
        labels = g.labels.tolist()
    else:
        g = None
        labels = sorted(exact_map)
    exact = CoreResult(args.h, "exact", np.asarray([exact_map[l] for l in labels], dtype=np.int64))
    est = CoreResult(args.h, "estimate", np.asarray([est_map[l] for l in labels], dtype=np.int64))
    print(f"precision={precision(exact, est).precision:.6f}")
    if args.top_s is not None:
        rep = top_s_precision(exact, est, g, args.top_s)
        print(f"top_s={args.top_s}")
        print(f"top_s_vertices={rep.vertex_count}")
        print(f"top_s_precision={rep.precision:.6f}")
    return 0


def _differential(g: Graph, h: int) -> list[str]:
    ref = oracle.brute_core_numbers(g, h).core
    problems = []
    for name, res in (
        ("baseline", peel_baseline(g, h)),
        ("khcore", peel_khcore(g, h, "set_based")),
        ("khcore-bitmap", peel_khcore(g, h, "bitmap")),
        ("sample r=1", peel_sample(g, h, 1.0, 0)),
    ):
        if not np.array_equal(res.core, ref):
            problems.append(f"{name} disagrees with oracle at h={h}")
    return problems


def cmd_verify(args: argparse.Namespace) -> int:
    failures: list[str] = []
    hs = args.hs
    if args.input:
        g = read_edge_list(args.input)
        rng = random.Random(args.seed)
        n = g.vertex_count
        for h in hs:
            vs = range(n) if args.trials >= n else rng.sample(range(n), args.trials)
            for v in vs:
                rep = oracle.check_observations(g, v, h)
                failures.extend(f"v={g.labels[v]} h={h}: {m}" for m in rep.failures)
            failures.extend(_differential(g, h))
        print(f"graph n={n} m={g.edge_count} hs={list(hs)}")
    else:
        trials, obs_fail = oracle.observation_campaign(args.trials, args.seed, tuple(hs))
        failures.extend(obs_fail)
        print(f"observation trials={trials} failures={len(obs_fail)}")
        diff_fail = 0
        for i, g in enumerate(oracle.random_suite(args.graphs, args.seed)):
            for h in hs:
                p = _differential(g, h)
                diff_fail += len(p)
                failures.extend(f"graph {i}: {m}" for m in p)
        print(f"differential graphs={args.graphs} failures={diff_fail}")
    for msg in failures[:20]:
        print(f"FAIL {msg}")
    print("verify: " + ("PASS" if not failures else f"FAIL ({len(failures)} problems)"))
    return 0 if not failures else 1


def cmd_bench(args: argparse.Namespace) -> int:
    g = read_edge_list(args.input)
    rows = []
    for algo in args.algos:
        for h in args.hs:
            for t in args.threads:
                rate = args.rate if algo == "sample" else None
                times = []
                for _ in range(args.repeat):
                    t0 = time.perf_counter()
                    res = run_algorithm(g, h, algo, t, rate, args.seed)
                    times.append(time.perf_counter() - t0)
                rows.append((algo, h, t, rate if rate is not None else "-", float(np.median(times)) * 1000, res.k_max_h))
    with _open_out(args.output) as out:
        out.write("algorithm\th\tthreads\trate\telapsed_ms\tk_max_h\n")
        for algo, h, t, r, ms, kmax in rows:
            out.write(f"{algo}\t{h}\t{t}\t{r}\t{ms:.3f}\t{kmax}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khcore", description="Distance-generalized (k,h)-core decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="compute (k,h)-core numbers")
    p.add_argument("--input", required=True)
    p.add_argument("--h", type=_positive_int, required=True)
    p.add_argument("--algo", choices=ALGOS, default="khcore-bitmap")
    p.add_argument("--rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--output")
    p.add_argument("--summary")
    p.set_defaults(func=cmd_decompose, parser=p)

    p = sub.add_parser("precision", help="compare estimated against exact core numbers")
    p.add_argument("--exact", required=True)
    p.add_argument("--estimate", required=True)
    p.add_argument("--top-s", type=_positive_int)
    p.add_argument("--graph", help="edge list, needed for --top-s")
    p.add_argument("--h", type=_positive_int, default=1)
    p.set_defaults(func=cmd_precision, parser=p)

    p = sub.add_parser("verify", help="run oracle and locality checks")
    p.add_argument("--input")
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--graphs", type=int, default=50)
    p.add_argument("--hs", type=_positive_int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("bench", help="time algorithms over a grid of h and thread counts")
    p.add_argument("--input", required=True)
    p.add_argument("--algos", nargs="+", choices=ALGOS, default=["baseline", "khcore", "khcore-bitmap"])
    p.add_argument("--hs", type=_positive_int, nargs="+", default=[2, 3])
    p.add_argument("--threads", type=_positive_int, nargs="+", default=[1])
    p.add_argument("--rate", type=float, default=DEFAULT_RATE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=_positive_int, default=3)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench, parser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdgeListParseError, EmptyGraphError, SamplingParameterError, MetricContractError, OSError) as exc:
        print(f"khcore: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
