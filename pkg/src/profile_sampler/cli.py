"""Command-line front end: ``sample``, ``expand``, ``verify``, ``bench``.

Exit codes: 0 success, 2 usage, 3 resource cap, 4 internal bound violation.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time

import numpy as np

from .mappings import BoundViolation, random_map_profile
from .profile import Profile, ProfileError, check_profile
from .reconstruction import (
    DEFAULT_MEMORY_CAP,
    SHUFFLE,
    WEIGHTED_TREE,
    ResourceError,
    mapping_array,
    size_vector_array,
)
from .surjections import random_surjection_profile
from .variates import RandomSource
from .verification import MIN_SAMPLES, run_suite

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_BOUND = 4

SEED_ENV = "PROFILE_SAMPLER_SEED"


class UsageError(Exception):
    pass


def _int(text: str) -> int:
    """Integer flag accepting ``10**12``-style shorthand such as ``1e12``."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def _sample_one(kind: str, n: int, k: int, seed: int):
    rng = RandomSource(seed)
    if kind == "mapping":
        p, stats = random_map_profile(rng, n, k)
        check_profile(p, n, k)
    else:
        p, stats = random_surjection_profile(rng, n, k)
        check_profile(p, n, k, require_positive=True)
    return p, stats


def cmd_sample(args) -> int:
    n, k = args.n, args.k
    if k < 1 or n < 0:
        raise UsageError("need n >= 0 and k >= 1")
    if args.kind == "surjection" and n < k:
        raise UsageError("a surjection needs n >= k")
    if args.count < 1:
        raise UsageError("--count must be positive")
    out = sys.stdout
    for i in range(args.count):
        p, stats = _sample_one(args.kind, n, k, args.seed + i)
        out.write(p.to_json() + "\n" if args.format == "json" else p.to_csv())
        if args.stats:
            sys.stderr.write(stats.to_json() + "\n")
    return EXIT_OK


def _read_profile(path: str | None) -> Profile:
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    text = text.strip()
    if not text:
        raise UsageError("empty profile input")
    if text.startswith("{"):
        return Profile.from_json(text.splitlines()[0])
    return Profile.from_csv(text)


def cmd_expand(args) -> int:
    p = _read_profile(args.profile)
    rng = RandomSource(args.seed)
    sv = size_vector_array(rng, p, args.cap)
    if args.emit == "size-vector":
        values = sv
    else:
        method = WEIGHTED_TREE if args.method == "tree" else SHUFFLE
        values = mapping_array(rng, sv, method, args.cap)
    if args.format == "binary":
        sys.stdout.buffer.write(np.asarray(values, dtype="<i8").tobytes())
    else:
        sys.stdout.write("\n".join(map(str, values.tolist())) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < MIN_SAMPLES:
        raise UsageError(f"insufficient samples: --samples must be at least {MIN_SAMPLES}")
    report = run_suite(args.max_n, args.max_k, args.samples, args.seed)
    sys.stdout.write(json.dumps(report, indent=1) + "\n")
    return EXIT_OK if report["passed"] else 1


def parse_grid(text: str) -> list[tuple[int, int]]:
    """``"1e6:1e3,1e4;100:10"`` -> ``[(10**6, 10**3), (10**6, 10**4), (100, 10)]``."""
    cells = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise UsageError(f"grid cell {part!r} is not of the form n:k1,k2,...")
        n_text, ks = part.split(":", 1)
        n = _int(n_text)
        for k_text in ks.split(","):
            cells.append((n, _int(k_text)))
    if not cells:
        raise UsageError("empty grid")
    return cells


BENCH_COLUMNS = ["n", "k", "kind", "reps", "mean_rounds", "sd_rounds",
                 "mean_draws", "sd_draws", "mean_len", "wall_ms"]


def cmd_bench(args) -> int:
    try:
        grid = parse_grid(args.grid)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc))
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    for n, k in grid:
        if k < 1 or (args.kind == "surjection" and n < k):
            raise UsageError(f"invalid grid cell ({n}, {k}) for {args.kind}")
    out = sys.stdout
    out.write(",".join(BENCH_COLUMNS) + "\n")
    for n, k in grid:
        rounds, draws, lengths = [], [], []
        t0 = time.perf_counter()
        for i in range(args.reps):
            p, stats = _sample_one(args.kind, n, k, args.seed + i)
            rounds.append(stats.rounds)
            draws.append(stats.draws)
            lengths.append(len(p))
        wall = (time.perf_counter() - t0) * 1000.0 / args.reps
        sd = statistics.stdev if args.reps > 1 else (lambda xs: 0.0)
        row = [n, k, args.kind, args.reps,
               f"{statistics.fmean(rounds):.6g}", f"{sd(rounds):.6g}",
               f"{statistics.fmean(draws):.6g}", f"{sd(draws):.6g}",
               f"{statistics.fmean(lengths):.6g}", f"{wall:.4g}"]
        out.write(",".join(map(str, row)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profile-sampler",
        description="Exact profiles of uniform random mappings and surjections.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="sample profiles")
    s.add_argument("--kind", choices=["mapping", "surjection"], required=True)
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--k", type=_int, required=True)
    s.add_argument("--count", type=_int, default=1)
    s.add_argument("--seed", type=_int, default=None)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--stats", action="store_true", help="sampler counters as JSON on stderr")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("expand", help="expand a profile into a size-vector or a mapping")
    e.add_argument("--profile", default=None, help="JSON or CSV profile file (default stdin)")
    e.add_argument("--method", choices=["shuffle", "tree"], default="shuffle")
    e.add_argument("--emit", choices=["size-vector", "surjection"], default="surjection")
    e.add_argument("--format", choices=["text", "binary"], default="text")
    e.add_argument("--seed", type=_int, default=None)
    e.add_argument("--cap", type=_int, default=DEFAULT_MEMORY_CAP, help="maximum array length")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="run the uniformity suite against exact tables")
    v.add_argument("--max-n", type=_int, default=8)
    v.add_argument("--max-k", type=_int, default=4)
    v.add_argument("--samples", type=_int, default=100_000)
    v.add_argument("--seed", type=_int, default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="cost counters per (n, k) cell as CSV")
    b.add_argument("--grid", required=True, help='cells as "n:k1,k2;n2:k3", e.g. "1e6:1e3,1e4,1e5"')
    b.add_argument("--reps", type=_int, default=10)
    b.add_argument("--kind", choices=["mapping", "surjection"], default="surjection")
    b.add_argument("--seed", type=_int, default=None)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (UsageError, ProfileError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, MemoryError, OverflowError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except BoundViolation as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
