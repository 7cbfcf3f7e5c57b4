"""Check every sampler path against exact tables, then time a grid.

The verification suite compares empirical profile frequencies with the
exact law obtained by enumerating compositions. The bench writes the
cost counters as CSV; the histogram at the end shows the rounds per
sample of the general Boltzmann round, which grow like n/k.

    python demos/verify_and_bench.py
"""

import io
from contextlib import redirect_stdout

import numpy as np

from profile_sampler import RandomSource
from profile_sampler.batch import boltzmann_tally
from profile_sampler.cli import main
from profile_sampler.verification import run_suite

report = run_suite(max_n=7, max_k=3, samples=50_000, seed=3)
print(f"suite passed: {report['passed']} ({len(report['checks'])} checks, {report['seconds']}s)")
for c in report["checks"][:6]:
    print(f"  ({c['n']},{c['k']}) {c['kind']:10s} {str(c['method']):9s} p={c['p_value']:.3f}")

buf = io.StringIO()
with redirect_stdout(buf):
    main(["bench", "--grid", "1e6:1e5,2.5e5,5e5", "--reps", "5", "--seed", "1"])
print(buf.getvalue())

# rounds needed per accepted sample, general round at n/k = 8
rng = RandomSource(5)
rounds = []
for _ in range(300):
    _, r = boltzmann_tally(rng, 10**5, 10**5 // 8, 1, round_kind="general")
    rounds.append(r)
hist, edges = np.histogram(rounds, bins=8)
for h, a, b in zip(hist, edges[:-1], edges[1:]):
    print(f"{a:7.0f}-{b:7.0f} {'#' * (h // 3)}")
print(f"mean rounds {np.mean(rounds):.1f} for n/k = 8")
