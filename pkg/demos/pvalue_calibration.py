"""Are the goodness-of-fit p-values uniform?

For an exact sampler the chi-square p-value against the exact law is
itself uniform on [0, 1]. A single small p-value is expected now and then
(about 1 in 70 runs of fourteen tests at the 1e-3 level); a biased sampler
instead pushes the whole p-value distribution towards zero. Here we look
at many independent seeds for one cell and test the p-values for
uniformity.

    python demos/pvalue_calibration.py [seeds] [samples]
"""

import sys

import numpy as np
from scipy import stats

from profile_sampler import RandomSource
from profile_sampler.batch import surjection_profile_tally
from profile_sampler.oracle import chi_square_uniformity, exact_profile_distribution

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 20
samples = int(sys.argv[2]) if len(sys.argv) > 2 else 200_000
n, k = 8, 4

exact = exact_profile_distribution(n, k, "surjection")
pooled = {}
ps = []
for s in range(seeds):
    tally = surjection_profile_tally(RandomSource(1000 + s), n, k, samples, method="boltzmann")
    ps.append(chi_square_uniformity(tally, exact))
    for key, v in tally.items():
        pooled[key] = pooled.get(key, 0) + v

ps = np.sort(ps)
print("sorted p-values:", np.round(ps, 3))
print(f"KS test of the p-values against uniform: p = {stats.kstest(ps, 'uniform').pvalue:.3f}")
print(f"pooled {seeds * samples} samples: p = {chi_square_uniformity(pooled, exact):.3f}")

total = sum(pooled.values())
for key, pr in exact.items():
    e = float(pr) * total
    print(f"  {str(key):28s} observed {pooled.get(key, 0):9d} expected {e:11.0f} "
          f"z = {(pooled.get(key, 0) - e) / e ** 0.5:+.2f}")
