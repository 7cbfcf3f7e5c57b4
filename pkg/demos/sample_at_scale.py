"""Draw mapping and surjection profiles with n = 10**12.

A profile is the run-length encoding of the sorted preimage sizes, so it
stays short (at most sqrt(2n) pairs) even when n is astronomically large.

    python demos/sample_at_scale.py
"""

import math
import time

from profile_sampler import RandomSource, check_profile, random_map_profile, random_surjection_profile

rng = RandomSource(7)
n = 10**12

for k in (3981, 10**6):
    t0 = time.perf_counter()
    p, stats = random_map_profile(rng, n, k)
    check_profile(p, n, k)
    print(f"mapping    n=1e12 k={k:>7}: {len(p):5d} pairs, "
          f"sizes {p.pairs[0][0]}..{p.pairs[-1][0]}, "
          f"{stats.rounds} rounds, {time.perf_counter() - t0:.2f}s")

for k in (10**6, 10**9, 4 * 10**11):
    t0 = time.perf_counter()
    p, stats = random_surjection_profile(rng, n, k)
    check_profile(p, n, k, require_positive=True)
    print(f"surjection n=1e12 k={k:>12}: {len(p):5d} pairs, "
          f"smallest size {p.pairs[0][0]}, {stats.rounds} rounds, "
          f"{time.perf_counter() - t0:.2f}s")

print(f"pair count limit sqrt(2n) = {math.isqrt(2 * n)}")

# the first few pairs of the last profile, as (size, count)
print(p.pairs[:5])
