"""From a profile to a full uniform surjection.

The profile fixes how many images have each preimage size. Shuffling the
expanded sizes gives a uniform size-vector, and placing the n points gives
a uniform mapping with that size-vector. The two placement methods (one
random permutation, or a weighted binary tree) have the same law.

    python demos/reconstruct.py
"""

from collections import Counter

import numpy as np

from profile_sampler import RandomSource, random_surjection_profile
from profile_sampler.reconstruction import (
    SHUFFLE,
    WEIGHTED_TREE,
    end_to_end_surjection,
    mapping_array,
    size_vector_array,
)

rng = RandomSource(11)

n, k = 20, 6
p, _ = random_surjection_profile(rng, n, k)
print("profile     ", p.pairs)
sv = size_vector_array(rng, p)
print("size-vector ", sv.tolist())
image = mapping_array(rng, sv, SHUFFLE)
print("mapping     ", image.tolist())
print("check sizes ", np.bincount(image, minlength=k + 1)[1:].tolist() == sv.tolist())

image = mapping_array(rng, sv, WEIGHTED_TREE)
print("tree mapping", image.tolist())

# all 14 surjections [4] -> [2] should appear about equally often
counts = Counter(end_to_end_surjection(rng, 4, 2).image for _ in range(28000))
print(f"{len(counts)} distinct surjections, counts {min(counts.values())}..{max(counts.values())}"
      f" (expected 2000 each)")

# a larger one, through the tree
s = end_to_end_surjection(rng, 10**6, 10**5, method=WEIGHTED_TREE)
print("n=1e6 k=1e5 surjection, every image hit:", s.is_surjective())
