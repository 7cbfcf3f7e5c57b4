"""From a profile back to a size-vector and a full mapping.

A profile fixes the multiset of preimage sizes. Shuffling that multiset
gives a uniform size-vector, and placing ``sv[i]`` copies of ``i`` at
uniformly random positions gives a uniform mapping with that size-vector.
Composing the two with an exact profile sampler yields exact uniform
surjections, as long as the arrays fit in memory.
"""

from __future__ import annotations

import numpy as np

from .profile import Mapping, Profile, SizeVector, Surjection, check_profile
from .surjections import random_surjection_profile
from .variates import RandomSource

DEFAULT_MEMORY_CAP = 2**31

SHUFFLE = "shuffle"
WEIGHTED_TREE = "weighted_tree"


class ResourceError(MemoryError):
    """The requested array would exceed the configured element cap."""


def _check_cap(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise ResourceError(f"{what} of {size} elements exceeds the cap of {cap}")


def size_vector_array(rng: RandomSource, p: Profile, cap: int = DEFAULT_MEMORY_CAP) -> np.ndarray:
    """Uniformly shuffled sizes of ``p`` as an int64 array of length ``k``."""
    _check_cap(p.k, cap, "size-vector")
    sizes = np.repeat(np.asarray(p.sizes, dtype=np.int64), np.asarray(p.counts, dtype=np.int64))
    rng.shuffle(sizes)
    return sizes


def size_vector_from_profile(rng: RandomSource, p: Profile,
                             cap: int = DEFAULT_MEMORY_CAP) -> SizeVector:
    """Uniform random arrangement of the sizes of ``p`` over positions ``1..k``."""
    return SizeVector(tuple(size_vector_array(rng, p, cap).tolist()))


class WeightedTree:
    """Complete binary tree over ``k`` weighted leaves, padded to a power of two.

    ``w[1]`` is the root, node ``i`` has children ``2i`` and ``2i + 1``,
    and leaf ``j`` sits at ``size + j``. Each internal node holds the sum of
    its subtree, so sampling a leaf proportionally to weight is one descent.
    """

    def __init__(self, weights):
        weights = [int(x) for x in weights]
        k = len(weights)
        size = 1
        while size < k:
            size *= 2
        self.k = k
        self.size = size
        self.depth = size.bit_length() - 1
        w = [0] * (2 * size)
        w[size:size + k] = weights
        for i in range(size - 1, 0, -1):
            w[i] = w[2 * i] + w[2 * i + 1]
        self.w = w

    @property
    def total(self) -> int:
        return self.w[1]

    def leaf_weights(self) -> list[int]:
        return self.w[self.size:self.size + self.k]

    def draw(self, rng: RandomSource) -> int:
        """Pick a leaf with probability proportional to its weight and
        decrement it (sampling without replacement). Returns the leaf index."""
        w = self.w
        if w[1] <= 0:
            raise ValueError("tree is empty")
        i = 1
        size = self.size
        gen = rng.gen
        while i < size:
            w[i] -= 1
            left = w[2 * i]
            # descend left with probability L / (L + R)
            if gen.integers(left + w[2 * i + 1]) < left:
                i = 2 * i
            else:
                i = 2 * i + 1
        w[i] -= 1
        return i - size


def _tree_image(rng: RandomSource, sv: np.ndarray) -> np.ndarray:
    tree = WeightedTree(sv.tolist())
    n = tree.total
    out = np.empty(n, dtype=np.int64)
    for pos in range(n):
        out[pos] = tree.draw(rng) + 1
    return out


def mapping_array(rng: RandomSource, sv, method: str = SHUFFLE,
                  cap: int = DEFAULT_MEMORY_CAP) -> np.ndarray:
    """Uniform image array among mappings with size-vector ``sv``."""
    sv = np.asarray(list(sv), dtype=np.int64)
    if (sv < 0).any():
        raise ValueError("negative size in size-vector")
    n = int(sv.sum())
    _check_cap(n, cap, "mapping")
    if method == SHUFFLE:
        image = np.repeat(np.arange(1, len(sv) + 1, dtype=np.int64), sv)
        rng.shuffle(image)
        return image
    if method == WEIGHTED_TREE:
        return _tree_image(rng, sv)
    raise ValueError(f"unknown method {method!r}")


def surjection_from_size_vector(rng: RandomSource, sv, method: str = SHUFFLE,
                                cap: int = DEFAULT_MEMORY_CAP) -> Mapping:
    """Uniform mapping with the given size-vector.

    The result is a :class:`Surjection` when every size is positive.
    ``method`` is ``"shuffle"`` or ``"weighted_tree"``; both give the same law.
    """
    sizes = list(sv)
    image = mapping_array(rng, sizes, method, cap).tolist()
    k = len(sizes)
    if all(s >= 1 for s in sizes):
        return Surjection(tuple(image), k)
    return Mapping(tuple(image), k)


def end_to_end_surjection(rng: RandomSource, n: int, k: int, method: str = SHUFFLE,
                          cap: int = DEFAULT_MEMORY_CAP) -> Surjection:
    """Exact uniform surjection ``[n] -> [k]``: profile, then size-vector,
    then placement."""
    _check_cap(n, cap, "surjection")
    p, _ = random_surjection_profile(rng, n, k)
    check_profile(p, n, k, require_positive=True)
    sv = size_vector_array(rng, p, cap)
    return surjection_from_size_vector(rng, sv.tolist(), method, cap)
