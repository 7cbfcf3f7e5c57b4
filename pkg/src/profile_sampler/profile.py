"""Profiles, size-vectors and surjections.

A *size-vector* of a mapping ``f: [n] -> [k]`` lists the preimage sizes
``(|f^-1(1)|, ..., |f^-1(k)|)``. Its *profile* is the run-length encoding
of the sorted size-vector: pairs ``(size, count)`` with sizes strictly
increasing. Profiles stay tiny even when ``n`` is astronomically large,
which is what makes them worth sampling directly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

UINT64_MAX = 2**64 - 1


class ProfileError(ValueError):
    """A profile or size-vector violates one of its invariants."""


@dataclass(frozen=True)
class Profile:
    """Sorted ``(size, count)`` pairs; ``anchor`` optionally records the mode
    the profile was built around."""

    pairs: tuple[tuple[int, int], ...] = ()
    anchor: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(s), int(c)) for s, c in self.pairs))

    @classmethod
    def from_counts(cls, counts, anchor=None) -> "Profile":
        """Build from a ``{size: count}`` mapping, dropping zero counts."""
        return cls(tuple(sorted((s, c) for s, c in counts.items() if c)), anchor)

    @property
    def sizes(self) -> list[int]:
        return [s for s, _ in self.pairs]

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.pairs]

    @property
    def n(self) -> int:
        return profile_total_mass(self)[0]

    @property
    def k(self) -> int:
        return profile_total_mass(self)[1]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __add__(self, other: "Profile") -> "Profile":
        return profile_merge(self, other)

    def expand(self) -> list[int]:
        """The sorted multiset of sizes (length ``k``)."""
        out = []
        for s, c in self.pairs:
            out.extend([s] * c)
        return out

    def is_surjective(self) -> bool:
        return not self.pairs or self.pairs[0][0] >= 1

    # serialization

    def to_dict(self) -> dict:
        n, k = profile_total_mass(self)
        return {"n": n, "k": k, "pairs": [[s, c] for s, c in self.pairs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | dict) -> "Profile":
        data = json.loads(text) if isinstance(text, str) else text
        p = cls(tuple((s, c) for s, c in data["pairs"]))
        violation = profile_validate(p, data.get("n", p.n), data.get("k", p.k))
        if violation:
            raise ProfileError(violation)
        return p

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["size", "count"])
        w.writerows(self.pairs)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Profile":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip() for h in rows[0]] != ["size", "count"]:
            raise ProfileError("missing 'size,count' header")
        p = cls(tuple((int(s), int(c)) for s, c in rows[1:] if s.strip()))
        violation = profile_validate(p, p.n, p.k)
        if violation:
            raise ProfileError(violation)
        return p


@dataclass(frozen=True)
class SizeVector:
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if any(s < 0 for s in self.sizes):
            raise ProfileError("negative size")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)


@dataclass(frozen=True)
class Mapping:
    """A mapping ``[n] -> [k]``; ``image[i]`` is the value taken by ``i + 1``."""

    image: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))
        if any(not 1 <= v <= self.k for v in self.image):
            raise ProfileError("image value outside [1, k]")

    @property
    def n(self) -> int:
        return len(self.image)

    def size_vector(self) -> SizeVector:
        c = Counter(self.image)
        return SizeVector(tuple(c[i] for i in range(1, self.k + 1)))

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.k


@dataclass(frozen=True)
class Surjection(Mapping):
    """A mapping onto every value of ``[1, k]``."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_surjective():
            raise ProfileError("not a surjection onto [1, k]")


@dataclass
class SamplerStats:
    """Cost counters accumulated while sampling one profile.

    ``accepted`` counts the rounds that ended in acceptance (one per
    recursion level that had to sample), so ``accepted / rounds`` is the
    empirical per-level acceptance rate.
    """

    rounds: int = 0
    accepted: int = 0
    binomial_draws: int = 0
    poisson_draws: int = 0
    bernoulli_draws: int = 0
    recursion_depth: int = 0
    max_window: int = 0
    total_window: int = 0

    @property
    def draws(self) -> int:
        return self.binomial_draws + self.poisson_draws + self.bernoulli_draws

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["draws"] = self.draws
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def profile_from_size_vector(sv: SizeVector | Sequence[int]) -> Profile:
    sizes = sv.sizes if isinstance(sv, SizeVector) else tuple(sv)
    return Profile.from_counts(Counter(sizes))


def profile_merge(a: Profile, b: Profile) -> Profile:
    """Pointwise sum of counts; a linear merge of the two sorted pair lists."""
    pa, pb = a.pairs, b.pairs
    i = j = 0
    out = []
    while i < len(pa) and j < len(pb):
        (sa, ca), (sb, cb) = pa[i], pb[j]
        if sa == sb:
            out.append((sa, ca + cb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(pa[i])
            i += 1
        else:
            out.append(pb[j])
            j += 1
    out.extend(pa[i:])
    out.extend(pb[j:])
    return Profile(tuple(out))


def profile_total_mass(p: Profile | Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Return ``(sum size*count, sum count)``; raises OverflowError past 64 bits."""
    pairs = p.pairs if isinstance(p, Profile) else p
    n = k = 0
    for s, c in pairs:
        n += s * c
        k += c
    if n > UINT64_MAX or k > UINT64_MAX:
        raise OverflowError("profile mass exceeds the 64-bit range")
    return n, k


def profile_validate(p: Profile, n: int, k: int, require_positive: bool = False) -> str | None:
    """Return ``None`` if ``p`` is a valid profile of mass ``(n, k)``, else the
    name of the first violated invariant."""
    prev = None
    for s, c in p.pairs:
        if s < 0:
            return "negative size"
        if c < 1:
            return "nonpositive count"
        if prev is not None and s <= prev:
            return "sizes not increasing"
        prev = s
    if require_positive and p.pairs and p.pairs[0][0] == 0:
        return "zero size present"
    try:
        pn, pk = profile_total_mass(p)
    except OverflowError:
        return "mass overflow"
    if pn != n:
        return "mass mismatch"
    if pk != k:
        return "count mismatch"
    if require_positive and len(p.pairs) > math.isqrt(2 * n):
        # sizes are distinct and >= 1, so l(l+1)/2 <= n
        return "profile too long"
    return None


def check_profile(p: Profile, n: int, k: int, require_positive: bool = False) -> Profile:
    violation = profile_validate(p, n, k, require_positive)
    if violation:
        raise ProfileError(f"{violation}: {p.pairs!r} for n={n}, k={k}")
    return p
