"""Exact sampling of the profiles of uniform random mappings and surjections.

A profile records how many preimages of each size a mapping ``[n] -> [k]``
has. The samplers here draw profiles directly, in time that barely depends
on ``n``, and can then expand them into full size-vectors and mappings.
"""

from .mappings import BoundViolation, random_map_profile, simulate_profile, small_k_profile
from .oracle import (
    chi_square_uniformity,
    exact_acceptance_probability,
    exact_profile_distribution,
    stirling2,
    tv_distance,
)
from .profile import (
    Mapping,
    Profile,
    ProfileError,
    SamplerStats,
    SizeVector,
    Surjection,
    check_profile,
    profile_from_size_vector,
    profile_merge,
    profile_validate,
)
from .reconstruction import (
    ResourceError,
    end_to_end_surjection,
    size_vector_from_profile,
    surjection_from_size_vector,
)
from .saddle import OmegaParams, check_bounds, solve_omega
from .surjections import RoundBudgetExceeded, random_surjection_profile
from .variates import RandomSource

__version__ = "0.1.0"

__all__ = [
    "BoundViolation", "Mapping", "OmegaParams", "Profile", "ProfileError",
    "RandomSource", "ResourceError", "RoundBudgetExceeded", "SamplerStats",
    "SizeVector", "Surjection", "check_bounds", "check_profile",
    "chi_square_uniformity", "end_to_end_surjection", "exact_acceptance_probability",
    "exact_profile_distribution", "profile_from_size_vector", "profile_merge",
    "profile_validate", "random_map_profile", "random_surjection_profile",
    "simulate_profile", "size_vector_from_profile", "small_k_profile",
    "solve_omega", "stirling2", "surjection_from_size_vector", "tv_distance",
]
