"""Event-based visual odometry with a hierarchical resonator network."""

from hrnvo._core import (
    Engine,
    Estimate,
    Resonator,
    bind,
    brute_force_register,
    bundle,
    frac_pow,
    normalize_phasor,
    periodic_seed,
    random_seed,
    sharpen,
    similarity,
    umeyama,
    unbind,
    warp_image,
)

__all__ = [
    "Engine",
    "Estimate",
    "Resonator",
    "bind",
    "brute_force_register",
    "bundle",
    "frac_pow",
    "normalize_phasor",
    "periodic_seed",
    "random_seed",
    "sharpen",
    "similarity",
    "umeyama",
    "unbind",
    "warp_image",
]
