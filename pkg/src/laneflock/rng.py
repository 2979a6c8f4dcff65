"""Deterministic random-stream derivation.

Every draw in a run is keyed by a tuple of integers/strings hashed into a
numpy SeedSequence, so results are independent of scheduling order and
reproducible from the master seed alone.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_to_int(key) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key) & 0xFFFFFFFFFFFFFFFF
    if isinstance(key, str):
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    raise TypeError(f"unsupported rng key type: {type(key)!r}")


def substream(*keys) -> np.random.Generator:
    """Generator deterministically derived from the key tuple."""
    entropy = [_key_to_int(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(*keys) -> int:
    """Stable 64-bit seed derived from the key tuple."""
    ss = np.random.SeedSequence([_key_to_int(k) for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


_M64 = 0xFFFFFFFFFFFFFFFF


def mix64(*keys: int) -> int:
    """Cheap stable 64-bit mix of an integer key tuple (splitmix64 chain)."""
    state = 0x9E3779B97F4A7C15
    for key in keys:
        state = (state ^ (int(key) & _M64)) & _M64
        state = (state + 0x9E3779B97F4A7C15) & _M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        state = z ^ (z >> 31)
    return state


class SplitMix64:
    """Tiny deterministic uniform stream for the per-boid constrain draws.

    Building a full PCG64 generator per boid per cycle costs more than the
    draws themselves; this keeps per-boid streams cheap while staying keyed
    by (run seed, flock id, boid id, cycle).
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _M64

    def random(self) -> float:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _M64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        z ^= z >> 31
        return (z >> 11) * (1.0 / 9007199254740992.0)


class LazyGenerator:
    """Defers generator construction until the first draw.

    The constrain step needs randomness only on the adjustment path, which
    is rare; building a PCG64 per boid per cycle up front would dominate
    the cycle cost.
    """

    __slots__ = ("_factory", "_gen")

    def __init__(self, factory):
        self._factory = factory
        self._gen = None

    def random(self) -> float:
        if self._gen is None:
            self._gen = self._factory()
        return self._gen.random()
