"""Counter-based randomness streams keyed by (run seed, user, purpose).

Every random draw in a simulation comes from its own Philox stream, so two
runs with the same seed are identical no matter in which order users are
processed.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream(seed: int, user: int, purpose: str) -> np.random.Generator:
    key = [seed % 2**64, user % 2**64, zlib.crc32(purpose.encode())]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def uniform(rng: np.random.Generator, p: int, n: int) -> list[int]:
    """``n`` independent uniform draws from ``[0, p)``."""
    if p <= 2**64:
        return [int(x) for x in rng.integers(0, p, size=n, dtype=np.uint64, endpoint=False)]
    nbytes = (p.bit_length() + 7) // 8
    mask = (1 << p.bit_length()) - 1
    out: list[int] = []
    while len(out) < n:
        x = int.from_bytes(rng.bytes(nbytes), "big") & mask
        if x < p:
            out.append(x)
    return out


def uniform_nonzero(rng: np.random.Generator, p: int) -> int:
    """One uniform draw from ``[1, p)``."""
    return 1 + uniform(rng, p - 1, 1)[0]
