"""Fixed-point mapping between real vectors and GF(p).

A real x is clipped to [-clip, clip], scaled by 2^scale_bits and rounded;
negatives wrap to p - |x|. Reading back uses the centered lift, which is
only sound while every intermediate sum stays inside (-p/2, p/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import OverflowDetected, UnsafeQuantization
from .field import FieldVector


@dataclass(frozen=True)
class QuantizationConfig:
    scale_bits: int
    clip: float
    p: int
    rounding: str = "half_even"  # or "stochastic"

    @property
    def scale(self) -> int:
        return 1 << self.scale_bits

    @property
    def qmax(self) -> int:
        return round(self.clip * self.scale)

    def violations(self, length: int = 1, summands: int = 1) -> list[str]:
        """Every safety inequality that fails, as readable strings."""
        out = []
        if self.scale_bits < 0:
            return [f"scale_bits={self.scale_bits} must be >= 0"]
        if not (self.clip > 0 and math.isfinite(self.clip)):
            out.append(f"clip={self.clip} must be a positive real")
            return out
        if self.rounding not in ("half_even", "stochastic"):
            out.append(f"unknown rounding mode {self.rounding!r}")
        # compare 2x < p to stay in exact integers
        if 2 * summands * self.qmax >= self.p:
            out.append(f"aggregation safety m*Qmax < p/2 fails: {summands}*{self.qmax} >= {self.p}/2")
        if 2 * length * (2 * self.qmax) ** 2 >= self.p:
            out.append(
                f"distance safety L*(2Qmax)^2 < p/2 fails: {length}*(2*{self.qmax})^2 >= {self.p}/2"
            )
        return out

    def check(self, length: int = 1, summands: int = 1) -> None:
        bad = self.violations(length, summands)
        if bad:
            raise UnsafeQuantization("; ".join(bad))


def encode(
    v: Sequence[float], cfg: QuantizationConfig, rng: np.random.Generator | None = None
) -> FieldVector:
    cfg.check()
    p, scale, clip = cfg.p, cfg.scale, cfg.clip
    if cfg.rounding == "stochastic":
        if rng is None:
            raise ValueError("stochastic rounding needs an rng")
        noise = rng.random(len(v))
    out = []
    for k, x in enumerate(v):
        if math.isnan(x):
            raise ValueError("cannot quantize NaN")
        x = min(max(float(x), -clip), clip) * scale
        if cfg.rounding == "stochastic":
            lo = math.floor(x)
            q = lo + (noise[k] < x - lo)
        else:
            q = round(x)
        out.append(int(q) % p)
    return tuple(out)


def decode(v: Sequence[int], cfg: QuantizationConfig, summands: int = 1) -> list[float]:
    """Lift and rescale. ``summands`` is how many encoded values were added."""
    p = cfg.p
    bound = summands * cfg.qmax
    out = []
    for a in v:
        a %= p
        x = a - p if a > p // 2 else a
        if abs(x) > bound:
            raise OverflowDetected(f"lifted value {x} exceeds {summands}*Qmax = {bound}")
        out.append(x / cfg.scale)
    return out


def lift_all(v: Sequence[int], p: int) -> list[int]:
    return [a - p if a > p // 2 else a for a in (x % p for x in v)]
