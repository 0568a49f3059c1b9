"""Counter-based random numbers keyed by (seed, actor, purpose, counter).

Every stochastic decision in the simulation is a pure function of its key:
no draw consumes generator state that another entity could observe. This is
what lets the activity optimization skip work without shifting any other
entity's randomness, and what couples runs that differ only in one
intervention parameter.

The generator hashes the four key words through a chain of 64-bit avalanche
mixes (the splitmix64 finalizer). Uniform doubles are built from the top 53
bits, so the pure-Python and compiled backends produce bit-identical values.
"""

from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np

__all__ = [
    "mix64",
    "draw_u64",
    "u01",
    "u01_array",
    "uniform_int",
    "Purpose",
]

_MASK = (1 << 64) - 1
_DOMAIN = 0xD1B54A32D192ED03
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB
_INV_2_53 = 2.0**-53

_STD_NORMAL = NormalDist()


class Purpose:
    """Key-space tags separating independent decision streams."""

    EXPOSE = 1  # susceptible member's infection draw at a transmission event
    PLACE = 2  # infectious person's location draw at a movement hour
    LATENT = 3  # latent-period sample at infection time
    FATE = 4  # per-stage fatality draw (counter = stage index)
    ATTRIB = 5  # infector attribution among co-present infectious members
    VACC = 6  # mass-vaccination coverage draw
    VISIT = 7  # care-unit visitor selection (counter = day)
    SEED = 8  # outbreak seed selection


def mix64(x: int) -> int:
    """64-bit avalanche (splitmix64 finalizer); a bijection on uint64."""
    x &= _MASK
    x ^= x >> 30
    x = (x * _C1) & _MASK
    x ^= x >> 27
    x = (x * _C2) & _MASK
    x ^= x >> 31
    return x


def draw_u64(seed: int, actor: int, purpose: int, counter: int) -> int:
    """Hash a (seed, actor, purpose, counter) key to one uint64."""
    x = mix64(seed ^ _DOMAIN)
    x = mix64(x ^ (actor & _MASK))
    x = mix64(x ^ purpose)
    x = mix64(x ^ (counter & _MASK))
    return x


def u01(seed: int, actor: int, purpose: int, counter: int) -> float:
    """Uniform double in [0, 1) from the keyed draw (top 53 bits)."""
    return (draw_u64(seed, actor, purpose, counter) >> 11) * _INV_2_53


def _mix64_np(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_C1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_C2)
    x ^= x >> np.uint64(31)
    return x


def u01_array(seed: int, actors: np.ndarray, purpose: int, counter: int) -> np.ndarray:
    """Vectorized `u01` over an array of actor ids; bit-identical to scalar."""
    x = np.uint64(mix64(seed ^ _DOMAIN))
    h = _mix64_np(np.asarray(actors, dtype=np.uint64) ^ x)
    h = _mix64_np(h ^ np.uint64(purpose))
    h = _mix64_np(h ^ np.uint64(counter & _MASK))
    return (h >> np.uint64(11)) * _INV_2_53


def uniform_int(seed: int, actor: int, purpose: int, counter: int, lo: int, hi: int) -> int:
    """Keyed integer uniform on [lo, hi] inclusive."""
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    span = hi - lo + 1
    return lo + int(u01(seed, actor, purpose, counter) * span)


class LatentSpec:
    """Latent-period sampling spec: one of constant, uniform, or a
    discretized log-normal, all in whole hours >= 1.

    Parsed from strings like ``constant 48``, ``uniform 24 72`` or
    ``lognormal 3.8 0.3`` (log-mean and log-sd of the hour count).
    """

    def __init__(self, family: str, params: tuple[float, ...]):
        family = family.lower()
        if family == "constant":
            (c,) = params
            if c < 1:
                raise ValueError("latent period must be at least one hour")
        elif family == "uniform":
            a, b = params
            if not 1 <= a <= b:
                raise ValueError(f"bad uniform latent bounds ({a}, {b})")
        elif family == "lognormal":
            mu, sigma = params
            if sigma < 0:
                raise ValueError("lognormal sd must be nonnegative")
        else:
            raise ValueError(f"unknown latent family {family!r}")
        self.family = family
        self.params = tuple(float(p) for p in params)

    @classmethod
    def parse(cls, text: str) -> "LatentSpec":
        parts = text.split()
        if not parts:
            raise ValueError("empty latent spec")
        return cls(parts[0], tuple(float(p) for p in parts[1:]))

    def format(self) -> str:
        return " ".join([self.family] + [f"{p:g}" for p in self.params])

    def sample(self, seed: int, actor: int, counter: int) -> int:
        """Keyed draw of a latent period in hours (>= 1)."""
        if self.family == "constant":
            return int(round(self.params[0]))
        u = u01(seed, actor, Purpose.LATENT, counter)
        if self.family == "uniform":
            a, b = self.params
            return int(a) + int(u * (int(b) - int(a) + 1))
        mu, sigma = self.params
        # inverse-CDF so one keyed uniform fully determines the sample
        z = _STD_NORMAL.inv_cdf(min(max(u, 1e-12), 1.0 - 1e-12))
        return max(1, int(round(math.exp(mu + sigma * z))))

    def mean(self) -> float:
        """Exact mean of the sampled (discretized) distribution where
        tractable; lognormal uses the continuous mean as an approximation."""
        if self.family == "constant":
            return float(round(self.params[0]))
        if self.family == "uniform":
            a, b = int(self.params[0]), int(self.params[1])
            return (a + b) / 2.0
        mu, sigma = self.params
        return math.exp(mu + sigma * sigma / 2.0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatentSpec)
            and self.family == other.family
            and self.params == other.params
        )

    def __repr__(self) -> str:
        return f"LatentSpec({self.format()!r})"
