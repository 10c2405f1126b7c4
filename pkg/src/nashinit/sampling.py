"""Seeded random generation of strategy profiles on the product of simplices.

Two schemes are provided.  The naive one draws each coordinate uniform on
(0, 1) and normalizes; it is simple but does NOT produce a uniform
distribution on the simplex (mass concentrates near the barycenter).  The
exponential one draws -ln(u) coordinates before normalizing, which is the
standard trick for exact uniform (Dirichlet(1,...,1)) simplex sampling.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .games import StrategyProfile


class SamplingScheme(str, Enum):
    NAIVE = "naive"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class SamplerConfig:
    """Which sampling scheme to use and how to seed it."""

    scheme: SamplingScheme = SamplingScheme.EXPONENTIAL
    rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.rate <= 0.0:
            raise ValueError("exponential rate must be positive")

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def draw(self, n: int, m: int, rng: np.random.Generator) -> StrategyProfile:
        if self.scheme is SamplingScheme.NAIVE:
            return sample_naive(n, m, rng)
        return sample_uniform(n, m, rng, rate=self.rate)


def _tag_value(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode())
    return int(tag)


def stream_rng(master_seed: int, *tags) -> np.random.Generator:
    """Independent generator for a (master seed, purpose, index, ...) stream.

    Stream identity depends only on the arguments, so parallel workers can
    each derive their own generator without any shared state and results do
    not depend on execution order.
    """
    entropy = [int(master_seed)] + [_tag_value(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(master_seed: int, *tags) -> int:
    """Stable integer seed derived from the same stream scheme."""
    entropy = [int(master_seed)] + [_tag_value(t) for t in tags]
    words = np.random.SeedSequence(entropy).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)


def _open_unit(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform draws restricted to the open interval (0, 1).

    Exact 0 draws (possible from a [0, 1) generator) are redrawn so that
    log transforms stay finite.
    """
    u = rng.random(shape)
    bad = (u <= 0.0) | (u >= 1.0)
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = (u <= 0.0) | (u >= 1.0)
    return u


def sample_naive(n: int, m: int, rng: np.random.Generator) -> StrategyProfile:
    """Uniform(0,1) coordinates normalized per player (non-uniform on the simplex)."""
    u = _open_unit(rng, (n, m))
    return StrategyProfile(u / u.sum(axis=1, keepdims=True))


def sample_uniform(
    n: int, m: int, rng: np.random.Generator, rate: float = 1.0
) -> StrategyProfile:
    """Exact uniform sample from each player's simplex via exponential draws."""
    x = -np.log(_open_unit(rng, (n, m))) / rate
    return StrategyProfile(x / x.sum(axis=1, keepdims=True))


def sample_pool(
    n: int,
    m: int,
    count: int,
    rng: np.random.Generator,
    scheme: SamplingScheme = SamplingScheme.EXPONENTIAL,
) -> np.ndarray:
    """``count`` profiles as a raw (count, n, m) array.

    Consumes the generator stream exactly like ``count`` successive
    single-profile draws, so pooled and one-at-a-time sampling agree.
    """
    if count < 1:
        raise ValueError("pool size must be >= 1")
    u = _open_unit(rng, (count, n, m))
    x = u if scheme is SamplingScheme.NAIVE else -np.log(u)
    x = x / x.sum(axis=2, keepdims=True)
    # Second normalization mirrors StrategyProfile construction so pooled
    # rows equal one-at-a-time draws bit for bit.
    x /= x.sum(axis=2, keepdims=True)
    return x


def l2_distance(a, b) -> float:
    """Euclidean distance between two profiles over all players and actions."""
    pa = a.probs if isinstance(a, StrategyProfile) else np.asarray(a, dtype=float)
    pb = b.probs if isinstance(b, StrategyProfile) else np.asarray(b, dtype=float)
    if pa.shape != pb.shape:
        raise ValueError("profile dimension mismatch")
    diff = pa - pb
    return float(np.sqrt((diff * diff).sum()))
