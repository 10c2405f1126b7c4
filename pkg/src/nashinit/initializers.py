"""Initial strategy batches for multi-start fictitious play.

Seven schemes: the classic single uniform start, i.i.d. random starts from
either sampler (macqueen-1 / macqueen-2), greedy farthest-point selection
from a sampled pool (maximin-s) or over the full continuous space via the
maximin solver (maximin-u), distance-weighted randomized selection in the
k-means++ style (fp++), and cluster centers of a sampled pool (k-means).

Schemes that select from a pool (maximin-s, fp++, k-means) accept a shared
pre-sampled pool through the ``*_from_pool`` variants so one batch of H
samples can feed all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import clustering
from .games import StrategyProfile
from .maximin import MaximinProblem, solve
from .sampling import SamplingScheme, sample_naive, sample_pool, sample_uniform


class InitScheme(str, Enum):
    CLASSIC = "classic"
    MACQUEEN1 = "macqueen-1"
    MACQUEEN2 = "macqueen-2"
    MAXIMIN_U = "maximin-u"
    MAXIMIN_S = "maximin-s"
    FPPP = "fp++"
    KMEANS = "k-means"

    @classmethod
    def parse(cls, name: str) -> "InitScheme":
        try:
            return cls(name)
        except ValueError:
            valid = "|".join(s.value for s in cls)
            raise ValueError(f"unknown algorithm {name!r}; valid ids: {valid}") from None


# Schemes whose picks come from a pool of H sampled profiles.
POOL_SCHEMES = frozenset(
    {InitScheme.MAXIMIN_S, InitScheme.FPPP, InitScheme.KMEANS}
)


@dataclass(frozen=True)
class InitAlgorithm:
    """An initialization scheme plus its batch size K and pool size H."""

    scheme: InitScheme
    num_inits: int = 5
    pool_size: int = 20_000

    def __post_init__(self):
        if self.num_inits < 1:
            raise ValueError("K must be >= 1")
        if self.scheme is InitScheme.CLASSIC and self.num_inits != 1:
            raise ValueError("classic always uses exactly one initialization")
        if self.scheme in POOL_SCHEMES and self.pool_size < self.num_inits:
            raise ValueError("pool size H must be >= K for sampled schemes")


@dataclass(frozen=True)
class InitBatch:
    algorithm: InitAlgorithm
    profiles: tuple[StrategyProfile, ...]
    seed: int

    def __post_init__(self):
        if len(self.profiles) != self.algorithm.num_inits:
            raise ValueError("batch length must equal the algorithm's K")

    def as_array(self) -> np.ndarray:
        return np.stack([p.probs for p in self.profiles])


def _batch(scheme: InitScheme, profiles, seed: int, pool_size: int = 0) -> InitBatch:
    profiles = tuple(profiles)
    algorithm = InitAlgorithm(
        scheme=scheme,
        num_inits=len(profiles),
        pool_size=max(pool_size, len(profiles)),
    )
    return InitBatch(algorithm=algorithm, profiles=profiles, seed=seed)


def init_classic(n: int, m: int) -> InitBatch:
    """The single all-actions-equally-likely starting profile."""
    return _batch(InitScheme.CLASSIC, [StrategyProfile.uniform(n, m)], seed=0)


def init_macqueen(
    n: int,
    m: int,
    num_inits: int,
    scheme: SamplingScheme,
    rng: np.random.Generator,
    seed: int = 0,
) -> InitBatch:
    """K i.i.d. random profiles from the chosen sampler."""
    draw = sample_naive if scheme is SamplingScheme.NAIVE else sample_uniform
    profiles = [draw(n, m, rng) for _ in range(num_inits)]
    which = (
        InitScheme.MACQUEEN1 if scheme is SamplingScheme.NAIVE else InitScheme.MACQUEEN2
    )
    return _batch(which, profiles, seed)


def _greedy_maximin_indices(
    flat: np.ndarray, num_inits: int, rng: np.random.Generator
) -> list[int]:
    num_points = len(flat)
    first = int(rng.integers(num_points))
    chosen = [first]
    diff = flat - flat[first]
    min_sq = np.einsum("ij,ij->i", diff, diff)
    for _ in range(num_inits - 1):
        masked = min_sq.copy()
        masked[chosen] = -1.0
        pick = int(masked.argmax())
        chosen.append(pick)
        diff = flat - flat[pick]
        min_sq = np.minimum(min_sq, np.einsum("ij,ij->i", diff, diff))
    return chosen


def maximin_from_pool(
    pool: np.ndarray, num_inits: int, rng: np.random.Generator, seed: int = 0
) -> InitBatch:
    """Greedy farthest-point selection from a sampled pool.

    The first pick is uniform; each later pick maximizes the minimum
    distance to everything already chosen (ties to the lowest pool index).
    """
    count, n, m = pool.shape
    if count < num_inits:
        raise ValueError("pool size H must be >= K")
    idx = _greedy_maximin_indices(pool.reshape(count, -1), num_inits, rng)
    return _batch(
        InitScheme.MAXIMIN_S, [StrategyProfile(pool[i]) for i in idx], seed, count
    )


def fppp_from_pool(
    pool: np.ndarray, num_inits: int, rng: np.random.Generator, seed: int = 0
) -> InitBatch:
    """Randomized farthest-point selection from a sampled pool.

    Each pick after the first is drawn with probability proportional to its
    squared minimum distance from the chosen set; if every remaining weight
    is zero the pick is uniform over the remaining points.
    """
    count, n, m = pool.shape
    if count < num_inits:
        raise ValueError("pool size H must be >= K")
    flat = pool.reshape(count, -1)
    first = int(rng.integers(count))
    chosen = [first]
    diff = flat - flat[first]
    min_sq = np.einsum("ij,ij->i", diff, diff)
    for _ in range(num_inits - 1):
        weights = min_sq.copy()
        weights[chosen] = 0.0
        total = float(weights.sum())
        if total > 0.0:
            pick = int(rng.choice(count, p=weights / total))
        else:
            remaining = np.setdiff1d(np.arange(count), chosen)
            pick = int(rng.choice(remaining))
        chosen.append(pick)
        diff = flat - flat[pick]
        min_sq = np.minimum(min_sq, np.einsum("ij,ij->i", diff, diff))
    return _batch(
        InitScheme.FPPP, [StrategyProfile(pool[i]) for i in chosen], seed, count
    )


def kmeans_from_pool(
    pool: np.ndarray,
    num_inits: int,
    rng: np.random.Generator,
    seed: int = 0,
    restarts: int = 5,
    max_iters: int = 50,
) -> InitBatch:
    """Cluster centers of a sampled pool as starting profiles.

    Best of ``restarts`` k-means++ seeded Lloyd runs; centers are means of
    simplex points, so the per-player renormalization only removes float
    drift.
    """
    count, n, m = pool.shape
    if count < num_inits:
        raise ValueError("pool size H must be >= K")
    result = clustering.best_of_restarts(
        pool.reshape(count, -1), num_inits, rng, restarts=restarts, max_iters=max_iters
    )
    centers = result.centers.reshape(num_inits, n, m)
    centers = centers / centers.sum(axis=2, keepdims=True)
    return _batch(
        InitScheme.KMEANS, [StrategyProfile(c) for c in centers], seed, count
    )


def init_maximin_sampled(
    n: int, m: int, num_inits: int, pool_size: int, rng: np.random.Generator,
    seed: int = 0,
) -> InitBatch:
    pool = sample_pool(n, m, pool_size, rng)
    return maximin_from_pool(pool, num_inits, rng, seed)


def init_fppp(
    n: int, m: int, num_inits: int, pool_size: int, rng: np.random.Generator,
    seed: int = 0,
) -> InitBatch:
    pool = sample_pool(n, m, pool_size, rng)
    return fppp_from_pool(pool, num_inits, rng, seed)


def init_kmeans(
    n: int, m: int, num_inits: int, pool_size: int, rng: np.random.Generator,
    seed: int = 0,
) -> InitBatch:
    pool = sample_pool(n, m, pool_size, rng)
    return kmeans_from_pool(pool, num_inits, rng, seed)


def init_maximin_unsampled(
    n: int,
    m: int,
    num_inits: int,
    rng: np.random.Generator,
    seed: int = 0,
    restarts: int = 20,
) -> InitBatch:
    """Farthest-point selection over the full continuous profile space.

    Starts from one uniform random profile and repeatedly appends the point
    maximizing the minimum squared distance to everything chosen so far,
    found by the maximin solver.  Early additions are usually pure profiles.
    """
    points = [sample_uniform(n, m, rng)]
    for _ in range(num_inits - 1):
        problem = MaximinProblem(np.stack([p.probs for p in points]))
        solution = solve(problem, rng, restarts=restarts)
        points.append(solution.point)
    return _batch(InitScheme.MAXIMIN_U, points, seed)
