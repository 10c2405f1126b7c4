"""Farthest-point search over the product of strategy simplices.

Solves max_x min_i ||x - tau_i||^2 subject to every player's row of x lying
on the probability simplex.  The objective is a minimum of convex quadratics,
so it is nonconvex and its maximizers gravitate toward extreme points; the
solver therefore combines exhaustive evaluation of all pure profiles
(vertices of the feasible polytope) with multistart projected gradient
ascent from random interior points.  No global-optimality certificate is
claimed beyond "best candidate found".
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .games import PROB_TOL, StrategyProfile
from .sampling import sample_uniform

VERTEX_ENUM_CAP = 1_000_000  # skip vertex enumeration above this many pure profiles

ASCENT_MAX_ITERS = 500
ASCENT_INIT_STEP = 0.5
ASCENT_MIN_STEP = 1e-8


@dataclass(frozen=True)
class MaximinProblem:
    """Fixed centers to stay far from, over an n-player m-action profile space."""

    centers: np.ndarray  # (t, n, m), each row of each center on the simplex

    def __post_init__(self):
        centers = np.ascontiguousarray(self.centers, dtype=float)
        if centers.ndim != 3 or centers.shape[0] < 1:
            raise ValueError("centers must be a (t, n, m) array with t >= 1")
        sums = centers.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > PROB_TOL) or np.any(centers < -PROB_TOL):
            raise ValueError("every center row must lie on the probability simplex")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)

    @property
    def num_players(self) -> int:
        return self.centers.shape[1]

    @property
    def num_actions(self) -> int:
        return self.centers.shape[2]


@dataclass(frozen=True)
class MaximinSolution:
    point: StrategyProfile
    objective: float  # min squared distance to the centers at `point`
    certificate: str  # "vertex-optimal" if the winner was a pure profile


def objective(x, centers) -> float:
    """min_i ||x - centers[i]||^2 with the sum over all players and actions."""
    xp = x.probs if isinstance(x, StrategyProfile) else np.asarray(x, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 3 or len(centers) == 0:
        raise ValueError("centers must be a nonempty (t, n, m) array")
    if centers.shape[1:] != xp.shape:
        raise ValueError("point/centers dimension mismatch")
    diff = centers - xp[None, :, :]
    return float(np.einsum("tij,tij->t", diff, diff).min())


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a vector onto the probability simplex.

    Sort-based: entries above a shared threshold keep (v - theta), the rest
    clamp to zero, with theta chosen so the result sums to 1.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1 or not np.all(np.isfinite(v)):
        raise ValueError("project_simplex expects a finite 1-D vector")
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ranks = np.arange(1, v.size + 1)
    rho = np.nonzero(u * ranks > cumulative)[0][-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _project_rows(x: np.ndarray) -> np.ndarray:
    """Row-wise simplex projection, vectorized over players."""
    m = x.shape[1]
    u = -np.sort(-x, axis=1)
    cumulative = np.cumsum(u, axis=1) - 1.0
    ranks = np.arange(1, m + 1)
    positive = u * ranks > cumulative
    rho = m - 1 - positive[:, ::-1].argmax(axis=1)  # last column satisfying the bound
    theta = cumulative[np.arange(len(x)), rho] / (rho + 1.0)
    return np.maximum(x - theta[:, None], 0.0)


def _min_center(x: np.ndarray, centers: np.ndarray) -> tuple[int, float]:
    diff = centers - x[None, :, :]
    sq = np.einsum("tij,tij->t", diff, diff)
    active = int(sq.argmin())
    return active, float(sq[active])


def _ascend(
    x0: np.ndarray, centers: np.ndarray
) -> tuple[np.ndarray, float]:
    """Projected gradient ascent with backtracking on the min-squared-distance
    objective.  The step never decreases the objective; stops when no step
    above the floor improves it."""
    x = x0.copy()
    active, value = _min_center(x, centers)
    for _ in range(ASCENT_MAX_ITERS):
        grad = 2.0 * (x - centers[active])
        step = ASCENT_INIT_STEP
        improved = False
        while step >= ASCENT_MIN_STEP:
            candidate = _project_rows(x + step * grad)
            cand_active, cand_value = _min_center(candidate, centers)
            if cand_value > value:
                x, active, value = candidate, cand_active, cand_value
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return x, value


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    fa, fb = a.ravel(), b.ravel()
    for x, y in zip(fa, fb):
        if x != y:
            return x < y
    return False


def _best_vertex(centers: np.ndarray) -> tuple[np.ndarray, float]:
    """Exhaustively evaluate all m**n pure profiles.

    d^2(vertex, tau) = n + sum ||tau||^2 - 2 * sum_i tau[i, a_i], so the whole
    enumeration is one gather per center.
    """
    _, n, m = centers.shape
    grids = np.indices((m,) * n).reshape(n, -1)  # (n, m**n) action indices
    picked = np.zeros((len(centers), grids.shape[1]))
    for i in range(n):
        picked += centers[:, i, grids[i]]
    sq_norms = np.einsum("tij,tij->t", centers, centers)
    vertex_objs = (n + sq_norms[:, None] - 2.0 * picked).min(axis=0)
    best = int(vertex_objs.argmax())
    x = np.zeros((n, m))
    x[np.arange(n), grids[:, best]] = 1.0
    return x, float(vertex_objs[best])


def solve(
    problem: MaximinProblem,
    rng: np.random.Generator,
    restarts: int = 20,
    vertex_cap: int = VERTEX_ENUM_CAP,
) -> MaximinSolution:
    """Best point found by vertex enumeration plus multistart ascent.

    The returned objective is >= the objective of every evaluated candidate.
    Exact objective ties break toward the lexicographically smaller point so
    the result never depends on evaluation order.
    """
    centers = problem.centers
    n, m = problem.num_players, problem.num_actions
    best_x: np.ndarray | None = None
    best_value = -np.inf
    best_is_vertex = False

    if m**n <= vertex_cap:
        # Re-score through objective() so vertex and ascent candidates are
        # compared with identical arithmetic.
        best_x, _ = _best_vertex(centers)
        best_value = objective(best_x, centers)
        best_is_vertex = True
    else:
        warnings.warn(
            f"{m}**{n} pure profiles exceed the enumeration cap {vertex_cap}; "
            "relying on multistart ascent only",
            stacklevel=2,
        )

    for _ in range(restarts):
        start = sample_uniform(n, m, rng).probs
        x, value = _ascend(start, centers)
        if value > best_value or (
            value == best_value and best_x is not None and _lex_less(x, best_x)
        ):
            best_x, best_value = x, value
            best_is_vertex = False

    point = StrategyProfile(best_x)
    return MaximinSolution(
        point=point,
        objective=objective(point, centers),
        certificate="vertex-optimal" if best_is_vertex else "local-optimum",
    )
