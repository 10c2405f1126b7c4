"""K-means over flattened strategy-profile vectors.

Seeding follows the k-means++ rule (next center sampled with probability
proportional to squared distance from the chosen ones); Lloyd iterations run
until assignments stop changing or an iteration cap is hit.  The assignment
step prunes center candidates with the triangle inequality: if
d(b, c) > 2 d(x, b) for the current best center b, then c cannot beat b, so
d(x, c) is never computed.  Pruned and naive assignment produce identical
clusterings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SSE_SLACK = 1e-9  # relative float slack for the monotonicity assertion


@dataclass(frozen=True)
class Clustering:
    centers: np.ndarray  # (K, d)
    assignment: np.ndarray  # (H,) center index per point
    sse: float  # sum of squared point-to-assigned-center distances
    iterations: int


def _sq_dists_to(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    diff = points - center
    return np.einsum("ij,ij->i", diff, diff)


def _sq_dist_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # ||x||^2 - 2 x.c + ||c||^2; tiny negatives from cancellation are clamped
    sq = (
        np.einsum("ij,ij->i", points, points)[:, None]
        - 2.0 * points @ centers.T
        + np.einsum("ij,ij->i", centers, centers)[None, :]
    )
    return np.maximum(sq, 0.0)


def assign_naive(
    points: np.ndarray, centers: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center index per point (ties to the lowest index) and the
    squared distance to it."""
    sq = _sq_dist_matrix(points, centers)
    idx = sq.argmin(axis=1)
    return idx, sq[np.arange(len(points)), idx]


def assign_pruned(
    points: np.ndarray,
    centers: np.ndarray,
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Triangle-inequality-pruned nearest-center assignment.

    ``start`` (usually the previous iteration's assignment) seeds the
    per-point best-center bound.  Candidate center c is skipped for point x
    whenever d(best, c) > 2 d(x, best), which guarantees d(x, c) > d(x, best);
    in squared form the test is d2(best, c) > 4 d2(x, best).  Without a
    starting assignment there is no bound to prune with, so the first round
    evaluates every center.  Produces exactly the naive assignment,
    including lowest-index tie breaks.
    """
    if start is None:
        return assign_naive(points, centers)
    best_idx = start.copy()
    diff = points - centers[best_idx]
    best_sq = np.maximum(np.einsum("ij,ij->i", diff, diff), 0.0)
    center_sq = _sq_dist_matrix(centers, centers)
    survivors = (center_sq[best_idx] <= 4.0 * best_sq[:, None]) & (
        best_idx[:, None] != np.arange(len(centers))
    )
    if survivors.sum() > survivors.size // 2:
        # Overlapping clusters: the bound barely prunes, so per-candidate
        # bookkeeping would cost more than evaluating everything.
        return assign_naive(points, centers)
    for c in range(len(centers)):
        candidates = np.flatnonzero(survivors[:, c])
        if candidates.size == 0:
            continue
        diff_c = points[candidates] - centers[c]
        sq_c = np.maximum(np.einsum("ij,ij->i", diff_c, diff_c), 0.0)
        current = best_sq[candidates]
        better = (sq_c < current) | ((sq_c == current) & (c < best_idx[candidates]))
        if better.any():
            rows = candidates[better]
            best_sq[rows] = sq_c[better]
            best_idx[rows] = c
    return best_idx, best_sq


def _update_centers(
    points: np.ndarray,
    assignment: np.ndarray,
    sq_to_assigned: np.ndarray,
    num_centers: int,
) -> np.ndarray:
    dim = points.shape[1]
    counts = np.bincount(assignment, minlength=num_centers)
    sums = np.zeros((num_centers, dim))
    for j in range(dim):
        sums[:, j] = np.bincount(
            assignment, weights=points[:, j], minlength=num_centers
        )
    centers = np.zeros_like(sums)
    nonempty = counts > 0
    centers[nonempty] = sums[nonempty] / counts[nonempty, None]
    if not nonempty.all():
        # Reseed each empty cluster at the point currently farthest from its
        # assigned center; farther points are claimed first.
        claimable = sq_to_assigned.copy()
        for c in np.flatnonzero(~nonempty):
            far = int(claimable.argmax())
            centers[c] = points[far]
            claimable[far] = -1.0
    return centers


def lloyd(
    points: np.ndarray,
    seed_centers: np.ndarray,
    max_iters: int = 50,
    prune: bool = True,
) -> Clustering:
    """Alternate assignment and mean updates from the given seed centers.

    Stops when assignments are stable or after ``max_iters`` update rounds.
    SSE is non-increasing across iterations; a violation beyond float slack
    raises.
    """
    points = np.asarray(points, dtype=float)
    centers = np.array(seed_centers, dtype=float)
    assign = assign_pruned if prune else assign_naive
    assignment, sq = assign(points, centers)
    sse = float(sq.sum())
    iterations = 0
    for _ in range(max_iters):
        centers = _update_centers(points, assignment, sq, len(centers))
        new_assignment, sq = (
            assign(points, centers, assignment) if prune else assign(points, centers)
        )
        new_sse = float(sq.sum())
        assert new_sse <= sse + SSE_SLACK * (1.0 + sse), (
            f"SSE increased during Lloyd iteration: {sse} -> {new_sse}"
        )
        iterations += 1
        stable = np.array_equal(new_assignment, assignment)
        assignment, sse = new_assignment, new_sse
        if stable:
            break
    return Clustering(
        centers=centers, assignment=assignment, sse=sse, iterations=iterations
    )


def kmeanspp_seed(
    points: np.ndarray, num_centers: int, rng: np.random.Generator
) -> np.ndarray:
    """k-means++ seeding: first center uniform, then each next center sampled
    with probability proportional to its squared distance from the chosen
    set.  Falls back to a uniform pick over unchosen points if every
    remaining weight is zero (degenerate pools)."""
    points = np.asarray(points, dtype=float)
    num_points = len(points)
    if num_points < num_centers:
        raise ValueError(f"pool of {num_points} points cannot seed {num_centers} centers")
    chosen = np.empty(num_centers, dtype=np.intp)
    chosen[0] = rng.integers(num_points)
    min_sq = _sq_dists_to(points, points[chosen[0]])
    for k in range(1, num_centers):
        total = float(min_sq.sum())
        if total > 0.0:
            idx = int(rng.choice(num_points, p=min_sq / total))
        else:
            remaining = np.setdiff1d(np.arange(num_points), chosen[:k])
            idx = int(rng.choice(remaining))
        chosen[k] = idx
        min_sq = np.minimum(min_sq, _sq_dists_to(points, points[idx]))
    return points[chosen].copy()


def best_of_restarts(
    points: np.ndarray,
    num_centers: int,
    rng: np.random.Generator,
    restarts: int = 5,
    max_iters: int = 50,
    prune: bool = True,
) -> Clustering:
    """Lowest-SSE clustering over several k-means++ seeded Lloyd runs."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best: Clustering | None = None
    for _ in range(restarts):
        seeds = kmeanspp_seed(points, num_centers, rng)
        result = lloyd(points, seeds, max_iters=max_iters, prune=prune)
        if best is None or result.sse < best.sse:
            best = result
    return best
