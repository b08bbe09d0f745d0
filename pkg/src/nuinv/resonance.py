"""Stratification of P(Z_p^n) by the rank of the linearized Alexander matrix.

The point lambda lies in stratum d when rank M(lambda) = n - 1 - d; the
number of points in stratum d is the count of index-p normal subgroups of
G/G_3 whose abelianization has d-dimensional p-torsion.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .arrgmt import LinearizedMatrix
from .exactalg import (
    ProjectivePoint,
    batch_rank_mod_p,
    check_prime,
    chunk_ranges,
    projective_count,
    projective_points,
    rank_mod_p,
)

CHUNK = 1 << 15
THREADS_ENV = "NUINV_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class ResonanceProfile:
    p: int
    n: int
    counts: dict[int, int]
    strata: dict[int, list[tuple[int, ...]]] | None = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_list(self) -> list[int]:
        """Counts for d = 0 .. n-1."""
        return [self.counts.get(d, 0) for d in range(self.n)]

    def at_least(self, d: int) -> list[tuple[int, ...]]:
        """Collected points of P_d, i.e. of all strata d' >= d."""
        if self.strata is None:
            raise ValueError("points were not collected")
        return [pt for k, pts in sorted(self.strata.items()) if k >= d for pt in pts]


def _ranks(builder, points: np.ndarray, p: int) -> np.ndarray:
    if not isinstance(builder, LinearizedMatrix):
        return np.array([rank_mod_p(builder(tuple(int(x) for x in pt)), p) for pt in points], dtype=np.int64)
    if not builder.annihilates_argument or builder.shape[0] <= builder.n + 1:
        return batch_rank_mod_p(builder.evaluate_batch(points, p), p)
    return _ranks_compressed(builder, points, p)


def _ranks_compressed(builder: LinearizedMatrix, points: np.ndarray, p: int) -> np.ndarray:
    """Exact ranks via a random row compression S M(lambda).

    rank S M <= rank M <= n - 1, so a compressed rank of n - 1 is final;
    only the points that fall short are recomputed on the full matrix.
    """
    n = builder.n
    rows = builder.shape[0]
    rng = np.random.default_rng(rows * 1000003 + n * 101 + p)
    s = rng.integers(0, p, size=(n + 1, rows))
    small = LinearizedMatrix(np.einsum("sr,rci->sci", s, builder.coeffs) % p)
    mats = small.evaluate_batch(points, p)
    # the leading coordinate's column is a combination of the later ones
    lead = (points != 0).argmax(axis=1)
    keep = np.arange(n - 1)[None, :] + (np.arange(n - 1)[None, :] >= lead[:, None])
    mats = np.take_along_axis(mats, keep[:, None, :], axis=2)
    ranks = batch_rank_mod_p(mats, p)
    redo = np.flatnonzero(ranks < n - 1)
    if redo.size:
        ranks[redo] = batch_rank_mod_p(builder.evaluate_batch(points[redo], p), p)
    return ranks


def stratify(
    builder: LinearizedMatrix | Callable[[Sequence[int]], np.ndarray],
    n: int,
    p: int,
    collect_points: bool = False,
    threads: int | None = None,
) -> ResonanceProfile:
    """Count projective points by torsion dimension d = n - 1 - rank M(lambda)."""
    p = check_prime(p)
    threads = threads or default_threads()
    total = projective_count(n, p)

    def work(rng):
        pts = projective_points(n, p, *rng)
        d = n - 1 - _ranks(builder, pts, p)
        if d.size and d.min() < 0:
            raise ValueError("matrix rank exceeds n - 1; lambda is not in its own kernel")
        counts = np.bincount(d, minlength=n)
        pts_by_d = None
        if collect_points:
            pts_by_d = {int(k): [tuple(int(x) for x in pt) for pt in pts[d == k]] for k in np.unique(d)}
        return counts, pts_by_d

    ranges = chunk_ranges(total, CHUNK)
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, ranges))
    else:
        results = [work(r) for r in ranges]

    counts = np.zeros(n, dtype=np.int64)
    strata: dict[int, list] | None = {} if collect_points else None
    for c, pts in results:
        counts[: len(c)] += c
        if collect_points:
            for k, v in pts.items():
                strata.setdefault(k, []).extend(v)
    return ResonanceProfile(p, n, {d: int(c) for d, c in enumerate(counts) if c}, strata)


def membership(lam, d: int, builder, p: int | None = None) -> bool:
    """Whether lambda lies in the affine resonance variety R_d: rank M(lambda) < n - d."""
    if isinstance(lam, ProjectivePoint):
        p = lam.p if p is None else p
        lam = lam.coords
    p = check_prime(p)
    lam = tuple(int(x) % p for x in lam)
    if not any(lam):
        raise ValueError("lambda must be nonzero")
    n = len(lam)
    return rank_mod_p(builder(lam), p) < n - d


def expected_nu_from_components(m: Mapping[int, int], p: int) -> dict[int, int]:
    """Counts predicted when the strata are disjoint linear subspaces.

    ``m`` maps a component dimension to the number of such components; a
    component of dimension k contributes (p^k - 1)/(p - 1) points to stratum k - 1.
    """
    out: dict[int, int] = {}
    for dim, count in m.items():
        if count:
            out[dim - 1] = out.get(dim - 1, 0) + (p**dim - 1) // (p - 1) * count
    return out


def hyperplane_cover_check(points, forms: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    """Points not annihilated (mod p) by any of the given linear forms."""
    if isinstance(points, ResonanceProfile):
        points = [pt for pts in (points.strata or {}).values() for pt in pts]
    pts = list(points)
    if not pts:
        return []
    if not forms:
        return [tuple(pt) for pt in pts]
    arr = np.array(pts, dtype=np.int64)
    vals = arr @ np.array(forms, dtype=np.int64).T % p
    keep = ~(vals == 0).any(axis=1)
    return [tuple(int(x) for x in pt) for pt in arr[keep]]
