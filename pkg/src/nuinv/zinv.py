"""Cokernel invariants of the classifying map in the exterior algebra.

Exterior vectors are dicts from strictly increasing index tuples (0-based)
to integer coefficients.  Z_{i,j} is the cokernel of
Lambda^i H (x) Lambda^j (G_2/G_3) -> Lambda^(i+2j) H, w (x) y_1..y_j -> w ^ chi(y_1) ^ .. ^ chi(y_j).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .arrgmt import LinkingMatrix, chi_transpose_matrix
from .exactalg import AbelianGroupClass, classify_relation_matrix

MAX_DEGREE = 8

Vector = dict


@dataclass(frozen=True)
class ExteriorBasis:
    n: int
    k: int

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.n), self.k))

    def index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.subsets)}

    def __len__(self) -> int:
        return comb(self.n, self.k)

    def to_vector(self, row) -> Vector:
        return {s: int(c) for s, c in zip(self.subsets, row) if c}

    def to_row(self, v: Vector) -> np.ndarray:
        idx = self.index()
        out = np.zeros(len(self), dtype=object)
        for s, c in v.items():
            out[idx[s]] += c
        return out


def _degree(v: Vector) -> int | None:
    return len(next(iter(v))) if v else None


def _merge_sign(s: tuple[int, ...], t: tuple[int, ...]) -> int:
    """Sign of the shuffle sorting s + t, or 0 if they overlap."""
    if set(s) & set(t):
        return 0
    inversions = sum(1 for a in s for b in t if a > b)
    return -1 if inversions % 2 else 1


def wedge_multiply(a: Vector, b: Vector, n: int) -> Vector:
    da, db = _degree(a), _degree(b)
    if da is not None and db is not None and da + db > n:
        raise ValueError(f"degree {da + db} exceeds {n}")
    out: dict = {}
    for s, x in a.items():
        for t, y in b.items():
            sign = _merge_sign(s, t)
            if sign:
                key = tuple(sorted(s + t))
                out[key] = out.get(key, 0) + sign * x * y
    return {k: v for k, v in out.items() if v}


def _n_from_columns(cols: int) -> int:
    n = 2
    while comb(n, 2) < cols:
        n += 1
    if comb(n, 2) != cols:
        raise ValueError(f"{cols} columns is not C(n, 2) for any n")
    return n


def z_matrix(i: int, j: int, chiT, n: int | None = None) -> np.ndarray:
    """Relation matrix of Z_{i,j}: one row per basis element of the source."""
    chiT = np.asarray(chiT)
    n = _n_from_columns(chiT.shape[1]) if n is None else n
    top = i + 2 * j
    if top > n:
        raise ValueError(f"i + 2j = {top} exceeds n = {n}")
    if top > MAX_DEGREE:
        raise ValueError(f"i + 2j = {top} is above the supported degree {MAX_DEGREE}")
    two = ExteriorBasis(n, 2)
    images = [two.to_vector(r) for r in chiT]
    target = ExteriorBasis(n, top)
    rows = []
    for s in itertools.combinations(range(n), i):
        for ys in itertools.combinations(range(len(images)), j):
            v: Vector = {s: 1}
            for y in ys:
                v = wedge_multiply(v, images[y], n)
                if not v:
                    break
            if v:
                rows.append(target.to_row(v))
    if not rows:
        return np.zeros((0, len(target)), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def z_invariant(i: int, j: int, chiT, n: int | None = None) -> AbelianGroupClass:
    m = z_matrix(i, j, chiT, n)
    return classify_relation_matrix(m, cols=m.shape[1])


def ziegler_invariant(lk: LinkingMatrix) -> AbelianGroupClass:
    """Z_{0,2}; always of the form Z^(C(n-1,3) - r) + (Z_2)^r."""
    if lk.n < 4:
        raise ValueError("need at least 4 planes")
    cls = z_invariant(0, 2, chi_transpose_matrix(lk), lk.n)
    r = len(cls.torsion)
    assert set(cls.torsion) <= {2} and cls.free_rank == comb(lk.n - 1, 3) - r, f"unexpected shape {cls}"
    return cls
