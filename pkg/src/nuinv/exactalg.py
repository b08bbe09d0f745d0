"""Exact linear algebra over Z and Z/p, projective points, abelian groups.

Matrices are accepted as nested sequences or numpy arrays.  Integer work is
done in int64 while entries stay small and silently switches to Python
integers (object arrays) once they grow past ``_PROMOTE``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

_PROMOTE = 1 << 30


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % f for f in range(3, math.isqrt(p) + 1, 2))


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def as_integer_matrix(m, cols: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a 2-d integer array (int64, or object for big entries)."""
    if isinstance(m, np.ndarray) and m.ndim == 2 and m.dtype.kind in "iu":
        return m.astype(np.int64, copy=True)
    rows = [[int(x) for x in r] for r in m]
    if not rows:
        return np.zeros((0, cols or 0), dtype=np.int64)
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    if any(abs(x) >= _PROMOTE for r in rows for x in r):
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, r in enumerate(rows):
            out[i, :] = r
        return out
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(rows[0]))


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]
    rank_of_free_part: int

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d)


@dataclass(frozen=True)
class AbelianGroupClass:
    """Finitely generated abelian group: ``Z^free_rank`` plus cyclic torsion.

    ``torsion`` holds the invariant factors (each divides the next, all > 1),
    so two classes are isomorphic exactly when they compare equal.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: Sequence[int]) -> "AbelianGroupClass":
        return cls(int(free_rank), invariant_factors(divisors))

    def primary_parts(self) -> dict[int, list[int]]:
        """Elementary divisors grouped by prime."""
        out: dict[int, list[int]] = {}
        for d in self.torsion:
            for q, e in _factor(d).items():
                out.setdefault(q, []).append(q**e)
        return {q: sorted(v) for q, v in sorted(out.items())}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        for d, k in sorted(Counter(self.torsion).items()):
            parts.append(f"Z{d}^{k}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, order=True)
class ProjectivePoint:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coords):
            raise ValueError("zero vector has no projective class")
        lead = next(c for c in self.coords if c)
        if lead != 1 or any(not 0 <= c < self.p for c in self.coords):
            raise ValueError(f"{self.coords} is not a canonical representative mod {self.p}")

    @classmethod
    def normalize(cls, coords: Sequence[int], p: int) -> "ProjectivePoint":
        c = [int(x) % p for x in coords]
        lead = next((x for x in c if x), 0)
        if not lead:
            raise ValueError("zero vector has no projective class")
        inv = pow(lead, -1, p)
        return cls(p, tuple(x * inv % p for x in c))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def _factor(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def invariant_factors(divisors: Sequence[int]) -> tuple[int, ...]:
    """Canonical invariant factors of the torsion group ``⊕ Z/d``.

    Zero and unit entries are dropped; zero divisors belong to the free part
    and must be accounted for by the caller.
    """
    by_prime: dict[int, list[int]] = {}
    for d in divisors:
        d = abs(int(d))
        if d <= 1:
            continue
        for q, e in _factor(d).items():
            by_prime.setdefault(q, []).append(e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for q, exps in by_prime.items():
        exps = sorted(exps, reverse=True)
        for k, e in enumerate(exps):
            factors[length - 1 - k] *= q**e
    return tuple(factors)


def _diagonalize(a: np.ndarray) -> list[int]:
    """Reduce ``a`` in place to diagonal form; returns |diagonal| entries."""
    rows, cols = a.shape
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        mag = np.abs(a[t:, t:])
        if not mag.any():
            break
        mag[mag == 0] = mag.max() + 1
        i, j = np.unravel_index(int(np.argmin(mag)), mag.shape)
        _swap(a, t, t + i, t, t + j)
        while True:
            piv = a[t, t]
            col = a[t + 1 :, t]
            nz = np.flatnonzero(col)
            if nz.size:
                a[t + 1 + nz, t:] -= np.outer(col[nz] // piv, a[t, t:])
                a = _promote(a)
                col = a[t + 1 :, t]
                nz = np.flatnonzero(col)
                if nz.size:
                    # a remainder smaller than the pivot takes its place
                    _swap(a, t, t + 1 + nz[np.argmin(np.abs(col[nz]))], t, t)
                    continue
            # column t is clear below the pivot, so column operations only touch row t
            a[t, t + 1 :] %= piv
            row = a[t, t + 1 :]
            nz = np.flatnonzero(row)
            if not nz.size:
                break
            _swap(a, t, t, t, t + 1 + nz[np.argmin(np.abs(row[nz]))])
        diag.append(abs(int(a[t, t])))
        t += 1
    return diag


def _promote(a: np.ndarray) -> np.ndarray:
    if a.dtype != object and np.abs(a).max() >= _PROMOTE:
        return a.astype(object)
    return a


def _swap(a: np.ndarray, r1: int, r2: int, c1: int, c2: int) -> None:
    if r1 != r2:
        a[[r1, r2], :] = a[[r2, r1], :]
    if c1 != c2:
        a[:, [c1, c2]] = a[:, [c2, c1]]


def _chain(diag: Sequence[int]) -> list[int]:
    """Turn a diagonal into a divisibility chain with the same cokernel."""
    d = [x for x in diag if x]
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_normal_form(m, cols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix.

    The diagonal has ``min(rows, cols)`` entries, nonzero ones first in
    divisibility order.  ``rank_of_free_part`` reads ``m`` as a relation
    matrix on its columns.
    """
    a = as_integer_matrix(m, cols)
    rows, ncols = a.shape
    nonzero = _chain(_diagonalize(a.copy()))
    diagonal = tuple(nonzero) + (0,) * (min(rows, ncols) - len(nonzero))
    return SmithForm(diagonal, ncols - len(nonzero))


def classify_relation_matrix(m, cols: int | None = None) -> AbelianGroupClass:
    """Abelian group presented by relation rows on ``cols`` generators."""
    snf = smith_normal_form(m, cols)
    return AbelianGroupClass(snf.rank_of_free_part, tuple(d for d in snf.nonzero if d != 1))


def torsion_p_dimension(g: AbelianGroupClass, p: int) -> int:
    """dim over Z/p of (Tors g) ⊗ Z/p."""
    return sum(1 for d in g.torsion if d % p == 0)


def rank_mod_p(m, p: int) -> int:
    p = check_prime(p)
    a = np.array(as_integer_matrix(m) % p, dtype=np.int64)
    if a.size == 0:
        return 0
    return int(batch_rank_mod_p(a[None], p)[0])


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    return inv


def batch_rank_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Ranks over Z/p of a stack of matrices of shape (batch, rows, cols)."""
    # int16 holds every intermediate value while p * p < 2**15
    dtype = np.int16 if p < 181 else np.int64
    a = np.asarray(a)
    batch, rows, cols = a.shape
    rank = np.zeros(batch, dtype=np.int64)
    if rows == 0 or cols == 0 or batch == 0:
        return rank
    # batch axis last keeps the row updates contiguous
    a = np.ascontiguousarray(np.moveaxis(a % p, 0, -1).astype(dtype))
    inv = _inverse_table(p).astype(dtype)
    used = np.zeros((rows, batch), dtype=bool)
    ar = np.arange(batch)
    for c in range(cols):
        col = a[:, c, :]
        cand = (col != 0) & ~used
        has = cand.any(axis=0)
        if not has.any():
            continue
        piv = cand.argmax(axis=0)
        # no pivot: inv[0] == 0 zeroes the pivot row, so the update is a no-op
        prow = a[piv, c:, ar].T * inv[col[piv, ar]] % p
        f = np.where(used, 0, col)
        f[piv, ar] = 0
        tail = a[:, c:, :]
        tail -= f[:, None, :] * prow[None, :, :]
        tail %= p
        used[piv[has], ar[has]] = True
        rank += has
    return rank


def projective_count(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def projective_points(n: int, p: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Canonical points of P(Z_p^n) with lexicographic rank in [start, stop).

    Rows are sorted lexicographically; the first nonzero coordinate is 1.
    """
    total = projective_count(n, p)
    stop = total if stop is None else min(stop, total)
    start = max(0, start)
    if stop <= start:
        return np.zeros((0, n), dtype=np.int64)
    blocks = []
    offset = 0
    # leading 1 at position k; later k means smaller in lex order
    for k in range(n - 1, -1, -1):
        size = p ** (n - 1 - k)
        lo, hi = max(start, offset), min(stop, offset + size)
        if lo < hi:
            idx = np.arange(lo - offset, hi - offset, dtype=np.int64)
            blk = np.zeros((hi - lo, n), dtype=np.int64)
            blk[:, k] = 1
            for pos in range(n - 1, k, -1):
                blk[:, pos] = idx % p
                idx //= p
            blocks.append(blk)
        offset += size
    return np.concatenate(blocks)


def enumerate_projective(n: int, p: int) -> Iterator[ProjectivePoint]:
    if n < 1:
        raise ValueError("n must be at least 1")
    p = check_prime(p)
    for k in range(n - 1, -1, -1):
        for tail in itertools.product(range(p), repeat=n - 1 - k):
            yield ProjectivePoint(p, (0,) * k + (1,) + tail)


def chunk_ranges(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def nullspace_mod_p(m, p: int) -> np.ndarray:
    """Basis (as rows) of {x : m x = 0} over Z/p."""
    p = check_prime(p)
    a = np.array(as_integer_matrix(m) % p, dtype=np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not nz.size:
            continue
        k = r + nz[0]
        a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        others = np.arange(rows) != r
        a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = -a[i, f] % p
    return basis
