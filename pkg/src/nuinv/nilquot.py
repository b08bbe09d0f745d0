"""Twisted Alexander matrices and index-p kernels of nilpotent quotients.

For lambda: G -> Z_p the kernel K has H_1(K) + Z^(p-1) presented by the
Fox Jacobian with every group-ring entry replaced by its p x p regular
representation block.  Counting kernels by their torsion gives the nu tables.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .exactalg import (
    AbelianGroupClass,
    check_prime,
    chunk_ranges,
    classify_relation_matrix,
    projective_count,
    projective_points,
    torsion_p_dimension,
)
from .freegrp import FoxJacobian, GroupRingElt, Presentation, Representation, nilpotent_presentation
from .resonance import default_threads

MAX_SIZE = 5000


def regular_rep(e: GroupRingElt) -> np.ndarray:
    """Circulant p x p matrix of multiplication by e; column j holds zeta^j * e."""
    p = e.p
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    return np.asarray(e.coeffs, dtype=np.int64)[idx]


def _inflate(jac: np.ndarray) -> np.ndarray:
    # jac has shape (m, n, p); block (k, i) is the circulant of jac[k, i]
    m, n, p = jac.shape
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    blocks = jac[:, :, idx]  # (m, n, p, p)
    return blocks.transpose(0, 2, 1, 3).reshape(m * p, n * p)


@dataclass(frozen=True)
class TwistedAlexander:
    base: np.ndarray
    rep: Representation

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.shape


def _check_size(m: int, n: int, p: int) -> None:
    if m * p > MAX_SIZE or n * p > MAX_SIZE:
        raise ValueError(f"twisted matrix {m * p}x{n * p} exceeds the {MAX_SIZE}x{MAX_SIZE} limit")


def twisted_alexander(g: Presentation | FoxJacobian, rep: Representation) -> TwistedAlexander:
    jac = g if isinstance(g, FoxJacobian) else FoxJacobian(g)
    if len(rep.lam) != jac.n:
        raise ValueError("representation and presentation disagree on n")
    _check_size(jac.m, jac.n, rep.p)
    return TwistedAlexander(_inflate(jac.evaluate(rep.lam, rep.p)), rep)


def _compact(a: np.ndarray) -> np.ndarray:
    """Drop zero rows and rows equal up to sign; the cokernel is unchanged."""
    a = a[np.any(a != 0, axis=1)]
    if len(a) == 0:
        return a
    lead = a[np.arange(len(a)), np.argmax(a != 0, axis=1)]
    a = a * np.where(lead < 0, -1, 1)[:, None]
    # hash rows, then confirm that rows sharing a key really are equal
    weights = np.random.default_rng(a.shape[1]).integers(1, 1 << 62, size=a.shape[1])
    keys = a.astype(np.int64) @ weights
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    if not np.array_equal(a[first][inverse.ravel()], a):
        return a
    return a[np.sort(first)]


def kernel_abelianization(g: Presentation | FoxJacobian, rep: Representation) -> AbelianGroupClass:
    """H_1 of the kernel of rep, from the twisted Alexander matrix."""
    a = twisted_alexander(g, rep).base
    cls = classify_relation_matrix(_compact(a), cols=a.shape[1])
    p = rep.p
    if cls.free_rank < p - 1:
        raise ValueError(f"free rank {cls.free_rank} < p - 1 = {p - 1}: malformed presentation")
    return AbelianGroupClass(cls.free_rank - (p - 1), cls.torsion)


def _r_and_l(q: int, p: int) -> tuple[int, int]:
    r = math.ceil((q - 2) / (p - 1))
    return r, q - 2 - (r - 1) * (p - 1)


def free_nilpotent_oracle(n: int, q: int, p: int) -> AbelianGroupClass:
    """Closed form of H_1(K) for an index-p kernel of F(n)/F(n)_q."""
    if n < 2 or q < 3:
        raise ValueError("need n >= 2 and q >= 3")
    p = check_prime(p)
    r, l = _r_and_l(q, p)
    divisors = [p ** (r - 1)] * ((n - 1) * (p - l - 1)) + [p**r] * ((n - 1) * l)
    return AbelianGroupClass.from_divisors(n, divisors)


def structure_check(cls: AbelianGroupClass, n: int, q: int, p: int) -> bool:
    """Whether cls has the shape forced on every index-p kernel of G/G_q."""
    r, l = _r_and_l(q, p)
    if cls.free_rank != n:
        return False
    parts = cls.primary_parts()
    if set(parts) - {p}:
        return False
    divs = parts.get(p, [])
    if any(d > p**r for d in divs):
        return False
    if len(divs) > (n - 1) * (p - 1):
        return False
    return sum(1 for d in divs if d == p**r) <= l * (n - 1)


@dataclass
class NuTable:
    """Kernel counts keyed by torsion signature.

    At q = 3 the key is d; from q = 4 on it is the tuple of elementary
    divisors, since d alone no longer pins the group.
    """

    q: int
    p: int
    n: int
    rows: dict
    classes: dict | None = None
    violations: int = 0

    @property
    def total(self) -> int:
        return sum(self.rows.values())

    def by_dimension(self) -> dict[int, int]:
        if self.q == 3:
            return dict(self.rows)
        out: Counter = Counter()
        for sig, c in self.rows.items():
            out[sum(1 for d in sig if d % self.p == 0)] += c
        return dict(out)

    def as_list(self) -> list[int]:
        dims = self.by_dimension()
        return [dims.get(d, 0) for d in range(self.n)]


def _signature(cls: AbelianGroupClass, q: int, p: int):
    if q == 3:
        return torsion_p_dimension(cls, p)
    return tuple(d for ds in cls.primary_parts().values() for d in ds)


def nu_table(g: Presentation, q: int, p: int, threads: int | None = None, nilpotent: bool = False) -> NuTable:
    """Classify the kernel of every lambda in P(Z_p^n) for G/G_q.

    With ``nilpotent`` set, ``g`` is taken to present G/G_q already.
    """
    p = check_prime(p)
    if q < 3:
        raise ValueError("q must be at least 3")
    h = g if nilpotent else nilpotent_presentation(g, q)
    jac = FoxJacobian(h)
    _check_size(jac.m, jac.n, p)
    n = g.n
    threads = threads or default_threads()

    def work(rng):
        rows: Counter = Counter()
        classes: dict = {}
        bad = 0
        for lam in projective_points(n, p, *rng):
            cls = kernel_abelianization(jac, Representation(p, tuple(int(x) for x in lam)))
            sig = _signature(cls, q, p)
            rows[sig] += 1
            classes.setdefault(sig, cls)
            bad += not structure_check(cls, n, q, p)
        return rows, classes, bad

    ranges = chunk_ranges(projective_count(n, p), 256)
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, ranges))
    else:
        results = [work(r) for r in ranges]
    rows: Counter = Counter()
    classes: dict = {}
    bad = 0
    for r, c, b in results:
        rows.update(r)
        bad += b
        for k, v in c.items():
            classes.setdefault(k, v)
    return NuTable(q, p, n, dict(sorted(rows.items())), dict(sorted(classes.items())), bad)


def nu_counts(table: NuTable | Mapping[int, int], n: int) -> list[int]:
    rows = table.by_dimension() if isinstance(table, NuTable) else table
    return [rows.get(d, 0) for d in range(n)]
