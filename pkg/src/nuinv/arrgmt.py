"""Arrangement inputs and the matrices built from them.

Four kinds of input are supported: the rank-2 flats of a complex line
arrangement, the linking matrix of a 2-arrangement (directly, from a
permutation, or from defining equations), and a raw commutator-relators
presentation.  Each yields a linearized Alexander matrix, which is linear in
the cohomology class lambda and is stored as an integer tensor.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactalg import ProjectivePoint, check_prime
from .freegrp import Presentation, Word, commutator, second_order_epsilons


class LinearizedMatrix:
    """Matrix whose entries are integral linear forms in lambda_1..lambda_n.

    ``coeffs[r, c, i]`` is the coefficient of lambda_i in entry (r, c).
    """

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=np.int64)
        if self.coeffs.ndim != 3:
            raise ValueError("coefficient tensor must be 3-dimensional")

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[:2]

    @property
    def n(self) -> int:
        return self.coeffs.shape[2]

    @property
    def annihilates_argument(self) -> bool:
        """True when M(lambda) lambda = 0 identically, capping the rank at n - 1."""
        c = self.coeffs
        if c.shape[1] != c.shape[2]:
            return False
        return bool(np.all(c + np.transpose(c, (0, 2, 1)) == 0))

    def evaluate(self, lam: Sequence[int], p: int | None = None) -> np.ndarray:
        out = self.coeffs @ np.asarray(tuple(lam), dtype=np.int64)
        return out % p if p else out

    __call__ = evaluate

    def evaluate_batch(self, points: np.ndarray, p: int) -> np.ndarray:
        """Matrices at each row of ``points``: shape (batch, rows, cols)."""
        r, c, n = self.coeffs.shape
        # float64 matmul is exact here and much faster than integer einsum
        flat = np.asarray(points, dtype=np.float64) @ self.coeffs.reshape(r * c, n).T.astype(np.float64)
        return np.rint(flat).astype(np.int64).reshape(-1, r, c) % p


def _lam_and_p(lam, p):
    if isinstance(lam, ProjectivePoint):
        return lam.coords, lam.p if p is None else p
    if p is None:
        raise ValueError("a prime is required when lambda is a plain residue list")
    return tuple(lam), check_prime(p)


# ---------------------------------------------------------------- line lattices


@dataclass(frozen=True)
class LineLattice:
    """Multiple points of an arrangement of ``n`` affine lines.

    ``flats`` lists the points where three or more lines meet; every pair of
    lines not inside a listed flat meets in an (implicit) double point.
    """

    n: int
    flats: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flats = []
        for f in self.flats:
            f = tuple(sorted(int(i) for i in f))
            if len(set(f)) != len(f):
                raise ValueError(f"flat {f} repeats a line")
            if len(f) < 2:
                raise ValueError(f"flat {f} has fewer than two lines")
            if not all(1 <= i <= self.n for i in f):
                raise ValueError(f"flat {f} mentions a line outside 1..{self.n}")
            flats.append(f)
        for a, b in itertools.combinations(flats, 2):
            if len(set(a) & set(b)) >= 2:
                raise ValueError(f"flats {a} and {b} share two lines")
        object.__setattr__(self, "flats", tuple(flats))

    @property
    def all_flats(self) -> list[tuple[int, ...]]:
        """Listed multiple points followed by the implicit double points."""
        big = [f for f in self.flats if len(f) >= 3]
        covered = {pair for f in big for pair in itertools.combinations(f, 2)}
        doubles = [pr for pr in itertools.combinations(range(1, self.n + 1), 2) if pr not in covered]
        return big + doubles


def validate_lattice(lattice: LineLattice) -> tuple[int, int]:
    """Betti numbers (b_1, b_2) of the complement."""
    return lattice.n, sum(len(f) - 1 for f in lattice.all_flats)


def complex_linearized_form(lattice: LineLattice) -> LinearizedMatrix:
    """Stacked blocks, one row per line of a flat other than its largest."""
    n = lattice.n
    rows = []
    for V in lattice.all_flats:
        for i in V[:-1]:
            block = np.zeros((n, n), dtype=np.int64)
            for j in V:
                block[j - 1, i - 1] += 1
                if j == i:
                    for k in V:
                        block[j - 1, k - 1] -= 1
            rows.append(block)
    return LinearizedMatrix(np.array(rows, dtype=np.int64).reshape(len(rows), n, n))


def complex_linearized_matrix(lattice: LineLattice, lam, p: int | None = None) -> np.ndarray:
    lam, p = _lam_and_p(lam, p)
    return complex_linearized_form(lattice).evaluate(lam, p)


def complex_presentation(lattice: LineLattice) -> Presentation:
    """Relators [x_i, prod_{j in V} x_j], i in V minus max V: same G/G_3 as the arrangement."""
    rels = []
    for V in lattice.all_flats:
        prod = Word(tuple(V))
        for i in V[:-1]:
            rels.append(commutator(Word.gen(i), prod))
    return Presentation(lattice.n, tuple(rels))


# ---------------------------------------------------------------- 2-arrangements


@dataclass(frozen=True)
class LinkingMatrix:
    l: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        l = tuple(tuple(int(x) for x in row) for row in self.l)
        n = len(l)
        for i, row in enumerate(l):
            if len(row) != n:
                raise ValueError("linking matrix must be square")
            if row[i] != 0:
                raise ValueError("linking matrix must have zero diagonal")
            for j in range(n):
                if j != i and row[j] not in (1, -1):
                    raise ValueError(f"entry ({i + 1},{j + 1}) is not +-1")
                if row[j] != l[j][i]:
                    raise ValueError("linking matrix must be symmetric")
        object.__setattr__(self, "l", l)

    @property
    def n(self) -> int:
        return len(self.l)

    @classmethod
    def from_upper(cls, n: int, entries: Sequence[int]) -> "LinkingMatrix":
        entries = list(entries)
        if len(entries) != n * (n - 1) // 2:
            raise ValueError(f"need {n * (n - 1) // 2} upper-triangular entries, got {len(entries)}")
        l = [[0] * n for _ in range(n)]
        it = iter(entries)
        for i in range(n):
            for j in range(i + 1, n):
                l[i][j] = l[j][i] = next(it)
        return cls(tuple(map(tuple, l)))

    def negated(self) -> "LinkingMatrix":
        return LinkingMatrix(tuple(tuple(-x for x in row) for row in self.l))

    def array(self) -> np.ndarray:
        return np.array(self.l, dtype=np.int64)


def parse_permutation(tau: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(tau, str):
        tau = tau.strip()
        tau = [int(t) for t in (tau.split(",") if "," in tau else tau.split() if " " in tau else tau)]
    tau = tuple(int(t) for t in tau)
    if sorted(tau) != list(range(1, len(tau) + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{len(tau)}")
    return tau


def linking_from_permutation(tau: str | Sequence[int], sign: int = 1) -> LinkingMatrix:
    """Linking numbers of the horizontal arrangement A(tau).

    l_ij = sgn((j - i)(tau(j) - tau(i))); ``sign=-1`` gives the mirror image.
    """
    tau = parse_permutation(tau)
    n = len(tau)
    l = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                l[i][j] = sign * (1 if (j - i) * (tau[j] - tau[i]) > 0 else -1)
    return LinkingMatrix(tuple(map(tuple, l)))


@dataclass(frozen=True)
class DefiningEquations:
    """Planes H_i = {alpha_i = alpha'_i = 0} in R^4, given by rational 4-vectors."""

    pairs: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...]], ...]

    def __post_init__(self):
        pairs = []
        for a, b in self.pairs:
            a = tuple(Fraction(x) for x in a)
            b = tuple(Fraction(x) for x in b)
            if len(a) != 4 or len(b) != 4:
                raise ValueError("each linear form needs 4 coefficients")
            pairs.append((a, b))
        object.__setattr__(self, "pairs", tuple(pairs))

    @property
    def n(self) -> int:
        return len(self.pairs)


def _det(m: list[list[Fraction]]) -> Fraction:
    if len(m) == 1:
        return m[0][0]
    total = Fraction(0)
    for c, x in enumerate(m[0]):
        if x:
            minor = [row[:c] + row[c + 1 :] for row in m[1:]]
            total += (-1) ** c * x * _det(minor)
    return total


def linking_from_equations(eq: DefiningEquations) -> LinkingMatrix:
    n = eq.n
    l = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        d = _det([list(eq.pairs[i][0]), list(eq.pairs[i][1]), list(eq.pairs[j][0]), list(eq.pairs[j][1])])
        if d == 0:
            raise ValueError(f"planes {i + 1} and {j + 1} are not transverse")
        l[i][j] = l[j][i] = 1 if d > 0 else -1
    return LinkingMatrix(tuple(map(tuple, l)))


def horizontal_equations(tau: str | Sequence[int]) -> DefiningEquations:
    """Planes z + a_i w + b_i conj(w) = 0 with a_i + b_i = i, a_i - b_i = tau(i).

    Writing z = x1 + i x2, w = x3 + i x4 gives the real forms
    x1 + i x3 and x2 + tau(i) x4.
    """
    tau = parse_permutation(tau)
    pairs = []
    for i, t in enumerate(tau, start=1):
        pairs.append(((1, 0, i, 0), (0, 1, 0, t)))
    return DefiningEquations(tuple(pairs))


def link_linearized_form(lk: LinkingMatrix) -> LinearizedMatrix:
    """(n-1) x n matrix with entries l_kj lambda_k - delta_kj sum_i l_ki lambda_i.

    The row for the last component is dropped: all n rows sum to zero.
    """
    n = lk.n
    l = lk.array()
    coeffs = np.zeros((n - 1, n, n), dtype=np.int64)
    for k in range(n - 1):
        for j in range(n):
            coeffs[k, j, k] += l[k, j]
        coeffs[k, k, :] -= l[k, :]
    return LinearizedMatrix(coeffs)


def link_linearized_matrix(lk: LinkingMatrix, lam, p: int | None = None) -> np.ndarray:
    lam, p = _lam_and_p(lam, p)
    return link_linearized_form(lk).evaluate(lam, p)


def link_presentation(lk: LinkingMatrix) -> Presentation:
    """Relators [x_k, prod_i x_i^(l_ki)], k < n, presenting the link group modulo G_3."""
    n = lk.n
    rels = []
    for k in range(1, n):
        longitude = Word(tuple(i if lk.l[k - 1][i - 1] > 0 else -i for i in range(1, n + 1) if i != k))
        rels.append(commutator(Word.gen(k), longitude))
    return Presentation(n, tuple(rels))


def chi_transpose_matrix(lk: LinkingMatrix) -> np.ndarray:
    """Images (e_i - l_ij e_n) ^ (e_j - l_ij e_n) of the G_2/G_3 basis in Lambda^2 H.

    Rows: x_ij with i < j < n; columns: e_a ^ e_b with a < b, both lexicographic.
    """
    n = lk.n
    if n < 3:
        raise ValueError("need at least 3 components")
    cols = {pair: c for c, pair in enumerate(itertools.combinations(range(n), 2))}
    rows = list(itertools.combinations(range(n - 1), 2))
    out = np.zeros((len(rows), len(cols)), dtype=np.int64)
    last = n - 1
    for r, (i, j) in enumerate(rows):
        lij = lk.l[i][j]
        # (e_i - l e_n)(e_j - l e_n) = e_ij - l e_in + l e_jn
        out[r, cols[(i, j)]] += 1
        out[r, cols[(i, last)]] -= lij
        out[r, cols[(j, last)]] += lij
    return out


# ---------------------------------------------------------------- presentations


def cup_structure_constants(g: Presentation) -> np.ndarray:
    """mu[i, j, k] = epsilon_{i,j}(r_k), the cup product coefficients."""
    if not g.commutator_relators:
        for r in g.relators:
            if any(r.exponent_sums(g.n)):
                raise ValueError(f"relator {r} is not a commutator")
    out = np.zeros((g.n, g.n, g.m), dtype=np.int64)
    for k, r in enumerate(g.relators):
        out[:, :, k] = second_order_epsilons(r, g.n)
    return out


def presentation_linearized_form(g: Presentation) -> LinearizedMatrix:
    """M_kj = sum_i epsilon_{i,j}(r_k) lambda_i."""
    mu = cup_structure_constants(g)
    return LinearizedMatrix(np.transpose(mu, (2, 1, 0)))


# ---------------------------------------------------------------- unified input


@dataclass(frozen=True)
class Arrangement:
    """Any supported input, with a display name."""

    name: str
    data: LineLattice | LinkingMatrix | Presentation

    @property
    def kind(self) -> str:
        return {LineLattice: "lattice", LinkingMatrix: "linking", Presentation: "presentation"}[type(self.data)]

    @property
    def n(self) -> int:
        return self.data.n

    @classmethod
    def from_tau(cls, tau: str | Sequence[int], sign: int = 1) -> "Arrangement":
        t = parse_permutation(tau)
        return cls("A(" + "".join(map(str, t)) + ")", linking_from_permutation(t, sign))

    def linearized(self) -> LinearizedMatrix:
        if isinstance(self.data, LineLattice):
            return complex_linearized_form(self.data)
        if isinstance(self.data, LinkingMatrix):
            return link_linearized_form(self.data)
        return presentation_linearized_form(self.data)

    def presentation(self) -> Presentation:
        if isinstance(self.data, LineLattice):
            return complex_presentation(self.data)
        if isinstance(self.data, LinkingMatrix):
            return link_presentation(self.data)
        return self.data


MatrixBuilder = Callable[[Sequence[int]], np.ndarray]
