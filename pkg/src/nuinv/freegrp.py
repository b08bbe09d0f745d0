"""Free-group words, Hall basic commutators, Fox calculus and braid actions.

A word is stored as a tuple of nonzero signed integers: ``+i`` is the letter
``x_i`` and ``-i`` its inverse.  Words are always freely reduced.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exactalg import check_prime


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("generator indices start at 1")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls((i if e > 0 else -i,) * abs(e))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    @property
    def rank(self) -> int:
        """Largest generator index that occurs."""
        return max((abs(a) for a in self.letters), default=0)

    def exponent_sums(self, n: int) -> list[int]:
        s = [0] * n
        for a in self.letters:
            s[abs(a) - 1] += 1 if a > 0 else -1
        return s

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for a in self.letters:
            parts.append(f"x{a}" if a > 0 else f"x{-a}^-1")
        return " ".join(parts)


IDENTITY = Word()


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    return u * v * u.inverse() * v.inverse()


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\[)|(\])|(,)|(\()|(\))|(\^)\s*(-?\d+))")


def parse_word(text: str) -> Word:
    """Parse ``x1 x2^-1 [x1,[x2,x3]]^2 (x1 x2)^-3``.

    Brackets denote commutators and are expanded; juxtaposition multiplies.
    """
    tokens = []
    pos = 0
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at column {pos + 1}: {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("gen", int(m.group(2))))
        elif m.group(8):
            tokens.append(("pow", int(m.group(9))))
        else:
            tokens.append((next(g for g in m.groups()[2:7] if g), None))
    word, k = _parse_product(tokens, 0, stop=())
    if k != len(tokens):
        raise ValueError(f"unexpected token {tokens[k][0]!r} in {text!r}")
    return word


def _parse_product(tokens, k, stop):
    result = IDENTITY
    while k < len(tokens) and tokens[k][0] not in stop:
        kind, val = tokens[k]
        if kind == "gen":
            if val < 1:
                raise ValueError("generator indices start at 1")
            atom, k = Word.gen(val), k + 1
        elif kind == "(":
            atom, k = _parse_product(tokens, k + 1, stop=(")",))
            k = _expect(tokens, k, ")")
        elif kind == "[":
            left, k = _parse_product(tokens, k + 1, stop=(",",))
            k = _expect(tokens, k, ",")
            right, k = _parse_product(tokens, k, stop=("]",))
            k = _expect(tokens, k, "]")
            atom = commutator(left, right)
        else:
            raise ValueError(f"unexpected {kind!r}")
        while k < len(tokens) and tokens[k][0] == "pow":
            atom = atom ** tokens[k][1]
            k += 1
        result = result * atom
    return result, k


def _expect(tokens, k, kind):
    if k >= len(tokens) or tokens[k][0] != kind:
        raise ValueError(f"expected {kind!r}")
    return k + 1


# ---------------------------------------------------------------- Hall basis


@dataclass(frozen=True)
class BasicCommutator:
    """Generator (``left is None``) or bracket of two earlier basic commutators."""

    length: int
    hall_index: int
    generator: int = 0
    left: "BasicCommutator | None" = field(default=None, repr=False)
    right: "BasicCommutator | None" = field(default=None, repr=False)

    def __str__(self) -> str:
        if self.left is None:
            return f"x{self.generator}"
        return f"[{self.left},{self.right}]"

    @property
    def is_simple(self) -> bool:
        return self.left is None or (self.left.left is None and self.right.is_simple)


_HALL: dict[int, list[list[BasicCommutator]]] = {}


def _hall_cache(n: int, q: int) -> list[list[BasicCommutator]]:
    levels = _HALL.setdefault(n, [[]])
    if len(levels) == 1:
        levels.append([BasicCommutator(1, i - 1, generator=i) for i in range(1, n + 1)])
    index = sum(len(lv) for lv in levels)
    while len(levels) <= q:
        length = len(levels)
        new = []
        for l1 in range(1, length // 2 + 1):
            l2 = length - l1
            for c1 in levels[l1]:
                for c2 in levels[l2]:
                    if not c1.hall_index < c2.hall_index:
                        continue
                    if c2.left is not None and c1.hall_index < c2.left.hall_index:
                        continue
                    new.append((c1.hall_index, c2.hall_index, c1, c2))
        new.sort(key=lambda t: (t[0], t[1]))
        level = []
        for _, _, c1, c2 in new:
            level.append(BasicCommutator(length, index, left=c1, right=c2))
            index += 1
        levels.append(level)
    return levels


def hall_basis(n: int, q: int) -> list[BasicCommutator]:
    """Basic commutators of length exactly ``q`` on ``n`` generators, in Hall order."""
    if n < 1 or q < 1:
        raise ValueError("need n >= 1 and q >= 1")
    return list(_hall_cache(n, q)[q])


def witt_number(n: int, q: int) -> int:
    """Rank of F_q/F_{q+1} for the free group of rank n."""
    return sum(_moebius(d) * n ** (q // d) for d in range(1, q + 1) if q % d == 0) // q


def _moebius(d: int) -> int:
    sign, f = 1, 2
    while f * f <= d:
        if d % f == 0:
            d //= f
            if d % f == 0:
                return 0
            sign = -sign
        f += 1
    return -sign if d > 1 else sign


def expand(c: BasicCommutator) -> Word:
    if c.left is None:
        return Word.gen(c.generator)
    return commutator(expand(c.left), expand(c.right))


# ---------------------------------------------------------------- presentations


@dataclass(frozen=True)
class Presentation:
    n: int
    relators: tuple[Word, ...] = ()
    commutator_relators: bool = True

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if r.rank > self.n:
                raise ValueError(f"relator {r} uses a generator beyond x{self.n}")
            if self.commutator_relators and any(r.exponent_sums(self.n)):
                raise ValueError(f"relator {r} is not in the commutator subgroup")

    @property
    def m(self) -> int:
        return len(self.relators)


def free_group(n: int) -> Presentation:
    return Presentation(n, ())


def nilpotent_presentation(g: Presentation, q: int) -> Presentation:
    """Presentation of G/G_q: the relators of ``g`` plus length-q Hall commutators.

    Relators are kept as given; they agree with their truncations modulo F_q,
    so the presented quotient is the same.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    extra = [expand(c) for c in hall_basis(g.n, q)]
    return Presentation(g.n, g.relators + tuple(extra), g.commutator_relators)


# ---------------------------------------------------------------- Z_p group ring


@dataclass(frozen=True)
class Representation:
    """Epimorphism G -> Z_p sending x_i to zeta^lambda_i."""

    p: int
    lam: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        lam = tuple(int(x) % self.p for x in self.lam)
        object.__setattr__(self, "lam", lam)
        if not any(lam):
            raise ValueError("trivial representation is not onto Z_p")

    def rho(self, w: Word) -> int:
        """Exponent of zeta that ``w`` maps to."""
        return sum(self.lam[abs(a) - 1] * (1 if a > 0 else -1) for a in w.letters) % self.p


@dataclass(frozen=True)
class GroupRingElt:
    """Element of Z[Z_p]; ``coeffs[j]`` multiplies zeta^j."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p:
            raise ValueError("need exactly p coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def zero(cls, p: int) -> "GroupRingElt":
        return cls(p, (0,) * p)

    @classmethod
    def zeta(cls, p: int, k: int = 1, c: int = 1) -> "GroupRingElt":
        v = [0] * p
        v[k % p] = c
        return cls(p, tuple(v))

    def __add__(self, other):
        return GroupRingElt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return GroupRingElt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElt(self.p, tuple(other * a for a in self.coeffs))
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % p] += a * b
        return GroupRingElt(p, tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "GroupRingElt":
        """Multiply by zeta^k."""
        p = self.p
        return GroupRingElt(p, tuple(self.coeffs[(j - k) % p] for j in range(p)))

    def augmentation(self) -> int:
        return sum(self.coeffs)


def fox_eval(w: Word, i: int, rep: Representation) -> GroupRingElt:
    """Image of the Fox derivative d w / d x_i in Z[Z_p] under ``rep``.

    Uses D(uv) = D(u) + rho(u) D(v), D(x_i) = 1, D(x_i^-1) = -zeta^(-lambda_i).
    """
    p = rep.p
    coeffs = [0] * p
    prefix = 0
    for a in w.letters:
        g = abs(a)
        lam = rep.lam[g - 1]
        if a > 0:
            if g == i:
                coeffs[prefix] += 1
            prefix = (prefix + lam) % p
        else:
            prefix = (prefix - lam) % p
            if g == i:
                coeffs[prefix] -= 1
    return GroupRingElt(p, tuple(coeffs))


class FoxJacobian:
    """Fox derivatives of all relators, precompiled for repeated evaluation.

    Every letter contributes ``sign * zeta^(lambda . prefix)`` to one entry, so
    a whole Jacobian under a representation is one matrix product plus a
    scatter-add.
    """

    def __init__(self, g: Presentation):
        self.n, self.m = g.n, g.m
        rel, gen, sign, pref = [], [], [], []
        for k, w in enumerate(g.relators):
            acc = [0] * g.n
            for a in w.letters:
                j = abs(a) - 1
                if a > 0:
                    rel.append(k), gen.append(j), sign.append(1), pref.append(list(acc))
                    acc[j] += 1
                else:
                    acc[j] -= 1
                    rel.append(k), gen.append(j), sign.append(-1), pref.append(list(acc))
        self._rel = np.array(rel, dtype=np.int64)
        self._gen = np.array(gen, dtype=np.int64)
        self._sign = np.array(sign, dtype=np.int64)
        self._prefix = np.array(pref, dtype=np.int64).reshape(len(rel), g.n)

    def evaluate(self, lam: Sequence[int], p: int) -> np.ndarray:
        """Array of shape (m, n, p) with group-ring coefficients."""
        out = np.zeros((self.m, self.n, p), dtype=np.int64)
        if len(self._rel):
            expo = self._prefix @ np.asarray(lam, dtype=np.int64) % p
            np.add.at(out, (self._rel, self._gen, expo), self._sign)
        return out


# ---------------------------------------------------------------- Magnus coefficients


def epsilon(w: Word, index: Sequence[int]) -> int:
    """epsilon_I(w): augmented higher Fox derivative, eps(d_{i1} ... d_{ik} w).

    Equal to the coefficient of X_{i1} ... X_{ik} in the Magnus expansion
    x_i -> 1 + X_i, so epsilon_{1,2}([x1,x2]) = 1.
    """
    index = tuple(index)
    k = len(index)
    a = [1] + [0] * k
    for letter in w.letters:
        g, e = abs(letter), (1 if letter > 0 else -1)
        new = list(a)
        for t in range(1, k + 1):
            # absorb a run index[s:t] of the letter's generator
            s = t - 1
            while s >= 0 and index[s] == g:
                m = t - s
                coef = 1 if e > 0 and m == 1 else (0 if e > 0 else (-1) ** m)
                new[t] += a[s] * coef
                s -= 1
        a = new
    return a[k]


def truncate_mod_F3(w: Word, n: int | None = None) -> np.ndarray:
    """Upper-triangular matrix (epsilon_{i,j}(w))_{i<j}: w mod F_3 in the [x_i,x_j] basis."""
    n = n or max(w.rank, 1)
    if any(w.exponent_sums(n)):
        raise ValueError(f"{w} has nonzero exponent sum")
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[i - 1, j - 1] = epsilon(w, (i, j))
    return out


def second_order_epsilons(w: Word, n: int) -> np.ndarray:
    """Full n x n array of epsilon_{i,j}(w) in one pass over ``w``."""
    out = np.zeros((n, n), dtype=np.int64)
    sums = np.zeros(n, dtype=np.int64)
    for letter in w.letters:
        g, e = abs(letter) - 1, (1 if letter > 0 else -1)
        out[:, g] += e * sums
        if e < 0:
            out[g, g] += 1
        sums[g] += e
    return out


# ---------------------------------------------------------------- braids


def _artin(i: int, e: int, n: int, images: list[Word]) -> list[Word]:
    """Substitute the image of sigma_i^e into each word of ``images``."""
    xi, xj = Word.gen(i), Word.gen(i + 1)
    if e > 0:
        sub = {i: xi * xj * xi.inverse(), i + 1: xi}
    else:
        sub = {i: xj, i + 1: xj.inverse() * xi * xj}
    out = []
    for w in images:
        acc: list[int] = []
        for a in w.letters:
            g = abs(a)
            if g in sub:
                img = sub[g] if a > 0 else sub[g].inverse()
                acc.extend(img.letters)
            else:
                acc.append(a)
        out.append(Word(tuple(acc)))
    return out


def parse_braid(text: str) -> list[tuple[int, int]]:
    """Parse ``s1 s2^-1 s1^2`` into (generator, exponent) pairs."""
    out = []
    for tok in text.split():
        m = re.fullmatch(r"s(\d+)(?:\^(-?\d+))?", tok)
        if not m:
            raise ValueError(f"bad braid letter {tok!r}")
        e = int(m.group(2) or 1)
        out.extend([(int(m.group(1)), 1 if e > 0 else -1)] * abs(e))
    return out


def braid_permutation(braid: Sequence[tuple[int, int]], n: int) -> list[int]:
    perm = list(range(n))
    for i, _ in braid:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return perm


def braid_action(braid: Sequence[tuple[int, int]], n: int, words: Sequence[Word] | None = None) -> list[Word]:
    """Images of ``words`` (default x_1..x_n) under the braid automorphism.

    The braid b_1 b_2 ... b_k acts as the composite b_1 o b_2 o ... o b_k.
    """
    for i, _ in braid:
        if not 1 <= i < n:
            raise ValueError(f"s{i} is not a generator of the {n}-strand braid group")
    images = list(words) if words is not None else [Word.gen(i) for i in range(1, n + 1)]
    for i, e in reversed(braid):
        images = _artin(i, e, n, images)
    return images


def braid_closure_presentation(braid: Sequence[tuple[int, int]] | str, n: int) -> Presentation:
    """Link group of the closure of a pure braid: relators beta(x_i) x_i^-1, i < n."""
    if isinstance(braid, str):
        braid = parse_braid(braid)
    if braid_permutation(braid, n) != list(range(n)):
        raise ValueError("braid is not pure")
    images = braid_action(braid, n)
    rels = [images[i] * Word.gen(i + 1).inverse() for i in range(n - 1)]
    return Presentation(n, tuple(rels))


__all__ = [
    "Word", "IDENTITY", "multiply", "invert", "commutator", "parse_word",
    "BasicCommutator", "hall_basis", "witt_number", "expand",
    "Presentation", "free_group", "nilpotent_presentation",
    "Representation", "GroupRingElt", "fox_eval", "FoxJacobian",
    "epsilon", "second_order_epsilons", "truncate_mod_F3", "parse_braid", "braid_action",
    "braid_permutation", "braid_closure_presentation",
]
