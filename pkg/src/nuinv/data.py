"""Reference inputs and published values used by the verification harness."""
from __future__ import annotations

from .arrgmt import LineLattice


def _lattice(n: int, flats: str) -> LineLattice:
    return LineLattice(n, tuple(tuple(int(c) for c in f) for f in flats.split()))


LATTICES = {
    "A3": _lattice(6, "123 145 246 356 16 25 34"),
    "non-Fano": _lattice(7, "123 147 156 257 345 367 24 26 46"),
    "MacLane": _lattice(8, "123 456 147 267 258 348 357 168 15 24 36 78"),
    "AG(2,3)": _lattice(9, "123 456 789 147 258 369 159 357 168 249 267 348"),
}

# expected stratum counts {d: nu_{p,d}} for each (lattice, p)
LATTICE_NU = {
    ("A3", 2): {1: 15},
    ("A3", 3): {1: 20},
    ("A3", 5): {1: 30},
    ("non-Fano", 2): {1: 24, 2: 1},
    ("non-Fano", 3): {1: 36},
    ("non-Fano", 5): {1: 54},
    ("MacLane", 2): {1: 24},
    ("MacLane", 3): {1: 36},
    ("MacLane", 5): {1: 48},
    ("AG(2,3)", 2): {1: 48},
    ("AG(2,3)", 3): {1: 48, 2: 13},
    ("AG(2,3)", 5): {1: 96},
}

# nu_{3,d}(G/G_3) for d = 0, 1, ... of horizontal arrangements
TABLE1 = {
    "123": (9, 4),
    "1234": (27, 0, 13),
    "2134": (18, 20, 2),
    "12345": (81, 0, 0, 40),
    "21345": (54, 27, 35, 5),
    "21435": (36, 66, 17, 2),
    "31425": (51, 60, 10, 0),
    "123456": (243, 0, 0, 0, 121),
    "213456": (162, 81, 0, 107, 14),
    "321456": (162, 0, 162, 32, 8),
    "215436": (108, 126, 87, 38, 5),
    "214356": (108, 108, 121, 24, 3),
    "312546": (72, 186, 90, 14, 2),
    "341256": (81, 162, 112, 6, 3),
    "314256": (117, 162, 74, 10, 1),
    "241536": (108, 200, 48, 8, 0),
}

# the link L shares its linking numbers, hence G/G_3, with A(341256)
TABLE1_L = ("L", "341256", (81, 162, 112, 6, 3))

ZIEGLER = {"1234": (1, ()), "2134": (0, (2,)), "21435": (0, (2, 2, 2, 2)), "31425": (0, (2, 2, 2, 2))}


def delta(n: int) -> tuple[int, ...]:
    return (1,) * n


# Resonance components as lists of linear systems: a point lies on a
# component when every form in the system vanishes.  Coordinates index the
# planes of A(tau) by their tau-value: coordinate tau(i) belongs to plane i.
GEOMETRY = {
    "1234": {1: [[delta(4)]]},
    "2134": {
        1: [[delta(4)], [(1, 1, -1, -1)]],
        2: [[(1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1)]],
    },
    # computed: the second hyperplane splits the coordinates 3 + 3, not 2 + 4
    "321456": {
        1: [[delta(6)], [(1, 1, 1, -1, -1, -1)]],
        2: [[delta(6)], [(1, 1, 1, -1, -1, -1)]],
    },
    "213456": {
        1: [[delta(6)], [(1, 1, -1, -1, -1, -1)]],
        2: [[delta(6)]],
    },
}


def _line(plus: tuple[int, int], sign: int, n: int = 5) -> list[tuple[int, ...]]:
    # lambda_a + sign * lambda_b = 0 and every other coordinate vanishes
    a, b = plus
    first = [0] * n
    first[a - 1] = 1
    first[b - 1] = sign
    rest = [tuple(1 if k == c - 1 else 0 for k in range(n)) for c in range(1, n + 1) if c not in plus]
    return [tuple(first)] + rest


GEOMETRY["31425"] = {
    2: [
        _line((1, 2), 1),
        _line((1, 3), 1),
        _line((2, 4), 1),
        _line((3, 4), 1),
        _line((1, 5), 1),
        _line((4, 5), 1),
        _line((1, 4), -1),
        _line((2, 3), -1),
        _line((2, 5), -1),
        _line((3, 5), -1),
    ],
    3: [],
}

# the cubic cutting out R_1 of A(31425): exponent vector -> coefficient
CUBIC_31425 = {
    (3, 0, 0, 0, 0): 1,
    (0, 3, 0, 0, 0): -1,
    (0, 0, 3, 0, 0): -1,
    (0, 0, 0, 3, 0): 1,
    (0, 0, 0, 0, 3): -1,
    (2, 1, 0, 0, 0): 1,
    (1, 2, 0, 0, 0): -1,
    (2, 0, 1, 0, 0): 1,
    (1, 0, 2, 0, 0): -1,
    (2, 0, 0, 1, 0): -1,
    (1, 0, 0, 2, 0): -1,
    (2, 0, 0, 0, 1): 1,
    (1, 0, 0, 0, 2): -1,
    (0, 2, 1, 0, 0): 1,
    (0, 1, 2, 0, 0): 1,
    (0, 2, 0, 1, 0): -1,
    (0, 1, 0, 2, 0): 1,
    (0, 2, 0, 0, 1): 1,
    (0, 1, 0, 0, 2): 1,
    (0, 0, 2, 1, 0): -1,
    (0, 0, 1, 2, 0): 1,
    (0, 0, 2, 0, 1): 1,
    (0, 0, 1, 0, 2): 1,
    (0, 0, 0, 2, 1): 1,
    (0, 0, 0, 1, 2): -1,
    (1, 1, 1, 0, 0): 2,
    (1, 1, 0, 1, 0): -2,
    (1, 1, 0, 0, 1): 2,
    (1, 0, 1, 1, 0): -2,
    (1, 0, 1, 0, 1): 2,
    (1, 0, 0, 1, 1): -2,
    (0, 1, 1, 1, 0): 2,
    (0, 1, 1, 0, 1): -2,
    (0, 1, 0, 1, 1): 2,
    (0, 0, 1, 1, 1): 2,
}


def eval_polynomial(poly: dict, lam, p: int) -> int:
    total = 0
    for expo, c in poly.items():
        term = c
        for x, e in zip(lam, expo):
            term *= pow(int(x), e, p)
        total += term
    return total % p
