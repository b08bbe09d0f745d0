"""Text formats for arrangements, presentations and linear forms.

Every format ignores blank lines and ``#`` comments.  Parse errors carry
the file name and line number.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterator

from .arrgmt import (
    Arrangement,
    DefiningEquations,
    LineLattice,
    LinkingMatrix,
    linking_from_equations,
    parse_permutation,
)
from .freegrp import Presentation, braid_closure_presentation, parse_word


class InputError(ValueError):
    def __init__(self, source: str, line: int | None, message: str):
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")
        self.source, self.line = source, line


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(path, None, exc.strerror or str(exc)) from exc


def _header(lines: list[tuple[int, str]], source: str) -> int:
    if not lines:
        raise InputError(source, None, "empty input")
    k, line = lines[0]
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise InputError(source, k, f"expected 'n <count>', got {line!r}")
    return int(parts[1])


def _ints(line: str, source: str, k: int) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise InputError(source, k, f"expected integers, got {line!r}") from None


def parse_lattice(text: str, source: str = "<lattice>") -> LineLattice:
    lines = list(_lines(text))
    n = _header(lines, source)
    flats = []
    for k, line in lines[1:]:
        flat = _ints(line, source, k)
        if len(set(flat)) != len(flat):
            raise InputError(source, k, f"flat {line!r} repeats a line")
        if len(flat) < 2 or any(not 1 <= i <= n for i in flat):
            raise InputError(source, k, f"flat {line!r} needs two or more lines from 1..{n}")
        flats.append(tuple(flat))
    try:
        return LineLattice(n, tuple(flats))
    except ValueError as exc:
        raise InputError(source, None, str(exc)) from exc


def parse_linking(text: str, source: str = "<linking>") -> LinkingMatrix:
    lines = list(_lines(text))
    n = _header(lines, source)
    rows = lines[1:]
    if len(rows) != n - 1:
        raise InputError(source, None, f"expected {n - 1} rows of upper-triangular entries, got {len(rows)}")
    entries = []
    for i, (k, line) in enumerate(rows, 1):
        vals = _ints(line, source, k)
        if len(vals) != n - i:
            raise InputError(source, k, f"row {i} needs {n - i} entries, got {len(vals)}")
        if any(v not in (1, -1) for v in vals):
            raise InputError(source, k, "linking numbers must be +1 or -1")
        entries.extend(vals)
    return LinkingMatrix.from_upper(n, entries)


def parse_equations(text: str, source: str = "<equations>") -> DefiningEquations:
    pairs = []
    for k, line in _lines(text):
        tokens = line.replace("|", " ").split()
        if len(tokens) != 8:
            raise InputError(source, k, f"expected 8 rationals, got {len(tokens)}")
        try:
            vals = [Fraction(t) for t in tokens]
        except (ValueError, ZeroDivisionError):
            raise InputError(source, k, f"bad rational in {line!r}") from None
        pairs.append((tuple(vals[:4]), tuple(vals[4:])))
    if not pairs:
        raise InputError(source, None, "no planes given")
    return DefiningEquations(tuple(pairs))


def parse_presentation(text: str, source: str = "<presentation>") -> Presentation:
    lines = list(_lines(text))
    n = _header(lines, source)
    rels = []
    for k, line in lines[1:]:
        try:
            w = parse_word(line)
        except ValueError as exc:
            raise InputError(source, k, str(exc)) from exc
        if w.rank > n:
            raise InputError(source, k, f"relator uses x{w.rank} but n = {n}")
        if any(w.exponent_sums(n)):
            raise InputError(source, k, f"relator {line!r} is not in the commutator subgroup")
        rels.append(w)
    return Presentation(n, tuple(rels))


def parse_forms(text: str, n: int | None = None, source: str = "<forms>") -> list[tuple[int, ...]]:
    forms = []
    for k, line in _lines(text):
        f = _ints(line, source, k)
        if n is not None and len(f) != n:
            raise InputError(source, k, f"form has {len(f)} coefficients, expected {n}")
        forms.append(tuple(f))
    return forms


_EXTENSIONS = {".lat": "lattice", ".lnk": "linking", ".eqs": "equations", ".pres": "presentation"}
_PARSERS = {
    "lattice": parse_lattice,
    "linking": parse_linking,
    "equations": parse_equations,
    "presentation": parse_presentation,
}


def load(kind: str, path: str):
    if kind not in _PARSERS:
        raise InputError(path, None, f"unknown input kind {kind!r}")
    return _PARSERS[kind](read_text(path), path)


def parse_input_spec(spec: str) -> tuple[str, str]:
    """``kind:path``, or a bare path whose extension names the kind."""
    kind, sep, path = spec.partition(":")
    if sep and kind in _PARSERS:
        return kind, path
    ext = os.path.splitext(spec)[1]
    if ext not in _EXTENSIONS:
        raise InputError(spec, None, "cannot infer the input kind; use kind:path")
    return _EXTENSIONS[ext], spec


def to_arrangement(kind: str, obj, name: str) -> Arrangement:
    if kind == "equations":
        try:
            obj = linking_from_equations(obj)
        except ValueError as exc:
            raise InputError(name, None, str(exc)) from exc
    return Arrangement(name, obj)


def arrangement_from_args(
    tau: str | None = None,
    lattice: str | None = None,
    linking: str | None = None,
    presentation: str | None = None,
    equations: str | None = None,
    input: str | None = None,
    braid: str | None = None,
    strands: int | None = None,
) -> Arrangement:
    given = [x for x in (tau, lattice, linking, presentation, equations, input, braid) if x is not None]
    if len(given) != 1:
        raise InputError("<args>", None, "give exactly one input")
    if tau is not None:
        try:
            return Arrangement.from_tau(parse_permutation(tau))
        except ValueError as exc:
            raise InputError("--tau", None, str(exc)) from exc
    if braid is not None:
        if not strands:
            raise InputError("--braid", None, "--strands is required with --braid")
        try:
            return Arrangement(f"closure({braid})", braid_closure_presentation(braid, strands))
        except ValueError as exc:
            raise InputError("--braid", None, str(exc)) from exc
    for kind, path in (("lattice", lattice), ("linking", linking), ("presentation", presentation), ("equations", equations)):
        if path is not None:
            return to_arrangement(kind, load(kind, path), path)
    kind, path = parse_input_spec(input)
    return to_arrangement(kind, load(kind, path), path)
