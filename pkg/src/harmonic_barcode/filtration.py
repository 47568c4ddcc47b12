"""Simplex-wise filtrations: parsing, validation, lower-star construction and
the map from integer indices to real timestamps."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .complex import ComplexIndex, MissingFaceError, Simplex

INF = math.inf


class FiltrationError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {token!r}") from exc


@dataclass
class Filtration:
    simplices: List[Simplex] = field(default_factory=list)
    timestamps: List[Fraction] = field(default_factory=list)
    index: ComplexIndex = field(default_factory=ComplexIndex)

    @classmethod
    def from_steps(cls, steps: Iterable[Tuple[Iterable[int], object]]) -> "Filtration":
        """Build from ``(vertices, timestamp)`` pairs, validating as we go."""
        F = cls()
        for vertices, t in steps:
            F.append(vertices, t)
        return F

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "Filtration":
        """Timestamps default to the insertion position (0, 1, 2, ...)."""
        return cls.from_steps((s, i) for i, s in enumerate(simplices))

    def append(self, vertices: Iterable[int], t, line: Optional[int] = None) -> None:
        s = vertices if isinstance(vertices, Simplex) else Simplex(vertices)
        t = t if isinstance(t, Fraction) else Fraction(t)
        if self.timestamps and t < self.timestamps[-1]:
            raise FiltrationError(
                f"timestamp {t} decreases (previous {self.timestamps[-1]})", line)
        if s in self.index.index:
            raise FiltrationError(f"duplicate simplex {list(s)}", line)
        try:
            self.index.add(s)
        except MissingFaceError as exc:
            raise FiltrationError(f"face-before-coface violation: {exc}", line) from None
        self.simplices.append(s)
        self.timestamps.append(t)

    @property
    def m(self) -> int:
        return len(self.simplices)

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dims(self) -> List[int]:
        return [s.dim for s in self.simplices]

    @property
    def max_dim(self) -> int:
        return max(self.dims, default=-1)

    def timestamp_map(self) -> "TimestampMap":
        return TimestampMap(self.timestamps)


def parse_filtration(lines: Iterable[str]) -> Filtration:
    """Parse ``<timestamp> <v0> <v1> ...`` lines; ``#`` starts a comment.

    Line numbers in errors count every physical line, starting at 1.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    F = Filtration()
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        tokens = text.split()
        if len(tokens) < 2:
            raise FiltrationError("expected a timestamp followed by vertices", lineno)
        try:
            t = parse_rational(tokens[0])
            vertices = [int(v) for v in tokens[1:]]
        except ValueError as exc:
            raise FiltrationError(f"malformed line: {exc}", lineno) from None
        if any(v < 0 for v in vertices):
            raise FiltrationError("vertex ids must be non-negative", lineno)
        if any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise FiltrationError("vertices must be strictly ascending", lineno)
        F.append(vertices, t, lineno)
    return F


def format_rational(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_filtration(F: Filtration) -> str:
    return "".join(
        format_rational(t) + " " + " ".join(map(str, s)) + "\n"
        for s, t in zip(F.simplices, F.timestamps))


class TimestampMap:
    """``tau(i)``: the timestamp at which ``K_i`` is completed.

    ``tau(0)`` is ``-inf`` (the empty complex) and ``tau(m + 1)`` is ``+inf``,
    the sentinel death time of bars alive at the end of the filtration.
    """

    def __init__(self, timestamps: Sequence):
        self.values = [-INF] + [Fraction(t) for t in timestamps] + [INF]
        for a, b in zip(self.values, self.values[1:]):
            if b < a:
                raise ValueError("timestamps must be non-decreasing")

    @property
    def m(self) -> int:
        return len(self.values) - 2

    def __call__(self, i: int):
        return self.values[i]


# -- lower-star filtrations --------------------------------------------------

def closure(simplices: Iterable[Iterable[int]]) -> List[Simplex]:
    """All faces of the given simplices, sorted by (dimension, vertices)."""
    out = set()
    for s in simplices:
        s = Simplex(s)
        for k in range(1, len(s) + 1):
            out.update(Simplex(c) for c in combinations(s, k))
    return sorted(out, key=lambda s: (len(s), tuple(s)))


def lower_star_filtration(complex_: Iterable[Iterable[int]], f: Mapping[int, object]) -> Tuple[Filtration, TimestampMap]:
    """Order simplices by (max vertex value, dimension, vertex tuple).

    Simplices sharing a value receive consecutive indices and one common
    timestamp, so zero-length closed-open intervals at that value can be
    dropped later.
    """
    values: Dict[int, Fraction] = {}
    keyed = []
    for s in closure(complex_):
        for v in s:
            if v not in values:
                if v not in f:
                    raise FiltrationError(f"vertex {v} has no function value")
                values[v] = Fraction(f[v])
        keyed.append((max(values[v] for v in s), s.dim, tuple(s), s))
    keyed.sort(key=lambda k: k[:3])
    F = Filtration.from_steps((s, val) for val, _, _, s in keyed)
    return F, F.timestamp_map()


def parse_vertex_function(lines: Iterable[str]) -> Dict[int, Fraction]:
    if isinstance(lines, str):
        lines = lines.splitlines()
    f: Dict[int, Fraction] = {}
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        tokens = text.split()
        if len(tokens) != 2:
            raise FiltrationError("expected '<vertex> <value>'", lineno)
        try:
            v, val = int(tokens[0]), parse_rational(tokens[1])
        except ValueError as exc:
            raise FiltrationError(f"malformed line: {exc}", lineno) from None
        if v in f:
            raise FiltrationError(f"vertex {v} given twice", lineno)
        f[v] = val
    return f


def parse_complex(lines: Iterable[str]) -> List[Simplex]:
    """Maximal simplices, one per line; faces are added automatically."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    tops = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            tops.append(Simplex(int(v) for v in text.split()))
        except ValueError as exc:
            raise FiltrationError(f"malformed simplex: {exc}", lineno) from None
    return closure(tops)


# -- random instances --------------------------------------------------------

def random_filtration(rng: random.Random, max_m: int, max_dim: int = 3,
                      n_vertices: Optional[int] = None) -> Filtration:
    """A random simplex-wise filtration with at most ``max_m`` insertions.

    Each step picks uniformly among the simplices whose faces are all present.
    """
    if n_vertices is None:
        n_vertices = rng.randint(3, 8)
    present = set()
    candidates = {Simplex([v]) for v in range(n_vertices)}
    order: List[Simplex] = []
    while candidates and len(order) < max_m:
        s = rng.choice(sorted(candidates))
        candidates.discard(s)
        present.add(s)
        order.append(s)
        if s.dim >= max_dim:
            continue
        for v in range(n_vertices):
            if v in s:
                continue
            t = Simplex(s + (v,))
            if t not in present and all(f in present for f in t.faces()):
                candidates.add(t)
    return Filtration.from_simplices(order)


# -- closed-open barcodes ----------------------------------------------------

class RealInterval(NamedTuple):
    """``[birth, death)`` in timestamp units; ``death`` may be ``inf``."""
    degree: int
    birth: Fraction
    death: object


def to_closed_open(bars: Iterable, tau: TimestampMap) -> Dict[int, List[RealInterval]]:
    """Map integer bars ``[b, d]`` to ``[tau(b), tau(d + 1))`` per degree.

    Bars whose endpoints share a timestamp vanish; bars alive at the end of
    the filtration (``d = m``) get an infinite death.
    """
    out: Dict[int, List[RealInterval]] = {}
    for bar in bars:
        start, stop = tau(bar.birth), tau(bar.death + 1)
        if start == stop:
            continue
        out.setdefault(bar.degree, []).append(RealInterval(bar.degree, start, stop))
    for p in out:
        out[p].sort(key=lambda iv: (iv.birth, iv.death))
    return out
