"""Simplices, sparse chains and the boundary/coboundary operators.

Chains and cochains share one representation: a ``dict`` mapping a global
simplex index to a nonzero exact rational.  The dual basis
element of simplex ``i`` is simply ``{i: 1}``.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional

from gmpy2 import divexact, gcd, mpq, mpz

# Exact rationals throughout: gmpy2's mpq is kept in lowest terms with a
# positive denominator, and mixes cleanly with fractions.Fraction inputs.
Rational = mpq
SparseVector = Dict[int, Rational]

ZERO = mpq(0)
ONE = mpq(1)


class MissingFaceError(ValueError):
    pass


class DegreeMismatchError(ValueError):
    pass


class Simplex(tuple):
    """An oriented simplex stored as its strictly ascending vertex tuple."""

    def __new__(cls, vertices: Iterable[int]):
        vs = tuple(sorted(int(v) for v in vertices))
        if not vs:
            raise ValueError("a simplex needs at least one vertex")
        if vs[0] < 0:
            raise ValueError(f"negative vertex id in {vs}")
        if any(a == b for a, b in zip(vs, vs[1:])):
            raise ValueError(f"repeated vertex in {vs}")
        return super().__new__(cls, vs)

    @property
    def dim(self) -> int:
        return len(self) - 1

    def faces(self) -> List["Simplex"]:
        """Codimension-one faces; face ``q`` omits vertex ``q``."""
        if len(self) == 1:
            return []
        return [tuple.__new__(Simplex, self[:q] + self[q + 1:]) for q in range(len(self))]

    def __repr__(self) -> str:
        return "Simplex(%s)" % (list(self),)


# -- sparse vector helpers ---------------------------------------------------

def add_scaled(target: SparseVector, coeff, source: SparseVector) -> SparseVector:
    """In place ``target += coeff * source``; zero entries are removed."""
    if not coeff:
        return target
    for k, v in source.items():
        new = target.get(k, 0) + coeff * v
        if new:
            target[k] = new
        else:
            target.pop(k, None)
    return target


def combine(a: SparseVector, coeff, b: SparseVector) -> SparseVector:
    """Return ``a + coeff * b`` as a new vector."""
    return add_scaled(dict(a), coeff, b)


def scaled(v: SparseVector, coeff) -> SparseVector:
    if not coeff:
        return {}
    return {k: coeff * x for k, x in v.items()}


def pivot(v: SparseVector) -> int:
    """Index of the lowest nonzero entry, i.e. the largest simplex index."""
    return max(v)


def dot(a: SparseVector, b: SparseVector) -> Rational:
    if len(a) > len(b):
        a, b = b, a
    total = 0
    for k, x in a.items():
        y = b.get(k)
        if y is not None:
            total += x * y
    return total


def normalized(v: SparseVector) -> SparseVector:
    """Scale so the pivot coefficient is 1."""
    if not v:
        return {}
    lead = v[pivot(v)]
    if lead == 1:
        return dict(v)
    return {k: x / lead for k, x in v.items()}


def lincomb(target: Dict[int, mpz], a, b, source: Dict[int, mpz]) -> Dict[int, mpz]:
    """In place ``target = a * target + b * source`` on integer vectors."""
    if a != 1:
        for k in target:
            target[k] *= a
    for k, v in source.items():
        new = target.get(k, 0) + b * v
        if new:
            target[k] = new
        else:
            del target[k]
    return target


def content(vectors: Iterable[Dict[int, mpz]], start=0) -> mpz:
    """gcd of ``start`` and every entry; stops early once it reaches 1."""
    g = mpz(start)
    for v in vectors:
        for x in v.values():
            g = gcd(g, x)
            if g == 1:
                return g
    return g


def divide_exact(v: Dict[int, mpz], g) -> None:
    for k in v:
        v[k] = divexact(v[k], g)


def squared_norm(v: SparseVector) -> Rational:
    return sum((x * x for x in v.values()), ZERO)


# -- complex index -----------------------------------------------------------

class ComplexIndex:
    """Global indexing of simplices, inserted one at a time.

    Every simplex must have all of its faces indexed before it is added, so
    faces always carry smaller global indices than their cofaces.
    """

    def __init__(self, simplices: Iterable[Iterable[int]] = ()):
        self.simplices: List[Simplex] = []
        self.index: Dict[Simplex, int] = {}
        self.by_dim: Dict[int, List[int]] = {}
        self._boundaries: List[SparseVector] = []
        self._cofaces: List[List[int]] = []
        for s in simplices:
            self.add(s)

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, s) -> bool:
        return Simplex(s) in self.index

    def add(self, s: Iterable[int]) -> int:
        s = s if isinstance(s, Simplex) else Simplex(s)
        if s in self.index:
            raise ValueError(f"duplicate simplex {list(s)}")
        bd = boundary_of_simplex(s, self)
        i = len(self.simplices)
        self.simplices.append(s)
        self.index[s] = i
        self.by_dim.setdefault(s.dim, []).append(i)
        self._boundaries.append(bd)
        self._cofaces.append([])
        for f in bd:
            self._cofaces[f].append(i)
        return i

    def dim(self, i: int) -> int:
        return len(self.simplices[i]) - 1

    def boundary(self, i: int) -> SparseVector:
        """Boundary of simplex ``i`` (cached; do not mutate)."""
        return self._boundaries[i]

    def cofaces(self, i: int) -> List[int]:
        return self._cofaces[i]

    def of_dim(self, p: int, upto: Optional[int] = None) -> List[int]:
        ids = self.by_dim.get(p, [])
        if upto is None:
            return list(ids)
        return [i for i in ids if i < upto]

    @property
    def max_dim(self) -> int:
        return max(self.by_dim, default=-1)


def boundary_of_simplex(s: Simplex, idx: ComplexIndex) -> SparseVector:
    """Alternating sum of codimension-one faces, as a sparse vector."""
    out: SparseVector = {}
    for q, face in enumerate(s.faces()):
        j = idx.index.get(face)
        if j is None:
            raise MissingFaceError(f"face {list(face)} of {list(s)} is not indexed")
        out[j] = ONE if q % 2 == 0 else -ONE
    return out


def _check_degree(v: SparseVector, p: int, idx: ComplexIndex) -> None:
    for k in v:
        if idx.dim(k) != p:
            raise DegreeMismatchError(
                f"entry {k} has dimension {idx.dim(k)}, expected {p}")


def apply_boundary(v: SparseVector, p: int, idx: ComplexIndex) -> SparseVector:
    if p < 1:
        raise DegreeMismatchError("boundary needs degree >= 1")
    _check_degree(v, p, idx)
    out: SparseVector = {}
    for k, x in v.items():
        add_scaled(out, x, idx.boundary(k))
    return out


def apply_coboundary(v: SparseVector, p: int, idx: ComplexIndex,
                     upto: Optional[int] = None) -> SparseVector:
    """Coboundary of a ``p``-cochain in the prefix complex of the first
    ``upto`` simplices (the whole index when ``upto`` is None)."""
    _check_degree(v, p, idx)
    limit = len(idx) if upto is None else upto
    out: SparseVector = {}
    for k, x in v.items():
        for t in idx.cofaces(k):
            if t < limit:
                new = out.get(t, 0) + x * idx.boundary(t)[k]
                if new:
                    out[t] = new
                else:
                    out.pop(t, None)
    return out
