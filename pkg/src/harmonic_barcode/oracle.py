"""Brute-force ground truth from dense exact linear algebra.

Nothing here touches the engine or the cached boundaries of
:class:`~harmonic_barcode.complex.ComplexIndex`: incidences are recomputed
from raw vertex tuples so the checks stay independent of what they check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .barcode import END, PAIRED, Barcode
from .complex import SparseVector
from .filtration import Filtration
from .linalg import rank, rank_and_kernel


def _incidence(face: Tuple[int, ...], coface: Tuple[int, ...]) -> int:
    for q, v in enumerate(coface):
        if coface[:q] + coface[q + 1:] == face:
            return -1 if q % 2 else 1
    return 0


@dataclass
class SubspaceBasis:
    degree: int
    prefix: int
    vectors: List[SparseVector] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.vectors)


class Oracle:
    """Caches per-prefix boundary matrices and harmonic spaces of one
    filtration."""

    def __init__(self, F: Filtration):
        self.simplices = [tuple(s) for s in F.simplices]
        self.m = len(self.simplices)
        self.pos = {s: i for i, s in enumerate(self.simplices)}
        self._har: Dict[Tuple[int, int], SubspaceBasis] = {}
        self._cofaces: Optional[List[List[Tuple[int, int]]]] = None

    def cells(self, i: int, p: int) -> List[int]:
        """Global indices of the ``p``-simplices of ``K_i``."""
        return [j for j in range(i) if len(self.simplices[j]) == p + 1]

    def boundary_rows(self, i: int, p: int) -> List[List[int]]:
        """Dense matrix of the ``p``-th boundary of ``K_i``: one row per
        ``(p-1)``-simplex, one column per ``p``-simplex."""
        rows_ids = self.cells(i, p - 1) if p >= 1 else []
        cols = self.cells(i, p)
        return [[_incidence(self.simplices[r], self.simplices[c]) for c in cols]
                for r in rows_ids]

    def harmonic_space(self, i: int, p: int) -> SubspaceBasis:
        key = (i, p)
        if key not in self._har:
            cols = self.cells(i, p)
            up = self.boundary_rows(i, p + 1)  # rows = p-simplices
            coboundary_rows = [list(col) for col in zip(*up)] if up and up[0] else []
            # kernel of [boundary_p ; boundary_{p+1}^T]
            M = self.boundary_rows(i, p) + coboundary_rows
            _, ker = rank_and_kernel(M, len(cols))
            vecs = [{cols[k]: x for k, x in enumerate(v) if x} for v in ker]
            self._har[key] = SubspaceBasis(p, i, vecs)
        return self._har[key]

    def betti_number(self, i: int, p: int) -> int:
        n_p = len(self.cells(i, p))
        r_p = rank(self.boundary_rows(i, p), n_p) if p >= 1 else 0
        r_up = rank(self.boundary_rows(i, p + 1), len(self.cells(i, p + 1)))
        return n_p - r_p - r_up

    def _dense(self, vectors: Sequence[SparseVector], i: int, p: int) -> Optional[List[List[Fraction]]]:
        cols = self.cells(i, p)
        where = {c: k for k, c in enumerate(cols)}
        rows = []
        for v in vectors:
            row = [Fraction(0)] * len(cols)
            for k, x in v.items():
                if k not in where:
                    return None
                row[where[k]] = x
            rows.append(row)
        return rows

    def is_harmonic_member(self, z: SparseVector, i: int, p: int) -> bool:
        """Rank test: ``z`` lies in the span of the harmonic basis at ``K_i``."""
        if not z:
            return True
        if not 0 <= i <= self.m:
            return False
        if any(k >= i or len(self.simplices[k]) != p + 1 for k in z):
            return False
        basis = self.harmonic_space(i, p)
        rows = self._dense(basis.vectors + [z], i, p)
        n = len(self.cells(i, p))
        return rank(rows, n) == basis.dim

    def rank_of(self, vectors: Sequence[SparseVector], i: int, p: int) -> Optional[int]:
        rows = self._dense(vectors, i, p)
        if rows is None:
            return None
        return rank(rows, len(self.cells(i, p)))

    def _coface_table(self) -> List[List[Tuple[int, int]]]:
        if self._cofaces is None:
            table: List[List[Tuple[int, int]]] = [[] for _ in range(self.m)]
            for t, tau in enumerate(self.simplices):
                if len(tau) == 1:
                    continue
                for q in range(len(tau)):
                    face = self.pos[tau[:q] + tau[q + 1:]]
                    table[face].append((t, _incidence(self.simplices[face], tau)))
            self._cofaces = table
        return self._cofaces

    def coboundary(self, gamma: SparseVector, i: int) -> SparseVector:
        """Coboundary of a cochain in ``K_i``, from raw incidences."""
        table = self._coface_table()
        out: SparseVector = {}
        for k, x in gamma.items():
            for t, sign in table[k]:
                if t < i:
                    out[t] = out.get(t, 0) + sign * x
        return {t: x for t, x in out.items() if x}

    @property
    def max_dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)


def harmonic_space(F: Filtration, i: int, p: int) -> SubspaceBasis:
    return Oracle(F).harmonic_space(i, p)


def betti_number(F: Filtration, i: int, p: int) -> int:
    return Oracle(F).betti_number(i, p)


# -- certification -----------------------------------------------------------

@dataclass
class CertificationReport:
    failures: List[dict] = field(default_factory=list)
    checked_bars: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, condition: str, detail: str, bar: Optional[int] = None, **extra) -> None:
        entry = {"condition": condition, "detail": detail}
        if bar is not None:
            entry["bar"] = bar
        entry.update(extra)
        self.failures.append(entry)

    def to_dict(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL",
                "checked_bars": self.checked_bars,
                "failures": self.failures}


def certify_barcode(F: Filtration, barcode: Barcode, oracle: Optional[Oracle] = None) -> CertificationReport:
    """Check birth and death conditions of every representative and that the
    representatives alive at each prefix form a basis of the harmonic space.

    Passing all three certifies the barcode is the harmonic chain barcode.
    """
    O = oracle or Oracle(F)
    m = O.m
    report = CertificationReport(checked_bars=len(barcode.bars))
    bars = list(barcode.bars)
    for n, bar in enumerate(bars):
        p, b, d, z = bar.degree, bar.birth, bar.death, bar.representative
        where = {"bar": n, "degree": p, "interval": [b, d]}
        if not (1 <= b <= d <= m):
            report.fail("structure", f"interval [{b},{d}] outside [1,{m}]", **where)
            continue
        if bar.death_kind == END and d != m:
            report.fail("structure", "unpaired bar must end at m", **where)
        if bar.death_kind == PAIRED and d >= m:
            report.fail("structure", "paired bar cannot end at m", **where)
        if not z:
            report.fail("a", "zero representative", **where)
            continue
        if not O.is_harmonic_member(z, b, p):
            report.fail("a", f"representative not harmonic in K_{b}", **where)
        elif O.is_harmonic_member(z, b - 1, p):
            report.fail("a", f"representative already harmonic in K_{b - 1}", **where)
        if bar.death_kind == PAIRED and d < m:
            if not O.is_harmonic_member(z, d, p):
                report.fail("b", f"representative not harmonic in K_{d}", **where)
            elif O.is_harmonic_member(z, d + 1, p):
                report.fail("b", f"representative still harmonic in K_{d + 1}", **where)

    top = max(O.max_dim, max((b.degree for b in bars), default=-1))
    for p in range(top + 1):
        for i in range(m + 1):
            alive = [b.representative for b in bars if b.degree == p and b.contains(i)]
            dim = O.harmonic_space(i, p).dim
            if len(alive) != dim:
                report.fail("c", f"{len(alive)} bars alive but dim Har_{p}(K_{i}) = {dim}",
                            degree=p, prefix=i)
                continue
            if not alive:
                continue
            r = O.rank_of(alive, i, p)
            if r != dim:
                report.fail("c", f"representatives alive at K_{i} are not independent in K_{i}",
                            degree=p, prefix=i)
                continue
            basis = O.harmonic_space(i, p).vectors
            if O.rank_of(basis + alive, i, p) != dim:
                report.fail("c", f"representatives do not span Har_{p}(K_{i})",
                            degree=p, prefix=i)
    return report


def minimal_norm_check(F: Filtration, z: SparseVector, i: int, trials: int = 20,
                       rng: Optional[random.Random] = None, oracle: Optional[Oracle] = None,
                       coeff_range: int = 3) -> bool:
    """``|z|^2 <= |z + delta(gamma)|^2`` for random small-integer cochains
    ``gamma`` in ``K_i``, with equality only when ``delta(gamma) = 0``."""
    O = oracle or Oracle(F)
    rng = rng or random.Random(0)
    if not z:
        return True
    p = len(O.simplices[next(iter(z))]) - 1
    if O.coboundary(z, i):
        return False
    base = sum((x * x for x in z.values()), Fraction(0))
    lower = O.cells(i, p - 1) if p >= 1 else []
    for _ in range(trials):
        gamma = {k: Fraction(rng.randint(-coeff_range, coeff_range)) for k in lower}
        gamma = {k: x for k, x in gamma.items() if x}
        dg = O.coboundary(gamma, i)
        moved = dict(z)
        for k, x in dg.items():
            moved[k] = moved.get(k, 0) + x
        norm = sum((x * x for x in moved.values()), Fraction(0))
        if norm < base:
            return False
        if norm == base and dg:
            return False
    return True


# -- dimension laws ----------------------------------------------------------

def total_harmonic_dims(F: Filtration, oracle: Optional[Oracle] = None) -> List[int]:
    """``dim Har(K_i)`` summed over degrees, for i = 0..m."""
    O = oracle or Oracle(F)
    top = O.max_dim
    return [sum(O.harmonic_space(i, p).dim for p in range(top + 1)) for i in range(O.m + 1)]


def inclusion_violations(F: Filtration, oracle: Optional[Oracle] = None) -> List[str]:
    """Check each insertion changes total dimension by one and harmonic spaces
    are nested in the predicted direction, other degrees unchanged."""
    O = oracle or Oracle(F)
    out = []
    top = O.max_dim
    for i in range(O.m):
        p = len(O.simplices[i]) - 1
        before = {q: O.harmonic_space(i, q) for q in range(top + 1)}
        after = {q: O.harmonic_space(i + 1, q) for q in range(top + 1)}
        delta = sum(after[q].dim - before[q].dim for q in before)
        if delta not in (1, -1):
            out.append(f"step {i}: total dimension changed by {delta}")
            continue
        if delta == 1:
            grown = p
            if not all(O.is_harmonic_member(v, i + 1, p) for v in before[p].vectors):
                out.append(f"step {i}: Har_{p}(K_{i}) not inside Har_{p}(K_{i + 1})")
        else:
            grown = p - 1
            if not all(O.is_harmonic_member(v, i, p - 1) for v in after[p - 1].vectors):
                out.append(f"step {i}: Har_{p - 1}(K_{i + 1}) not inside Har_{p - 1}(K_{i})")
        for q in before:
            if q == grown:
                continue
            same = (before[q].dim == after[q].dim and
                    all(O.is_harmonic_member(v, i + 1, q) for v in before[q].vectors))
            if not same:
                out.append(f"step {i}: degree {q} harmonic space changed")
    return out


# -- combined report ---------------------------------------------------------

def betti_violations(F: Filtration, barcode: Barcode, oracle: Optional[Oracle] = None) -> List[dict]:
    """Prefixes where the number of bars alive, the harmonic dimension and the
    Betti number do not all agree."""
    O = oracle or Oracle(F)
    out = []
    for i in range(O.m + 1):
        for p in range(O.max_dim + 1):
            alive = sum(1 for b in barcode.bars if b.degree == p and b.contains(i))
            har = O.harmonic_space(i, p).dim
            beta = O.betti_number(i, p)
            if not alive == har == beta:
                out.append({"prefix": i, "degree": p, "bars": alive,
                            "harmonic_dim": har, "betti": beta})
    return out


def endpoint_mismatches(barcode: Barcode, other: Barcode) -> List[int]:
    """Degrees whose birth or death multisets differ between two barcodes."""
    degrees = sorted(set(barcode.degrees) | set(other.degrees))
    return [p for p in degrees
            if barcode.births(p) != other.births(p) or barcode.deaths(p) != other.deaths(p)]


def verify_filtration(F: Filtration, barcode: Barcode) -> dict:
    """Certification, dimension counts and the endpoint comparison with
    ordinary persistence, as one JSON-ready report."""
    from .ordinary import compute_ordinary_barcode

    O = Oracle(F)
    cert = certify_barcode(F, barcode, O)
    betti = betti_violations(F, barcode, O)
    endpoints = endpoint_mismatches(barcode, compute_ordinary_barcode(F))
    ok = cert.passed and not betti and not endpoints
    return {"status": "PASS" if ok else "FAIL",
            "m": F.m,
            "certification": cert.to_dict(),
            "betti_violations": betti,
            "endpoint_mismatch_degrees": endpoints}
