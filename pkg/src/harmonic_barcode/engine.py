"""Harmonic chain barcode with one harmonic representative per bar.

The engine processes a simplex-wise filtration one insertion at a time and
keeps, for every degree ``p``:

* ``H[p]``   partial representatives ``(birth, cycle)`` sorted by birth; they
             form a basis of the harmonic ``p``-chains of the current complex,
* ``R[p]``   a basis of the ``p``-boundaries with distinct pivots,
* ``cob[p]`` the triple ``(SC^{p-1}, Cob^p, BoC^{p-1})``: pseudo-cochains on
             the ``(p-1)``-boundaries (coordinates w.r.t. ``R[p-1]``), their
             coboundaries (a basis of the ``p``-coboundaries), and the
             boundaries of those coboundaries (distinct pivots).

Per insertion the work is quadratic in the number of simplices, so the whole
pass is cubic.
"""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple

from gmpy2 import gcd, mpq, mpz

from .barcode import END, PAIRED, Bar, Barcode
from .complex import (Rational, SparseVector, content, divide_exact, dot, lincomb,
                      pivot)
from .filtration import Filtration
from .linalg import ColumnMatrix, reduce_against

POSITIVE = "positive"
NEGATIVE = "negative"

IntVector = Dict[int, mpz]


class InvariantViolation(RuntimeError):
    """Internal state contradicts a guarantee of the algorithm."""


def as_rational(v: IntVector, den=1) -> SparseVector:
    return {k: mpq(x, den) for k, x in v.items()}


def _normalized_rep(v: IntVector) -> SparseVector:
    lead = v[pivot(v)]
    return {k: mpq(x, lead) for k, x in v.items()}


class CoboundaryBasis:
    """Parallel columns ``sc[j] -> cob[j] -> boc[j]`` for one degree.

    Only the direction of each triple matters, so the columns are kept as
    integer vectors with no common factor; this avoids the cost of
    normalizing a rational at every entry update.
    """

    def __init__(self):
        self.sc: List[IntVector] = []
        self.cob: List[IntVector] = []
        self.boc: List[IntVector] = []
        self.owner: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.cob)

    def columns(self, j: int) -> Tuple[IntVector, IntVector, IntVector]:
        return self.sc[j], self.cob[j], self.boc[j]

    def combine(self, j: int, a, b, k: int) -> None:
        """Triple ``j := a * triple j + b * triple k``, then made primitive."""
        for col, src in zip(self.columns(j), self.columns(k)):
            lincomb(col, a, b, src)
        self.make_primitive(j)

    def make_primitive(self, j: int) -> None:
        # boc is short, so a content of 1 usually shows up there first
        cols = (self.boc[j], self.cob[j], self.sc[j])
        g = content(cols)
        if g > 1:
            for col in cols:
                divide_exact(col, g)


class HarmonicEngine:

    def __init__(self, filtration: Filtration):
        self.F = filtration
        self.idx = filtration.index
        self.i = 0
        # H[p]: [birth, v, d] with the representative equal to v / d, d > 0.
        self.H: Dict[int, List[List]] = {}
        self.R: Dict[int, ColumnMatrix] = {}
        self.cob: Dict[int, CoboundaryBasis] = {}
        self.bars: List[Bar] = []
        # (birth, alpha) per representative evaluated at the last death,
        # oldest first.
        self.last_alphas: List[Tuple[int, Rational]] = []
        self._int_boundaries: List[IntVector] = []

    # -- per-degree accessors ------------------------------------------------

    def _H(self, p: int) -> List[List]:
        return self.H.setdefault(p, [])

    def _R(self, p: int) -> ColumnMatrix:
        if p not in self.R:
            self.R[p] = ColumnMatrix()
        return self.R[p]

    def _cob(self, p: int) -> CoboundaryBasis:
        if p not in self.cob:
            self.cob[p] = CoboundaryBasis()
        return self.cob[p]

    def _boundary(self, i: int) -> IntVector:
        while len(self._int_boundaries) <= i:
            bd = self.idx.boundary(len(self._int_boundaries))
            self._int_boundaries.append({k: mpz(x) for k, x in bd.items()})
        return self._int_boundaries[i]

    def unpaired(self, p: int) -> List[int]:
        return [b for b, _, _ in self.H.get(p, [])]

    def representatives(self, p: int) -> List[Tuple[int, SparseVector]]:
        """Current partial representatives of degree ``p`` as rational chains."""
        return [(b, as_rational(v, d)) for b, v, d in self.H.get(p, [])]

    def set_representative(self, p: int, birth: int, chain: SparseVector) -> None:
        """Replace the partial representative of the unpaired ``birth``.

        Any harmonic cycle born at ``birth`` is an equally valid choice; the
        caller is responsible for that, nothing is checked here.
        """
        for rep in self.H.get(p, []):
            if rep[0] == birth:
                q = {k: mpq(x) for k, x in chain.items() if x}
                d = mpz(1)
                for x in q.values():
                    d = d * x.denominator // gcd(d, x.denominator)
                rep[1] = {k: mpz(x * d) for k, x in q.items()}
                rep[2] = d
                return
        raise KeyError(f"no unpaired birth {birth} in degree {p}")

    # -- the four steps ------------------------------------------------------

    def classify_insertion(self, i: int) -> Tuple[str, SparseVector, List[Tuple[int, Rational]]]:
        """Reduce the boundary of simplex ``i`` against the boundary basis.

        A zero residual means the insertion is positive.  The coefficients
        express the reduced part of the boundary in the ``R`` basis.
        """
        p = self.idx.dim(i)
        if p == 0:
            return POSITIVE, {}, []
        z, mu = reduce_against(self.idx.boundary(i), self._R(p - 1))
        return (NEGATIVE if z else POSITIVE), z, mu

    def find_newborn_harmonic(self, i: int) -> Tuple[IntVector, mpz]:
        """Adjust the dual of simplex ``i`` by coboundaries until its boundary
        vanishes; the result ``v / d`` is a harmonic cycle new in ``K_{i+1}``
        whose coefficient on simplex ``i`` is 1."""
        p = self.idx.dim(i)
        phi: IntVector = {i: mpz(1)}
        d = mpz(1)
        if p == 0:
            return phi, d
        T = self._cob(p)
        zeta = dict(self._boundary(i))
        while zeta:
            k = pivot(zeta)
            j = T.owner.get(k)
            if j is None:
                raise InvariantViolation(
                    f"boundary of the dual of simplex {i} does not reduce to zero")
            a, b = zeta[k], T.boc[j][k]
            g = gcd(a, b)
            a, b = a // g, b // g
            lincomb(zeta, b, -a, T.boc[j])
            lincomb(phi, b, -a, T.cob[j])
            d *= b
            g = content((zeta, phi), d)
            if g > 1:
                divide_exact(zeta, g)
                divide_exact(phi, g)
                d = d // g
        if d < 0:
            phi = {k: -x for k, x in phi.items()}
            d = -d
        return phi, d

    def _extend_coboundaries(self, i: int, mu: List[Tuple[int, Rational]]) -> None:
        """Recompute ``Cob^p = delta(SC^{p-1})`` now that simplex ``i`` exists.

        Each pseudo-cochain takes the value ``sum_k mu_k SC[j][k]`` on the
        boundary of simplex ``i``; that value becomes the new coefficient of
        ``i`` in the coboundary.
        """
        p = self.idx.dim(i)
        T = self._cob(p)
        if not mu or not T.sc:
            return
        hits = []
        for j, sc in enumerate(T.sc):
            a = 0
            for k, m_k in mu:
                v = sc.get(k)
                if v is not None:
                    a += m_k * v
            if a:
                hits.append((pivot(T.boc[j]), j, mpq(a)))
        if not hits:
            return
        hits.sort()
        _, j1, a1 = hits[0]
        # The other columns drop their coefficient on i; their pivots are
        # untouched because column j1 has the smallest old pivot.
        for _, j, a in hits[1:]:
            r = a / a1
            T.combine(j, r.denominator, -r.numerator, j1)
        del T.owner[pivot(T.boc[j1])]
        sc, cob, boc = T.columns(j1)
        if a1.denominator != 1:
            for col in (sc, cob, boc):
                for k in col:
                    col[k] *= a1.denominator
        n = a1.numerator
        cob[i] = n
        lincomb(boc, 1, n, self._boundary(i))
        T.make_primitive(j1)
        self.restore_distinct_pivots(p, j1)

    def restore_distinct_pivots(self, p: int, j: int) -> None:
        """Reduce column ``j`` of ``BoC^{p-1}`` (with its ``SC``/``Cob``
        partners) until its pivot is not owned by another column."""
        T = self._cob(p)
        boc = T.boc[j]
        while boc:
            k = pivot(boc)
            other = T.owner.get(k)
            if other is None:
                T.owner[k] = j
                return
            a, b = boc[k], T.boc[other][k]
            g = gcd(a, b)
            T.combine(j, b // g, -(a // g), other)
        raise InvariantViolation(f"coboundary column {j} in degree {p} has zero boundary")

    def process_positive(self, i: int, phi: Tuple[IntVector, mpz], mu) -> None:
        p = self.idx.dim(i)
        if p > 0:
            self._extend_coboundaries(i, mu)
        v, d = phi
        self._H(p).append([i + 1, v, d])

    def process_negative(self, i: int, z: SparseVector, mu) -> Bar:
        p = self.idx.dim(i)
        q = p - 1
        bd = self._boundary(i)
        reps = self._H(q)
        # alpha_j = <z_j, boundary of i> = A_j / d_j
        A = [dot(v, bd) for _, v, _ in reps]
        hit = [j for j, a in enumerate(A) if a]
        if not hit:
            raise InvariantViolation(
                f"negative simplex {i} leaves every harmonic {q}-cycle harmonic")
        self.last_alphas = [(reps[j][0], mpq(A[j], reps[j][2])) for j in hit]
        star = hit[0]  # reps are kept in birth order: this is the oldest
        a_star = A[star]
        birth, v_star, _ = reps[star]
        for j in hit[1:]:
            # z_j - (alpha_j / alpha_*) z_*  ==  (A_* v_j - A_j v_*) / (A_* d_j)
            g = gcd(a_star, A[j])
            a, b = a_star // g, A[j] // g
            rep = reps[j]
            lincomb(rep[1], a, -b, v_star)
            d = rep[2] * a
            if d < 0:
                d = -d
                for k in rep[1]:
                    rep[1][k] = -rep[1][k]
            g = content((rep[1],), d)
            if g > 1:
                divide_exact(rep[1], g)
                d = d // g
            rep[2] = d
        del reps[star]
        bar = Bar(q, birth, i, _normalized_rep(v_star), PAIRED)

        r = self._R(q).append(z)
        # SC columns gain an implicit zero coordinate for the new boundary r.
        self._extend_coboundaries(i, mu)
        T = self._cob(p)
        T.sc.append({r: mpz(1)})
        T.cob.append({i: mpz(1)})
        T.boc.append(dict(bd))
        self.restore_distinct_pivots(p, len(T.boc) - 1)
        return bar

    # -- driver --------------------------------------------------------------

    def step(self) -> Optional[Bar]:
        i = self.i
        sign, z, mu = self.classify_insertion(i)
        bar = None
        if sign == POSITIVE:
            phi = self.find_newborn_harmonic(i)
            self.process_positive(i, phi, mu)
        else:
            bar = self.process_negative(i, z, mu)
            self.bars.append(bar)
        self.i += 1
        return bar

    def finish(self) -> Barcode:
        m = self.F.m
        bars = list(self.bars)
        for p in sorted(self.H):
            for b, v, _ in self.H[p]:
                bars.append(Bar(p, b, m, _normalized_rep(v), END))
        return Barcode(m, bars).sorted()


def compute_harmonic_barcode(F: Filtration,
                             on_step: Optional[Callable[[int, HarmonicEngine], None]] = None
                             ) -> Tuple[Barcode, HarmonicEngine]:
    """Run the whole filtration; ``on_step(i, engine)`` fires after step i."""
    engine = HarmonicEngine(F)
    for i in range(F.m):
        engine.step()
        if on_step is not None:
            on_step(i, engine)
    return engine.finish(), engine
