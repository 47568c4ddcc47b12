"""Exact rational linear algebra: pivot-indexed column stores and dense
Gaussian elimination used by the oracle."""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .complex import Rational, SparseVector, add_scaled, pivot


class ColumnMatrix:
    """Ordered sparse columns with a pivot -> column lookup.

    When ``distinct_pivots`` is set, :meth:`append` refuses a column whose
    pivot is already owned.  Zero columns are never stored.
    """

    def __init__(self, distinct_pivots: bool = True):
        self.columns: List[SparseVector] = []
        self.distinct_pivots = distinct_pivots
        self.pivot_owner: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.columns)

    def __getitem__(self, j: int) -> SparseVector:
        return self.columns[j]

    def __iter__(self):
        return iter(self.columns)

    def append(self, v: SparseVector) -> int:
        if not v:
            raise ValueError("zero column")
        k = pivot(v)
        if self.distinct_pivots and k in self.pivot_owner:
            raise ValueError(f"pivot {k} already owned by column {self.pivot_owner[k]}")
        j = len(self.columns)
        self.columns.append(v)
        self.pivot_owner.setdefault(k, j)
        return j

    def owner(self, k: int) -> Optional[int]:
        return self.pivot_owner.get(k)


def reduce_against(v: SparseVector, M: ColumnMatrix) -> Tuple[SparseVector, List[Tuple[int, Rational]]]:
    """Eliminate pivots of ``v`` with columns of ``M`` until the pivot of the
    residual is unmatched (or the residual vanishes).

    Returns ``(residual, coeffs)`` with ``v == residual + sum(mu * M[j])``.
    """
    z = dict(v)
    coeffs: List[Tuple[int, Rational]] = []
    while z:
        k = pivot(z)
        j = M.owner(k)
        if j is None:
            break
        col = M[j]
        mu = z[k] / col[k]
        add_scaled(z, -mu, col)
        coeffs.append((j, mu))
    return z, coeffs


# -- dense elimination -------------------------------------------------------

def _as_fraction_rows(M: Sequence[Sequence]) -> List[List[Rational]]:
    return [[Rational(x) for x in row] for row in M]


def row_echelon(M: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[List[List[Rational]], List[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    A = _as_fraction_rows(M)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r == len(A):
            break
        sel = next((i for i in range(r, len(A)) if A[i][c]), None)
        if sel is None:
            continue
        A[r], A[sel] = A[sel], A[r]
        lead = A[r][c]
        if lead != 1:
            A[r] = [x / lead for x in A[r]]
        row = A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], row)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_and_kernel(M: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[int, List[List[Rational]]]:
    """Rank and a right-kernel basis of a dense matrix.

    ``ncols`` is needed when ``M`` has no rows.  Each kernel vector is scaled
    so its first nonzero entry is 1.
    """
    n = ncols if ncols is not None else (len(M[0]) if len(M) else 0)
    rows, pivots = row_echelon(M, n)
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for f in free:
        vec = [Rational(0)] * n
        vec[f] = Rational(1)
        for row, pc in zip(rows, pivots):
            vec[pc] = -row[f]
        lead = next(x for x in vec if x)
        kernel.append([x / lead for x in vec])
    return len(pivots), kernel


def rank(M: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    n = ncols if ncols is not None else (len(M[0]) if len(M) else 0)
    return len(row_echelon(M, n)[1])


def sparse_rank(vectors: Iterable[SparseVector]) -> int:
    """Rank of a family of sparse vectors via pivot reduction."""
    basis = ColumnMatrix()
    for v in vectors:
        z, _ = reduce_against(v, basis)
        if z:
            basis.append(z)
    return len(basis)
