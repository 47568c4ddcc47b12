"""Ordinary persistence by standard column reduction over the rationals.

Bars use the same closed integer convention as the harmonic barcode: a
class born when simplex ``j`` enters and killed by simplex ``i`` gives
``[j + 1, i]``; survivors end at ``m``.
"""
from __future__ import annotations

from typing import Dict

from .barcode import END, PAIRED, Bar, Barcode
from .complex import pivot
from .filtration import Filtration
from .linalg import ColumnMatrix, reduce_against


def compute_ordinary_barcode(F: Filtration) -> Barcode:
    idx = F.index
    reduced: Dict[int, ColumnMatrix] = {}
    creators: Dict[int, int] = {}  # simplex index -> degree, for unpaired positives
    bars = []
    for i in range(F.m):
        p = idx.dim(i)
        if p == 0:
            creators[i] = 0
            continue
        R = reduced.setdefault(p - 1, ColumnMatrix())
        z, _ = reduce_against(idx.boundary(i), R)
        if not z:
            creators[i] = p
            continue
        low = pivot(z)  # youngest creator among the cycle's simplices
        R.append(z)
        del creators[low]
        bars.append(Bar(p - 1, low + 1, i, {}, PAIRED))
    for j, p in creators.items():
        bars.append(Bar(p, j + 1, F.m, {}, END))
    return Barcode(F.m, bars).sorted()
