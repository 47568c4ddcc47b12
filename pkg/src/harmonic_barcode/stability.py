"""Exact bottleneck distance and the sublevel-set stability experiment."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .engine import compute_harmonic_barcode
from .filtration import RealInterval, lower_star_filtration, to_closed_open

INF = math.inf

Point = Tuple[object, object]


def _points(diagram: Iterable) -> List[Point]:
    out = []
    for pt in diagram:
        if isinstance(pt, RealInterval):
            b, d = pt.birth, pt.death
        else:
            b, d = pt
        b = Fraction(b)
        d = INF if d == INF or d is None else Fraction(d)
        if not b < d:
            raise ValueError(f"empty interval [{b}, {d})")
        out.append((b, d))
    return out


def _linf(a: Point, b: Point):
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _has_perfect_matching(n: int, edges: List[Tuple[int, int]]) -> bool:
    if n == 0:
        return True
    rows, cols = zip(*edges) if edges else ((), ())
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool((match >= 0).all())


def _finite_bottleneck(A: Sequence[Point], B: Sequence[Point]):
    n, k = len(A), len(B)
    if n == 0 and k == 0:
        return Fraction(0)
    size = n + k
    # Left: A then diagonal copies for B.  Right: B then diagonal copies for A.
    weighted: List[Tuple[object, int, int]] = []
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            weighted.append((_linf(a, b), i, j))
        weighted.append(((a[1] - a[0]) / 2, i, k + i))
    for j, b in enumerate(B):
        weighted.append(((b[1] - b[0]) / 2, n + j, j))
    diag = [(n + j, k + i) for j in range(k) for i in range(n)]

    candidates = sorted({w for w, _, _ in weighted} | {Fraction(0)})

    def feasible(eps) -> bool:
        edges = [(u, v) for w, u, v in weighted if w <= eps] + diag
        return _has_perfect_matching(size, edges)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_distance(D: Iterable, E: Iterable):
    """Exact bottleneck distance between two diagrams of ``(birth, death)``
    points; infinite deaths are matched only with each other.

    Returns ``inf`` when the numbers of infinite points differ.
    """
    A, B = _points(D), _points(E)
    A_inf = sorted(b for b, d in A if d == INF)
    B_inf = sorted(b for b, d in B if d == INF)
    if len(A_inf) != len(B_inf):
        return INF
    # Sorted order is an optimal matching on the line.
    essential = max((abs(a - b) for a, b in zip(A_inf, B_inf)), default=Fraction(0))
    finite = _finite_bottleneck([x for x in A if x[1] != INF], [x for x in B if x[1] != INF])
    return max(essential, finite)


def sup_distance(f: Mapping[int, object], g: Mapping[int, object]):
    if set(f) != set(g):
        raise ValueError("vertex functions are defined on different vertex sets")
    return max((abs(Fraction(f[v]) - Fraction(g[v])) for v in f), default=Fraction(0))


def closed_open_barcode(complex_, f) -> Dict[int, List[RealInterval]]:
    F, tau = lower_star_filtration(complex_, f)
    bc, _ = compute_harmonic_barcode(F)
    return to_closed_open(bc.bars, tau)


def stability_experiment(complex_, f: Mapping[int, object], g: Mapping[int, object]) -> dict:
    """Compare per-degree bottleneck distances of the closed-open harmonic
    barcodes of two lower-star filtrations with the sup-norm of ``f - g``."""
    Bf = closed_open_barcode(complex_, f)
    Bg = closed_open_barcode(complex_, g)
    eps = sup_distance(f, g)
    per_degree = {p: bottleneck_distance(Bf.get(p, []), Bg.get(p, []))
                  for p in sorted(set(Bf) | set(Bg))}
    worst = max(per_degree.values(), default=Fraction(0))
    return {
        "bottleneck": per_degree,
        "max_bottleneck": worst,
        "sup_norm": eps,
        "bound_holds": all(d <= eps for d in per_degree.values()),
    }
