"""Independent brute-force oracles used only by the test suite.

These deliberately avoid the library's own code paths: dense integer
Smith reduction without pivoting heuristics, an exact-rational facet
enumeration for small convex hulls, and direct iterated-coproduct
evaluation.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


# ---------------------------------------------------------------------------
# dense Smith reduction (no pivot heuristic: always top-left nonzero)


def dense_invariant_factors(mat: list[list[int]]) -> tuple[int, ...]:
    m = [list(map(int, row)) for row in mat]
    n = len(m)
    k = len(m[0]) if n else 0
    factors = []
    t = 0
    while True:
        # find any nonzero in the remaining block
        pos = None
        for i in range(t, n):
            for j in range(t, k):
                if m[i][j]:
                    pos = (i, j)
                    break
            if pos:
                break
        if pos is None:
            break
        i0, j0 = pos
        m[t], m[i0] = m[i0], m[t]
        for row in m:
            row[t], row[j0] = row[j0], row[t]
        while True:
            # reduce column then row by plain remainders
            again = False
            for i in range(t + 1, n):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, k):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        again = True
                        break
            if again:
                continue
            for j in range(t + 1, k):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, n):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        again = True
                        break
            if not again:
                break
        factors.append(abs(m[t][t]))
        t += 1
    for idx in range(len(factors)):
        for jdx in range(idx + 1, len(factors)):
            a, b = factors[idx], factors[jdx]
            g = math.gcd(a, b)
            factors[idx], factors[jdx] = g, a * b // g
    return tuple(factors)


def dense_rank_q(mat: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in mat]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col] / m[row][col]
                for j in range(col, cols):
                    m[i][j] -= f * m[row][j]
        row += 1
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# exact convex hull facet enumeration (tiny dimensions only)


def hull_facets(points: list[tuple[Fraction, ...]]) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """All facet hyperplanes (normal, offset) of conv(points), exact over Q.

    Brute force over d-subsets; only usable for dimension <= 4 and a few
    dozen points.  Assumes the hull is full-dimensional.
    """
    dim = len(points[0])
    facets = {}
    for subset in itertools.combinations(range(len(points)), dim):
        pts = [points[i] for i in subset]
        normal = _affine_normal(pts)
        if normal is None:
            continue
        nvec, offset = normal
        pos = neg = False
        for p in points:
            val = sum(a * b for a, b in zip(nvec, p)) - offset
            if val > 0:
                pos = True
            elif val < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        if neg:
            nvec = tuple(-a for a in nvec)
            offset = -offset
        key = _normalize_hyperplane(nvec, offset)
        facets[key] = (nvec, offset)
    return list(facets.values())


def _affine_normal(pts):
    """Hyperplane through dim affinely independent points, or None."""
    dim = len(pts[0])
    rows = [[pts[i][j] - pts[0][j] for j in range(dim)] for i in range(1, dim)]
    # normal = kernel of rows: solve by cofactor expansion (Cramer)
    normal = []
    for j in range(dim):
        sub = [[row[c] for c in range(dim) if c != j] for row in rows]
        normal.append((-1) ** j * _det(sub))
    if all(x == 0 for x in normal):
        return None
    offset = sum(a * b for a, b in zip(normal, pts[0]))
    return tuple(Fraction(x) for x in normal), Fraction(offset)


def _det(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    if n == 2:
        return Fraction(m[0][0] * m[1][1] - m[0][1] * m[1][0])
    total = Fraction(0)
    for j in range(n):
        if m[0][j]:
            sub = [[m[i][c] for c in range(n) if c != j] for i in range(1, n)]
            total += (-1) ** j * m[0][j] * _det(sub)
    return total


def _normalize_hyperplane(nvec, offset):
    nums = [x.numerator for x in nvec] + [offset.numerator]
    dens = [x.denominator for x in nvec] + [offset.denominator]
    scale = Fraction(math.lcm(*dens), math.gcd(*[abs(n) for n in nums if n] or [1]))
    vec = tuple(x * scale for x in nvec)
    return vec, offset * scale


def hull_vertices(points: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    """Points of the input that are vertices of the hull (exact LP-free test)."""
    facets = hull_facets(points)
    out = []
    for p in points:
        tight = [f for f in facets
                 if sum(a * b for a, b in zip(f[0], p)) == f[1]]
        if not tight:
            continue
        # vertex iff the tight normals span the whole space
        mat = [list(f[0]) for f in tight]
        if dense_rank_q(mat) == len(p):
            out.append(p)
    return out
