"""Exact sparse linear algebra over Z, Q and prime fields.

Everything here is exact: integer entries are arbitrary-precision Python
ints, rational entries are `fractions.Fraction`, and prime-field entries
are reduced representatives in range(p).  Homology of a windowed chain
complex is extracted via Gaussian elimination (fields) or Smith normal
form (integers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


# ---------------------------------------------------------------------------
# rings


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring: integers, rationals, or Z/p for a prime p."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("integers", "rationals", "prime-field"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "prime-field":
            if self.modulus is None or not _is_prime(self.modulus):
                raise ValueError(f"modulus {self.modulus!r} is not prime")
        elif self.modulus is not None:
            raise ValueError("modulus only makes sense for prime fields")

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse a CLI-style ring name: ``z``, ``q`` or ``zp:<p>``."""
        t = text.strip().lower()
        if t == "z":
            return Z
        if t == "q":
            return Q
        if t.startswith("zp:"):
            return cls("prime-field", int(t[3:]))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    def label(self) -> str:
        if self.kind == "integers":
            return "Z"
        if self.kind == "rationals":
            return "Q"
        return f"Z/{self.modulus}"

    def coerce(self, x):
        """Map an integer (or Fraction over Q) into this ring."""
        if self.kind == "integers":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "rationals":
            return Fraction(x)
        return int(x) % self.modulus


Z = RingSpec("integers")
Q = RingSpec("rationals")


# ---------------------------------------------------------------------------
# sparse matrices


@dataclass
class SparseMatrix:
    """Immutable-by-convention sparse matrix, entries keyed by (row, col).

    Zero entries are never stored; construction drops them.
    """

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if (r, c) in clean:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping[int, object]]) -> "SparseMatrix":
        entries = {}
        cols = 0
        for j, col in enumerate(columns):
            cols = j + 1
            for i, v in col.items():
                if v:
                    entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self.entries.items()})

    def column(self, j: int) -> dict:
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def scale(self, a) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols,
                            {k: a * v for k, v in self.entries.items()})

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return SparseMatrix(self.rows, self.cols, out)

    def mul(self, other: "SparseMatrix") -> "SparseMatrix":
        """Matrix product self @ other."""
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch in mul: {self.cols} vs {other.rows}")
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], object] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                s = out.get(key, 0) + v * w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec: Mapping[int, object]) -> dict:
        """Apply to a sparse column vector."""
        by_col: dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out: dict[int, object] = {}
        for j, x in vec.items():
            for r, v in by_col.get(j, ()):
                s = out.get(r, 0) + v * x
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def over(self, ring: RingSpec) -> "SparseMatrix":
        """Coerce all entries into `ring`, dropping entries that become 0."""
        out = {}
        for k, v in self.entries.items():
            w = ring.coerce(v)
            if w:
                out[k] = w
        return SparseMatrix(self.rows, self.cols, out)

    def to_dense(self) -> list[list]:
        m = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m


# ---------------------------------------------------------------------------
# rank and Smith normal form


def _rank_field(M: SparseMatrix, ring: RingSpec) -> int:
    """Gaussian elimination rank over Q or Z/p."""
    p = ring.modulus
    rowmap: dict[int, dict[int, object]] = {}
    for (r, c), v in M.entries.items():
        w = ring.coerce(v)
        if w:
            rowmap.setdefault(r, {})[c] = w
    work = [row for row in rowmap.values() if row]
    rank = 0
    while work:
        row = work.pop()
        if not row:
            continue
        j = min(row)
        piv = row[j]
        inv = Fraction(1) / piv if p is None else pow(piv, p - 2, p)
        rank += 1
        reduced = []
        for other in work:
            if j in other:
                factor = other[j] * inv
                for c, v in row.items():
                    w = other.get(c, 0) - factor * v
                    if p is not None:
                        w %= p
                    if w:
                        other[c] = w
                    else:
                        other.pop(c, None)
            if other:
                reduced.append(other)
        work = reduced
    return rank


def rank(M: SparseMatrix, ring: RingSpec = Z) -> int:
    """Rank of M over the given field; over Z, the rank over Q."""
    if M.is_zero():
        return 0
    if ring.kind == "integers":
        ring = Q
    return _rank_field(M, ring)


@dataclass
class SmithResult:
    """Invariant factors d1 | d2 | ... | dr (all positive) plus metadata.

    When transforms are requested, U and V are unimodular with
    U @ A @ V = diag(factors).
    """

    factors: tuple[int, ...]
    rank: int
    rows: int
    cols: int
    U: list | None = None
    V: list | None = None


def smith_normal_form(M: SparseMatrix, want_transforms: bool = False) -> SmithResult:
    """Smith normal form of an integer matrix.

    Pivoting picks the smallest nonzero |entry|, breaking ties by the
    number of nonzeros in its row plus column (then by position), which
    keeps intermediate entries small on the sparse matrices produced by
    the chain-complex builders.
    """
    n, m = M.rows, M.cols
    rowdata: dict[int, dict[int, int]] = {}
    coldata: dict[int, dict[int, int]] = {}
    for (r, c), v in M.entries.items():
        v = int(v)
        if v:
            rowdata.setdefault(r, {})[c] = v
            coldata.setdefault(c, {})[r] = v

    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_transforms else None
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_transforms else None

    def set_entry(r, c, v):
        if v:
            rowdata.setdefault(r, {})[c] = v
            coldata.setdefault(c, {})[r] = v
        else:
            rowdata.get(r, {}).pop(c, None)
            if r in rowdata and not rowdata[r]:
                del rowdata[r]
            coldata.get(c, {}).pop(r, None)
            if c in coldata and not coldata[c]:
                del coldata[c]

    def row_op(dst, src, k):
        # row dst += k * row src
        for c, v in list(rowdata.get(src, {}).items()):
            set_entry(dst, c, rowdata.get(dst, {}).get(c, 0) + k * v)
        if U is not None:
            for j in range(n):
                U[dst][j] += k * U[src][j]

    def col_op(dst, src, k):
        for r, v in list(coldata.get(src, {}).items()):
            set_entry(r, dst, rowdata.get(r, {}).get(dst, 0) + k * v)
        if V is not None:
            for i in range(m):
                V[i][dst] += k * V[i][src]

    def swap_rows(a, b):
        if a == b:
            return
        ra, rb = rowdata.get(a, {}), rowdata.get(b, {})
        cols = set(ra) | set(rb)
        va = {c: ra.get(c, 0) for c in cols}
        vb = {c: rb.get(c, 0) for c in cols}
        for c in cols:
            set_entry(a, c, vb[c])
            set_entry(b, c, va[c])
        if U is not None:
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a == b:
            return
        ca, cb = coldata.get(a, {}), coldata.get(b, {})
        rows_ = set(ca) | set(cb)
        va = {r: ca.get(r, 0) for r in rows_}
        vb = {r: cb.get(r, 0) for r in rows_}
        for r in rows_:
            set_entry(r, a, vb[r])
            set_entry(r, b, va[r])
        if V is not None:
            for i in range(m):
                V[i][a], V[i][b] = V[i][b], V[i][a]

    def negate_row(r):
        for c, v in list(rowdata.get(r, {}).items()):
            set_entry(r, c, -v)
        if U is not None:
            U[r] = [-x for x in U[r]]

    factors: list[int] = []
    t = 0
    while True:
        # pick pivot among entries with row >= t and col >= t
        best = None
        for r, row in rowdata.items():
            if r < t:
                continue
            for c, v in row.items():
                if c < t:
                    continue
                weight = (abs(v), len(row) + len(coldata[c]), r, c)
                if best is None or weight < best[0]:
                    best = (weight, r, c)
        if best is None:
            break
        _, pr, pc = best
        swap_rows(t, pr)
        swap_cols(t, pc)

        while True:
            piv = rowdata.get(t, {}).get(t, 0)
            assert piv != 0
            dirty = False
            for r in list(coldata.get(t, {})):
                if r == t:
                    continue
                q = rowdata[r][t] // piv
                if q:
                    row_op(r, t, -q)
                if rowdata.get(r, {}).get(t, 0):
                    # remainder nonzero: swap it up to shrink the pivot
                    swap_rows(t, r)
                    dirty = True
                    break
            if dirty:
                continue
            for c in list(rowdata.get(t, {})):
                if c == t:
                    continue
                q = rowdata[t][c] // piv
                if q:
                    col_op(c, t, -q)
                if rowdata.get(t, {}).get(c, 0):
                    swap_cols(t, c)
                    dirty = True
                    break
            if not dirty:
                break

        piv = rowdata[t][t]
        if piv < 0:
            negate_row(t)
            piv = -piv
        factors.append(piv)
        t += 1

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a != 0:
                changed = True
                # diag(a,b) ~ diag(gcd, lcm) via unimodular 2x2 operations
                g = math.gcd(a, b)
                if U is not None:
                    x, y = _bezout(a, b)
                    _fix_pair_transforms(U, V, i, a, b, x, y, g, a * b // g, factors)
                else:
                    factors[i], factors[i + 1] = g, a * b // g
    for d in factors:
        assert d > 0

    return SmithResult(tuple(factors), len(factors), n, m, U, V)


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _fix_pair_transforms(U, V, i, a, b, x, y, g, lcm, factors):
    """Replace diag(a, b) by diag(g, lcm) on positions (i, i+1), updating U, V.

    Uses  [[x, y], [-b/g, a/g]] @ diag(a,b) @ [[1, -y*b/g], [1, x*a/g]]
        = diag(g, lcm)  up to the standard identities.
    """
    # Row transform L and column transform R with L @ diag(a,b) @ R = diag(g,lcm)
    L = ((x, y), (-b // g, a // g))
    R = ((1, -(y * b) // g), (1, (x * a) // g))
    # sanity: L @ diag(a,b) @ R == diag(g, lcm)
    prod = [[sum(L[r][k] * (a if k == 0 else b) * R[k][c] for k in range(2))
             for c in range(2)] for r in range(2)]
    assert prod[0][0] == g and prod[1][1] == lcm and prod[0][1] == 0 and prod[1][0] == 0
    if U is not None:
        ri, rj = U[i], U[i + 1]
        U[i] = [L[0][0] * u + L[0][1] * v for u, v in zip(ri, rj)]
        U[i + 1] = [L[1][0] * u + L[1][1] * v for u, v in zip(ri, rj)]
    if V is not None:
        for row in V:
            u, v = row[i], row[i + 1]
            row[i] = u * R[0][0] + v * R[1][0]
            row[i + 1] = u * R[0][1] + v * R[1][1]
    factors[i], factors[i + 1] = g, lcm


# ---------------------------------------------------------------------------
# chain complex windows and homology


@dataclass
class ChainComplexWindow:
    """A chain complex known on an inclusive degree window [lo, hi].

    `basis[n]` is the ordered list of generator labels in degree n and
    `boundary[n]` the matrix of the degree -1 differential from degree n
    to n-1 (present for lo < n <= hi).  `certified` collects the degrees
    whose basis is known to be complete (no missing generators); windows
    produced by truncated enumerations certify fewer degrees.
    """

    lo: int
    hi: int
    basis: dict[int, list]
    boundary: dict[int, SparseMatrix]
    certified: frozenset
    nonnegative: bool = True
    vanishes_above: bool = False
    warnings: tuple = ()

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def validate(self) -> None:
        if not (0 <= self.lo <= self.hi):
            raise ValueError("bad window bounds")
        for n, M in self.boundary.items():
            if M.rows != self.dim(n - 1) or M.cols != self.dim(n):
                raise ValueError(f"boundary at degree {n} has wrong shape")
        for n in range(self.lo + 2, self.hi + 1):
            if n in self.boundary and (n - 1) in self.boundary:
                if not self.boundary[n - 1].mul(self.boundary[n]).is_zero():
                    raise ValueError(f"d o d != 0 at degree {n}")

    def boundary_or_zero(self, n: int) -> SparseMatrix:
        if n in self.boundary:
            return self.boundary[n]
        return SparseMatrix.zero(self.dim(n - 1), self.dim(n))


@dataclass
class HomologyEntry:
    degree: int
    betti: int
    torsion: tuple[int, ...]
    certified: bool = True


@dataclass
class HomologyResult:
    ring: RingSpec
    entries: list[HomologyEntry]
    reliable: tuple[int, ...]
    warnings: list[str] = field(default_factory=list)

    def by_degree(self) -> dict[int, HomologyEntry]:
        return {e.degree: e for e in self.entries}

    def betti_vector(self, degrees: Iterable[int]) -> tuple[int, ...]:
        table = self.by_degree()
        return tuple(table[n].betti if n in table else None for n in degrees)


def _reliable_degrees(cplx: ChainComplexWindow) -> list[int]:
    """Degrees where both adjacent boundary matrices are trustworthy."""

    def known(k: int) -> bool:
        if k < cplx.lo:
            return cplx.nonnegative and cplx.lo == 0
        if k > cplx.hi:
            return cplx.vanishes_above
        return k in cplx.certified

    return [n for n in range(cplx.lo, cplx.hi + 1)
            if known(n - 1) and known(n) and known(n + 1)]


def homology_window(cplx: ChainComplexWindow, ring: RingSpec = Z) -> HomologyResult:
    """Betti numbers (and torsion over Z) for the reliable part of a window.

    A degree n is reliable when the boundary matrices in and out of it
    are complete, i.e. degrees n-1, n, n+1 are certified (degree -1
    counts as certified for non-negatively graded complexes).  Other
    degrees are reported in the warnings instead of being guessed.
    """
    reliable = _reliable_degrees(cplx)
    warnings = [f"unreliable degree {n}" for n in range(cplx.lo, cplx.hi + 1)
                if n not in reliable]
    entries = []
    for n in reliable:
        d_in = cplx.boundary_or_zero(n + 1)
        d_out = cplx.boundary_or_zero(n)
        if ring.is_field:
            r_in = rank(d_in.over(ring), ring)
            r_out = rank(d_out.over(ring), ring)
            betti = cplx.dim(n) - r_out - r_in
            torsion: tuple[int, ...] = ()
        else:
            snf_in = smith_normal_form(d_in)
            r_out = rank(d_out)
            betti = cplx.dim(n) - r_out - snf_in.rank
            torsion = tuple(sorted(d for d in snf_in.factors if d > 1))
        entries.append(HomologyEntry(n, betti, torsion))
    return HomologyResult(ring, entries, tuple(reliable), warnings)


# ---------------------------------------------------------------------------
# field homology with explicit representatives (used for map-level checks)


def field_kernel_basis(M: SparseMatrix, ring: RingSpec) -> list[dict[int, object]]:
    """Basis of ker(M) over a field, as sparse coordinate vectors."""
    if ring.kind == "integers":
        ring = Q
    p = ring.modulus
    one = ring.coerce(1)
    rowmap: dict[int, dict[int, object]] = {}
    for (r, c), v in M.entries.items():
        w = ring.coerce(v)
        if w:
            rowmap.setdefault(r, {})[c] = w

    def inv(x):
        return Fraction(1) / x if p is None else pow(x, p - 2, p)

    # reduced row echelon form with pivot columns normalized to 1
    pivots: dict[int, dict[int, object]] = {}
    for row in (dict(r) for r in rowmap.values() if r):
        while row:
            j = min(row)
            if j not in pivots:
                scale = inv(row[j])
                row = {c: (v * scale % p if p is not None else v * scale)
                       for c, v in row.items()}
                row = {c: v for c, v in row.items() if v}
                # clear column j from previously stored pivot rows
                for pj, prow in pivots.items():
                    if j in prow:
                        coef = prow[j]
                        for c, v in row.items():
                            w = prow.get(c, 0) - coef * v
                            if p is not None:
                                w %= p
                            if w:
                                prow[c] = w
                            else:
                                prow.pop(c, None)
                pivots[j] = row
                break
            prow = pivots[j]
            coef = row[j]
            for c, v in prow.items():
                w = row.get(c, 0) - coef * v
                if p is not None:
                    w %= p
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
    basis = []
    for j in range(M.cols):
        if j in pivots:
            continue
        vec = {j: one}
        for pj, prow in pivots.items():
            if j in prow:
                val = -prow[j]
                if p is not None:
                    val %= p
                if val:
                    vec[pj] = val
        basis.append(vec)
    return basis


class QuotientSolver:
    """Express vectors in a quotient V/W over a field, given spanning sets.

    Build from a list of basis vectors of a subspace `kernel` and a list
    spanning `image`; exposes coordinates of any kernel vector in a fixed
    homology basis.
    """

    def __init__(self, kernel: list[dict[int, object]], image: list[dict[int, object]],
                 ring: RingSpec):
        if ring.kind == "integers":
            ring = Q
        self.ring = ring
        self.p = ring.modulus
        self._rows: dict[int, tuple[dict[int, object], dict[int, object]]] = {}
        self.reps: list[dict[int, object]] = []
        # first sweep in the image, then kernel vectors: leftover kernel
        # vectors become homology representatives with tracked coordinates.
        for vec in image:
            residual, _ = self._reduce({k: self.ring.coerce(v) for k, v in vec.items()})
            if residual:
                self._rows[min(residual)] = (residual, {})
        for vec in kernel:
            work = {k: self.ring.coerce(v) for k, v in vec.items()}
            residual, _ = self._reduce(work)
            if residual:
                tag = {len(self.reps): self.ring.coerce(1)}
                self._rows[min(residual)] = (residual, tag)
                self.reps.append(dict(vec))

    def _reduce(self, vec):
        coords: dict[int, object] = {}
        while vec:
            j = min(vec)
            if j not in self._rows:
                return vec, coords
            prow, ptag = self._rows[j]
            inv = Fraction(1) / prow[j] if self.p is None else pow(prow[j], self.p - 2, self.p)
            coef = vec[j] * inv
            for c, v in prow.items():
                w = vec.get(c, 0) - coef * v
                if self.p is not None:
                    w %= self.p
                if w:
                    vec[c] = w
                else:
                    vec.pop(c, None)
            for c, v in ptag.items():
                w = coords.get(c, 0) + coef * v
                if self.p is not None:
                    w %= self.p
                if w:
                    coords[c] = w
                else:
                    coords.pop(c, None)
        return vec, coords

    def coordinates(self, vec: dict[int, object]) -> dict[int, object]:
        """Homology-class coordinates of a cycle; raises if not in ker+im."""
        vec = {k: self.ring.coerce(v) for k, v in vec.items() if self.ring.coerce(v)}
        residual, coords = self._reduce(dict(vec))
        if residual:
            raise ValueError("vector not in the tracked subspace")
        return coords

    @property
    def dimension(self) -> int:
        return len(self.reps)
