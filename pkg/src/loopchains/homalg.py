"""Cobar construction, two-sided bar and cotensor resolutions, Hochschild
and coHochschild complexes, and the chain contraction between them.

All complexes are built from one Koszul-sign kernel:

* a degree-d map acting at a slot of a word picks up ``(-1)**(d * p)``
  where p is the total (shifted) degree of the slots to its left;
* transporting an odd map through a shift contributes one extra sign,
  so the induced boundary on a shifted letter is ``s a -> -s (d a)``;
* a letter of degree d moved past a block of degree e contributes
  ``(-1)**(d * e)``;
* splitting a shifted letter via the coproduct contributes
  ``(-1)**deg(front)`` per split.

Monomial letters carry a downward shift (a letter of coalgebra degree k
has weight k-1), bar letters an upward one (a monomial of degree k has
weight k+1).  The test suite asserts every structural identity (squared
differentials, Leibniz, contraction and mixed-operator identities)
as exact integer matrix identities; those identities are the ground
truth for the signs below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .coalgebra import CatCoalgebra, CoalgebraMorphism
from .exactalg import ChainComplexWindow, SparseMatrix


def sgn(e: int) -> int:
    return -1 if e & 1 else 1


class Mono(NamedTuple):
    """A composable word of positive-degree coalgebra elements, or an
    identity (empty word pinned to an object)."""

    letters: tuple[str, ...]
    src: str
    tgt: str

    @property
    def is_identity(self) -> bool:
        return not self.letters


class HWord(NamedTuple):
    """Hochschild generator [a_1 | ... | a_p] a_{p+1}; bars are non-identity
    monomials, the module slot may be an identity."""

    bars: tuple[Mono, ...]
    mod: Mono


class CWord(NamedTuple):
    """coHochschild generator c_0 { c_1 | ... | c_p }."""

    head: str
    letters: tuple[str, ...]


class BWord(NamedTuple):
    """Two-sided bar generator m [a_1 | ... | a_p] n."""

    left: Mono
    bars: tuple[Mono, ...]
    right: Mono


class QGen(NamedTuple):
    """Cotensor resolution generator a . c . b with c any basis element."""

    left: Mono
    mid: str
    right: Mono


class TruncationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# generator-level cobar operations


class CobarAlgebra:
    """Generator-level structure of the cobar dg category of a coalgebra."""

    def __init__(self, C: CatCoalgebra):
        self.C = C
        self.letter_index = {c: i for i, c in enumerate(
            c for d, cs in sorted(C.basis.items()) for c in cs)}

    def identity(self, x: str) -> Mono:
        return Mono((), x, x)

    def mono(self, letters: Iterable[str], obj: str | None = None) -> Mono:
        letters = tuple(letters)
        if not letters:
            if obj is None:
                raise ValueError("identity monomial needs an object")
            return Mono((), obj, obj)
        C = self.C
        for a, b in zip(letters, letters[1:]):
            if C.target[a] != C.source[b]:
                raise ValueError(f"letters {a!r},{b!r} do not compose")
        return Mono(letters, C.source[letters[0]], C.target[letters[-1]])

    def degree(self, m: Mono) -> int:
        deg = self.C.degree
        return sum(deg[c] - 1 for c in m.letters)

    def shifted_degree(self, m: Mono) -> int:
        return self.degree(m) + 1

    def key(self, m: Mono):
        objs = self.C.basis[0]
        return (self.degree(m), len(m.letters),
                tuple(self.letter_index[c] for c in m.letters),
                objs.index(m.src) if m.is_identity else 0)

    def compose(self, a: Mono, b: Mono) -> Mono:
        if a.tgt != b.src:
            raise ValueError(f"monomials do not compose: {a} then {b}")
        if a.is_identity:
            return b
        if b.is_identity:
            return a
        return Mono(a.letters + b.letters, a.src, b.tgt)

    def diff(self, m: Mono) -> dict[Mono, int]:
        """Cobar differential: boundary, coproduct-split and curvature terms."""
        C = self.C
        deg = C.degree
        out: dict[Mono, int] = {}
        prefix = 0
        for i, c in enumerate(m.letters):
            base = sgn(prefix)
            for lab, k in C.d(c).items():
                new = m.letters[:i] + (lab,) + m.letters[i + 1:]
                _acc(out, Mono(new, m.src, m.tgt), -base * k)
            for (a, b), k in C.reduced_delta(c).items():
                new = m.letters[:i] + (a, b) + m.letters[i + 1:]
                _acc(out, Mono(new, m.src, m.tgt), base * sgn(deg[a]) * k)
            hval = C.h(c)
            if hval and C.source[c] == C.target[c]:
                new = m.letters[:i] + m.letters[i + 1:]
                tgt = Mono(new, m.src, m.tgt) if new else self.identity(m.src)
                _acc(out, tgt, -base * hval)
            prefix += deg[c] - 1
        return out

    def iterated_reduced_splits(self, c: str) -> list[tuple[tuple[str, ...], int]]:
        """All splittings of c into k >= 1 positive-degree factors."""
        out = [((c,), 1)]
        frontier = [((c,), 1)]
        while frontier:
            new = []
            for factors, k in frontier:
                for (a, b), k2 in self.C.reduced_delta(factors[-1]).items():
                    new.append((factors[:-1] + (a, b), k * k2))
            out.extend(new)
            frontier = new
        return out


def _acc(acc: dict, key, coeff: int) -> None:
    if not coeff:
        return
    s = acc.get(key, 0) + coeff
    if s:
        acc[key] = s
    else:
        del acc[key]


# ---------------------------------------------------------------------------
# word caps and finiteness certificates


def degree_one_longest_path(C: CatCoalgebra) -> int | None:
    """Longest path in the digraph of degree-1 basis elements, or None
    if that digraph has a directed cycle (then no finiteness certificate
    exists and word caps are mandatory)."""
    edges: dict[str, set[str]] = {}
    for c in C.basis.get(1, []):
        edges.setdefault(C.source[c], set()).add(C.target[c])
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(v: str) -> bool:
        state[v] = 1
        for w in edges.get(v, ()):
            s = state.get(w, 0)
            if s == 1:
                return False
            if s == 0 and not visit(w):
                return False
        state[v] = 2
        order.append(v)
        return True

    for v in C.basis[0]:
        if state.get(v, 0) == 0 and not visit(v):
            return None
    best: dict[str, int] = {}
    for v in order:  # reverse topological
        best[v] = max((best[w] + 1 for w in edges.get(v, ())), default=0)
    return max(best.values(), default=0)


@dataclass
class CapPolicy:
    """Resolved word-cap: None means provably no truncation occurs."""

    cap: int | None
    certified: bool
    note: str = ""


def resolve_cap(C: CatCoalgebra, hi: int, word_cap) -> CapPolicy:
    """Turn a requested cap ('auto' or an int) into a concrete policy.

    With an acyclic degree-1 digraph every monomial of degree <= hi has
    length at most hi + (hi+1)*L, L the longest degree-1 path, so 'auto'
    is certified.  Otherwise 'auto' falls back to a heuristic cap and
    the window is flagged as truncated.
    """
    L = degree_one_longest_path(C)
    if word_cap in (None, "auto"):
        if L is not None:
            return CapPolicy(hi + (hi + 1) * L, True)
        return CapPolicy(hi + 4, False,
                         "word-length truncated (degree-1 cycles); pass an explicit cap to widen")
    cap = int(word_cap)
    if L is not None and cap >= hi + (hi + 1) * L:
        return CapPolicy(cap, True)
    return CapPolicy(cap, False, "explicit word cap may truncate")


# ---------------------------------------------------------------------------
# windows


@dataclass
class GradedWindow:
    """Shared shape of all windowed complexes: an ordered basis per degree
    plus cached operator matrices."""

    alg: CobarAlgebra
    hi: int
    basis: dict[int, list] = field(default_factory=dict)
    certified: bool = True
    cap: int | None = None
    warnings: tuple = ()

    def __post_init__(self):
        self.index: dict = {}
        self._matrices: dict = {}

    def _freeze(self):
        for n, items in self.basis.items():
            for i, it in enumerate(items):
                self.index[it] = (n, i)

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def degree_of(self, item) -> int:
        return self.index[item][0]

    def matrix(self, name: str, op: Callable, n: int, shift: int) -> SparseMatrix:
        """Matrix of a generator-level operator from degree n to n+shift."""
        key = (name, n)
        if key in self._matrices:
            return self._matrices[key]
        rows = self.dim(n + shift)
        cols = []
        for item in self.basis.get(n, []):
            col: dict[int, int] = {}
            for out, k in op(item).items():
                loc = self.index.get(out)
                if loc is None:
                    if self.certified:
                        raise TruncationError(
                            f"operator {name} leaves the window at degree {n}: {out}")
                    continue
                deg, i = loc
                if deg != n + shift:
                    raise AssertionError(
                        f"{name} changed degree by {deg - n}, expected {shift}")
                _acc(col, i, k)
            cols.append(col)
        M = SparseMatrix.from_columns(rows, cols) if cols else SparseMatrix.zero(rows, 0)
        self._matrices[key] = M
        return M

    def chain_complex(self, name: str, op: Callable) -> ChainComplexWindow:
        boundary = {n: self.matrix(name, op, n, -1) for n in range(1, self.hi + 1)}
        certified = frozenset(range(self.hi + 1)) if self.certified else frozenset()
        return ChainComplexWindow(
            lo=0, hi=self.hi,
            basis={n: [self.label(it) for it in self.basis.get(n, [])]
                   for n in range(self.hi + 1)},
            boundary=boundary, certified=certified,
            warnings=self.warnings)

    def label(self, item) -> str:
        raise NotImplementedError

    def debug_dict(self, name: str, ops: dict[str, tuple[Callable, int]]) -> dict:
        """Stable JSON-ready dump of the basis and requested operators."""
        out = {
            "window": [0, self.hi],
            "certified": self.certified,
            "basis": {str(n): [self.label(it) for it in self.basis.get(n, [])]
                      for n in range(self.hi + 1)},
            "operators": {},
        }
        for opname, (op, shift) in ops.items():
            mats = {}
            for n in range(self.hi + 1):
                if not (0 <= n + shift <= self.hi):
                    continue
                M = self.matrix(opname, op, n, shift)
                mats[str(n)] = sorted([r, c, v] for (r, c), v in M.entries.items())
            out["operators"][opname] = mats
        return out


def mono_label(m: Mono) -> str:
    if m.is_identity:
        return f"id({m.src})"
    return "{" + "|".join(m.letters) + "}"


class CobarWindow(GradedWindow):
    """Morphism generators of the cobar dg category up to a degree bound."""

    def __init__(self, C: CatCoalgebra, hi: int, word_cap="auto"):
        alg = CobarAlgebra(C)
        policy = resolve_cap(C, hi, word_cap)
        warnings = (policy.note,) if policy.note else ()
        super().__init__(alg, hi, certified=policy.certified,
                         cap=policy.cap, warnings=warnings)
        self.C = C
        monos = enumerate_monomials(alg, hi, policy.cap)
        for m in monos:
            self.basis.setdefault(alg.degree(m), []).append(m)
        for n in self.basis:
            self.basis[n].sort(key=alg.key)
        self._freeze()

    def label(self, item) -> str:
        return mono_label(item)

    def diff(self, m: Mono) -> dict[Mono, int]:
        return self.alg.diff(m)

    def d_matrix(self, n: int) -> SparseMatrix:
        return self.matrix("D", self.diff, n, -1)

    def chain(self) -> ChainComplexWindow:
        return self.chain_complex("D", self.diff)

    def hom_complex(self, x: str, y: str) -> ChainComplexWindow:
        """The morphism complex from object x to object y inside the window."""
        basis = {n: [m for m in self.basis.get(n, []) if m.src == x and m.tgt == y]
                 for n in range(self.hi + 1)}
        index = {m: (n, i) for n, ms in basis.items() for i, m in enumerate(ms)}
        boundary = {}
        for n in range(1, self.hi + 1):
            cols = []
            for m in basis.get(n, []):
                col: dict[int, int] = {}
                for out, k in self.diff(m).items():
                    if out in index:
                        _acc(col, index[out][1], k)
                cols.append(col)
            boundary[n] = SparseMatrix.from_columns(len(basis.get(n - 1, [])), cols) \
                if cols else SparseMatrix.zero(len(basis.get(n - 1, [])), 0)
        certified = frozenset(range(self.hi + 1)) if self.certified else frozenset()
        return ChainComplexWindow(
            lo=0, hi=self.hi,
            basis={n: [mono_label(m) for m in basis.get(n, [])] for n in basis},
            boundary=boundary, certified=certified, warnings=self.warnings)


def enumerate_monomials(alg: CobarAlgebra, hi: int, cap: int | None) -> list[Mono]:
    C = alg.C
    by_src: dict[str, list[str]] = {}
    for c in C.positive_basis():
        by_src.setdefault(C.source[c], []).append(c)
    out: list[Mono] = [alg.identity(x) for x in C.basis[0]]
    stack: list[tuple[tuple[str, ...], int]] = [((), 0)]
    # depth-first extension; degree and (for capped runs) length bound it
    def extend(word: tuple[str, ...], deg: int):
        at = C.target[word[-1]] if word else None
        candidates = by_src.get(at) if word else C.positive_basis()
        for c in candidates or []:
            d2 = deg + C.degree[c] - 1
            if d2 > hi:
                continue
            w2 = word + (c,)
            if cap is not None and len(w2) > cap:
                continue
            out.append(alg.mono(w2))
            extend(w2, d2)

    extend((), 0)
    return out


# ---------------------------------------------------------------------------
# Hochschild complex of the cobar category


def hword_degree(alg: CobarAlgebra, w: HWord) -> int:
    return sum(alg.shifted_degree(a) for a in w.bars) + alg.degree(w.mod)


class HochschildWindow(GradedWindow):
    """Cyclic words of cobar monomials with Connes' rotation operator."""

    def __init__(self, A: CobarWindow, hi: int):
        if A.hi < hi:
            raise ValueError("the cobar window must cover the requested degrees")
        super().__init__(A.alg, hi, certified=A.certified, cap=A.cap,
                         warnings=A.warnings)
        self.A = A
        self.C = A.C
        for w in enumerate_hwords(A, hi):
            self.basis.setdefault(hword_degree(A.alg, w), []).append(w)
        key = self._word_key
        for n in self.basis:
            self.basis[n].sort(key=key)
        self._freeze()

    def _word_key(self, w: HWord):
        k = self.alg.key
        return (len(w.bars), tuple(k(a) for a in w.bars), k(w.mod))

    def label(self, w: HWord) -> str:
        bars = "|".join(mono_label(a) for a in w.bars)
        return f"[{bars}]{mono_label(w.mod)}"

    # differential ----------------------------------------------------------

    def delta(self, w: HWord) -> dict[HWord, int]:
        alg = self.alg
        out: dict[HWord, int] = {}
        p = len(w.bars)
        shifted = [alg.shifted_degree(a) for a in w.bars]
        F = [0]
        for s in shifted:
            F.append(F[-1] + s)
        T = F[p] + alg.degree(w.mod)
        # internal differentials
        for i in range(p):
            base = -sgn(F[i])
            for m2, k in alg.diff(w.bars[i]).items():
                if m2.is_identity:
                    continue  # normalized: identity bar letters vanish
                bars = w.bars[:i] + (m2,) + w.bars[i + 1:]
                _acc(out, HWord(bars, w.mod), base * k)
        for m2, k in alg.diff(w.mod).items():
            _acc(out, HWord(w.bars, m2), sgn(F[p]) * k)
        # compositions at the interior gaps
        for i in range(p - 1):
            merged = alg.compose(w.bars[i], w.bars[i + 1])
            bars = w.bars[:i] + (merged,) + w.bars[i + 2:]
            _acc(out, HWord(bars, w.mod), sgn(F[i + 1]))
        if p:
            # last bar into the module slot
            merged = alg.compose(w.bars[-1], w.mod)
            _acc(out, HWord(w.bars[:-1], merged), sgn(F[p]))
            # cyclic gap: first bar wraps around behind the module
            merged = alg.compose(w.mod, w.bars[0])
            wrap = alg.degree(w.bars[0]) * (T - shifted[0])
            _acc(out, HWord(w.bars[1:], merged), sgn(wrap))
        return out

    def connes_b(self, w: HWord) -> dict[HWord, int]:
        """Rotation operator: module rotates into the bars, identity module
        appended; words whose module is an identity are annihilated."""
        alg = self.alg
        out: dict[HWord, int] = {}
        if w.mod.is_identity:
            return out
        p = len(w.bars)
        shifted = [alg.shifted_degree(a) for a in w.bars]
        F = [0]
        for s in shifted:
            F.append(F[-1] + s)
        T = F[p] + alg.degree(w.mod)
        for j in range(p + 1):
            bars = w.bars[j:] + (w.mod,) + w.bars[:j]
            word = HWord(bars, alg.identity(bars[0].src))
            _acc(out, word, sgn(F[j] * (T - F[j]) + F[p] - F[j]))
        return out


def enumerate_hwords(A: CobarWindow, hi: int) -> list[HWord]:
    alg = A.alg
    monos_by_deg: dict[int, list[Mono]] = A.basis
    monos: list[Mono] = [m for n in sorted(monos_by_deg) for m in monos_by_deg[n]]
    by_src: dict[str, list[Mono]] = {}
    nonid = []
    for m in monos:
        if not m.is_identity:
            by_src.setdefault(m.src, []).append(m)
            nonid.append(m)
    out: list[HWord] = []
    for m in monos:
        if m.src == m.tgt and alg.degree(m) <= hi:
            out.append(HWord((), m))

    def extend(bars: tuple[Mono, ...], used: int):
        at = bars[-1].tgt
        # close with a module from at back to the start
        for m in monos:
            if m.src == at and m.tgt == bars[0].src and used + alg.degree(m) <= hi:
                out.append(HWord(bars, m))
        for m in by_src.get(at, []):
            u2 = used + alg.shifted_degree(m)
            if u2 <= hi:
                extend(bars + (m,), u2)

    for m in nonid:
        u = alg.shifted_degree(m)
        if u <= hi:
            extend((m,), u)
    return out


# ---------------------------------------------------------------------------
# coHochschild complex of the coalgebra


class CoHochschildWindow(GradedWindow):
    """Cyclic coalgebra words c0 { c1 | ... | cp } with the rotation P."""

    def __init__(self, C: CatCoalgebra, hi: int, word_cap="auto"):
        alg = CobarAlgebra(C)
        policy = resolve_cap(C, hi, word_cap)
        warnings = (policy.note,) if policy.note else ()
        super().__init__(alg, hi, certified=policy.certified, cap=policy.cap,
                         warnings=warnings)
        self.C = C
        for w in enumerate_cwords(C, hi, policy.cap):
            self.basis.setdefault(self.cword_degree(w), []).append(w)
        for n in self.basis:
            self.basis[n].sort(key=self._word_key)
        self._freeze()

    def cword_degree(self, w: CWord) -> int:
        deg = self.C.degree
        return deg[w.head] + sum(deg[c] - 1 for c in w.letters)

    def _word_key(self, w: CWord):
        li = self.alg.letter_index
        return (len(w.letters), li[w.head], tuple(li[c] for c in w.letters))

    def label(self, w: CWord) -> str:
        return f"{w.head}{{{'|'.join(w.letters)}}}"

    def d(self, w: CWord) -> dict[CWord, int]:
        C = self.C
        deg = C.degree
        out: dict[CWord, int] = {}
        p = len(w.letters)
        g = [deg[w.head]]
        for c in w.letters:
            g.append(g[-1] + deg[c] - 1)
        total = g[p]
        # boundary of the head
        for lab, k in C.d(w.head).items():
            _acc(out, CWord(lab, w.letters), k)
        # boundary, curvature and splits of the letters
        for i, c in enumerate(w.letters):
            base = sgn(g[i])
            for lab, k in C.d(c).items():
                letters = w.letters[:i] + (lab,) + w.letters[i + 1:]
                _acc(out, CWord(w.head, letters), -base * k)
            hval = C.h(c)
            if hval and C.source[c] == C.target[c]:
                letters = w.letters[:i] + w.letters[i + 1:]
                _acc(out, CWord(w.head, letters), -base * hval)
            for (a, b), k in C.reduced_delta(c).items():
                letters = w.letters[:i] + (a, b) + w.letters[i + 1:]
                _acc(out, CWord(w.head, letters), base * sgn(deg[a]) * k)
        # head splits: front factor stays, back factor becomes first letter
        for (a, b), k in C.delta(w.head).items():
            if deg[b] >= 1:
                _acc(out, CWord(a, (b,) + w.letters), sgn(deg[a]) * k)
            if deg[a] >= 1:
                # front factor wraps around to the last letter slot
                wrap = (deg[a] - 1) * (total - deg[a])
                _acc(out, CWord(b, w.letters + (a,)), -sgn(wrap) * k)
        return out

    def rot_p(self, w: CWord) -> dict[CWord, int]:
        """Rotation operator: nonzero only on set-like heads."""
        C = self.C
        deg = C.degree
        out: dict[CWord, int] = {}
        if deg[w.head] != 0:
            return out
        p = len(w.letters)
        G = [0]
        for c in w.letters:
            G.append(G[-1] + deg[c] - 1)
        for i in range(p):
            letters = w.letters[i + 1:] + w.letters[:i]
            _acc(out, CWord(w.letters[i], letters), sgn(G[i] * (G[p] - G[i])))
        return out


def enumerate_cwords(C: CatCoalgebra, hi: int, cap: int | None) -> list[CWord]:
    deg = C.degree
    by_src: dict[str, list[str]] = {}
    for c in C.positive_basis():
        by_src.setdefault(C.source[c], []).append(c)
    out: list[CWord] = []
    for head in (c for d, cs in sorted(C.basis.items()) for c in cs):
        if deg[head] > hi:
            continue

        def extend(letters: tuple[str, ...], used: int):
            at = C.target[letters[-1]] if letters else C.target[head]
            if at == C.source[head]:
                out.append(CWord(head, letters))
            if cap is not None and len(letters) >= cap:
                return
            for c in by_src.get(at, []):
                u2 = used + deg[c] - 1
                if u2 <= hi:
                    extend(letters + (c,), u2)

        extend((), deg[head])
    return out


# ---------------------------------------------------------------------------
# two-sided bar resolution and the cotensor resolution


def bword_degree(alg: CobarAlgebra, w: BWord) -> int:
    return (alg.degree(w.left) + sum(alg.shifted_degree(a) for a in w.bars)
            + alg.degree(w.right))


class BarWindow(GradedWindow):
    """m [a_1 | ... | a_p] n with module monomials on both sides."""

    def __init__(self, A: CobarWindow, hi: int, component: tuple[str, str] | None = None):
        super().__init__(A.alg, hi, certified=A.certified, cap=A.cap,
                         warnings=A.warnings)
        self.A = A
        self.C = A.C
        self.component = component
        for w in enumerate_bwords(A, hi, component):
            self.basis.setdefault(bword_degree(A.alg, w), []).append(w)
        for n in self.basis:
            self.basis[n].sort(key=self._word_key)
        self._freeze()

    def _word_key(self, w: BWord):
        k = self.alg.key
        return (len(w.bars), k(w.left), tuple(k(a) for a in w.bars), k(w.right))

    def label(self, w: BWord) -> str:
        bars = "|".join(mono_label(a) for a in w.bars)
        return f"{mono_label(w.left)}[{bars}]{mono_label(w.right)}"

    def delta(self, w: BWord) -> dict[BWord, int]:
        alg = self.alg
        out: dict[BWord, int] = {}
        p = len(w.bars)
        E = [alg.degree(w.left)]
        for a in w.bars:
            E.append(E[-1] + alg.shifted_degree(a))
        for m2, k in alg.diff(w.left).items():
            _acc(out, BWord(m2, w.bars, w.right), k)
        for i in range(p):
            base = -sgn(E[i])
            for m2, k in alg.diff(w.bars[i]).items():
                if m2.is_identity:
                    continue
                bars = w.bars[:i] + (m2,) + w.bars[i + 1:]
                _acc(out, BWord(w.left, bars, w.right), base * k)
        for m2, k in alg.diff(w.right).items():
            _acc(out, BWord(w.left, w.bars, m2), sgn(E[p]) * k)
        if p:
            merged = alg.compose(w.left, w.bars[0])
            _acc(out, BWord(merged, w.bars[1:], w.right), sgn(E[0]))
            merged = alg.compose(w.bars[-1], w.right)
            _acc(out, BWord(w.left, w.bars[:-1], merged), sgn(E[p]))
        for i in range(p - 1):
            merged = alg.compose(w.bars[i], w.bars[i + 1])
            bars = w.bars[:i] + (merged,) + w.bars[i + 2:]
            _acc(out, BWord(w.left, bars, w.right), sgn(E[i + 1]))
        return out


def enumerate_bwords(A: CobarWindow, hi: int,
                     component: tuple[str, str] | None) -> list[BWord]:
    alg = A.alg
    monos = [m for n in sorted(A.basis) for m in A.basis[n]]
    lefts = [m for m in monos if component is None or m.src == component[0]]
    rights_by_src: dict[str, list[Mono]] = {}
    for m in monos:
        if component is None or m.tgt == component[1]:
            rights_by_src.setdefault(m.src, []).append(m)
    bars_by_src: dict[str, list[Mono]] = {}
    for m in monos:
        if not m.is_identity:
            bars_by_src.setdefault(m.src, []).append(m)
    out: list[BWord] = []

    def close(left: Mono, bars: tuple[Mono, ...], used: int, at: str):
        for right in rights_by_src.get(at, []):
            if used + alg.degree(right) <= hi:
                out.append(BWord(left, bars, right))
        for m in bars_by_src.get(at, []):
            u2 = used + alg.shifted_degree(m)
            if u2 <= hi:
                close(left, bars + (m,), u2, m.tgt)

    for left in lefts:
        u = alg.degree(left)
        if u <= hi:
            close(left, (), u, left.tgt)
    return out


def qgen_degree(alg: CobarAlgebra, g: QGen) -> int:
    return alg.degree(g.left) + alg.C.degree[g.mid] + alg.degree(g.right)


class QWindow(GradedWindow):
    """The small cotensor resolution a . c . b."""

    def __init__(self, A: CobarWindow, hi: int, component: tuple[str, str] | None = None):
        super().__init__(A.alg, hi, certified=A.certified, cap=A.cap,
                         warnings=A.warnings)
        self.A = A
        self.C = A.C
        self.component = component
        for g in enumerate_qgens(A, hi, component):
            self.basis.setdefault(qgen_degree(A.alg, g), []).append(g)
        for n in self.basis:
            self.basis[n].sort(key=self._key)
        self._freeze()

    def _key(self, g: QGen):
        k = self.alg.key
        return (k(g.left), self.alg.letter_index[g.mid], k(g.right))

    def label(self, g: QGen) -> str:
        return f"{mono_label(g.left)}.{g.mid}.{mono_label(g.right)}"

    def d(self, g: QGen) -> dict[QGen, int]:
        alg = self.alg
        C = self.C
        deg = C.degree
        out: dict[QGen, int] = {}
        kl = alg.degree(g.left)
        for m2, k in alg.diff(g.left).items():
            _acc(out, QGen(m2, g.mid, g.right), k)
        base = sgn(kl)
        for lab, k in C.d(g.mid).items():
            _acc(out, QGen(g.left, lab, g.right), base * k)
        base_r = sgn(kl + deg[g.mid])
        for m2, k in alg.diff(g.right).items():
            _acc(out, QGen(g.left, g.mid, m2), base_r * k)
        # cotensor action terms: one coproduct factor is absorbed as a
        # new cobar letter on the matching side
        for (a, b), k in C.delta(g.mid).items():
            if deg[a] >= 1:
                left = alg.compose(g.left, alg.mono((a,)))
                _acc(out, QGen(left, b, g.right), sgn(kl) * k)
            if deg[b] >= 1:
                right = alg.compose(alg.mono((b,)), g.right)
                _acc(out, QGen(g.left, a, right), sgn(kl + deg[a]) * k)
        return out


def enumerate_qgens(A: CobarWindow, hi: int,
                    component: tuple[str, str] | None) -> list[QGen]:
    alg = A.alg
    C = A.C
    monos = [m for n in sorted(A.basis) for m in A.basis[n]]
    lefts = [m for m in monos if component is None or m.src == component[0]]
    rights_by_src: dict[str, list[Mono]] = {}
    for m in monos:
        if component is None or m.tgt == component[1]:
            rights_by_src.setdefault(m.src, []).append(m)
    mids_by_src: dict[str, list[str]] = {}
    for c in C.degree:
        mids_by_src.setdefault(C.source[c], []).append(c)
    out = []
    for left in lefts:
        dl = alg.degree(left)
        if dl > hi:
            continue
        for mid in mids_by_src.get(left.tgt, []):
            d2 = dl + C.degree[mid]
            if d2 > hi:
                continue
            for right in rights_by_src.get(C.target[mid], []):
                if d2 + alg.degree(right) <= hi:
                    out.append(QGen(left, mid, right))
    return out
