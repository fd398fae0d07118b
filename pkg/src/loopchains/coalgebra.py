"""Basis-presented categorical coalgebras of simplicial chains.

A categorical coalgebra is a counital graded coalgebra whose degree-0
part is spanned by set-like elements, equipped with a coderivation whose
failure to square to zero is controlled by a curvature functional.  The
construction from a simplicial set modifies the simplicial boundary so
that degree-1 elements become cycles; the curvature records what that
modification costs on degree 2.

Sign convention used throughout the package: a tensor-factor map picks
up the Koszul sign of whatever it jumps over, with
(phi ox psi)(a ox b) = (-1)^{|psi| |a|} phi(a) ox psi(b), and the
edge-counting functional e has degree -1.  All structure identities are
re-verified at construction time; a failure indicates a sign bug, not
bad input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import RingSpec, Z
from .simplicial import SimplicialSet, aw_coproduct, simplex_vertices, standard_simplex

Vec = dict[str, int]
TensorVec = dict[tuple[str, str], int]


class CoalgebraError(ValueError):
    pass


def _add_into(acc: dict, key, coeff: int) -> None:
    if not coeff:
        return
    s = acc.get(key, 0) + coeff
    if s:
        acc[key] = s
    else:
        del acc[key]


@dataclass
class CatCoalgebra:
    """A categorical coalgebra with a distinguished homogeneous basis.

    Structure maps are stored over Z (all our simplicial constructions
    have integer structure constants); `ring` records the coefficient
    ring requested downstream.
    """

    name: str
    ring: RingSpec
    basis: dict[int, list[str]]
    coproduct: dict[str, list[tuple[tuple[str, str], int]]]
    boundary: dict[str, list[tuple[str, int]]]
    curvature: dict[str, int]
    source: dict[str, str]
    target: dict[str, str]
    degree: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.degree:
            self.degree = {c: d for d, cs in self.basis.items() for c in cs}
        if not self.basis.get(0):
            raise CoalgebraError("a categorical coalgebra needs set-like elements")

    @property
    def setlike(self) -> list[str]:
        return list(self.basis.get(0, []))

    @property
    def max_degree(self) -> int:
        return max(self.basis)

    def counit(self, c: str) -> int:
        return 1 if self.degree[c] == 0 else 0

    def delta(self, c: str) -> TensorVec:
        out: TensorVec = {}
        for pair, coeff in self.coproduct.get(c, []):
            _add_into(out, pair, coeff)
        return out

    def d(self, c: str) -> Vec:
        out: Vec = {}
        for lab, coeff in self.boundary.get(c, []):
            _add_into(out, lab, coeff)
        return out

    def d_vec(self, v: Vec) -> Vec:
        out: Vec = {}
        for c, coeff in v.items():
            for lab, k in self.boundary.get(c, []):
                _add_into(out, lab, coeff * k)
        return out

    def h(self, c: str) -> int:
        return self.curvature.get(c, 0)

    def reduced_delta(self, c: str) -> TensorVec:
        """Coproduct terms with both factors of positive degree."""
        return {(a, b): k for (a, b), k in self.delta(c).items()
                if self.degree[a] > 0 and self.degree[b] > 0}

    def positive_basis(self) -> list[str]:
        return [c for d, cs in sorted(self.basis.items()) if d > 0 for c in cs]

    # -- axioms -------------------------------------------------------------

    def validate(self) -> None:
        """Assert every categorical-coalgebra axiom as an exact identity."""
        deg = self.degree
        for x in self.setlike:
            if self.delta(x) != {(x, x): 1}:
                raise CoalgebraError(f"{x!r} is not set-like")
        for c in deg:
            delta = self.delta(c)
            for (a, b), k in delta.items():
                if deg[a] + deg[b] != deg[c]:
                    raise CoalgebraError(f"coproduct of {c!r} is not graded")
            # counit laws, which also pin source and target
            left = {b: k for (a, b), k in delta.items() if deg[a] == 0}
            right = {a: k for (a, b), k in delta.items() if deg[b] == 0}
            if left != {c: 1}:
                raise CoalgebraError(f"(eps ox id) Delta fails on {c!r}")
            if right != {c: 1}:
                raise CoalgebraError(f"(id ox eps) Delta fails on {c!r}")
            src = [a for (a, b), k in delta.items() if deg[a] == 0]
            tgt = [b for (a, b), k in delta.items() if deg[b] == 0]
            if src != [self.source[c]] or tgt != [self.target[c]]:
                raise CoalgebraError(f"source/target of {c!r} disagree with Delta")
        # coassociativity
        for c in deg:
            lhs: dict = {}
            rhs: dict = {}
            for (a, b), k in self.delta(c).items():
                for (a1, a2), k2 in self.delta(a).items():
                    _add_into(lhs, (a1, a2, b), k * k2)
                for (b1, b2), k2 in self.delta(b).items():
                    _add_into(rhs, (a, b1, b2), k * k2)
            if lhs != rhs:
                raise CoalgebraError(f"coassociativity fails on {c!r}")
        # boundary is a coderivation: Delta d = (d ox id + id ox d) Delta
        for c in deg:
            lhs = {}
            for c1, k in self.d(c).items():
                for pair, k2 in self.delta(c1).items():
                    _add_into(lhs, pair, k * k2)
            rhs = {}
            for (a, b), k in self.delta(c).items():
                for a1, k2 in self.d(a).items():
                    _add_into(rhs, (a1, b), k * k2)
                sign = -1 if deg[a] % 2 else 1
                for b1, k2 in self.d(b).items():
                    _add_into(rhs, (a, b1), sign * k * k2)
            if lhs != rhs:
                raise CoalgebraError(f"coderivation identity fails on {c!r}")
        # degree-1 elements are cycles (eps o d = 0 collapses to this)
        for c in self.basis.get(1, []):
            if self.d(c):
                raise CoalgebraError(f"degree-1 element {c!r} is not a cycle")
        # curvature vanishes on boundaries: h o d = 0 on degree 3
        for c in self.basis.get(3, []):
            val = sum(k * self.h(lab) for lab, k in self.d(c).items())
            if val:
                raise CoalgebraError(f"h o d != 0 on {c!r}")
        # curvature identity: d^2 = (h ox id)(Delta - Delta^op)
        for c in deg:
            lhs = self.d_vec(self.d(c))
            rhs: Vec = {}
            for (a, b), k in self.delta(c).items():
                if self.h(a):
                    _add_into(rhs, b, k * self.h(a))
                if self.h(b):
                    sign = -1 if (deg[a] * deg[b]) % 2 else 1
                    _add_into(rhs, a, -sign * k * self.h(b))
            if lhs != rhs:
                raise CoalgebraError(f"curvature identity fails on {c!r}")
        # curvature is supported on loops: needed for its cobar absorption
        for c, val in self.curvature.items():
            if val and self.source[c] != self.target[c]:
                raise CoalgebraError(f"curvature on {c!r} with distinct endpoints")


# ---------------------------------------------------------------------------
# constructions


def categorical_coalgebra(X: SimplicialSet, ring: RingSpec = Z) -> CatCoalgebra:
    """Chains of a simplicial set as a categorical coalgebra.

    The simplicial boundary is corrected by the edge functional e (1 on
    every nondegenerate edge) so that edges become cycles:

        d~ = d + (id ox e - e ox id) o Delta
        h  = (e ox e) o Delta + e o d

    evaluated with the package Koszul convention (e odd).  With that
    convention the corrected boundary of a top simplex keeps exactly the
    inner faces, matching the direct construction on standard simplices.
    """
    top = X.dimension
    basis = {d: list(X.simplices.get(d, [])) for d in range(top + 1)}
    basis = {d: cs for d, cs in basis.items() if cs or d == 0}
    deg = {c: d for d, cs in basis.items() for c in cs}
    delta = aw_coproduct(X)

    def e_of(label: str) -> int:
        return 1 if deg[label] == 1 else 0

    boundary: dict[str, list[tuple[str, int]]] = {}
    curvature: dict[str, int] = {}
    source: dict[str, str] = {}
    target: dict[str, str] = {}
    for c, d in deg.items():
        verts = simplex_vertices(X, c)
        source[c] = verts[0]
        target[c] = verts[-1]
        acc: Vec = {}
        # simplicial boundary, degenerate faces already dropped
        if d > 0:
            for i, img in enumerate(X.faces[c]):
                if not img.is_degenerate:
                    _add_into(acc, img.target, (-1) ** i)
        # + (id ox e) Delta : (id ox e)(a ox b) = (-1)^{|a|} a e(b)
        # - (e ox id) Delta : (e ox id)(a ox b) = e(a) b
        for (a, b), k in delta[c]:
            if e_of(b):
                _add_into(acc, a, k * (-1) ** deg[a])
            if e_of(a):
                _add_into(acc, b, -k)
        boundary[c] = sorted(acc.items())
        if d == 2:
            val = 0
            for (a, b), k in delta[c]:
                if deg[a] == 1 and deg[b] == 1:
                    val += -k * e_of(a) * e_of(b)
            for i, img in enumerate(X.faces[c]):
                if not img.is_degenerate:
                    val += (-1) ** i * e_of(img.target)
            if val:
                curvature[c] = val

    coalg = CatCoalgebra(
        name=X.name, ring=ring, basis=basis,
        coproduct={c: sorted(t.items()) if isinstance(t, dict) else t
                   for c, t in delta.items()},
        boundary=boundary, curvature=curvature, source=source, target=target)
    coalg.validate()
    return coalg


def simplex_coalgebra(n: int, ring: RingSpec = Z) -> CatCoalgebra:
    """The categorical coalgebra of the standard n-simplex, built directly.

    Basis elements are vertex subsets; the boundary keeps only the inner
    faces with alternating signs starting at -d_1, and the curvature is
    identically zero.
    """
    X = standard_simplex(n)
    deg = {}
    basis: dict[int, list[str]] = {}
    import itertools

    names: dict[str, tuple[int, ...]] = {}
    for d in range(n + 1):
        basis[d] = []
        for sub in itertools.combinations(range(n + 1), d + 1):
            name = "".join(map(str, sub))
            basis[d].append(name)
            names[name] = sub
            deg[name] = d
    coproduct = {}
    boundary = {}
    source = {}
    target = {}
    for name, sub in names.items():
        d = deg[name]
        source[name] = str(sub[0])
        target[name] = str(sub[-1])
        coproduct[name] = [
            ((("".join(map(str, sub[:p + 1]))), "".join(map(str, sub[p:]))), 1)
            for p in range(d + 1)
        ]
        terms = []
        for i in range(1, d):
            face = sub[:i] + sub[i + 1:]
            terms.append(("".join(map(str, face)), (-1) ** i))
        boundary[name] = terms
    coalg = CatCoalgebra(
        name=f"simplex({n})", ring=ring, basis=basis, coproduct=coproduct,
        boundary=boundary, curvature={}, source=source, target=target)
    coalg.validate()
    return coalg


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class CoalgebraMorphism:
    """A morphism (f0, f1): degree-0 coalgebra map plus degree -1 correction.

    f0 maps basis elements to linear combinations in the codomain; f1
    maps basis elements to multiples of codomain objects (only degree-1
    elements can map to something nonzero).
    """

    f0: dict[str, list[tuple[str, int]]]
    f1: dict[str, list[tuple[str, int]]] = field(default_factory=dict)

    def apply0(self, c: str) -> Vec:
        out: Vec = {}
        for lab, k in self.f0.get(c, []):
            _add_into(out, lab, k)
        return out

    def apply0_vec(self, v: Vec) -> Vec:
        out: Vec = {}
        for c, coeff in v.items():
            for lab, k in self.f0.get(c, []):
                _add_into(out, lab, coeff * k)
        return out

    def apply1(self, c: str) -> Vec:
        out: Vec = {}
        for lab, k in self.f1.get(c, []):
            _add_into(out, lab, k)
        return out

    def f1_scalar(self, c: str) -> int:
        """epsilon' o f1: total coefficient of the object-valued part."""
        return sum(k for _, k in self.f1.get(c, []))


@dataclass
class MorphismCheck:
    equation: str
    ok: bool
    detail: str = ""


@dataclass
class MorphismReport:
    checks: list[MorphismCheck]

    @property
    def valid(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[MorphismCheck]:
        return [c for c in self.checks if not c.ok]


def validate_morphism(f: CoalgebraMorphism, dom: CatCoalgebra,
                      cod: CatCoalgebra) -> MorphismReport:
    """Check every morphism equation; returns a per-equation report."""
    checks: list[MorphismCheck] = []
    deg = dom.degree

    def record(name, ok, detail=""):
        checks.append(MorphismCheck(name, ok, detail))

    # degree preservation and set-like behaviour
    bad = [c for c in deg for lab, _ in f.f0.get(c, [])
           if cod.degree[lab] != deg[c]]
    record("f0 preserves degree", not bad, f"fails on {bad[:3]}")
    bad = [x for x in dom.setlike if f.apply0(x) not in
           ({}, *({y: 1} for y in cod.setlike))]
    record("f0 sends objects to objects", not bad, f"fails on {bad[:3]}")

    # f0 is a map of graded counital coalgebras
    bad = []
    for c in deg:
        lhs: TensorVec = {}
        for c1, k in f.apply0(c).items():
            for pair, k2 in cod.delta(c1).items():
                _add_into(lhs, pair, k * k2)
        rhs: TensorVec = {}
        for (a, b), k in dom.delta(c).items():
            for a1, ka in f.apply0(a).items():
                for b1, kb in f.apply0(b).items():
                    _add_into(rhs, (a1, b1), k * ka * kb)
        if lhs != rhs:
            bad.append(c)
    record("f0 is a coalgebra map", not bad, f"fails on {bad[:3]}")

    # f1 is a bicomodule map into the codomain objects
    bad = []
    for c, terms in f.f1.items():
        img = {lab for lab, k in terms if k}
        if not img:
            continue
        want = {f0x for f0x, _ in f.f0.get(dom.source[c], [])} | \
               {f0x for f0x, _ in f.f0.get(dom.target[c], [])}
        if deg[c] != 1 or not img <= want or len(want) != 1:
            bad.append(c)
    record("f1 is an object-valued bicomodule map", not bad, f"fails on {bad[:3]}")

    # structure equation for the boundaries
    bad = []
    for c in deg:
        lhs = f.apply0_vec(dom.d(c))
        rhs = cod.d_vec(f.apply0(c))
        for (a, b), k in dom.delta(c).items():
            # (f1bar ox f0)(Delta - Delta^op); f0 is even, so no Koszul sign
            s = f.f1_scalar(a)
            if s:
                for b1, kb in f.apply0(b).items():
                    _add_into(rhs, b1, k * s * kb)
            s = f.f1_scalar(b)
            if s:
                sign = -1 if (deg[a] * deg[b]) % 2 else 1
                for a1, ka in f.apply0(a).items():
                    _add_into(rhs, a1, -sign * k * s * ka)
        if lhs != rhs:
            bad.append(c)
    record("boundary compatibility", not bad, f"fails on {bad[:3]}")

    # structure equation for the curvatures
    bad = []
    for c in dom.basis.get(2, []):
        lhs = sum(k * cod.h(lab) for lab, k in f.apply0(c).items())
        rhs = dom.h(c)
        rhs += sum(k * f.f1_scalar(lab) for lab, k in dom.d(c).items())
        for (a, b), k in dom.delta(c).items():
            sign = -1 if deg[a] % 2 else 1
            rhs += sign * k * f.f1_scalar(a) * f.f1_scalar(b)
        if lhs != rhs:
            bad.append(c)
    record("curvature compatibility", not bad, f"fails on {bad[:3]}")

    return MorphismReport(checks)


def compose_morphisms(g: CoalgebraMorphism, f: CoalgebraMorphism) -> CoalgebraMorphism:
    """Composite (g0 o f0, g1 o f0 + g0 o f1)."""
    f0: dict[str, list[tuple[str, int]]] = {}
    f1: dict[str, list[tuple[str, int]]] = {}
    for c, terms in f.f0.items():
        acc: Vec = {}
        acc1: Vec = {}
        for lab, k in terms:
            for lab2, k2 in g.f0.get(lab, []):
                _add_into(acc, lab2, k * k2)
            for lab2, k2 in g.f1.get(lab, []):
                _add_into(acc1, lab2, k * k2)
        if acc:
            f0[c] = sorted(acc.items())
        if acc1:
            f1[c] = sorted(acc1.items())
    for c, terms in f.f1.items():
        acc1 = {lab: k for lab, k in f1.get(c, [])}
        for lab, k in terms:
            for lab2, k2 in g.f0.get(lab, []):
                _add_into(acc1, lab2, k * k2)
        if acc1:
            f1[c] = sorted(acc1.items())
        else:
            f1.pop(c, None)
    return CoalgebraMorphism(f0, f1)


def identity_morphism(C: CatCoalgebra) -> CoalgebraMorphism:
    return CoalgebraMorphism({c: [(c, 1)] for c in C.degree})


def collapse_to_point(C: CatCoalgebra, P: CatCoalgebra) -> CoalgebraMorphism:
    """The morphism induced by collapsing every simplex to a point.

    Valid whenever C has zero curvature (the curvature equation forces
    this); validate_morphism reports the failure otherwise.
    """
    pt = P.setlike[0]
    return CoalgebraMorphism({c: [(pt, 1)] if C.degree[c] == 0 else []
                              for c in C.degree})
