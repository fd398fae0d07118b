"""Finite simplicial sets with explicit degeneracy bookkeeping.

A simplicial set is stored by its nondegenerate simplices; each face of a
nondegenerate simplex is recorded as a degeneracy word (strictly
decreasing indices, the canonical form) applied to a nondegenerate
target.  The normalized chains and the Alexander-Whitney coproduct are
derived from this data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .exactalg import ChainComplexWindow, RingSpec, SparseMatrix, Z


class SimplicialError(ValueError):
    pass


class SimplicialIdentityError(SimplicialError):
    def __init__(self, simplex: str, i: int, j: int):
        super().__init__(
            f"simplicial identity d_{i} d_{j} = d_{j-1} d_{i} fails on {simplex!r}")
        self.simplex = simplex
        self.i = i
        self.j = j


@dataclass(frozen=True)
class FaceImage:
    """A (possibly degenerate) face: canonical degeneracy word + target."""

    degeneracies: tuple[int, ...]
    target: str

    def __post_init__(self):
        if any(a <= b for a, b in zip(self.degeneracies, self.degeneracies[1:])):
            raise SimplicialError(
                f"degeneracy word {self.degeneracies} is not strictly decreasing")

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)


# A simplex reference: degeneracy word applied to a nondegenerate simplex.
SimplexRef = tuple[tuple[int, ...], str]


def compose_degeneracy(word: tuple[int, ...], j: int) -> tuple[int, ...]:
    """Canonical form of s_j applied after an already-canonical word.

    Pushes s_j rightward through the word with s_j s_w = s_{w+1} s_j
    (valid for j <= w) until it slots into decreasing position.
    """
    out: list[int] = []
    rest = list(word)
    cur = j
    while rest and cur <= rest[0]:
        out.append(rest.pop(0) + 1)
    out.append(cur)
    out.extend(rest)
    for a, b in zip(out, out[1:]):
        assert a > b, (word, j, out)
    return tuple(out)


def face_of_word(word: tuple[int, ...], i: int):
    """Apply d_i to a degeneracy word; returns (new_word, residual_face).

    residual_face is None when d_i cancels against a degeneracy, else the
    index of the face map that reaches the nondegenerate target.
    """
    out: list[int] = []
    k = i
    for idx, j in enumerate(word):
        if k < j:
            out.append(j - 1)
        elif k in (j, j + 1):
            # d_k s_j = id: the rest of the word survives untouched
            return tuple(out) + tuple(word[idx + 1:]), None
        else:
            out.append(j)
            k -= 1
    return tuple(out), k


class SimplicialSet:
    """A finite simplicial set presented by nondegenerate simplices."""

    def __init__(self, name: str, simplices: dict[int, list[str]],
                 faces: dict[str, list[FaceImage]], validate: bool = True):
        self.name = name
        self.simplices = {d: list(names) for d, names in sorted(simplices.items()) if names}
        self.faces = dict(faces)
        self.dim_of = {}
        for d, names in self.simplices.items():
            for s in names:
                if s in self.dim_of:
                    raise SimplicialError(f"duplicate simplex id {s!r}")
                self.dim_of[s] = d
        if validate:
            self.validate()

    @property
    def dimension(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def all_simplices(self):
        for d in sorted(self.simplices):
            yield from self.simplices[d]

    def face(self, i: int, ref: SimplexRef) -> SimplexRef:
        """Apply d_i to (degeneracy word, nondegenerate target)."""
        word, target = ref
        new_word, residual = face_of_word(word, i)
        if residual is None:
            return (new_word, target)
        img = self.faces[target][residual]
        return (self._merge_words(new_word, img.degeneracies), img.target)

    @staticmethod
    def _merge_words(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
        """Canonical form of (outer degeneracies) o (inner degeneracies)."""
        word = tuple(inner)
        for j in reversed(outer):
            word = compose_degeneracy(word, j)
        return word

    def degeneracy(self, j: int, ref: SimplexRef) -> SimplexRef:
        word, target = ref
        return (compose_degeneracy(word, j), target)

    def validate(self) -> None:
        for s, d in self.dim_of.items():
            if s not in self.faces:
                if d > 0:
                    raise SimplicialError(f"missing faces for {s!r}")
                continue
            imgs = self.faces[s]
            if d == 0:
                if imgs:
                    raise SimplicialError(f"vertex {s!r} must have no faces")
                continue
            if len(imgs) != d + 1:
                raise SimplicialError(
                    f"{s!r} has {len(imgs)} faces, expected {d + 1}")
            for img in imgs:
                if img.target not in self.dim_of:
                    raise SimplicialError(
                        f"face of {s!r} references unknown simplex {img.target!r}")
                if self.dim_of[img.target] + len(img.degeneracies) != d - 1:
                    raise SimplicialError(
                        f"face of {s!r} has wrong dimension")
        # simplicial identities d_i d_j = d_{j-1} d_i for i < j
        for s, d in self.dim_of.items():
            if d < 2:
                continue
            for j in range(1, d + 1):
                for i in range(j):
                    left = self.face(i, self.face(j, ((), s)))
                    right = self.face(j - 1, self.face(i, ((), s)))
                    if left != right:
                        raise SimplicialIdentityError(s, i, j)

    # -- file format --------------------------------------------------------

    @classmethod
    def from_document(cls, doc: dict) -> "SimplicialSet":
        try:
            name = doc["name"]
            dims = doc["dimensions"]
            raw = doc["simplices"]
        except (KeyError, TypeError) as exc:
            raise SimplicialError(f"malformed simplicial-set document: {exc}")
        if isinstance(raw, dict):
            per_dim = {int(k): v for k, v in raw.items()}
        else:
            per_dim = dict(enumerate(raw))
        simplices: dict[int, list[str]] = {}
        faces: dict[str, list[FaceImage]] = {}
        for d, entries in per_dim.items():
            if d > dims:
                raise SimplicialError(f"simplex above declared dimension {dims}")
            simplices[d] = []
            for entry in entries:
                sid = entry["id"]
                simplices[d].append(sid)
                faces[sid] = [
                    FaceImage(tuple(f.get("degeneracies", ())), f["target"])
                    for f in entry.get("faces", [])
                ]
        return cls(name, simplices, faces)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialSet":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SimplicialError(f"not valid JSON: {exc}")
        return cls.from_document(doc)

    def to_document(self) -> dict:
        dims = self.dimension
        out = []
        for d in range(dims + 1):
            out.append([
                {"id": s,
                 "faces": [{"degeneracies": list(f.degeneracies), "target": f.target}
                           for f in self.faces.get(s, [])]}
                for s in self.simplices.get(d, [])
            ])
        return {"name": self.name, "dimensions": dims, "simplices": out}


def load_simplicial_set(source) -> SimplicialSet:
    """Load a simplicial set from a dict, JSON string, path, or builtin URI."""
    if isinstance(source, SimplicialSet):
        return source
    if isinstance(source, dict):
        return SimplicialSet.from_document(source)
    if isinstance(source, Path):
        source = str(source)
    text = str(source)
    if text.startswith("builtin:"):
        return builtin_uri(text)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise SimplicialError(f"cannot read simplicial set file: {exc}")
    return SimplicialSet.from_json(text)


# ---------------------------------------------------------------------------
# builtins


def point() -> SimplicialSet:
    return SimplicialSet("point", {0: ["v"]}, {"v": []})


def _subset_name(vertices: tuple[int, ...]) -> str:
    return "".join(str(v) for v in vertices)


def standard_simplex(n: int) -> SimplicialSet:
    """The simplicial n-simplex: nondegenerate simplices are vertex subsets."""
    if n < 0:
        raise SimplicialError("simplex dimension must be >= 0")
    import itertools

    simplices: dict[int, list[str]] = {d: [] for d in range(n + 1)}
    faces: dict[str, list[FaceImage]] = {}
    for d in range(n + 1):
        for sub in itertools.combinations(range(n + 1), d + 1):
            name = _subset_name(sub)
            simplices[d].append(name)
            if d == 0:
                faces[name] = []
            else:
                faces[name] = [
                    FaceImage((), _subset_name(sub[:i] + sub[i + 1:]))
                    for i in range(d + 1)
                ]
    return SimplicialSet(f"simplex({n})", simplices, faces)


def _collapsed_word(k: int) -> tuple[int, ...]:
    """Degeneracy word of the k-fold degenerate simplex over a vertex."""
    return tuple(range(k - 1, -1, -1))


def sphere(n: int, cell_name: str = "s") -> SimplicialSet:
    """Minimal model of S^n: one vertex and one n-cell, faces all collapsed.

    sphere(0) is rejected (not reduced); sphere(1) is accepted but its
    chain coalgebra is not 1-reduced, so downstream complexes need word
    caps.
    """
    if n < 1:
        raise SimplicialError("sphere(n) requires n >= 1 (sphere(0) is not reduced)")
    faces = {"v": [], cell_name: [FaceImage(_collapsed_word(n - 1), "v")
                                  for _ in range(n + 1)]}
    return SimplicialSet(f"sphere({n})", {0: ["v"], n: [cell_name]}, faces)


def wedge_of_spheres(dims: list[int]) -> SimplicialSet:
    """Spheres of the given dimensions glued at a single vertex."""
    if not dims or any(d < 2 for d in dims):
        raise SimplicialError("wedge wants sphere dimensions >= 2")
    simplices: dict[int, list[str]] = {0: ["v"]}
    faces: dict[str, list[FaceImage]] = {"v": []}
    for idx, n in enumerate(dims):
        name = f"s{idx}"
        simplices.setdefault(n, []).append(name)
        faces[name] = [FaceImage(_collapsed_word(n - 1), "v") for _ in range(n + 1)]
    label = ",".join(str(d) for d in dims)
    return SimplicialSet(f"wedge({label})", simplices, faces)


def real_projective_plane() -> SimplicialSet:
    """RP^2 with one cell per dimension; its chain coalgebra has nonzero
    curvature, which exercises the curvature terms downstream."""
    faces = {
        "v": [],
        "a": [FaceImage((), "v"), FaceImage((), "v")],
        "w": [FaceImage((), "a"), FaceImage((0,), "v"), FaceImage((), "a")],
    }
    return SimplicialSet("rp2", {0: ["v"], 1: ["a"], 2: ["w"]}, faces)


_BUILTINS = {
    "point": lambda params: point(),
    "simplex": lambda params: standard_simplex(int(params)),
    "sphere": lambda params: sphere(int(params)),
    "wedge": lambda params: wedge_of_spheres([int(x) for x in params.split(",")]),
    "rp2": lambda params: real_projective_plane(),
}


def builtin(name: str, params=None) -> SimplicialSet:
    if name not in _BUILTINS:
        raise SimplicialError(f"unknown builtin {name!r}")
    if name == "wedge" and isinstance(params, (list, tuple)):
        params = ",".join(str(x) for x in params)
    return _BUILTINS[name]("" if params is None else str(params))


def builtin_uri(uri: str) -> SimplicialSet:
    """Resolve names like builtin:sphere/2, builtin:wedge/2,3, builtin:point."""
    if not uri.startswith("builtin:"):
        raise SimplicialError(f"not a builtin URI: {uri!r}")
    rest = uri[len("builtin:"):]
    name, _, params = rest.partition("/")
    return builtin(name, params or None)


# ---------------------------------------------------------------------------
# normalized chains and the Alexander-Whitney coproduct


def normalized_chains(X: SimplicialSet, ring: RingSpec = Z) -> ChainComplexWindow:
    """Chain complex on nondegenerate simplices; degenerate faces drop out."""
    top = max(X.dimension, 0)
    basis = {d: list(X.simplices.get(d, [])) for d in range(top + 1)}
    index = {d: {s: i for i, s in enumerate(basis[d])} for d in basis}
    boundary = {}
    for n in range(1, top + 1):
        cols = []
        for s in basis[n]:
            col: dict[int, int] = {}
            for i, img in enumerate(X.faces[s]):
                if img.is_degenerate:
                    continue
                r = index[n - 1][img.target]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        boundary[n] = SparseMatrix.from_columns(len(basis[n - 1]), cols) \
            if basis[n] else SparseMatrix.zero(len(basis[n - 1]), 0)
    return ChainComplexWindow(
        lo=0, hi=top, basis=basis, boundary=boundary,
        certified=frozenset(range(top + 1)), vanishes_above=True)


def front_face(X: SimplicialSet, s: str, p: int) -> SimplexRef:
    """The front p-face: drop trailing vertices via d_{p+1} ... d_n."""
    n = X.dim_of[s]
    ref: SimplexRef = ((), s)
    for i in range(n, p, -1):
        ref = X.face(i, ref)
    return ref

def back_face(X: SimplicialSet, s: str, q: int) -> SimplexRef:
    """The back q-face: drop leading vertices via d_0 repeated."""
    n = X.dim_of[s]
    ref: SimplexRef = ((), s)
    for _ in range(n - q):
        ref = X.face(0, ref)
    return ref


def aw_coproduct(X: SimplicialSet) -> dict[str, list[tuple[tuple[str, str], int]]]:
    """Alexander-Whitney coproduct on normalized chains: front x back faces.

    Returns, per nondegenerate simplex, the list of ((front, back), 1)
    terms that survive normalization.
    """
    out: dict[str, list[tuple[tuple[str, str], int]]] = {}
    for s in X.all_simplices():
        n = X.dim_of[s]
        terms = []
        for p in range(n + 1):
            fr = front_face(X, s, p)
            bk = back_face(X, s, n - p)
            if fr[0] or bk[0]:
                continue  # a degenerate factor vanishes in normalized chains
            terms.append(((fr[1], bk[1]), 1))
        out[s] = terms
    return out


def simplex_vertices(X: SimplicialSet, s: str) -> list[str]:
    """Vertices of s in face order (0th vertex first)."""
    n = X.dim_of[s]
    verts = []
    for p in range(n + 1):
        ref: SimplexRef = ((), s)
        # vertex p survives: drop everything after, then everything before
        for i in range(n, p, -1):
            ref = X.face(i, ref)
        for _ in range(p):
            ref = X.face(0, ref)
        verts.append(ref[1])
    return verts
