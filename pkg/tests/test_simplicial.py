import json

import pytest

from loopchains.exactalg import Z, homology_window
from loopchains.simplicial import (
    FaceImage,
    SimplicialError,
    SimplicialIdentityError,
    SimplicialSet,
    aw_coproduct,
    builtin,
    builtin_uri,
    compose_degeneracy,
    load_simplicial_set,
    normalized_chains,
    point,
    real_projective_plane,
    simplex_vertices,
    sphere,
    standard_simplex,
    wedge_of_spheres,
)


class TestDegeneracyWords:
    def test_s0_s0(self):
        assert compose_degeneracy((0,), 0) == (1, 0)

    def test_canonical_insertion(self):
        assert compose_degeneracy((2, 0), 1) == (3, 1, 0)

    def test_face_cancels_degeneracy(self):
        X = sphere(2)
        ref = X.degeneracy(0, ((), "v"))
        assert X.face(0, ref) == ((), "v")
        assert X.face(1, ref) == ((), "v")


class TestBuiltins:
    def test_point(self):
        X = point()
        assert X.simplices == {0: ["v"]}

    def test_sphere_two_cells(self):
        X = sphere(2)
        assert sum(len(v) for v in X.simplices.values()) == 2

    def test_sphere_zero_rejected(self):
        with pytest.raises(SimplicialError):
            sphere(0)

    def test_simplex_counts(self):
        X = standard_simplex(2)
        assert [len(X.simplices[d]) for d in range(3)] == [3, 3, 1]

    def test_wedge_shares_vertex(self):
        X = wedge_of_spheres([2, 3])
        assert sum(len(v) for v in X.simplices.values()) == 3
        assert X.simplices[0] == ["v"]

    def test_uri(self):
        assert builtin_uri("builtin:sphere/2").name == "sphere(2)"
        assert builtin_uri("builtin:wedge/2,3").name == "wedge(2,3)"
        assert builtin_uri("builtin:point").name == "point"

    def test_rp2_validates(self):
        real_projective_plane()


class TestLoad:
    def test_round_trip(self):
        X = standard_simplex(2)
        doc = X.to_document()
        Y = load_simplicial_set(json.dumps(doc))
        assert Y.simplices == X.simplices

    def test_single_vertex_document(self):
        doc = {"name": "pt", "dimensions": 0, "simplices": [[{"id": "p", "faces": []}]]}
        X = load_simplicial_set(doc)
        assert X.simplices == {0: ["p"]}

    def test_delta1_document(self):
        doc = {
            "name": "interval", "dimensions": 1,
            "simplices": [
                [{"id": "0", "faces": []}, {"id": "1", "faces": []}],
                [{"id": "01", "faces": [
                    {"degeneracies": [], "target": "1"},
                    {"degeneracies": [], "target": "0"}]}],
            ],
        }
        X = load_simplicial_set(doc)
        assert [f.target for f in X.faces["01"]] == ["1", "0"]
        assert all(not f.degeneracies for f in X.faces["01"])

    def test_identity_violation_reported(self):
        # 2-simplex whose faces are inconsistent: d0 d0 != d0 d1
        doc = {
            "name": "bad", "dimensions": 2,
            "simplices": [
                [{"id": "a", "faces": []}, {"id": "b", "faces": []},
                 {"id": "c", "faces": []}, {"id": "d", "faces": []}],
                [{"id": "e1", "faces": [{"target": "a"}, {"target": "b"}]},
                 {"id": "e2", "faces": [{"target": "c"}, {"target": "d"}]},
                 {"id": "e3", "faces": [{"target": "a"}, {"target": "c"}]}],
                [{"id": "T", "faces": [
                    {"target": "e1"}, {"target": "e2"}, {"target": "e3"}]}],
            ],
        }
        with pytest.raises(SimplicialIdentityError) as err:
            load_simplicial_set(doc)
        assert err.value.simplex == "T"

    def test_parse_error(self):
        with pytest.raises(SimplicialError):
            load_simplicial_set("{not json")


class TestChains:
    def test_sphere_boundary_vanishes(self):
        cplx = normalized_chains(sphere(2))
        assert cplx.boundary[2].is_zero()

    def test_simplex_boundary(self):
        X = standard_simplex(2)
        cplx = normalized_chains(X)
        col = cplx.boundary[2].column(0)
        names = cplx.basis[1]
        got = {names[i]: v for i, v in col.items()}
        assert got == {"12": 1, "02": -1, "01": 1}

    def test_point_chain_complex(self):
        cplx = normalized_chains(point())
        assert cplx.hi == 0 and cplx.dim(0) == 1

    def test_sphere_homology(self):
        res = homology_window(normalized_chains(sphere(2)), Z)
        assert res.betti_vector(range(3)) == (1, 0, 1)

    def test_rp2_homology(self):
        res = homology_window(normalized_chains(real_projective_plane()), Z)
        table = res.by_degree()
        assert (table[0].betti, table[0].torsion) == (1, ())
        assert (table[1].betti, table[1].torsion) == (0, (2,))
        assert (table[2].betti, table[2].torsion) == (0, ())


class TestAW:
    def test_vertex_grouplike(self):
        X = point()
        assert aw_coproduct(X)["v"] == [(("v", "v"), 1)]

    def test_simplex_two(self):
        X = standard_simplex(2)
        terms = dict(aw_coproduct(X)["012"])
        assert terms == {("0", "012"): 1, ("01", "12"): 1, ("012", "2"): 1}

    def test_sphere_middle_terms_degenerate(self):
        X = sphere(2)
        terms = dict(aw_coproduct(X)["s"])
        assert terms == {("v", "s"): 1, ("s", "v"): 1}

    def test_coassociative(self):
        for X in (standard_simplex(3), sphere(3), wedge_of_spheres([2, 2])):
            delta = aw_coproduct(X)
            for s, terms in delta.items():
                lhs, rhs = {}, {}
                for (a, b), k in terms:
                    for (a1, a2), k2 in delta[a]:
                        lhs[(a1, a2, b)] = lhs.get((a1, a2, b), 0) + k * k2
                    for (b1, b2), k2 in delta[b]:
                        rhs[(a, b1, b2)] = rhs.get((a, b1, b2), 0) + k * k2
                assert lhs == rhs

    def test_vertices(self):
        X = standard_simplex(3)
        assert simplex_vertices(X, "013") == ["0", "1", "3"]
        assert simplex_vertices(X, "0123") == ["0", "1", "2", "3"]
