import pytest

from loopchains.coalgebra import (
    CatCoalgebra,
    CoalgebraError,
    categorical_coalgebra,
    collapse_to_point,
    compose_morphisms,
    identity_morphism,
    simplex_coalgebra,
    validate_morphism,
)
from loopchains.simplicial import (
    point,
    real_projective_plane,
    sphere,
    standard_simplex,
    wedge_of_spheres,
)


def all_test_sets():
    return [point(), standard_simplex(1), standard_simplex(2), standard_simplex(3),
            sphere(1), sphere(2), sphere(3), sphere(4),
            wedge_of_spheres([2, 2]), wedge_of_spheres([2, 3]),
            wedge_of_spheres([2, 2, 3]), real_projective_plane()]


class TestConstruction:
    def test_axioms_hold_on_corpus(self):
        for X in all_test_sets():
            categorical_coalgebra(X).validate()

    def test_simplex_coalgebra_axioms(self):
        for n in range(5):
            simplex_coalgebra(n).validate()

    def test_point(self):
        C = categorical_coalgebra(point())
        assert C.setlike == ["v"]
        assert not C.boundary.get("v")
        assert not C.curvature

    def test_sphere2_is_flat(self):
        C = categorical_coalgebra(sphere(2))
        assert C.d("s") == {}
        assert not C.curvature

    def test_simplex2_corrected_boundary(self):
        C = categorical_coalgebra(standard_simplex(2))
        assert C.d("012") == {"02": -1}

    def test_simplex3_corrected_boundary(self):
        C = simplex_coalgebra(3)
        assert C.d("0123") == {"023": -1, "013": 1}

    def test_simplex1_edge_is_cycle(self):
        assert simplex_coalgebra(1).d("01") == {}

    def test_rp2_has_curvature(self):
        C = categorical_coalgebra(real_projective_plane())
        assert C.curvature == {"w": 1}
        assert C.d("w") == {}

    def test_agreement_direct_vs_simplicial(self):
        # the direct simplex construction is the simplicial one on the nose
        for n in range(5):
            A = simplex_coalgebra(n)
            B = categorical_coalgebra(standard_simplex(n))
            assert A.basis == B.basis
            for c in A.degree:
                assert A.d(c) == B.d(c), c
                assert A.delta(c) == B.delta(c), c
            assert A.curvature == B.curvature == {}
            assert A.source == B.source and A.target == B.target

    def test_source_target_from_counit(self):
        C = categorical_coalgebra(standard_simplex(3))
        assert C.source["123"] == "1"
        assert C.target["0123"] == "3"


class TestMorphisms:
    def test_identity_valid(self):
        C = categorical_coalgebra(sphere(2))
        report = validate_morphism(identity_morphism(C), C, C)
        assert report.valid, report.failures()

    def test_compose_with_identity(self):
        C = categorical_coalgebra(sphere(2))
        f = identity_morphism(C)
        g = compose_morphisms(f, f)
        assert g.f0 == f.f0 and not g.f1

    def test_collapse_sphere2_to_point(self):
        C = categorical_coalgebra(sphere(2))
        P = categorical_coalgebra(point())
        f = collapse_to_point(C, P)
        report = validate_morphism(f, C, P)
        assert report.valid, report.failures()

    def test_collapse_rp2_fails_on_curvature(self):
        C = categorical_coalgebra(real_projective_plane())
        P = categorical_coalgebra(point())
        report = validate_morphism(collapse_to_point(C, P), C, P)
        assert not report.valid
        assert any("curvature" in c.equation for c in report.failures())

    def test_composition_rule(self):
        C = categorical_coalgebra(sphere(2))
        P = categorical_coalgebra(point())
        f = collapse_to_point(C, P)
        g = identity_morphism(P)
        gf = compose_morphisms(g, f)
        assert gf.f0 == {c: t for c, t in f.f0.items() if t}  # unchanged
