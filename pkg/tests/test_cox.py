import pytest

from conftest import example
from toric_k3.cox import (
    EquationError,
    NoStandardForm,
    anticanonical_degree_oracle,
    anticanonical_monomials,
    dual_edge_length,
    format_monomial,
    group_by_fiber,
    is_toric_flex,
    restrict_to_zero,
    weierstrass_completion,
)
from toric_k3.fibration import fibration_for_normal
from toric_k3.planar import REFERENCE_VERTICES, PlanarClass, reference_polytope


def _class_eq(i):
    cls = PlanarClass(i)
    p = reference_polytope(i)
    return anticanonical_monomials(cls.reference_vertices, p.dual(), cls.variable_names)


def test_monomial_count_is_dual_point_count():
    for i in REFERENCE_VERTICES:
        eq = _class_eq(i)
        assert len(eq.monomials) == len(reference_polytope(i).dual().lattice_points)
        assert len(eq.exponent_set()) == len(eq.monomials)


def test_cubic_and_weighted_cubic():
    assert len(_class_eq(1).monomials) == 10
    assert sorted(_class_eq(6).monomial_strings()) == ["x*y*z", "x^3", "y^3", "z^3"]
    assert sorted(_class_eq(15).monomial_strings()) == sorted(
        ["z^6", "x^3", "y^2", "x*z^4", "x^2*z^2", "y*z^3", "x*y*z"]
    )


def test_interior_monomial_is_product_of_all_variables():
    for i in REFERENCE_VERTICES:
        eq = _class_eq(i)
        origin = [m for m in eq.monomials if not any(m.source)]
        assert len(origin) == 1 and set(origin[0].exponents) == {1}


def test_dual_edge_length_equals_anticanonical_degree():
    # lattice length of the dual edge = number of points where the curve meets D_v
    for i in REFERENCE_VERTICES:
        p = reference_polytope(i)
        for v in p.vertices:
            assert dual_edge_length(p, v) == anticanonical_degree_oracle(p, v)


def test_restriction_and_formatting():
    eq = _class_eq(15)
    z0 = restrict_to_zero(eq, "z")
    assert sorted(z0.monomial_strings()) == ["x^3", "y^2"]
    assert format_monomial((0, 0, 0), "xyz") == "1"
    with pytest.raises(EquationError):
        anticanonical_monomials([(1, 0)], reference_polytope(1).dual(), ["x", "y"])


def test_negative_exponent_detected():
    # rays outside the polytope dual to delta give negative exponents
    with pytest.raises(EquationError):
        anticanonical_monomials([(3, 0)], reference_polytope(1).dual())


def test_fibred_equation_of_the_weighted_example():
    p = example("tetra")
    f = fibration_for_normal(p, (0, 0, 1))
    rays = [(2, -1, 0), (-1, 1, 0), (-1, -1, 0), (-1, -1, 1), (-1, -1, -1)]
    eq = anticanonical_monomials(rays, p.dual(), ["x", "y", "z", "s", "t"])
    fe = group_by_fiber(eq, f)
    assert fe.fiber_names == ("x", "y", "z")
    assert fe.named_degrees() == {
        "x^3": 0, "y^2": 0, "x*y*z": 2, "x^2*z^2": 4, "y*z^3": 6, "x*z^4": 8, "z^6": 12
    }
    assert fe.monomial_count() == len(p.dual().lattice_points) == 39
    wd = weierstrass_completion(fe)
    assert (wd.deg_a, wd.deg_b) == (8, 12)
    assert is_toric_flex(f, (-1, -1, 0))
    assert not is_toric_flex(f, (2, -1, 0))


def test_no_standard_form_for_other_classes():
    p = example("plane_bundle")
    f = fibration_for_normal(p, (0, 0, 1))
    rays = sorted(set(p.vertices))
    eq = anticanonical_monomials(rays, p.dual())
    names = dict(zip(eq.rays, eq.names))
    assert isinstance(weierstrass_completion(group_by_fiber(eq, f)), NoStandardForm)
    assert len(names) == 5
