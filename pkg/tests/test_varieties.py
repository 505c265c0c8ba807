"""Variety backends: sections, classes, base point freeness."""

from fractions import Fraction

import pytest

from helpers import plane_variety
from pdivgen.coxs5 import cox_surface
from pdivgen.mpoly import MPoly
from pdivgen.varieties import (
    NonIntegralDivisor,
    PointBase,
    ProjectiveSpace,
    QDivisor,
    ffe,
    in_span,
    invariantizing_section,
    is_basepoint_free,
    linear_equivalence_class,
    pullback_to_blowup,
    sections,
    sections_of_floor,
    span_dimension,
)


def test_point_base_sections():
    y = PointBase()
    assert sections(y, QDivisor({})).dimension == 1
    assert sections(y, QDivisor({"P": 1})).dimension == 1
    assert sections(y, QDivisor({"P": -1})).dimension == 0


def test_projective_sections_dimensions():
    y = plane_variety()
    assert sections(y, QDivisor({"D": 1})).dimension == 10
    assert sections(y, QDivisor({"D": 1, "E": 2})).dimension == 55
    assert sections(y, QDivisor({})).dimension == 1


def test_projective_sections_with_negative_part():
    y = plane_variety()
    basis = sections(y, QDivisor({"D": 1, "E": -1}))
    # cubic numerator forced to be a multiple of the cubic form of E
    assert basis.dimension == 1
    elem = basis.elements[0]
    assert elem.num.divide_exact(y.form("E")) is not None


def test_sections_of_floor_and_integrality():
    y = plane_variety()
    with pytest.raises(NonIntegralDivisor):
        sections(y, QDivisor({"D": Fraction(1, 2)}))
    assert sections_of_floor(y, QDivisor({"D": Fraction(3, 2)})).dimension == 10


def test_blowup_class_vectors():
    y = cox_surface()
    assert y.class_vector("H") == (1, 0, 0, 0, 0)
    assert y.class_vector("E1") == (0, 1, 0, 0, 0)
    assert y.class_vector("E14") == (1, -1, 0, 0, -1)
    assert y.class_vector("E23") == (1, 0, -1, -1, 0)


def test_blowup_section_dimensions():
    y = cox_surface()
    # lines through one point, conics through all four, anticanonical
    assert sections(y, QDivisor({"H": 1, "E1": -1})).dimension == 2
    assert (
        sections(
            y, QDivisor({"H": 2, "E1": -1, "E2": -1, "E3": -1, "E4": -1})
        ).dimension
        == 2
    )
    assert (
        sections(
            y, QDivisor({"H": 3, "E1": -1, "E2": -1, "E3": -1, "E4": -1})
        ).dimension
        == 6
    )


def test_blowup_section_with_line_transform():
    y = cox_surface()
    basis = sections(y, QDivisor({"H": 1, "E1": -1, "E4": -1, "E14": -1}))
    assert basis.dimension == 1
    assert basis.elements[0].num.content_normalized().terms == {
        (0, 1, 0): Fraction(1),
        (0, 0, 1): Fraction(-1),
    }


def test_blowup_bpf():
    y = cox_surface()
    assert is_basepoint_free(y, QDivisor({"H": 1, "E1": -1}))
    assert not is_basepoint_free(y, QDivisor({"H": 1, "E1": -1, "E2": -1, "E3": -1}))
    assert is_basepoint_free(y, QDivisor({}))


def test_euler_characteristic():
    y = cox_surface()
    assert y.euler_characteristic((1, -1, 0, 0, 0)) == 2
    assert y.euler_characteristic((3, -1, -1, -1, -1)) == 6
    assert y.intersect((1, -1, -1, 0, 0), (1, -1, -1, 0, 0)) == -1


def test_linear_equivalence_class():
    p2 = plane_variety()
    assert linear_equivalence_class(p2, QDivisor({"D": 1})) == (3,)
    assert linear_equivalence_class(PointBase(), QDivisor({})) == ()


def test_invariantizing_section():
    y = plane_variety()
    s = invariantizing_section(y, QDivisor({"E": 1}))
    # balanced cubic monomial over the non-invariant form
    assert s.den == (("E", 1),)
    assert s.num.terms == {(1, 1, 1): Fraction(1)}
    assert invariantizing_section(y, QDivisor({"D": 5})).is_one()


def test_pullback_to_blowup():
    p2 = ProjectiveSpace(2, ("x0", "x1", "x2"))
    x0, x1, x2 = (MPoly.variable(3, i) for i in range(3))
    p2.register_divisor("L", x2)
    blow = cox_surface()
    pulled = pullback_to_blowup(QDivisor({"L": 1}), p2, blow)
    # x2 = 0 passes through the first and second base points
    assert pulled.get("E1") == 1 and pulled.get("E2") == 1
    assert pulled.get("E12") == 1


def test_span_helpers():
    y = plane_variety()
    x, yy, z = (MPoly.variable(3, i) for i in range(3))
    a = ffe(x, [("D", 1)])
    b = ffe(yy, [("D", 1)])
    target = ffe(x + yy, [("D", 1)])
    assert in_span(y, target, [a, b])
    assert not in_span(y, ffe(z, [("D", 1)]), [a, b])
    assert span_dimension(y, [a, b, target]) == 2
