from fractions import Fraction

import pytest

from orbistar.errors import AlgebraError
from orbistar.gradedalgebra import (
    COHOMOLOGICAL,
    FiniteAlgebra,
    LinearMap,
    MapKind,
    apply,
    exp_nilpotent,
    format_element,
    log_unipotent,
    mul,
    power,
    projection_formula_failures,
)


@pytest.fixture
def curve():
    """H* of an elliptic curve: two odd classes that anticommute."""
    return FiniteAlgebra.from_products(
        ["1", "x", "y", "xy"],
        [(0, 0), (1, 0), (1, 0), (2, 0)],
        [("x", "y", {"xy": 1})],
        dim=1,
        grading=COHOMOLOGICAL,
        point_class="xy",
        name="E",
    )


@pytest.fixture
def p1p1():
    return FiniteAlgebra.from_products(
        ["1", "a", "b", "ab"],
        [(0, 0), (1, 0), (1, 0), (2, 0)],
        [("a", "b", {"ab": 1})],
        dim=2,
        point_class="ab",
        name="P1xP1",
    )


@pytest.fixture
def bigraded():
    """Chow grading with classes of odd higher degree n; only n decides the sign."""
    return FiniteAlgebra.from_products(
        ["1", "a", "u", "v", "au", "uv"],
        [(0, 0), (1, 0), (1, 1), (1, 1), (2, 1), (2, 2)],
        [("a", "u", {"au": 1}), ("u", "v", {"uv": 1})],
        dim=2,
        point_class="uv",
        name="bigraded",
    )


@pytest.fixture
def diagonal():
    return FiniteAlgebra.from_products(["1", "h"], [(0, 0), (1, 0)], [], dim=1, point_class="h", name="D")


class TestConstruction:
    def test_sign_rule_completion(self, curve):
        x, y = curve.basis_element(1), curve.basis_element(2)
        assert mul(x, y) == curve.element({"xy": 1})
        assert mul(y, x) == curve.element({"xy": -1})
        assert mul(x, x).is_zero()

    def test_odd_higher_degree_anticommutes(self, bigraded):
        assert bigraded.parity == (0, 0, 1, 1, 1, 0)
        u, v = bigraded.basis_element(2), bigraded.basis_element(3)
        assert mul(u, v) == bigraded.element({"uv": 1})
        assert mul(v, u) == bigraded.element({"uv": -1})
        assert mul(u, u).is_zero()

    def test_even_higher_degree_commutes(self, bigraded):
        a, u = bigraded.basis_element(1), bigraded.basis_element(2)
        assert mul(u, a) == mul(a, u) == bigraded.element({"au": 1})
        assert bigraded.associativity_failures() == []

    def test_bigraded_mirror_pair_must_anticommute(self):
        with pytest.raises(AlgebraError, match="sign rule") as info:
            FiniteAlgebra.from_products(
                ["1", "u", "v", "uv"],
                [(0, 0), (1, 1), (1, 1), (2, 2)],
                [("u", "v", {"uv": 1}), ("v", "u", {"uv": 1})],
                dim=2,
            )
        assert info.value.pair == ("u", "v")

    def test_cohomological_codimension(self, curve):
        assert curve.codim(curve.index("x")) == Fraction(1, 2)
        assert curve.codim(curve.index("xy")) == 1
        assert curve.parity == (0, 1, 1, 0)

    def test_conflicting_mirror_pair(self):
        with pytest.raises(AlgebraError, match="sign rule") as info:
            FiniteAlgebra.from_products(
                ["1", "x", "y", "xy"],
                [(0, 0), (1, 0), (1, 0), (2, 0)],
                [("x", "y", {"xy": 1}), ("y", "x", {"xy": 1})],
                dim=1,
                grading=COHOMOLOGICAL,
            )
        assert info.value.pair == ("x", "y")

    def test_non_additive_product(self):
        with pytest.raises(AlgebraError, match="additive") as info:
            FiniteAlgebra.from_products(["1", "a"], [(0, 0), (1, 0)], [("a", "a", {"a": 1})], dim=1)
        assert info.value.pair == ("a", "a")

    def test_codimension_above_dimension(self):
        with pytest.raises(AlgebraError, match="codimension"):
            FiniteAlgebra.from_products(["1", "a"], [(0, 0), (2, 0)], [], dim=1)

    def test_unit_must_be_degree_zero(self):
        with pytest.raises(AlgebraError, match="unit"):
            FiniteAlgebra.from_products(["1", "a"], [(1, 0), (1, 0)], [], dim=1)

    def test_unknown_label_in_product(self):
        with pytest.raises(AlgebraError, match="unknown"):
            FiniteAlgebra.from_products(["1"], [(0, 0)], [("1", "z", {"1": 1})], dim=0)

    def test_associativity_failures(self):
        algebra = FiniteAlgebra.from_products(
            ["1", "x", "y", "xy", "z"],
            [(0, 0), (1, 0), (1, 0), (2, 0), (3, 0)],
            [("x", "y", {"xy": 1}), ("x", "x", {"xy": 1}), ("x", "xy", {"z": 1})],
            dim=3,
        )
        assert ("x", "x", "y") in algebra.associativity_failures()

    def test_exterior_algebra(self):
        ext = FiniteAlgebra.exterior(["dx1", "dx2", "dx3", "dx4"], (1, 0), dim=2)
        assert len(ext) == 16
        assert ext.basis[:5] == ("1", "dx1", "dx2", "dx3", "dx4")
        assert ext.basis[-1] == "dx1^dx2^dx3^dx4"
        assert ext.point_class == len(ext) - 1
        dx1, dx2 = ext.basis_element(1), ext.basis_element(2)
        assert mul(dx2, dx1) == ext.element({"dx1^dx2": -1})
        assert ext.associativity_failures() == []

    def test_point(self):
        point = FiniteAlgebra.point()
        assert point.basis == ("1",)
        assert point.dim == 0


class TestElements:
    def test_arithmetic(self, p1p1):
        a, b = p1p1.element({"a": 1}), p1p1.element({"b": 1})
        s = a + b
        assert power(s, 2) == p1p1.element({"ab": 2})
        assert power(s, 3).is_zero()
        assert (s - a) == b
        assert (-s).as_dict() == {"a": -1, "b": -1}
        assert (s * Fraction(1, 2)).coefficients[1] == Fraction(1, 2)

    def test_owner_mismatch(self, p1p1, diagonal):
        with pytest.raises(AlgebraError, match="owner mismatch"):
            p1p1.one() + diagonal.one()

    def test_exp_log_inverse(self, p1p1):
        x = p1p1.element({"a": 2, "b": -1})
        assert log_unipotent(exp_nilpotent(x)) == x
        assert exp_nilpotent(x) == p1p1.element({"1": 1, "a": 2, "b": -1, "ab": -2})

    def test_components_and_degree(self, p1p1):
        x = p1p1.element({"1": 3, "a": 1, "ab": 5})
        assert x.component(1).as_dict() == {"a": 1}
        assert x.homogeneous_degree() is None
        assert p1p1.element({"a": 1, "b": 1}).homogeneous_degree() == (1, 0, 0)
        assert x.constant_term() == 3

    def test_format(self, p1p1):
        assert format_element(p1p1.element({"a": Fraction(1, 2), "b": -1})) == "1/2*a + -1*b"
        assert format_element(p1p1.zero()) == "0"


class TestLinearMaps:
    @pytest.fixture
    def restriction(self, p1p1, diagonal):
        return LinearMap.from_images(p1p1, diagonal, {"1": {"1": 1}, "a": {"h": 1}, "b": {"h": 1}}, name="res")

    @pytest.fixture
    def gysin(self, p1p1, diagonal):
        return LinearMap.from_images(
            diagonal, p1p1, {"1": {"a": 1, "b": 1}, "h": {"ab": 1}}, MapKind.PUSHFORWARD, 1, "gysin"
        )

    def test_well_formed(self, restriction, gysin):
        assert restriction.failures() == []
        assert gysin.failures() == []
        assert projection_formula_failures(gysin, restriction) == []

    def test_apply(self, restriction, p1p1, diagonal):
        assert apply(restriction, p1p1.element({"a": 2, "ab": 1})) == diagonal.element({"h": 2})

    def test_not_multiplicative(self, p1p1, diagonal):
        bad = LinearMap.from_images(p1p1, diagonal, {"1": {"1": 1}, "a": {"h": 1}, "ab": {"h": 1}}, name="bad")
        problems = bad.failures()
        assert any("breaks the grading" in p for p in problems)
        assert any("not multiplicative" in p for p in problems)

    def test_pushforward_shift(self, p1p1, diagonal):
        shifted = LinearMap.from_images(diagonal, p1p1, {"1": {"a": 1}}, MapKind.PUSHFORWARD, 0, "push")
        assert shifted.failures() == ["push: 1 -> a breaks the grading"]

    def test_compose(self, restriction, gysin, p1p1):
        both = gysin.compose(restriction)
        assert both.source is p1p1 and both.target is p1p1
        assert both.column(p1p1.index("a")) == p1p1.element({"ab": 1})

    def test_projection_formula_failure(self, restriction, p1p1, diagonal):
        wrong = LinearMap.from_images(diagonal, p1p1, {"1": {"a": 1}, "h": {"ab": 1}}, MapKind.PUSHFORWARD, 1, "wrong")
        assert ("1", "a") in projection_formula_failures(wrong, restriction)
