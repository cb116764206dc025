from fractions import Fraction

import pytest

from orbistar.errors import CorpusError
from orbistar.schema import bidegree_at, coefficients_at, expect, nonnegative_int_at, rational_at


def test_expect_returns_the_value():
    assert expect({"a": 1}, dict, "$", "an object") == {"a": 1}


@pytest.mark.parametrize("value", [True, "3", 1.0])
def test_expect_rejects_other_types(value):
    with pytest.raises(CorpusError) as info:
        expect(value, int, "$.dim", "an integer")
    assert info.value.path == "$.dim"


def test_rational():
    assert rational_at("-2/4", "$.x") == Fraction(-1, 2)
    with pytest.raises(CorpusError, match=r"\$\.x"):
        rational_at(0.5, "$.x")


@pytest.mark.parametrize("value", [-1, True, "2", None])
def test_nonnegative_int(value):
    with pytest.raises(CorpusError):
        nonnegative_int_at(value, "$.n")


def test_coefficients_locate_the_bad_entry():
    assert coefficients_at({"h": "1/3", "1": 2}, "$.root") == {"h": Fraction(1, 3), "1": Fraction(2)}
    with pytest.raises(CorpusError) as info:
        coefficients_at({"h": "x"}, "$.root")
    assert info.value.path == "$.root.h"


def test_bidegree():
    assert bidegree_at([2, 1], "$.b") == (2, 1)
    with pytest.raises(CorpusError) as info:
        bidegree_at([2, -1], "$.b")
    assert info.value.path == "$.b[1]"
    with pytest.raises(CorpusError):
        bidegree_at([2], "$.b")
