"""
Rational K-classes in split form and their characteristic classes.

A :class:`KClass` is a formal rational combination of line classes, each given
by its Chern root (an element of codimension one) and a multiplicity.  All
characteristic classes are evaluated as finite power series in the nilpotent
sector algebra.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Tuple

import sympy

from .errors import AlgebraError, NotHonestError
from .gradedalgebra import (
    ONE,
    ZERO,
    AlgebraElement,
    FiniteAlgebra,
    LinearMap,
    MapKind,
    _series_length,
    apply,
    evaluate_series,
    exp_nilpotent,
    format_element,
    log_unipotent,
    mul,
)
from .rationals import format_rational

LOGGER = logging.getLogger(__name__)

Line = Tuple[AlgebraElement, Fraction]


class KClass:
    """Formal sum ``sum_i mult_i [L_i]`` of line classes on one sector algebra.

    Equality is equality of Chern characters.
    """

    __hash__ = None

    def __init__(self, owner: FiniteAlgebra, lines: Iterable[Line] = ()):
        self.owner = owner
        checked = []
        for root, mult in lines:
            if root.owner is not owner:
                raise AlgebraError(f"line root lives in {root.owner.name}, not {owner.name}")
            if not root.is_zero():
                degree = root.homogeneous_degree()
                if degree is None or degree[0] != 1 or degree[1] != 0:
                    raise AlgebraError(f"{owner.name}: Chern root {format_element(root)} is not of bidegree (1, 0)")
            checked.append((root, Fraction(mult)))
        self.lines = tuple(checked)

    @classmethod
    def trivial(cls, owner: FiniteAlgebra, rank) -> "KClass":
        return cls(owner, [(owner.zero(), Fraction(rank))])

    @property
    def rank(self) -> Fraction:
        return sum((m for _, m in self.lines), ZERO)

    def merged(self) -> "KClass":
        """Sum multiplicities of equal roots and drop vanishing lines."""
        totals = {}
        for root, mult in self.lines:
            totals[root.coefficients] = totals.get(root.coefficients, ZERO) + mult
        lines = [
            (AlgebraElement(self.owner, coeffs), mult) for coeffs, mult in sorted(totals.items()) if mult
        ]
        return KClass(self.owner, lines)

    def is_honest(self) -> bool:
        return all(m.denominator == 1 and m >= 0 for _, m in self.merged().lines)

    def _check_owner(self, other: "KClass"):
        if not isinstance(other, KClass) or other.owner is not self.owner:
            raise AlgebraError("K-classes on different sectors cannot be combined")

    def __add__(self, other: "KClass") -> "KClass":
        self._check_owner(other)
        return KClass(self.owner, self.lines + other.lines)

    def __neg__(self) -> "KClass":
        return KClass(self.owner, [(r, -m) for r, m in self.lines])

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def scaled(self, factor) -> "KClass":
        factor = Fraction(factor)
        return KClass(self.owner, [(r, factor * m) for r, m in self.lines])

    def pullback(self, linear_map: LinearMap) -> "KClass":
        """Restrict along a pullback map by pulling back every Chern root."""
        if linear_map.kind is not MapKind.PULLBACK or linear_map.source is not self.owner:
            raise AlgebraError(f"{linear_map.name} cannot pull back a class on {self.owner.name}")
        return KClass(linear_map.target, [(apply(linear_map, r), m) for r, m in self.lines])

    def __eq__(self, other):
        if not isinstance(other, KClass):
            return NotImplemented
        return other.owner is self.owner and ch(self) == ch(other)

    def __repr__(self):
        return f"KClass({self.owner.name}: {describe(self)})"


def describe(k: KClass) -> str:
    terms = []
    for root, mult in k.merged().lines:
        terms.append(f"{format_rational(mult)}[{format_element(root) if not root.is_zero() else 'O'}]")
    return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def todd_coefficients(order: int) -> Tuple[Fraction, ...]:
    """Taylor coefficients of ``t / (1 - exp(-t))`` up to ``t**order``."""
    t = sympy.Symbol("t")
    expansion = sympy.series(t / (1 - sympy.exp(-t)), t, 0, order + 1).removeO()
    coefficients = []
    for k in range(order + 1):
        c = sympy.Rational(expansion.coeff(t, k))
        coefficients.append(Fraction(int(c.p), int(c.q)))
    LOGGER.debug("todd series to order %d: %s", order, coefficients)
    return tuple(coefficients)


def _exp_coefficients(length: int, sign: int = 1) -> List[Fraction]:
    coeffs = [ONE]
    for k in range(1, length):
        coeffs.append(coeffs[-1] * sign / k)
    return coeffs


def ch(k: KClass, truncation: Optional[int] = None) -> AlgebraElement:
    """Chern character ``sum_i mult_i exp(root_i)``."""
    owner = k.owner
    if truncation is not None and truncation < owner.dim:
        raise AlgebraError(f"truncation {truncation} is below the dimension {owner.dim} of {owner.name}")
    result = owner.zero()
    for root, mult in k.lines:
        result = result + exp_nilpotent(root).scale(mult)
    return result


def _log_sum(k: KClass, factor: Callable[[AlgebraElement], AlgebraElement]) -> AlgebraElement:
    """``sum_i mult_i log f(root_i)`` for a factor ``f`` with constant term one."""
    owner = k.owner
    total = owner.zero()
    for root, mult in k.lines:
        if root.is_zero() or not mult:
            continue
        total = total + log_unipotent(factor(root)).scale(mult)
    return total


def todd(k: KClass) -> AlgebraElement:
    """``prod_i Q(root_i)^mult_i`` with ``Q(x) = x / (1 - exp(-x))``."""
    coefficients = todd_coefficients(_series_length(k.owner))
    return exp_nilpotent(_log_sum(k, lambda root: evaluate_series(coefficients, root)))


def total_chern(k: KClass) -> AlgebraElement:
    """``prod_i (1 + root_i)^mult_i``."""
    # a polynomial, not a truncated series
    return exp_nilpotent(_log_sum(k, lambda root: root.owner.one() + root))


def _integral_rank(k: KClass, what: str) -> int:
    rank = k.rank
    if rank.denominator != 1 or rank < 0:
        raise NotHonestError(f"{what} needs a nonnegative integer rank, got {format_rational(rank)} for {describe(k)}")
    return int(rank)


def c_top(k: KClass) -> AlgebraElement:
    """Top Chern class: the codimension-``rank`` part of the total Chern class."""
    rank = _integral_rank(k, "c_top")
    if rank == 0:
        return k.owner.one()
    return total_chern(k).component(Fraction(rank), 0)


def euler_k(k: KClass) -> AlgebraElement:
    """Chern character of ``lambda_{-1}`` of the dual, ``prod_i (1 - exp(-root_i))^mult_i``.

    Only honest classes have a K-theoretic Euler class; after merging equal
    roots every multiplicity must be a nonnegative integer.
    """
    _integral_rank(k, "euler_k")
    owner = k.owner
    length = _series_length(owner)
    factor_coeffs = [ZERO] + [-c for c in _exp_coefficients(length, -1)[1:]]
    result = owner.one()
    for root, mult in k.merged().lines:
        if mult.denominator != 1 or mult < 0:
            raise NotHonestError(f"euler_k of a virtual class: {describe(k)}")
        factor = evaluate_series(factor_coeffs, root)
        for _ in range(int(mult)):
            result = mul(result, factor)
    return result
