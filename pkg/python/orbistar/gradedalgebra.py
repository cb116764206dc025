"""
Finite bigraded commutative algebras over the rationals.

An algebra is a finite basis with a bidegree ``(p, n)`` and a sign parity per
basis element, and sparse structure constants ``c[i][j][k]``.  ``p`` is the
codimension (or, under the cohomological grading, the cohomological degree, so
that the codimension is ``p/2``) and ``n`` is the higher-Chow degree.
Products obey the sign rule ``x*y = (-1)^(s_x s_y) y*x``.
"""

from __future__ import annotations

import enum
import logging
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import AlgebraError
from .rationals import format_rational

LOGGER = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

CHOW = "chow"
COHOMOLOGICAL = "cohomological"
_GRADING_SCALE = {CHOW: 1, COHOMOLOGICAL: 2}


class FiniteAlgebra:
    """Structure constants of a finite bigraded algebra, validated on construction.

    ``constants`` maps a basis pair ``(i, j)`` to ``{k: c}`` and must already be
    complete; use :meth:`from_products` to build one from a partial table.
    """

    def __init__(
        self,
        basis: Sequence[str],
        bidegree: Sequence[Tuple[int, int]],
        constants: Mapping[Tuple[int, int], Mapping[int, Fraction]],
        dim: int,
        unit: str = "1",
        parity: Optional[Sequence[int]] = None,
        grading: str = CHOW,
        point_class: Optional[str] = None,
        name: str = "algebra",
    ):
        if grading not in _GRADING_SCALE:
            raise AlgebraError(f"{name}: unknown grading {grading!r}")
        if len(set(basis)) != len(basis):
            raise AlgebraError(f"{name}: basis labels must be distinct")
        if len(bidegree) != len(basis):
            raise AlgebraError(f"{name}: {len(bidegree)} bidegrees for {len(basis)} basis elements")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
            raise AlgebraError(f"{name}: dimension must be a nonnegative integer, got {dim!r}")
        self.name = name
        self.basis = tuple(basis)
        self.bidegree = tuple((int(p), int(n)) for p, n in bidegree)
        self.grading = grading
        self.dim = dim
        self._scale = _GRADING_SCALE[grading]
        if parity is None:
            parity = [default_parity(p, n, grading) for p, n in self.bidegree]
        if len(parity) != len(basis) or any(s not in (0, 1) for s in parity):
            raise AlgebraError(f"{name}: parity must be a 0/1 flag per basis element")
        self.parity = tuple(parity)
        self._index = {label: i for i, label in enumerate(self.basis)}
        if unit not in self._index:
            raise AlgebraError(f"{name}: unit {unit!r} is not a basis label")
        self.unit = self._index[unit]
        self.point_class = None if point_class is None else self.index(point_class)
        self._constants = {
            key: {k: Fraction(c) for k, c in row.items() if c != 0} for key, row in constants.items()
        }
        self._constants = {key: row for key, row in self._constants.items() if row}
        self._check_structure()

    @classmethod
    def from_products(
        cls,
        basis: Sequence[str],
        bidegree: Sequence[Tuple[int, int]],
        products: Iterable[Tuple[str, str, Mapping[str, Fraction]]],
        dim: int,
        unit: str = "1",
        parity: Optional[Sequence[int]] = None,
        grading: str = CHOW,
        point_class: Optional[str] = None,
        name: str = "algebra",
    ) -> "FiniteAlgebra":
        """Complete a partial product table.

        Unit products are implicit and unlisted mirrored pairs follow the sign
        rule; a pair listed both ways must satisfy it.
        """
        index = {label: i for i, label in enumerate(basis)}
        if parity is None:
            parity = [default_parity(p, n, grading) for p, n in bidegree]
        if unit not in index:
            raise AlgebraError(f"{name}: unit {unit!r} is not a basis label")
        u = index[unit]
        given: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for a, b, row in products:
            if a not in index or b not in index:
                raise AlgebraError(f"{name}: product ({a}, {b}) uses an unknown basis label", pair=(a, b))
            key = (index[a], index[b])
            if key in given:
                raise AlgebraError(f"{name}: product ({a}, {b}) listed twice", pair=(a, b))
            image = {}
            for c, coeff in row.items():
                if c not in index:
                    raise AlgebraError(f"{name}: product ({a}, {b}) names unknown label {c!r}", pair=(a, b))
                if coeff != 0:
                    image[index[c]] = Fraction(coeff)
            given[key] = image
        constants = dict(given)
        for (i, j), row in given.items():
            sign = -1 if parity[i] and parity[j] else 1
            mirrored = {k: sign * c for k, c in row.items()}
            if (j, i) in given:
                if given[(j, i)] != mirrored:
                    raise AlgebraError(
                        f"{name}: sign rule violated by products ({basis[i]}, {basis[j]}) and ({basis[j]}, {basis[i]})",
                        pair=(basis[i], basis[j]),
                    )
            else:
                constants[(j, i)] = mirrored
        for i in range(len(basis)):
            for key in ((u, i), (i, u)):
                if key not in constants:
                    constants[key] = {i: ONE}
        return cls(basis, bidegree, constants, dim, unit, parity, grading, point_class, name)

    @classmethod
    def point(cls, name: str = "point") -> "FiniteAlgebra":
        return cls(["1"], [(0, 0)], {(0, 0): {0: ONE}}, 0, name=name)

    @classmethod
    def exterior(
        cls,
        generators: Sequence[str],
        generator_bidegree: Tuple[int, int],
        dim: int,
        grading: str = COHOMOLOGICAL,
        point_class: bool = True,
        name: str = "exterior",
    ) -> "FiniteAlgebra":
        """The exterior algebra on the given generators, monomials joined by ``^``.

        Monomials are ordered by length, then lexicographically by generator
        position; the top monomial is the point class when ``point_class`` is set.
        """
        p0, n0 = generator_bidegree
        g_parity = default_parity(p0, n0, grading)
        monomials: List[Tuple[int, ...]] = []
        for size in range(len(generators) + 1):
            monomials.extend(combinations(range(len(generators)), size))
        labels = ["1" if not m else "^".join(generators[i] for i in m) for m in monomials]
        bidegree = [(p0 * len(m), n0 * len(m)) for m in monomials]
        parity = [(g_parity * len(m)) % 2 for m in monomials]
        position = {m: i for i, m in enumerate(monomials)}
        constants = {}
        for (i, s), (j, t) in product(enumerate(monomials), repeat=2):
            if set(s) & set(t):
                continue
            inversions = sum(1 for a in s for b in t if a > b)
            sign = -1 if g_parity and inversions % 2 else 1
            constants[(i, j)] = {position[tuple(sorted(s + t))]: Fraction(sign)}
        top = labels[-1] if point_class else None
        return cls(labels, bidegree, constants, dim, "1", parity, grading, top, name)

    def _check_structure(self):
        n = len(self.basis)
        for i, (p, _) in enumerate(self.bidegree):
            if p < 0 or self.bidegree[i][1] < 0:
                raise AlgebraError(f"{self.name}: negative bidegree on {self.basis[i]}")
            if self.codim(i) > self.dim:
                raise AlgebraError(f"{self.name}: {self.basis[i]} has codimension above the dimension {self.dim}")
        if self.bidegree[self.unit] != (0, 0):
            raise AlgebraError(f"{self.name}: the unit must sit in bidegree (0, 0)")
        for (i, j), row in self._constants.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in row):
                raise AlgebraError(f"{self.name}: structure constant index out of range at {(i, j)}")
            expected = (self.bidegree[i][0] + self.bidegree[j][0], self.bidegree[i][1] + self.bidegree[j][1])
            for k in row:
                if self.bidegree[k] != expected:
                    raise AlgebraError(
                        f"{self.name}: product ({self.basis[i]}, {self.basis[j]}) is not additive in bidegree",
                        pair=(self.basis[i], self.basis[j]),
                    )
        for i, j in product(range(n), repeat=2):
            sign = -1 if self.parity[i] and self.parity[j] else 1
            mirrored = {k: sign * c for k, c in self._constants.get((j, i), {}).items()}
            if self._constants.get((i, j), {}) != mirrored:
                raise AlgebraError(
                    f"{self.name}: sign rule violated on ({self.basis[i]}, {self.basis[j]})",
                    pair=(self.basis[i], self.basis[j]),
                )
        for i in range(n):
            for key in ((self.unit, i), (i, self.unit)):
                if self._constants.get(key, {}) != {i: ONE}:
                    raise AlgebraError(
                        f"{self.name}: unit is not an identity on {self.basis[i]}", pair=(self.basis[self.unit], self.basis[i])
                    )

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"FiniteAlgebra({self.name}, dim={self.dim}, size={len(self.basis)})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise AlgebraError(f"{self.name}: unknown basis label {label!r}") from None

    def codim(self, i: int) -> Fraction:
        return Fraction(self.bidegree[i][0], self._scale)

    def constants(self, i: int, j: int) -> Mapping[int, Fraction]:
        return self._constants.get((i, j), {})

    def associativity_failures(self) -> List[Tuple[str, str, str]]:
        """Basis triples on which ``(ab)c != a(bc)``."""
        failures = []
        n = len(self.basis)
        for a, b, c in product(range(n), repeat=3):
            left: Dict[int, Fraction] = {}
            for k, x in self.constants(a, b).items():
                for m, y in self.constants(k, c).items():
                    left[m] = left.get(m, ZERO) + x * y
            right: Dict[int, Fraction] = {}
            for k, x in self.constants(b, c).items():
                for m, y in self.constants(a, k).items():
                    right[m] = right.get(m, ZERO) + x * y
            if {m: v for m, v in left.items() if v} != {m: v for m, v in right.items() if v}:
                failures.append((self.basis[a], self.basis[b], self.basis[c]))
        return failures

    # element constructors

    def element(self, coefficients: Mapping[str, Fraction] = None) -> "AlgebraElement":
        coeffs = [ZERO] * len(self.basis)
        for label, value in (coefficients or {}).items():
            coeffs[self.index(label)] += Fraction(value)
        return AlgebraElement(self, coeffs)

    def basis_element(self, i: int) -> "AlgebraElement":
        coeffs = [ZERO] * len(self.basis)
        coeffs[i] = ONE
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, [ZERO] * len(self.basis))

    def one(self) -> "AlgebraElement":
        return self.basis_element(self.unit)

    def scalar(self, value) -> "AlgebraElement":
        return self.one().scale(Fraction(value))


def default_parity(p: int, n: int, grading: str = CHOW) -> int:
    """Koszul parity: the higher degree ``n``, plus ``p`` under the cohomological grading."""
    if grading == COHOMOLOGICAL:
        return (p + n) % 2
    return n % 2


class AlgebraElement:
    """A rational coefficient vector over the basis of its owner."""

    __slots__ = ("owner", "coefficients")

    def __init__(self, owner: FiniteAlgebra, coefficients: Sequence[Fraction]):
        if len(coefficients) != len(owner.basis):
            raise AlgebraError(f"{owner.name}: element has {len(coefficients)} coefficients, expected {len(owner.basis)}")
        self.owner = owner
        self.coefficients = tuple(Fraction(c) for c in coefficients)

    def _same_owner(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise AlgebraError(f"cannot combine an element of {self.owner.name} with {type(other).__name__}")
        if other.owner is not self.owner:
            raise AlgebraError(f"owner mismatch: {self.owner.name} vs {other.owner.name}")

    def __add__(self, other):
        self._same_owner(other)
        return AlgebraElement(self.owner, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other):
        self._same_owner(other)
        return AlgebraElement(self.owner, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __neg__(self):
        return AlgebraElement(self.owner, [-a for a in self.coefficients])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return other.owner is self.owner and other.coefficients == self.coefficients

    def __hash__(self):
        return hash((id(self.owner), self.coefficients))

    def __repr__(self):
        return f"AlgebraElement({self.owner.name}: {format_element(self)})"

    def scale(self, factor) -> "AlgebraElement":
        factor = Fraction(factor)
        return AlgebraElement(self.owner, [factor * a for a in self.coefficients])

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def support(self) -> List[int]:
        return [i for i, c in enumerate(self.coefficients) if c]

    def constant_term(self) -> Fraction:
        return self.coefficients[self.owner.unit]

    def component(self, codim: Fraction, n: Optional[int] = None) -> "AlgebraElement":
        """Homogeneous part of the given codimension (and higher degree, if given)."""
        owner = self.owner
        return AlgebraElement(
            owner,
            [
                c if owner.codim(i) == codim and (n is None or owner.bidegree[i][1] == n) else ZERO
                for i, c in enumerate(self.coefficients)
            ],
        )

    def homogeneous_degree(self) -> Optional[Tuple[Fraction, int, int]]:
        """``(codim, n, parity)`` shared by the support, or ``None`` if mixed or zero."""
        degrees = {
            (self.owner.codim(i), self.owner.bidegree[i][1], self.owner.parity[i]) for i in self.support()
        }
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def as_dict(self) -> Dict[str, Fraction]:
        return {self.owner.basis[i]: c for i, c in enumerate(self.coefficients) if c}


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear product through the structure constants."""
    a._same_owner(b)
    owner = a.owner
    result = [ZERO] * len(owner.basis)
    for i in a.support():
        x = a.coefficients[i]
        for j in b.support():
            y = b.coefficients[j]
            for k, c in owner.constants(i, j).items():
                result[k] += x * y * c
    return AlgebraElement(owner, result)


def power(a: AlgebraElement, exponent: int) -> AlgebraElement:
    result = a.owner.one()
    for _ in range(exponent):
        result = mul(result, a)
    return result


def evaluate_series(coefficients: Sequence[Fraction], x: AlgebraElement) -> AlgebraElement:
    """``sum_k coefficients[k] * x^k`` for ``x`` without constant term.

    The sum stops as soon as a power of ``x`` vanishes; it is an error if that
    does not happen before the coefficients run out.
    """
    owner = x.owner
    if any(x.coefficients[i] for i in range(len(owner.basis)) if owner.codim(i) == 0):
        raise AlgebraError(f"{owner.name}: series argument has a codimension-zero part")
    result = owner.zero()
    term = owner.one()
    for coeff in coefficients:
        if term.is_zero():
            return result
        result = result + term.scale(coeff)
        term = mul(term, x)
    if not term.is_zero():
        raise AlgebraError(f"{owner.name}: series truncated before the argument became nilpotent")
    return result


def _series_length(owner: FiniteAlgebra) -> int:
    # any product of more than 2*dim factors of positive codimension vanishes
    return 2 * owner.dim + 2


def exp_nilpotent(x: AlgebraElement) -> AlgebraElement:
    length = _series_length(x.owner)
    coeffs = [ONE]
    for k in range(1, length):
        coeffs.append(coeffs[-1] / k)
    return evaluate_series(coeffs, x)


def log_unipotent(y: AlgebraElement) -> AlgebraElement:
    """``log(y)`` for ``y = 1 + (nilpotent)``."""
    owner = y.owner
    u = y - owner.one()
    coeffs = [ZERO] + [Fraction((-1) ** (k + 1), k) for k in range(1, _series_length(owner))]
    return evaluate_series(coeffs, u)


class MapKind(enum.Enum):
    PULLBACK = "pullback"
    PUSHFORWARD = "pushforward"


class LinearMap:
    """A matrix between two algebras; column ``j`` is the image of source basis element ``j``."""

    def __init__(
        self,
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        matrix: Sequence[Sequence[Fraction]],
        kind: MapKind = MapKind.PULLBACK,
        degree_shift: int = 0,
        name: str = "map",
    ):
        if len(matrix) != len(target.basis) or any(len(row) != len(source.basis) for row in matrix):
            raise AlgebraError(f"{name}: matrix shape does not match {source.name} -> {target.name}")
        self.source = source
        self.target = target
        self.kind = kind
        self.degree_shift = degree_shift
        self.name = name
        self.matrix = tuple(tuple(Fraction(c) for c in row) for row in matrix)

    @classmethod
    def from_images(
        cls,
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        images: Mapping[str, Mapping[str, Fraction]],
        kind: MapKind = MapKind.PULLBACK,
        degree_shift: int = 0,
        name: str = "map",
    ) -> "LinearMap":
        matrix = [[ZERO] * len(source.basis) for _ in target.basis]
        for src, row in images.items():
            j = source.index(src)
            for dst, coeff in row.items():
                matrix[target.index(dst)][j] += Fraction(coeff)
        return cls(source, target, matrix, kind, degree_shift, name)

    @classmethod
    def identity(cls, algebra: FiniteAlgebra, kind: MapKind = MapKind.PULLBACK, name: str = "id") -> "LinearMap":
        size = len(algebra.basis)
        matrix = [[ONE if r == c else ZERO for c in range(size)] for r in range(size)]
        return cls(algebra, algebra, matrix, kind, 0, name)

    def __repr__(self):
        return f"LinearMap({self.name}: {self.source.name} -> {self.target.name}, {self.kind.value})"

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return other.source is self.source and other.target is self.target and other.matrix == self.matrix

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.matrix))

    def column(self, j: int) -> AlgebraElement:
        return AlgebraElement(self.target, [row[j] for row in self.matrix])

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """``self o inner`` as matrices."""
        if inner.target is not self.source:
            raise AlgebraError(f"cannot compose {self.name} after {inner.name}")
        matrix = [
            [sum((self.matrix[r][k] * inner.matrix[k][c] for k in range(len(self.source.basis))), ZERO)
             for c in range(len(inner.source.basis))]
            for r in range(len(self.target.basis))
        ]
        return LinearMap(inner.source, self.target, matrix, self.kind, self.degree_shift + inner.degree_shift,
                         f"{self.name}.{inner.name}")

    def failures(self) -> List[str]:
        """Violations of the axioms of this map's kind."""
        src, tgt = self.source, self.target
        problems = []
        for j in range(len(src.basis)):
            for r, row in enumerate(self.matrix):
                if not row[j]:
                    continue
                shift = self.degree_shift if self.kind is MapKind.PUSHFORWARD else 0
                if tgt.codim(r) != src.codim(j) + shift or tgt.bidegree[r][1] != src.bidegree[j][1] \
                        or tgt.parity[r] != src.parity[j]:
                    problems.append(f"{self.name}: {src.basis[j]} -> {tgt.basis[r]} breaks the grading")
        if self.kind is MapKind.PULLBACK:
            if self.column(src.unit) != tgt.one():
                problems.append(f"{self.name}: unit is not mapped to the unit")
            for i, j in product(range(len(src.basis)), repeat=2):
                lhs = apply(self, mul(src.basis_element(i), src.basis_element(j)))
                rhs = mul(self.column(i), self.column(j))
                if lhs != rhs:
                    problems.append(f"{self.name}: not multiplicative on ({src.basis[i]}, {src.basis[j]})")
        return problems


def apply(linear_map: LinearMap, a: AlgebraElement) -> AlgebraElement:
    if a.owner is not linear_map.source:
        raise AlgebraError(f"{linear_map.name}: element of {a.owner.name} is not in the source {linear_map.source.name}")
    result = [ZERO] * len(linear_map.target.basis)
    for j in a.support():
        x = a.coefficients[j]
        for r, row in enumerate(linear_map.matrix):
            if row[j]:
                result[r] += row[j] * x
    return AlgebraElement(linear_map.target, result)


def projection_formula_failures(push: LinearMap, pull: LinearMap) -> List[Tuple[str, str]]:
    """Basis pairs ``(x, y)`` with ``f_*(x . f^*y) != f_*(x) . y``."""
    if push.source is not pull.target or push.target is not pull.source:
        raise AlgebraError(f"{push.name} and {pull.name} do not form a pushforward/pullback pair")
    sub, ambient = push.source, push.target
    failures = []
    for i, j in product(range(len(sub.basis)), range(len(ambient.basis))):
        x = sub.basis_element(i)
        y = ambient.basis_element(j)
        if apply(push, mul(x, apply(pull, y))) != mul(apply(push, x), y):
            failures.append((sub.basis[i], ambient.basis[j]))
    return failures


def format_element(a: AlgebraElement) -> str:
    terms = [f"{format_rational(c)}*{a.owner.basis[i]}" for i, c in enumerate(a.coefficients) if c]
    return " + ".join(terms) if terms else "0"
