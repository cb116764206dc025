"""
Comparison of an orbifold ring with the ring of a crepant resolution.

A comparison map sends each orbifold basis element to a resolution class; the
designated scalable elements are multiplied by unknown scalars ``s_a``.  The
scalars are never represented numerically: every constraint is linear in the
squares ``s_a^2`` and the pairwise products ``s_a s_b``, grouped by which
scalars occur to an odd power.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

import sympy

from .errors import AlgebraError, ComparisonError, CorpusError
from .gradedalgebra import ZERO, AlgebraElement, FiniteAlgebra, mul
from .orbdata import parse_algebra
from .rationals import format_rational
from .schema import coefficients_at, expect, nonnegative_int_at, rational_at
from .stringy import ProductTable, StringyDegree, Theory, parse_theory

LOGGER = logging.getLogger(__name__)

Monomial = Tuple[str, ...]


@dataclass(frozen=True)
class ResolutionDatum:
    algebra: FiniteAlgebra

    def degree(self, i: int) -> StringyDegree:
        return StringyDegree(self.algebra.codim(i), self.algebra.bidegree[i][1])

    def integrate(self, a: AlgebraElement) -> Fraction:
        """Coefficient of the point class, or zero when none is declared."""
        if self.algebra.point_class is None:
            return ZERO
        return a.coefficients[self.algebra.point_class]


@dataclass(frozen=True)
class IsoCandidate:
    """Orbifold label -> resolution class, with scalable labels and optional fixed scalar data."""

    images: Mapping[str, Mapping[str, Fraction]]
    scalable: FrozenSet[str] = frozenset()
    squares: Mapping[str, Fraction] = field(default_factory=dict)
    pair_products: Mapping[Tuple[str, str], Fraction] = field(default_factory=dict)
    theory: Theory = Theory.CHOW

    def with_scalars(self, squares: Mapping[str, Fraction],
                     pair_products: Optional[Mapping[Tuple[str, str], Fraction]] = None) -> "IsoCandidate":
        return IsoCandidate(self.images, self.scalable, dict(squares), dict(pair_products or {}), self.theory)


def load_resolution(spec, path: str = "$.resolution") -> ResolutionDatum:
    """``{"dim": d, "algebra": ...}``, or a whole document carrying a ``resolution`` block."""
    expect(spec, dict, path, "a resolution object")
    if "resolution" in spec:
        return load_resolution(spec["resolution"], f"{path}.resolution")
    dim = nonnegative_int_at(spec.get("dim"), f"{path}.dim")
    return ResolutionDatum(parse_algebra(spec.get("algebra"), f"{path}.algebra", dim, spec.get("name", "resolution")))


def load_skeleton(spec, path: str = "$.iso_skeleton") -> IsoCandidate:
    """``{"pairs": {label: {basis: coeff}}, "scalable": [labels], "squares": {label: q}?, "theory": t?}``."""
    expect(spec, dict, path, "a skeleton object")
    if "iso_skeleton" in spec:
        return load_skeleton(spec["iso_skeleton"], f"{path}.iso_skeleton")
    pairs = expect(spec.get("pairs"), dict, f"{path}.pairs", "an object of images")
    images = {label: coefficients_at(row, f"{path}.pairs.{label}") for label, row in pairs.items()}
    scalable = expect(spec.get("scalable", []), list, f"{path}.scalable", "a list of labels")
    for label in scalable:
        if label not in images:
            raise CorpusError(f"{path}.scalable", f"scalable label {label!r} has no image")
    squares = {
        label: rational_at(value, f"{path}.squares.{label}")
        for label, value in expect(spec.get("squares", {}), dict, f"{path}.squares", "an object").items()
    }
    try:
        theory = parse_theory(spec.get("theory", Theory.CHOW))
    except (TypeError, ValueError) as exc:
        raise CorpusError(f"{path}.theory", str(exc)) from None
    return IsoCandidate(images, frozenset(scalable), squares, theory=theory)


# ---------------------------------------------------------------------------
# graded dimensions


@dataclass(frozen=True)
class DimensionReport:
    rows: Tuple[Tuple[str, int, int], ...]

    @property
    def match(self) -> bool:
        return all(a == b for _, a, b in self.rows)

    @property
    def first_mismatch(self) -> Optional[str]:
        return next((d for d, a, b in self.rows if a != b), None)


def _degree_key(degree) -> Tuple:
    if isinstance(degree, StringyDegree):
        return (0, degree.n, degree.value)
    return (1, 0, ZERO)


Graded = Union[ProductTable, ResolutionDatum]


def graded_dims(side: Graded) -> Counter:
    """Basis elements per degree; degree-less basis vectors of a product table count as mixed."""
    if isinstance(side, ResolutionDatum):
        return Counter(side.degree(i) for i in range(len(side.algebra)))
    return Counter(side.degrees)


def compare_graded_dims(left: Graded, right: Graded) -> DimensionReport:
    """Per-degree dimension of one basis against another, usually orbifold against resolution."""
    orbifold = graded_dims(left)
    ambient = graded_dims(right)
    rows = []
    for degree in sorted(set(orbifold) | set(ambient), key=_degree_key):
        label = str(degree) if degree is not None else "mixed"
        rows.append((label, orbifold.get(degree, 0), ambient.get(degree, 0)))
    return DimensionReport(tuple(rows))


# ---------------------------------------------------------------------------
# constraint equations


@dataclass(frozen=True)
class Equation:
    """``sum coeff * monomial = 0`` from one basis pair and one resolution coordinate."""

    pair: Tuple[str, str]
    coordinate: str
    signature: FrozenSet[str]
    terms: Mapping[Monomial, Fraction]

    def __str__(self):
        parts = []
        for monomial, coeff in sorted(self.terms.items()):
            name = "*".join(f"s[{m}]" for m in monomial) or "1"
            parts.append(f"{format_rational(coeff)}*{name}")
        return f"{' + '.join(parts)} = 0 at {self.coordinate} for {self.pair}"


def _images(table: ProductTable, resolution: ResolutionDatum, candidate: IsoCandidate) -> List[AlgebraElement]:
    unknown = set(candidate.images) - set(table.labels)
    if unknown:
        raise ComparisonError(f"skeleton names unknown orbifold labels {sorted(unknown)}")
    images = []
    for i, label in enumerate(table.labels):
        if label not in candidate.images:
            raise ComparisonError(f"skeleton gives no image for {label}")
        try:
            image = resolution.algebra.element(candidate.images[label])
        except AlgebraError as exc:
            raise ComparisonError(str(exc)) from None
        degree = table.degrees[i]
        for k in image.support():
            if degree != resolution.degree(k):
                raise ComparisonError(
                    f"map is not degree preserving: {label} in degree {degree} hits {resolution.algebra.basis[k]}"
                )
        images.append(image)
    return images


def _monomial(*labels: Optional[str]) -> Monomial:
    return tuple(sorted(label for label in labels if label is not None))


def _signature(monomial: Monomial) -> FrozenSet[str]:
    counts = Counter(monomial)
    return frozenset(label for label, n in counts.items() if n % 2)


def collect_equations(table: ProductTable, resolution: ResolutionDatum, candidate: IsoCandidate) -> List[Equation]:
    """``phi(x*y) - phi(x)phi(y) = 0`` for every basis pair, split by resolution coordinate and signature."""
    images = _images(table, resolution, candidate)
    algebra = resolution.algebra
    scalar = [label if label in candidate.scalable else None for label in table.labels]
    equations = []
    for i, j in product(range(len(table)), repeat=2):
        terms: Dict[int, Dict[Monomial, Fraction]] = {}

        def add(coordinate, monomial, value):
            row = terms.setdefault(coordinate, {})
            row[monomial] = row.get(monomial, ZERO) + value

        for k, c in table.product(i, j).items():
            for r in images[k].support():
                add(r, _monomial(scalar[k]), c * images[k].coefficients[r])
        right = mul(images[i], images[j])
        for r in right.support():
            add(r, _monomial(scalar[i], scalar[j]), -right.coefficients[r])
        for r, row in sorted(terms.items()):
            groups: Dict[FrozenSet[str], Dict[Monomial, Fraction]] = {}
            for monomial, value in row.items():
                if value:
                    groups.setdefault(_signature(monomial), {})[monomial] = value
            for signature, group in sorted(groups.items(), key=lambda item: sorted(item[0])):
                equations.append(Equation((table.labels[i], table.labels[j]), algebra.basis[r], signature, group))
    return equations


# ---------------------------------------------------------------------------
# solving and checking


@dataclass(frozen=True)
class ScalingSolution:
    status: str
    squares: Mapping[str, Fraction]
    pair_products: Mapping[Tuple[str, str], Fraction]
    free: Tuple[str, ...] = ()
    witness: Optional[Equation] = None

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def _linear_system(equations: List[Equation]):
    variables = sorted({m for e in equations for m in e.terms if m})
    column = {v: n for n, v in enumerate(variables)}
    rows = []
    for e in equations:
        row = [sympy.Integer(0)] * (len(variables) + 1)
        for monomial, coeff in e.terms.items():
            value = sympy.Rational(coeff.numerator, coeff.denominator)
            if monomial:
                row[column[monomial]] += value
            else:
                row[-1] -= value
        rows.append(row)
    return variables, rows


def _consistent(rows, width: int) -> bool:
    if not rows:
        return True
    if not width:
        return all(row[-1] == 0 for row in rows)
    matrix = sympy.Matrix(rows)
    return matrix[:, :width].rank() == matrix.rank()


def solve_scalings(table: ProductTable, resolution: ResolutionDatum, skeleton: IsoCandidate) -> ScalingSolution:
    """Solve every constraint for the squares and pairwise products of the scalars."""
    equations = collect_equations(table, resolution, skeleton)
    for e in equations:
        if len(e.signature) == 1:
            LOGGER.debug("odd equation has no solution: %s", e)
            return ScalingSolution("inconsistent", {}, {}, witness=e)
    even = [e for e in equations if len(e.signature) != 1]
    variables, rows = _linear_system(even)
    width = len(variables)
    if not _consistent(rows, width):
        for n in range(1, len(rows) + 1):
            if not _consistent(rows[:n], width):
                return ScalingSolution("inconsistent", {}, {}, witness=even[n - 1])
    values: Dict[Monomial, Fraction] = {}
    if rows:
        reduced, pivots = sympy.Matrix(rows).rref()
        for r, pivot in enumerate(pivots):
            others = [c for c in range(width) if c != pivot and reduced[r, c] != 0]
            if not others:
                value = sympy.Rational(reduced[r, width])
                values[variables[pivot]] = Fraction(int(value.p), int(value.q))
    squares = {m[0]: v for m, v in values.items() if len(m) == 2 and m[0] == m[1]}
    pair_products = {(m[0], m[1]): v for m, v in values.items() if len(m) == 2 and m[0] != m[1]}
    for (a, b), value in pair_products.items():
        if a in squares and b in squares and value * value != squares[a] * squares[b]:
            witness = Equation((a, b), "-", frozenset((a, b)), {(a, b): value})
            return ScalingSolution("inconsistent", squares, pair_products, witness=witness)
    free = tuple(sorted(label for label in skeleton.scalable if label not in squares))
    free += tuple(f"{a}*{b}" for (a, b) in sorted({tuple(m) for m in variables if len(m) == 2 and m[0] != m[1]})
                  if (a, b) not in pair_products)
    if free:
        LOGGER.warning("scalings underdetermined for %s", ", ".join(free))
        return ScalingSolution("underdetermined", squares, pair_products, free)
    LOGGER.info("solved %d square scalings", len(squares))
    return ScalingSolution("solved", squares, pair_products)


@dataclass(frozen=True)
class IsoReport:
    passed: bool
    witness: Optional[Tuple[str, str]] = None
    detail: str = ""


def _evaluate(e: Equation, candidate: IsoCandidate) -> Optional[Fraction]:
    total = ZERO
    for monomial, coeff in e.terms.items():
        if not monomial:
            total += coeff
        elif len(monomial) == 2 and monomial[0] == monomial[1]:
            if monomial[0] not in candidate.squares:
                raise ComparisonError(f"no value fixed for s[{monomial[0]}]^2")
            total += coeff * candidate.squares[monomial[0]]
        elif len(monomial) == 2 and tuple(monomial) in candidate.pair_products:
            total += coeff * candidate.pair_products[tuple(monomial)]
        else:
            return None
    return total


def check_iso(table: ProductTable, resolution: ResolutionDatum, candidate: IsoCandidate) -> IsoReport:
    """``phi(x*y) = phi(x)phi(y)`` on all basis pairs with the candidate's scalars substituted."""
    for label in candidate.scalable:
        if label not in candidate.squares:
            raise ComparisonError(f"no value fixed for s[{label}]^2")
    for e in collect_equations(table, resolution, candidate):
        value = _evaluate(e, candidate) if len(e.signature) != 1 else None
        if value != 0:
            LOGGER.debug("iso check fails: %s", e)
            return IsoReport(False, e.pair, str(e))
    return IsoReport(True)


@dataclass(frozen=True)
class CompareReport:
    dims: DimensionReport
    solution: Optional[ScalingSolution] = None
    iso: Optional[IsoReport] = None

    @property
    def verdict(self) -> str:
        if not self.dims.match:
            return f"dimension mismatch at degree {self.dims.first_mismatch}"
        if self.solution is None:
            return "dimensions match"
        if self.solution.status != "solved":
            return f"scalings {self.solution.status}"
        if self.iso is None or not self.iso.passed:
            return "not iso"
        values = sorted(set(self.solution.squares.values()))
        if not values:
            return "iso"
        return "iso with " + ", ".join(f"s^2 = {format_rational(v)}" for v in values)

    @property
    def passed(self) -> bool:
        return self.dims.match and (self.solution is None or (self.iso is not None and self.iso.passed))


def compare(table: ProductTable, resolution: ResolutionDatum, skeleton: Optional[IsoCandidate] = None) -> CompareReport:
    """Dimensions, then scalings and the isomorphism check when a skeleton is given."""
    dims = compare_graded_dims(table, resolution)
    if skeleton is None or not dims.match:
        return CompareReport(dims)
    solution = solve_scalings(table, resolution, skeleton)
    if not solution.solved:
        return CompareReport(dims, solution)
    candidate = skeleton.with_scalars(solution.squares, solution.pair_products)
    return CompareReport(dims, solution, check_iso(table, resolution, candidate))
