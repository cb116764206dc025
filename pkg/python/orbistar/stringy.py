"""
Stringy products on the inertia variety.

The stringy space is the direct sum of the sector algebras A(X^g) over all
group elements and connected components.  Both theories share the same pull,
multiply, push recipe over the double sectors and differ in the obstruction
factor: the top Chern class for higher Chow groups, and the K-theoretic Euler
class together with the Riemann-Roch correction of the pushforward when
K-classes are represented by their Chern characters.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .errors import AlgebraError, MissingDataError
from .gradedalgebra import ZERO, AlgebraElement, apply, mul
from .kclass import KClass, c_top, euler_k, todd
from .orbdata import OrbifoldDatum, SectorComponent, memoized
from .rationals import format_rational

LOGGER = logging.getLogger(__name__)


class Theory(str, enum.Enum):
    CHOW = "chow"
    KTHEORY = "ktheory-ch"


_THEORY_ALIASES = {"chow": Theory.CHOW, "k": Theory.KTHEORY, "ktheory": Theory.KTHEORY, "ktheory-ch": Theory.KTHEORY}


def parse_theory(value: Union[str, Theory]) -> Theory:
    if isinstance(value, Theory):
        return value
    try:
        return _THEORY_ALIASES[value]
    except KeyError:
        raise ValueError(f"unknown theory {value!r}; expected one of {sorted(_THEORY_ALIASES)}") from None


MIXED = "mixed"


@dataclass(frozen=True)
class StringyDegree:
    value: Fraction
    n: int = 0

    def __add__(self, other: "StringyDegree") -> "StringyDegree":
        return StringyDegree(self.value + other.value, self.n + other.n)

    def __str__(self):
        text = format_rational(self.value)
        return text if not self.n else f"({text}, {self.n})"


class StringyElement:
    """Sector components of an element of the stringy space; zero parts are dropped."""

    __slots__ = ("datum", "parts", "theory")

    def __init__(self, datum: OrbifoldDatum, parts: Mapping[SectorComponent, AlgebraElement], theory: Theory):
        for component, value in parts.items():
            if value.owner is not component.algebra:
                raise AlgebraError(f"component {datum.label(component)} holds an element of {value.owner.name}")
        self.datum = datum
        self.theory = parse_theory(theory)
        self.parts = {c: v for c, v in parts.items() if not v.is_zero()}

    def _combine(self, other: "StringyElement", sign: int) -> "StringyElement":
        if other.datum is not self.datum or other.theory is not self.theory:
            raise AlgebraError("stringy elements of different data or theories cannot be combined")
        parts = dict(self.parts)
        for c, v in other.parts.items():
            parts[c] = parts[c] + v.scale(sign) if c in parts else v.scale(sign)
        return StringyElement(self.datum, parts, self.theory)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, factor) -> "StringyElement":
        return StringyElement(self.datum, {c: v.scale(factor) for c, v in self.parts.items()}, self.theory)

    def __eq__(self, other):
        if not isinstance(other, StringyElement):
            return NotImplemented
        return other.datum is self.datum and other.parts == self.parts

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.parts

    def component(self, c: SectorComponent) -> AlgebraElement:
        return self.parts.get(c, c.algebra.zero())

    def __repr__(self):
        return f"StringyElement({format_stringy(self)})"


def zero(datum: OrbifoldDatum, theory: Theory) -> StringyElement:
    return StringyElement(datum, {}, theory)


def basis_element(datum: OrbifoldDatum, c: SectorComponent, i: int, theory: Theory) -> StringyElement:
    return StringyElement(datum, {c: c.algebra.basis_element(i)}, theory)


def unit(datum: OrbifoldDatum, theory: Theory) -> StringyElement:
    """The untwisted fundamental class."""
    return StringyElement(datum, {c: c.algebra.one() for c in datum.untwisted}, theory)


@memoized
def stringy_basis(datum: OrbifoldDatum) -> Tuple[Tuple[SectorComponent, int], ...]:
    """Basis of the stringy space ordered by group element, component, then basis index."""
    return tuple(
        (c, i) for g in datum.group.elements for c in datum.components((g,)) for i in range(len(c.algebra))
    )


def sector_keys(datum: OrbifoldDatum) -> Tuple[Tuple[str, int], ...]:
    """``(element labels @ locus, basis index)`` for every stringy basis vector."""
    return tuple((datum.label(c), i) for c, i in stringy_basis(datum))


def basis_label(datum: OrbifoldDatum, c: SectorComponent, i: int) -> str:
    return f"{datum.label(c)}:{c.algebra.basis[i]}"


def stringy_labels(datum: OrbifoldDatum) -> Tuple[str, ...]:
    return tuple(basis_label(datum, c, i) for c, i in stringy_basis(datum))


@memoized
def _positions(datum: OrbifoldDatum) -> Dict[Tuple[SectorComponent, int], int]:
    return {entry: k for k, entry in enumerate(stringy_basis(datum))}


def to_vector(x: StringyElement) -> Tuple[Fraction, ...]:
    vector = [ZERO] * len(stringy_basis(x.datum))
    positions = _positions(x.datum)
    for c, value in x.parts.items():
        for i in value.support():
            vector[positions[(c, i)]] = value.coefficients[i]
    return tuple(vector)


def from_vector(datum: OrbifoldDatum, vector: Sequence[Fraction], theory: Theory) -> StringyElement:
    parts: Dict[SectorComponent, List[Fraction]] = {}
    for (c, i), value in zip(stringy_basis(datum), vector):
        if value:
            parts.setdefault(c, [ZERO] * len(c.algebra))[i] = Fraction(value)
    return StringyElement(datum, {c: AlgebraElement(c.algebra, v) for c, v in parts.items()}, theory)


def format_stringy(x: StringyElement) -> str:
    labels = stringy_labels(x.datum)
    terms = [f"{format_rational(v)}*{labels[k]}" for k, v in enumerate(to_vector(x)) if v]
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# ages, Im-classes and obstruction classes


def im_class(datum: OrbifoldDatum, g: int, component: SectorComponent) -> KClass:
    """The logarithmic trace ``sum_k alpha_k [W_{g,k}]`` on a component of X^g."""
    return datum.eigen(g, component.locus).im_class()


def age(datum: OrbifoldDatum, g: int, component: SectorComponent) -> Fraction:
    return im_class(datum, g, component).rank


def ages(datum: OrbifoldDatum) -> List[Tuple[str, str, Fraction]]:
    """``(element, locus, age)`` for every sector component in stringy basis order."""
    return [
        (datum.group.labels[g], c.locus.name, age(datum, g, c))
        for g in datum.group.elements
        for c in datum.components((g,))
    ]


def _restricted_im(datum: OrbifoldDatum, g: int, target: SectorComponent, locus) -> KClass:
    pullback = datum.correspondences.pullback(locus, target.locus)
    return im_class(datum, g, target).pullback(pullback)


@memoized
def _obstruction(datum: OrbifoldDatum, component: SectorComponent) -> KClass:
    g1, g2 = component.elements
    maps = datum.double_maps(component)
    locus = component.locus
    g_inv = datum.group.inverse(datum.group.multiply(g1, g2))
    total = (
        _restricted_im(datum, g1, maps.first, locus)
        + _restricted_im(datum, g2, maps.second, locus)
        + _restricted_im(datum, g_inv, maps.inverse, locus)
        - datum.normal_class(locus)
    )
    return total.merged()


def obstruction(datum: OrbifoldDatum, g1: int, g2: int, component: SectorComponent) -> KClass:
    """``e1*Im_g1 + e2*Im_g2 + (sigma mu)*Im_(g1g2)^-1 - N`` on a component of X^{g1,g2}, merged."""
    if component.elements != (g1, g2):
        raise MissingDataError(f"{datum.label(component)} is not a component of X^({g1},{g2})")
    return _obstruction(datum, component)


def riemann_roch_factor(datum: OrbifoldDatum, sub, ambient) -> AlgebraElement:
    """``td(-N_sub(ambient))``, the factor turning a pushforward into a K-theoretic one."""
    return todd(-datum.relative_normal(sub, ambient))


@memoized
def _product_factor(datum: OrbifoldDatum, component: SectorComponent, theory: Theory) -> AlgebraElement:
    r = _obstruction(datum, component)
    if theory is Theory.CHOW:
        return c_top(r)
    maps = datum.double_maps(component)
    return mul(euler_k(r), riemann_roch_factor(datum, component.locus, maps.product.locus))


def stringy_mul(datum: OrbifoldDatum, x: StringyElement, y: StringyElement) -> StringyElement:
    """``x * y = sum mu_*(e1*x . e2*y . f(R))`` over the double sectors."""
    if x.theory is not y.theory:
        raise AlgebraError("stringy factors carry different theory tags")
    theory = x.theory
    result: Dict[SectorComponent, AlgebraElement] = {}
    for cx, a in x.parts.items():
        g1 = cx.elements[0]
        for cy, b in y.parts.items():
            g2 = cy.elements[0]
            for component in datum.components((g1, g2)):
                maps = datum.double_maps(component)
                if maps.first != cx or maps.second != cy:
                    continue
                pulled = mul(apply(maps.e1, a), apply(maps.e2, b))
                if pulled.is_zero():
                    continue
                pushed = apply(maps.mu_push, mul(pulled, _product_factor(datum, component, theory)))
                target = maps.product
                result[target] = result[target] + pushed if target in result else pushed
    return StringyElement(datum, result, theory)


# ---------------------------------------------------------------------------
# group action and invariants


def g_act(datum: OrbifoldDatum, h: int, x: StringyElement) -> StringyElement:
    """``h.(g, L, a) = (hgh^-1, hL, T_h a)``."""
    action = datum.gaction
    result: Dict[SectorComponent, AlgebraElement] = {}
    for c, value in x.parts.items():
        g = c.elements[0]
        target_locus = action.move(h, c.locus)
        conj = datum.group.conjugate(h, g)
        matches = [t for t in datum.components((conj,)) if t.locus is target_locus]
        if len(matches) != 1:
            raise MissingDataError(
                f"{datum.group.labels[h]} moves {datum.label(c)} to {target_locus.name}, "
                f"which is not a component of X^{datum.group.labels[conj]}"
            )
        image = apply(action.transport(h, c.locus), value)
        target = matches[0]
        result[target] = result[target] + image if target in result else image
    return StringyElement(datum, result, x.theory)


@memoized
def action_matrix(datum: OrbifoldDatum, h: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Matrix of ``h`` on the stringy space; column ``k`` is the image of basis vector ``k``."""
    columns = [
        to_vector(g_act(datum, h, basis_element(datum, c, i, Theory.CHOW))) for c, i in stringy_basis(datum)
    ]
    size = len(columns)
    return tuple(tuple(columns[col][row] for col in range(size)) for row in range(size))


def _to_sympy(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows])


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _row_basis(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[Tuple[Fraction, ...]], Tuple[int, ...]]:
    """Reduced row echelon basis of the span of ``rows`` and its pivot columns."""
    if not rows or not rows[0]:
        return [], ()
    reduced, pivots = _to_sympy(rows).rref()
    basis = [tuple(_from_sympy(reduced[r, c]) for c in range(reduced.cols)) for r in range(len(pivots))]
    return basis, tuple(pivots)


@dataclass(frozen=True)
class Projector:
    """The averaging idempotent and the reduced basis of its image."""

    matrix: Tuple[Tuple[Fraction, ...], ...]
    image_basis: Tuple[Tuple[Fraction, ...], ...]
    pivots: Tuple[int, ...]
    labels: Tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.image_basis)

    def coordinates(self, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """Coordinates of an invariant vector in the image basis."""
        coords = tuple(Fraction(vector[p]) for p in self.pivots)
        rebuilt = [sum((c * b[k] for c, b in zip(coords, self.image_basis)), ZERO) for k in range(len(vector))]
        if tuple(rebuilt) != tuple(vector):
            raise AlgebraError("vector is not invariant")
        return coords


@memoized
def invariant_projector(datum: OrbifoldDatum, theory: Theory = Theory.CHOW) -> Projector:
    """``(1/|G|) sum_h h`` on the stringy space, with a row-reduced basis of its image.

    The action does not depend on the theory; the argument only tags the result.
    """
    size = len(stringy_basis(datum))
    order = datum.group.order
    total = [[ZERO] * size for _ in range(size)]
    for h in datum.group.elements:
        matrix = action_matrix(datum, h)
        for r in range(size):
            for c in range(size):
                total[r][c] += matrix[r][c]
    projector = tuple(tuple(v / order for v in row) for row in total)
    columns = [[projector[r][c] for r in range(size)] for c in range(size)]
    image, pivots = _row_basis(columns)
    labels = stringy_labels(datum)
    names = []
    for vector, pivot in zip(image, pivots):
        support = [k for k, v in enumerate(vector) if v]
        names.append(labels[pivot] if support == [pivot] else f"Σ{labels[pivot]}")
    LOGGER.info("invariant subspace of %s: %d of %d dimensions", datum.name, len(image), size)
    return Projector(projector, tuple(image), pivots, tuple(names))


def sector_decomposition(datum: OrbifoldDatum) -> Dict[str, int]:
    """Per conjugacy class representative g, the dimension of ``A(X^g)^{Z(g)}``."""
    result = {}
    positions = _positions(datum)
    for cls in datum.group.conjugacy_classes():
        g = cls.representative
        block = [positions[(c, i)] for c in datum.components((g,)) for i in range(len(c.algebra))]
        centralizer = sorted(datum.group.centralizer(g))
        averaged = [[ZERO] * len(block) for _ in block]
        for h in centralizer:
            matrix = action_matrix(datum, h)
            for r, row in enumerate(block):
                for c, col in enumerate(block):
                    averaged[r][c] += matrix[row][col]
        if not block:
            result[datum.group.labels[g]] = 0
            continue
        result[datum.group.labels[g]] = _to_sympy(averaged).rank()
    return result


# ---------------------------------------------------------------------------
# degrees, Chern character and tables


def stringy_degree(datum: OrbifoldDatum, x: StringyElement) -> Union[StringyDegree, str, None]:
    """Age-shifted degree of ``x``; ``MIXED`` if components disagree, ``None`` for zero."""
    degrees = set()
    for c, value in x.parts.items():
        degree = value.homogeneous_degree()
        if degree is None:
            return MIXED
        codim, n, _ = degree
        degrees.add(StringyDegree(codim + age(datum, c.elements[0], c), n))
    if not degrees:
        return None
    if len(degrees) > 1:
        return MIXED
    return degrees.pop()


def parity(x: StringyElement) -> Optional[int]:
    parities = {value.owner.parity[i] for value in x.parts.values() for i in value.support()}
    return parities.pop() if len(parities) == 1 else None


def stringy_chern(datum: OrbifoldDatum, x: StringyElement) -> StringyElement:
    """``ch(x_g) . td^-1(Im_g)`` on every component, retagged as a Chow element."""
    if x.theory is not Theory.KTHEORY:
        raise AlgebraError("the stringy Chern character takes a K-theory element")
    parts = {c: mul(value, todd(-im_class(datum, c.elements[0], c))) for c, value in x.parts.items()}
    return StringyElement(datum, parts, Theory.CHOW)


@dataclass(frozen=True)
class ProductTable:
    """Structure constants ``e_i * e_j = sum_k c[i, j][k] e_k`` on a labelled basis."""

    theory: Theory
    labels: Tuple[str, ...]
    entries: Dict[Tuple[int, int], Dict[int, Fraction]]
    degrees: Tuple[Optional[StringyDegree], ...]
    parities: Tuple[int, ...]
    keys: Tuple[Tuple[str, int], ...] = ()

    def __len__(self):
        return len(self.labels)

    def sector_order(self) -> List[int]:
        """Basis positions sorted by sector key, then by basis index within the sector."""
        if not self.keys:
            return list(range(len(self)))
        return sorted(range(len(self)), key=lambda n: self.keys[n])

    def product(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.entries.get((i, j), {})

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise MissingDataError(f"no basis element labelled {label!r}") from None


@memoized
def _basis_products(datum: OrbifoldDatum, theory: Theory) -> Dict[Tuple[int, int], Tuple[Fraction, ...]]:
    basis = stringy_basis(datum)
    elements = [basis_element(datum, c, i, theory) for c, i in basis]
    products = {}
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            product_ = stringy_mul(datum, x, y)
            if not product_.is_zero():
                products[(i, j)] = to_vector(product_)
    LOGGER.info("computed %d nonzero %s products on %s", len(products), theory.value, datum.name)
    return products


def multiply_vectors(datum: OrbifoldDatum, u: Sequence[Fraction], v: Sequence[Fraction], theory: Theory) -> Tuple[Fraction, ...]:
    """Bilinear product of two stringy coordinate vectors through the cached basis table."""
    theory = parse_theory(theory)
    products = _basis_products(datum, theory)
    size = len(u)
    result = [ZERO] * size
    left = [i for i, a in enumerate(u) if a]
    right = [j for j, b in enumerate(v) if b]
    for i in left:
        for j in right:
            entry = products.get((i, j))
            if entry is None:
                continue
            coeff = u[i] * v[j]
            for k, value in enumerate(entry):
                if value:
                    result[k] += coeff * value
    return tuple(result)


def _vector_degree(datum: OrbifoldDatum, vector, theory) -> Optional[StringyDegree]:
    degree = stringy_degree(datum, from_vector(datum, vector, theory))
    return degree if isinstance(degree, StringyDegree) else None


def product_table(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW, invariant: bool = False) -> ProductTable:
    """Full multiplication table on the stringy basis, or on the invariant basis."""
    theory = parse_theory(theory)
    size = len(stringy_basis(datum))
    if not invariant:
        entries = {
            key: {k: v for k, v in enumerate(vector) if v}
            for key, vector in _basis_products(datum, theory).items()
        }
        identity = [tuple(Fraction(int(r == c)) for c in range(size)) for r in range(size)]
        degrees = tuple(_vector_degree(datum, v, theory) for v in identity)
        parities = tuple(c.algebra.parity[i] for c, i in stringy_basis(datum))
        return ProductTable(theory, stringy_labels(datum), entries, degrees, parities, sector_keys(datum))
    projector = invariant_projector(datum, theory)
    entries = {}
    for i, u in enumerate(projector.image_basis):
        for j, v in enumerate(projector.image_basis):
            coords = projector.coordinates(multiply_vectors(datum, u, v, theory))
            row = {k: c for k, c in enumerate(coords) if c}
            if row:
                entries[(i, j)] = row
    degrees = tuple(_vector_degree(datum, v, theory) for v in projector.image_basis)
    parities = tuple(parity(from_vector(datum, v, theory)) or 0 for v in projector.image_basis)
    keys = sector_keys(datum)
    return ProductTable(theory, projector.labels, entries, degrees, parities, tuple(keys[p] for p in projector.pivots))
