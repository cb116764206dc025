"""
Exact re-execution of the identities satisfied by stringy products.

Every check enumerates basis elements and returns one :class:`CheckReport` per
instance (group element, tuple or sector component).  Identity failures are
reports; missing data and non-honest classes encountered on the way are
reported as failures of the instance that needed them.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

import sympy

from .errors import OrbistarError
from .gradedalgebra import AlgebraElement, apply, mul
from .kclass import KClass, c_top, describe, euler_k
from .orbdata import OrbifoldDatum, SectorComponent, validate
from .report import CheckReport, failed, passed
from .stringy import (
    Theory,
    _obstruction,
    _positions,
    _restricted_im,
    action_matrix,
    format_stringy,
    from_vector,
    im_class,
    invariant_projector,
    multiply_vectors,
    parse_theory,
    product_table,
    riemann_roch_factor,
    sector_decomposition,
    stringy_basis,
    stringy_chern,
    stringy_degree,
    stringy_labels,
    to_vector,
    unit,
)

LOGGER = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def _guarded(check: str, instance: str, body: Callable[[], CheckReport]) -> CheckReport:
    try:
        return body()
    except OrbistarError as exc:
        return failed(check, instance, f"{type(exc).__name__}: {exc}")


def _unit_vector(size: int, k: int) -> Vector:
    return tuple(Fraction(int(i == k)) for i in range(size))


def _sector_positions(datum: OrbifoldDatum, g: int) -> List[int]:
    return [k for k, (c, _) in enumerate(stringy_basis(datum)) if c.elements[0] == g]


def _show(datum: OrbifoldDatum, vector: Sequence[Fraction], theory: Theory) -> str:
    return format_stringy(from_vector(datum, vector, theory))


# ---------------------------------------------------------------------------
# K-class identities


def check_eq6(datum: OrbifoldDatum) -> List[CheckReport]:
    """``Im_g + sigma*Im_(g^-1) = N_{X^g}X`` on every component of every X^g."""
    reports = []
    group = datum.group
    for g in group.elements:
        for component in datum.components((g,)):
            instance = datum.label(component)

            def body(g=g, component=component, instance=instance):
                mirror = datum.containing((group.inverse(g),), component.locus)
                lhs = im_class(datum, g, component) + _restricted_im(datum, group.inverse(g), mirror, component.locus)
                rhs = datum.normal_class(component.locus)
                if lhs != rhs:
                    return failed("eq6", instance, f"g={group.labels[g]}", describe(lhs), describe(rhs))
                return passed("eq6", instance)

            reports.append(_guarded("eq6", instance, body))
    return reports


def _triple_classes(datum: OrbifoldDatum, component: SectorComponent) -> Dict[str, KClass]:
    """Restricted obstruction and excess classes on one triple component."""
    maps = datum.triple_maps(component)
    locus = component.locus
    corner_product = datum.double_maps(maps.outer_left).first
    corner_right = datum.double_maps(maps.outer_right).second
    excess12 = datum.relative_normal(maps.outer_left.locus, corner_product.locus).pullback(maps.mu12_3) \
        - datum.relative_normal(locus, maps.left.locus)
    excess23 = datum.relative_normal(maps.outer_right.locus, corner_right.locus).pullback(maps.mu1_23) \
        - datum.relative_normal(locus, maps.right.locus)
    return {
        "r12": _obstruction(datum, maps.left).pullback(maps.e12),
        "r12_3": _obstruction(datum, maps.outer_left).pullback(maps.mu12_3),
        "r1_23": _obstruction(datum, maps.outer_right).pullback(maps.mu1_23),
        "r23": _obstruction(datum, maps.right).pullback(maps.e23),
        "e12": excess12,
        "e23": excess23,
    }


def _closed_form(datum: OrbifoldDatum, component: SectorComponent) -> KClass:
    """``sum_i Im_gi + Im_(g1g2g3)^-1 - N_T X`` restricted to a triple component."""
    group = datum.group
    maps = datum.triple_maps(component)
    g1, g2, g3 = component.elements
    total = -datum.normal_class(component.locus)
    for g, corner in zip((g1, g2, g3), maps.corners[:3]):
        total = total + _restricted_im(datum, g, corner, component.locus)
    inverse = group.inverse(group.product(g1, g2, g3))
    total = total + _restricted_im(datum, inverse, datum.containing((inverse,), component.locus), component.locus)
    return total


def check_obstruction_identity(datum: OrbifoldDatum, g1: int, g2: int, g3: int) -> CheckReport:
    """``R(g1,g2)| + R(g1g2,g3)| + E12 = R(g1,g2g3)| + R(g2,g3)| + E23``, both against the closed form."""
    labels = datum.group.labels
    instance = f"{labels[g1]},{labels[g2]},{labels[g3]}"

    def body():
        for component in datum.components((g1, g2, g3)):
            classes = _triple_classes(datum, component)
            left = classes["r12"] + classes["r12_3"] + classes["e12"]
            right = classes["r1_23"] + classes["r23"] + classes["e23"]
            closed = _closed_form(datum, component)
            where = f"on {component.locus.name}"
            if left != right:
                return failed("eq1", instance, where, describe(left), describe(right))
            if left != closed:
                return failed("eq1", instance, f"{where} against the closed form", describe(left), describe(closed))
        return passed("eq1", instance)

    return _guarded("eq1", instance, body)


def check_obstruction_identities(datum: OrbifoldDatum) -> List[CheckReport]:
    return [check_obstruction_identity(datum, *t) for t in product(datum.group.elements, repeat=3)]


def check_compare_identity(datum: OrbifoldDatum) -> List[CheckReport]:
    """``N_{X^g}X| - N_D X - R - Im_g| = -e1*Im_g1 - e2*Im_g2`` on every double component D."""
    reports = []
    for component in datum.double_components():
        instance = datum.label(component)

        def body(component=component, instance=instance):
            g1, g2 = component.elements
            maps = datum.double_maps(component)
            g = maps.product.elements[0]
            locus = component.locus
            lhs = (
                datum.normal_class(maps.product.locus).pullback(maps.mu)
                - datum.normal_class(locus)
                - _obstruction(datum, component)
                - _restricted_im(datum, g, maps.product, locus)
            )
            rhs = -(_restricted_im(datum, g1, maps.first, locus) + _restricted_im(datum, g2, maps.second, locus))
            if lhs != rhs:
                return failed("compare", instance, "", describe(lhs), describe(rhs))
            return passed("compare", instance)

        reports.append(_guarded("compare", instance, body))
    return reports


# ---------------------------------------------------------------------------
# product identities


def _factor(datum: OrbifoldDatum, component: SectorComponent, theory: Theory, side: str) -> AlgebraElement:
    classes = _triple_classes(datum, component)
    keys = ("r12", "r12_3", "e12") if side == "left" else ("r1_23", "r23", "e23")
    top = c_top if theory is Theory.CHOW else euler_k
    result = component.algebra.one()
    for key in keys:
        result = mul(result, top(classes[key]))
    if theory is Theory.KTHEORY:
        corner = datum.triple_maps(component).corners[3]
        result = mul(result, riemann_roch_factor(datum, component.locus, corner.locus))
    return result


def _through_triples(datum, components, factors, x, y, z) -> Vector:
    """``j4_*(j1*x . j2*y . j3*z . F)`` summed over the triple components."""
    result = [Fraction(0)] * len(stringy_basis(datum))
    positions = _positions(datum)
    (cx, ix), (cy, iy), (cz, iz) = x, y, z
    for component in components:
        maps = datum.triple_maps(component)
        if maps.corners[:3] != (cx, cy, cz):
            continue
        pulled = mul(
            mul(apply(maps.j[0], cx.algebra.basis_element(ix)), apply(maps.j[1], cy.algebra.basis_element(iy))),
            apply(maps.j[2], cz.algebra.basis_element(iz)),
        )
        if pulled.is_zero():
            continue
        pushed = apply(maps.j4_push, mul(pulled, factors[component]))
        for i in pushed.support():
            result[positions[(maps.corners[3], i)]] += pushed.coefficients[i]
    return tuple(result)


def check_associativity(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW) -> List[CheckReport]:
    """``(x*y)*z = x*(y*z)`` on all basis triples, also evaluated through the triple diagrams."""
    theory = parse_theory(theory)
    check = f"assoc[{theory.value}]"
    basis = stringy_basis(datum)
    size = len(basis)
    labels = stringy_labels(datum)
    group = datum.group
    reports = []
    for g1, g2, g3 in product(group.elements, repeat=3):
        instance = f"{group.labels[g1]},{group.labels[g2]},{group.labels[g3]}"

        def body(g1=g1, g2=g2, g3=g3, instance=instance):
            components = datum.components((g1, g2, g3))
            factors = {c: (_factor(datum, c, theory, "left"), _factor(datum, c, theory, "right")) for c in components}
            left_factors = {c: f[0] for c, f in factors.items()}
            right_factors = {c: f[1] for c, f in factors.items()}
            pairs = {}

            def pair(a, b):
                if (a, b) not in pairs:
                    pairs[(a, b)] = multiply_vectors(datum, _unit_vector(size, a), _unit_vector(size, b), theory)
                return pairs[(a, b)]

            for i, j, k in product(_sector_positions(datum, g1), _sector_positions(datum, g2), _sector_positions(datum, g3)):
                left = multiply_vectors(datum, pair(i, j), _unit_vector(size, k), theory)
                right = multiply_vectors(datum, _unit_vector(size, i), pair(j, k), theory)
                witness = f"({labels[i]}, {labels[j]}, {labels[k]})"
                if left != right:
                    return failed(check, instance, witness, _show(datum, left, theory), _show(datum, right, theory))
                via_left = _through_triples(datum, components, left_factors, basis[i], basis[j], basis[k])
                if via_left != left:
                    return failed(check, instance, f"{witness} through the triple diagram",
                                  _show(datum, left, theory), _show(datum, via_left, theory))
                via_right = _through_triples(datum, components, right_factors, basis[i], basis[j], basis[k])
                if via_right != right:
                    return failed(check, instance, f"{witness} through the triple diagram",
                                  _show(datum, right, theory), _show(datum, via_right, theory))
            return passed(check, instance)

        reports.append(_guarded(check, instance, body))
    return reports


def _column(matrix, k: int) -> Vector:
    return tuple(row[k] for row in matrix)


def check_commutativity(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW) -> List[CheckReport]:
    """Twisted commutativity ``x*y = (-1)^(s_x s_y) y*(h^-1.x)`` and signed commutativity on invariants."""
    theory = parse_theory(theory)
    check = f"comm[{theory.value}]"
    basis = stringy_basis(datum)
    size = len(basis)
    labels = stringy_labels(datum)
    group = datum.group
    reports = []
    for g, h in product(group.elements, repeat=2):
        instance = f"{group.labels[g]},{group.labels[h]}"

        def body(g=g, h=h, instance=instance):
            act = action_matrix(datum, group.inverse(h))
            for i, j in product(_sector_positions(datum, g), _sector_positions(datum, h)):
                ei, ej = _unit_vector(size, i), _unit_vector(size, j)
                sign = -1 if basis[i][0].algebra.parity[basis[i][1]] and basis[j][0].algebra.parity[basis[j][1]] else 1
                lhs = multiply_vectors(datum, ei, ej, theory)
                rhs = tuple(sign * v for v in multiply_vectors(datum, ej, _column(act, i), theory))
                if lhs != rhs:
                    return failed(check, instance, f"({labels[i]}, {labels[j]})",
                                  _show(datum, lhs, theory), _show(datum, rhs, theory))
            return passed(check, instance)

        reports.append(_guarded(check, instance, body))

    def invariant_body():
        table = product_table(datum, theory, invariant=True)
        for i, j in product(range(len(table)), repeat=2):
            sign = -1 if table.parities[i] and table.parities[j] else 1
            mirrored = {k: sign * v for k, v in table.product(j, i).items()}
            if table.product(i, j) != mirrored:
                return failed(check, "invariant", f"({table.labels[i]}, {table.labels[j]})",
                              table.product(i, j), mirrored)
        return passed(check, "invariant")

    reports.append(_guarded(check, "invariant", invariant_body))
    return reports


def _chern_columns(datum: OrbifoldDatum) -> List[Vector]:
    size = len(stringy_basis(datum))
    return [
        to_vector(stringy_chern(datum, from_vector(datum, _unit_vector(size, k), Theory.KTHEORY)))
        for k in range(size)
    ]


def _apply_columns(columns: Sequence[Vector], vector: Sequence[Fraction]) -> Vector:
    result = [Fraction(0)] * len(vector)
    for k, v in enumerate(vector):
        if v:
            for r, entry in enumerate(columns[k]):
                if entry:
                    result[r] += v * entry
    return tuple(result)


def check_chern_multiplicative(datum: OrbifoldDatum) -> List[CheckReport]:
    """``Ch(x * y) = Ch(x) * Ch(y)`` from the K-theoretic to the Chow product, plus the comparison identity."""
    size = len(stringy_basis(datum))
    labels = stringy_labels(datum)
    group = datum.group
    reports = []
    try:
        columns = _chern_columns(datum)
    except OrbistarError as exc:
        return [failed("chern", "all", f"{type(exc).__name__}: {exc}")]
    for g, h in product(group.elements, repeat=2):
        instance = f"{group.labels[g]},{group.labels[h]}"

        def body(g=g, h=h, instance=instance):
            for i, j in product(_sector_positions(datum, g), _sector_positions(datum, h)):
                ei, ej = _unit_vector(size, i), _unit_vector(size, j)
                lhs = _apply_columns(columns, multiply_vectors(datum, ei, ej, Theory.KTHEORY))
                rhs = multiply_vectors(datum, columns[i], columns[j], Theory.CHOW)
                if lhs != rhs:
                    return failed("chern", instance, f"({labels[i]}, {labels[j]})",
                                  _show(datum, lhs, Theory.CHOW), _show(datum, rhs, Theory.CHOW))
            return passed("chern", instance)

        reports.append(_guarded("chern", instance, body))
    return reports + check_compare_identity(datum)


def check_rank_and_grading(datum: OrbifoldDatum) -> List[CheckReport]:
    """Obstruction classes are honest of nonnegative integer rank; Chow products are graded."""
    reports = []
    for component in datum.double_components():
        instance = datum.label(component)

        def body(component=component, instance=instance):
            r = _obstruction(datum, component)
            rank = r.rank
            if rank.denominator != 1 or rank < 0:
                return failed("obstruction rank", instance, f"rank {rank} of {describe(r)}")
            if not r.is_honest():
                return failed("obstruction rank", instance, f"virtual obstruction class {describe(r)}")
            return passed("obstruction rank", instance)

        reports.append(_guarded("obstruction rank", instance, body))
    size = len(stringy_basis(datum))
    labels = stringy_labels(datum)
    group = datum.group
    for g, h in product(group.elements, repeat=2):
        instance = f"{group.labels[g]},{group.labels[h]}"

        def grading_body(g=g, h=h, instance=instance):
            for i, j in product(_sector_positions(datum, g), _sector_positions(datum, h)):
                ei, ej = _unit_vector(size, i), _unit_vector(size, j)
                result = multiply_vectors(datum, ei, ej, Theory.CHOW)
                if not any(result):
                    continue
                di = stringy_degree(datum, from_vector(datum, ei, Theory.CHOW))
                dj = stringy_degree(datum, from_vector(datum, ej, Theory.CHOW))
                dk = stringy_degree(datum, from_vector(datum, result, Theory.CHOW))
                expected = di + dj
                if dk != expected:
                    return failed("grading", instance, f"({labels[i]}, {labels[j]})", dk, expected)
            return passed("grading", instance)

        reports.append(_guarded("grading", instance, grading_body))
    return reports


def check_unit(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW) -> List[CheckReport]:
    theory = parse_theory(theory)
    check = f"unit[{theory.value}]"
    size = len(stringy_basis(datum))
    labels = stringy_labels(datum)

    def body():
        one = to_vector(unit(datum, theory))
        for k in range(size):
            e = _unit_vector(size, k)
            for product_ in (multiply_vectors(datum, one, e, theory), multiply_vectors(datum, e, one, theory)):
                if product_ != e:
                    return failed(check, labels[k], "", _show(datum, product_, theory), labels[k])
        return passed(check, "all")

    return [_guarded(check, "all", body)]


def check_equivariance(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW) -> List[CheckReport]:
    """``h.(x*y) = (h.x)*(h.y)`` for every h and basis pair."""
    theory = parse_theory(theory)
    check = f"equiv[{theory.value}]"
    size = len(stringy_basis(datum))
    labels = stringy_labels(datum)
    reports = []
    for h in datum.group.elements:
        instance = datum.group.labels[h]

        def body(h=h, instance=instance):
            act = action_matrix(datum, h)
            columns = [_column(act, k) for k in range(size)]
            for i, j in product(range(size), repeat=2):
                lhs = _apply_columns(columns, multiply_vectors(datum, _unit_vector(size, i), _unit_vector(size, j), theory))
                rhs = multiply_vectors(datum, columns[i], columns[j], theory)
                if lhs != rhs:
                    return failed(check, instance, f"({labels[i]}, {labels[j]})",
                                  _show(datum, lhs, theory), _show(datum, rhs, theory))
            return passed(check, instance)

        reports.append(_guarded(check, instance, body))
    return reports


def check_morita(datum: OrbifoldDatum) -> List[CheckReport]:
    """Invariant dimension equals the sum over conjugacy classes of centralizer invariants."""

    def body():
        decomposition = sector_decomposition(datum)
        total = sum(decomposition.values())
        rank = invariant_projector(datum).rank
        if rank != total:
            return failed("morita", "all", str(decomposition), rank, total)
        return passed("morita", "all")

    return [_guarded("morita", "all", body)]


def trace_form(table) -> sympy.Matrix:
    """``(i, j) -> Tr(L_{e_i e_j})`` for a product table."""
    size = len(table)
    traces = [sum((table.product(m, k).get(k, 0) for k in range(size)), Fraction(0)) for m in range(size)]
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            value = sum((c * traces[m] for m, c in table.product(i, j).items()), Fraction(0))
            row.append(sympy.Rational(value.numerator, value.denominator))
        rows.append(row)
    return sympy.Matrix(rows)


def check_semisimple(datum: OrbifoldDatum, theory: Union[str, Theory] = Theory.CHOW) -> List[CheckReport]:
    """Nondegenerate trace form on the invariant ring."""
    theory = parse_theory(theory)
    check = f"semisimple[{theory.value}]"

    def body():
        table = product_table(datum, theory, invariant=True)
        determinant = trace_form(table).det() if len(table) else 1
        if determinant == 0:
            return failed(check, "invariant", "trace form is degenerate")
        return passed(check, "invariant")

    return [_guarded(check, "invariant", body)]


# ---------------------------------------------------------------------------
# suites

THEORY_SUITES = {
    "unit": check_unit,
    "assoc": check_associativity,
    "comm": check_commutativity,
    "equiv": check_equivariance,
    "semisimple": check_semisimple,
}
PLAIN_SUITES = {
    "validate": validate,
    "eq6": check_eq6,
    "eq1": check_obstruction_identities,
    "chern": check_chern_multiplicative,
    "rank": check_rank_and_grading,
    "morita": check_morita,
}
SUITE_ORDER = ("validate", "unit", "eq6", "eq1", "assoc", "comm", "chern", "rank", "equiv", "morita")
SUITES = SUITE_ORDER + ("semisimple",)


def run_suite(datum: OrbifoldDatum, suite: str = "all",
              theories: Iterable[Union[str, Theory]] = (Theory.CHOW, Theory.KTHEORY)) -> List[CheckReport]:
    """Run one suite (or ``all``, which leaves out ``semisimple``) and collect the reports."""
    names = SUITE_ORDER if suite == "all" else (suite,)
    theories = [parse_theory(t) for t in theories]
    reports: List[CheckReport] = []
    for name in names:
        if name in THEORY_SUITES:
            for theory in theories:
                reports.extend(THEORY_SUITES[name](datum, theory))
        elif name in PLAIN_SUITES:
            reports.extend(PLAIN_SUITES[name](datum))
        else:
            raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
        LOGGER.info("suite %s on %s done", name, datum.name)
    bad = [r for r in reports if not r.passed]
    LOGGER.info("%s: %d checks, %d failures", datum.name, len(reports), len(bad))
    for report in bad:
        LOGGER.debug("%s", report.summary())
    return reports
