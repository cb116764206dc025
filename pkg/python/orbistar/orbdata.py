"""
Corpus loading and validation.

A corpus document presents a finite group acting on a smooth variety X through
named *loci*: closed subvarieties of X that occur as connected components of
fixed loci.  Every sector component (of X^g, X^{g,h} or X^{g,h,k}) is a locus,
and every structure map of the inertia diagrams is the inclusion of one locus
into another, so the loader only needs one pullback/pushforward pair per
inclusion.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import wraps
from itertools import product
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import AlgebraError, CorpusError, GroupError, MissingDataError, OrbistarError
from .gradedalgebra import (
    CHOW,
    COHOMOLOGICAL,
    FiniteAlgebra,
    LinearMap,
    MapKind,
    projection_formula_failures,
)
from .grouptheory import FiniteGroup
from .kclass import KClass, describe
from .report import CheckReport, failed, passed
from .schema import bidegree_at, coefficients_at, expect, nonnegative_int_at, rational_at

LOGGER = logging.getLogger(__name__)

WILDCARD = "*"


@dataclass(frozen=True)
class Locus:
    name: str
    dim: int
    algebra: FiniteAlgebra
    inside: frozenset

    def contains(self, other: "Locus") -> bool:
        """True when ``other`` is a subvariety of this locus."""
        return self.name in other.inside

    @property
    def is_point(self) -> bool:
        return self.dim == 0 and len(self.algebra) == 1


@dataclass(frozen=True)
class SectorComponent:
    """Connected component ``index`` of X^{g_1,...,g_n}, realized by a locus."""

    elements: Tuple[int, ...]
    index: int
    locus: Locus

    @property
    def key(self) -> Tuple[Tuple[int, ...], int]:
        return self.elements, self.index

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.locus.algebra

    @property
    def dim(self) -> int:
        return self.locus.dim


@dataclass(frozen=True, eq=False)
class EigenDatum:
    """Eigen-decomposition of N_{X^g}X on one component: ``(alpha_k, W_{g,k})`` pairs."""

    element: int
    locus: Locus
    entries: Tuple[Tuple[Fraction, KClass], ...] = ()

    def total(self) -> KClass:
        result = KClass(self.locus.algebra)
        for _, lines in self.entries:
            result = result + lines
        return result

    def im_class(self) -> KClass:
        result = KClass(self.locus.algebra)
        for alpha, lines in self.entries:
            result = result + lines.scaled(alpha)
        return result


class NormalDatum:
    """N_L X for every locus L; unlisted loci have the zero class."""

    def __init__(self, classes: Mapping[str, KClass], loci: Mapping[str, Locus]):
        self._classes = dict(classes)
        self._loci = loci

    def of(self, locus: Locus) -> KClass:
        return self._classes.get(locus.name, KClass(locus.algebra))


@dataclass(frozen=True)
class Inclusion:
    sub: Locus
    ambient: Locus
    pullback: Optional[LinearMap] = None
    pushforward: Optional[LinearMap] = None


class CorrespondenceSet:
    """Pullback and pushforward along every locus inclusion.

    Explicit entries come from the corpus; otherwise identical loci use the
    identity and a point maps its unit to the unit (pullback) or to the
    ambient point class (pushforward).
    """

    def __init__(self, loci: Mapping[str, Locus], explicit: Mapping[Tuple[str, str], Inclusion]):
        self._loci = loci
        self._explicit = dict(explicit)
        self._pullbacks: Dict[Tuple[str, str], LinearMap] = {}
        self._pushforwards: Dict[Tuple[str, str], LinearMap] = {}

    def _check_pair(self, sub: Locus, ambient: Locus):
        if not ambient.contains(sub):
            raise MissingDataError(f"locus {sub.name} is not contained in {ambient.name}")

    def pairs(self) -> List[Tuple[Locus, Locus]]:
        return [
            (sub, amb)
            for sub, amb in product(self._loci.values(), repeat=2)
            if amb.contains(sub)
        ]

    def pullback(self, sub: Locus, ambient: Locus) -> LinearMap:
        key = (sub.name, ambient.name)
        if key in self._pullbacks:
            return self._pullbacks[key]
        self._check_pair(sub, ambient)
        explicit = self._explicit.get(key)
        name = f"{ambient.name}->{sub.name}"
        if explicit is not None and explicit.pullback is not None:
            result = explicit.pullback
        elif sub.name == ambient.name:
            result = LinearMap.identity(sub.algebra, MapKind.PULLBACK, name)
        elif sub.is_point:
            result = LinearMap.from_images(
                ambient.algebra, sub.algebra,
                {ambient.algebra.basis[ambient.algebra.unit]: {"1": 1}}, MapKind.PULLBACK, 0, name,
            )
        else:
            raise MissingDataError(f"no pullback given for {sub.name} in {ambient.name}")
        self._pullbacks[key] = result
        return result

    def pushforward(self, sub: Locus, ambient: Locus) -> LinearMap:
        key = (sub.name, ambient.name)
        if key in self._pushforwards:
            return self._pushforwards[key]
        self._check_pair(sub, ambient)
        explicit = self._explicit.get(key)
        name = f"{sub.name}->{ambient.name}"
        shift = ambient.dim - sub.dim
        if explicit is not None and explicit.pushforward is not None:
            result = explicit.pushforward
        elif sub.name == ambient.name:
            result = LinearMap.identity(sub.algebra, MapKind.PUSHFORWARD, name)
        elif sub.is_point and ambient.algebra.point_class is not None:
            point = ambient.algebra.basis[ambient.algebra.point_class]
            result = LinearMap.from_images(sub.algebra, ambient.algebra, {"1": {point: 1}},
                                           MapKind.PUSHFORWARD, shift, name)
        else:
            raise MissingDataError(f"no pushforward given for {sub.name} in {ambient.name}")
        self._pushforwards[key] = result
        return result


class GActionDatum:
    """Locus permutations ``L -> hL`` and transports ``A(L) -> A(hL)`` induced by ``x -> hx``."""

    def __init__(self, group: FiniteGroup, loci: Mapping[str, Locus],
                 moves: Mapping[int, Mapping[str, str]], transports: Mapping[Tuple[int, str], LinearMap]):
        self.group = group
        self._loci = loci
        self._moves = {h: dict(m) for h, m in moves.items()}
        self._transports = dict(transports)
        self._defaults: Dict[Tuple[int, str], LinearMap] = {}

    def move(self, h: int, locus: Locus) -> Locus:
        return self._loci[self._moves.get(h, {}).get(locus.name, locus.name)]

    def transport(self, h: int, locus: Locus) -> LinearMap:
        key = (h, locus.name)
        if key in self._transports:
            return self._transports[key]
        if key in self._defaults:
            return self._defaults[key]
        target = self.move(h, locus)
        name = f"{self.group.label(h)}*{locus.name}"
        if target is locus:
            result = LinearMap.identity(locus.algebra, MapKind.PULLBACK, name)
        elif target.algebra.basis == locus.algebra.basis:
            result = LinearMap.from_images(
                locus.algebra, target.algebra, {b: {b: 1} for b in locus.algebra.basis}, MapKind.PULLBACK, 0, name
            )
        else:
            raise MissingDataError(f"no transport given for {self.group.label(h)} on {locus.name}")
        self._defaults[key] = result
        return result


@dataclass(frozen=True)
class DoubleMaps:
    """Structure maps out of one component of X^{g1,g2}, all pullbacks unless named push."""

    component: SectorComponent
    first: SectorComponent
    second: SectorComponent
    product: SectorComponent
    inverse: SectorComponent
    e1: LinearMap
    e2: LinearMap
    mu: LinearMap
    sigma_mu: LinearMap
    mu_push: LinearMap


@dataclass(frozen=True)
class TripleMaps:
    """Structure maps out of one component T of X^{g1,g2,g3}.

    ``left``/``right`` are the components of X^{g1,g2} and X^{g2,g3},
    ``outer_left``/``outer_right`` those of X^{g1g2,g3} and X^{g1,g2g3}, and
    ``corners`` the components of X^{g1}, X^{g2}, X^{g3}, X^{g1g2g3}.
    """

    component: SectorComponent
    left: SectorComponent
    right: SectorComponent
    outer_left: SectorComponent
    outer_right: SectorComponent
    corners: Tuple[SectorComponent, ...]
    e12: LinearMap
    e23: LinearMap
    mu12_3: LinearMap
    mu1_23: LinearMap
    j: Tuple[LinearMap, ...]
    j4_push: LinearMap


SectorTable = Dict[Union[Tuple[int, ...], str], Tuple[str, ...]]


class OrbifoldDatum:
    """A loaded corpus document, cross-linked and ready for computation."""

    def __init__(
        self,
        name: str,
        group: FiniteGroup,
        loci: Mapping[str, Locus],
        sector_tables: Sequence[SectorTable],
        normal: NormalDatum,
        eigen: Mapping[Tuple[int, str], EigenDatum],
        correspondences: CorrespondenceSet,
        gaction: GActionDatum,
        description: str = "",
        resolution: Optional[dict] = None,
        iso_skeleton: Optional[dict] = None,
    ):
        self.name = name
        self.description = description
        self.group = group
        self.loci = dict(loci)
        self._tables = list(sector_tables)
        self.normal = normal
        self.eigen_data = dict(eigen)
        self.correspondences = correspondences
        self.gaction = gaction
        self.resolution = resolution
        self.iso_skeleton = iso_skeleton
        self._components: Dict[Tuple[int, ...], List[SectorComponent]] = {}
        self._double_maps: Dict[SectorComponent, DoubleMaps] = {}
        self._triple_maps: Dict[SectorComponent, TripleMaps] = {}
        self.memo: Dict[tuple, object] = {}

    def __repr__(self):
        return f"OrbifoldDatum({self.name}, |G|={self.group.order}, loci={len(self.loci)})"

    def components(self, elements: Sequence[int]) -> List[SectorComponent]:
        """Connected components of X^{g_1,...,g_n} for ``n`` in 1..3."""
        elements = tuple(elements)
        if elements in self._components:
            return self._components[elements]
        if not 1 <= len(elements) <= len(self._tables):
            raise MissingDataError(f"no sector data for {len(elements)}-tuples")
        for g in elements:
            self.group.label(g)
        table = self._tables[len(elements) - 1]
        names = table.get(elements, table.get(WILDCARD))
        if names is None:
            label = ",".join(self.group.labels[g] for g in elements)
            raise MissingDataError(f"no sector data for ({label})")
        result = [SectorComponent(elements, i, self.loci[n]) for i, n in enumerate(names)]
        self._components[elements] = result
        return result

    @property
    def untwisted(self) -> List[SectorComponent]:
        return self.components((self.group.identity,))

    def label(self, component: SectorComponent) -> str:
        return ",".join(self.group.labels[g] for g in component.elements) + "@" + component.locus.name

    def ambient_of(self, locus: Locus) -> Locus:
        """The untwisted component containing a locus."""
        return self.containing((self.group.identity,), locus).locus

    def containing(self, elements: Sequence[int], locus: Locus) -> SectorComponent:
        """The unique component of X^{elements} whose locus contains ``locus``."""
        matches = [c for c in self.components(elements) if c.locus.contains(locus)]
        label = ",".join(self.group.labels[g] for g in elements)
        if not matches:
            raise MissingDataError(f"no component of ({label}) contains locus {locus.name}")
        if len(matches) > 1:
            raise MissingDataError(f"locus {locus.name} lies in several components of ({label})")
        return matches[0]

    def normal_class(self, locus: Locus) -> KClass:
        return self.normal.of(locus)

    def relative_normal(self, sub: Locus, ambient: Locus) -> KClass:
        """N_sub(ambient) = N_sub X - N_ambient X restricted to sub."""
        restricted = self.normal_class(ambient).pullback(self.correspondences.pullback(sub, ambient))
        return self.normal_class(sub) - restricted

    def eigen(self, g: int, locus: Locus) -> EigenDatum:
        datum = self.eigen_data.get((g, locus.name))
        if datum is not None:
            return datum
        if g == self.group.identity or not self.normal_class(locus).merged().lines:
            return EigenDatum(g, locus)
        raise MissingDataError(f"no eigen data for {self.group.labels[g]} on {locus.name}")

    def double_components(self) -> List[SectorComponent]:
        return [c for g, h in product(self.group.elements, repeat=2) for c in self.components((g, h))]

    def triple_components(self) -> List[SectorComponent]:
        return [c for t in product(self.group.elements, repeat=3) for c in self.components(t)]

    def double_maps(self, component: SectorComponent) -> DoubleMaps:
        if component in self._double_maps:
            return self._double_maps[component]
        g1, g2 = component.elements
        group, corr, locus = self.group, self.correspondences, component.locus
        g = group.multiply(g1, g2)
        first = self.containing((g1,), locus)
        second = self.containing((g2,), locus)
        prod = self.containing((g,), locus)
        inverse = self.containing((group.inverse(g),), locus)
        maps = DoubleMaps(
            component, first, second, prod, inverse,
            corr.pullback(locus, first.locus),
            corr.pullback(locus, second.locus),
            corr.pullback(locus, prod.locus),
            corr.pullback(locus, inverse.locus),
            corr.pushforward(locus, prod.locus),
        )
        self._double_maps[component] = maps
        return maps

    def triple_maps(self, component: SectorComponent) -> TripleMaps:
        if component in self._triple_maps:
            return self._triple_maps[component]
        g1, g2, g3 = component.elements
        group, corr, locus = self.group, self.correspondences, component.locus
        left = self.containing((g1, g2), locus)
        right = self.containing((g2, g3), locus)
        outer_left = self.containing((group.multiply(g1, g2), g3), locus)
        outer_right = self.containing((g1, group.multiply(g2, g3)), locus)
        corners = tuple(self.containing((g,), locus) for g in (g1, g2, g3, group.product(g1, g2, g3)))
        maps = TripleMaps(
            component, left, right, outer_left, outer_right, corners,
            corr.pullback(locus, left.locus),
            corr.pullback(locus, right.locus),
            corr.pullback(locus, outer_left.locus),
            corr.pullback(locus, outer_right.locus),
            tuple(corr.pullback(locus, c.locus) for c in corners),
            corr.pushforward(locus, corners[3].locus),
        )
        self._triple_maps[component] = maps
        return maps


def memoized(func):
    """Cache ``func(datum, *args)`` in ``datum.memo``; the results live as long as the datum."""

    @wraps(func)
    def wrapper(datum: OrbifoldDatum, *args):
        key = (func.__name__,) + args
        if key not in datum.memo:
            datum.memo[key] = func(datum, *args)
        return datum.memo[key]

    return wrapper


def sector(datum: OrbifoldDatum, key: Union[int, Sequence[int]], index: int = 0) -> SectorComponent:
    """Component ``index`` of the sector indexed by an element or a tuple of elements."""
    elements = (key,) if isinstance(key, int) else tuple(key)
    components = datum.components(elements)
    if not 0 <= index < len(components):
        raise MissingDataError(f"sector {elements} has no component {index}")
    return components[index]


def double_sectors(datum: OrbifoldDatum, g: int, h: int) -> List[SectorComponent]:
    return datum.components((g, h))


def triple_sectors(datum: OrbifoldDatum, g1: int, g2: int, g3: int) -> List[SectorComponent]:
    return datum.components((g1, g2, g3))


# ---------------------------------------------------------------------------
# loading


def parse_algebra(spec, path: str, dim: int, name: str) -> FiniteAlgebra:
    """Build a :class:`FiniteAlgebra` from one of the three corpus presentations."""
    if spec == "point":
        if dim != 0:
            raise CorpusError(path, "the point algebra needs dim 0")
        return FiniteAlgebra.point(name)
    expect(spec, dict, path, "'point' or an algebra object")
    try:
        if "exterior" in spec:
            generators = expect(spec["exterior"], list, f"{path}.exterior", "a list of generators")
            bidegree = bidegree_at(spec.get("generator_bidegree", [1, 0]), f"{path}.generator_bidegree")
            return FiniteAlgebra.exterior(
                generators, bidegree, dim, spec.get("grading", COHOMOLOGICAL),
                spec.get("point_class", True), name,
            )
        basis = expect(spec.get("basis"), list, f"{path}.basis", "a list of basis labels")
        degrees = expect(spec.get("bidegree"), list, f"{path}.bidegree", "a list of bidegrees")
        bidegree = [bidegree_at(d, f"{path}.bidegree[{i}]") for i, d in enumerate(degrees)]
        products = []
        for i, entry in enumerate(expect(spec.get("products", []), list, f"{path}.products", "a list")):
            where = f"{path}.products[{i}]"
            if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], dict)):
                raise CorpusError(where, "expected [a, b, {c: coeff}]")
            products.append((entry[0], entry[1], coefficients_at(entry[2], where)))
        return FiniteAlgebra.from_products(
            basis, bidegree, products, dim,
            unit=spec.get("unit", "1"),
            parity=spec.get("parity"),
            grading=spec.get("grading", CHOW),
            point_class=spec.get("point_class"),
            name=name,
        )
    except AlgebraError as exc:
        raise CorpusError(f"{path}.products" if exc.pair else path, str(exc)) from None


def parse_kclass(value, path: str, algebra: FiniteAlgebra) -> KClass:
    lines = []
    for i, entry in enumerate(expect(value, list, path, "a list of line classes")):
        where = f"{path}[{i}]"
        expect(entry, dict, where, "a line class")
        try:
            if "trivial" in entry:
                lines.append((algebra.zero(), rational_at(entry["trivial"], f"{where}.trivial")))
            else:
                root = algebra.element(coefficients_at(entry.get("root", {}), f"{where}.root"))
                lines.append((root, rational_at(entry.get("mult", 1), f"{where}.mult")))
        except AlgebraError as exc:
            raise CorpusError(where, str(exc)) from None
    try:
        return KClass(algebra, lines)
    except AlgebraError as exc:
        raise CorpusError(path, str(exc)) from None


def _parse_group(spec) -> FiniteGroup:
    path = "$.group"
    expect(spec, dict, path, "a group object")
    try:
        if "table" in spec:
            return FiniteGroup(spec["table"], spec.get("elements"), spec.get("name", "G"))
        if "generators" in spec:
            degree = nonnegative_int_at(spec.get("degree"), f"{path}.degree")
            return FiniteGroup.from_permutations(spec["generators"], degree, spec.get("name", "G"))
    except GroupError as exc:
        raise CorpusError(path, str(exc)) from None
    raise CorpusError(path, "expected a multiplication table or permutation generators")


def _parse_loci(spec) -> Dict[str, Locus]:
    expect(spec, dict, "$.loci", "an object of loci")
    raw = {}
    direct = {}
    for name, entry in spec.items():
        path = f"$.loci.{name}"
        if "@" in name or "," in name or name == WILDCARD:
            raise CorpusError(path, "locus names may not contain '@' or ',' or be '*'")
        expect(entry, dict, path, "a locus object")
        dim = nonnegative_int_at(entry.get("dim"), f"{path}.dim")
        raw[name] = (dim, parse_algebra(entry.get("algebra", "point"), f"{path}.algebra", dim, name))
        inside = expect(entry.get("inside", []), list, f"{path}.inside", "a list of loci")
        direct[name] = set(inside)
    for name, parents in direct.items():
        for parent in parents:
            if parent not in raw:
                raise CorpusError(f"$.loci.{name}.inside", f"unknown locus {parent!r}")
    closure = {}
    for name in raw:
        seen = {name}
        stack = list(direct[name])
        while stack:
            parent = stack.pop()
            if parent == name:
                raise CorpusError(f"$.loci.{name}.inside", "containment is cyclic")
            if parent not in seen:
                seen.add(parent)
                stack.extend(direct[parent])
        for parent in seen:
            if raw[parent][0] < raw[name][0]:
                raise CorpusError(f"$.loci.{name}.inside", f"{parent} has smaller dimension than {name}")
        closure[name] = frozenset(seen)
    return {name: Locus(name, dim, algebra, closure[name]) for name, (dim, algebra) in raw.items()}


def _parse_sector_table(spec, path: str, arity: int, group: FiniteGroup, loci) -> SectorTable:
    table: SectorTable = {}
    expect(spec, dict, path, "an object of sectors")
    for key, names in spec.items():
        where = f"{path}.{key}"
        expect(names, list, where, "a list of loci")
        for name in names:
            if name not in loci:
                raise CorpusError(where, f"unknown locus {name!r}")
        if len(set(names)) != len(names):
            raise CorpusError(where, "a locus is listed twice")
        if key == WILDCARD:
            table[WILDCARD] = tuple(names)
            continue
        labels = key.split(",")
        if len(labels) != arity:
            raise CorpusError(where, f"expected {arity} group labels")
        try:
            elements = tuple(group.index(label.strip()) for label in labels)
        except GroupError as exc:
            raise CorpusError(where, str(exc)) from None
        table[elements] = tuple(names)
    return table


def _parse_correspondences(spec, loci) -> Dict[Tuple[str, str], Inclusion]:
    explicit = {}
    for i, entry in enumerate(expect(spec, list, "$.correspondences", "a list")):
        path = f"$.correspondences[{i}]"
        expect(entry, dict, path, "a correspondence object")
        sub, amb = entry.get("sub"), entry.get("ambient")
        if sub not in loci or amb not in loci:
            raise CorpusError(path, f"unknown loci {sub!r} / {amb!r}")
        sub, amb = loci[sub], loci[amb]
        if not amb.contains(sub):
            raise CorpusError(path, f"{sub.name} is not declared inside {amb.name}")
        if (sub.name, amb.name) in explicit:
            raise CorpusError(path, "inclusion listed twice")
        shift = entry.get("degree_shift", amb.dim - sub.dim)
        maps = {}
        try:
            for field_name, source, target, kind in (
                ("pullback", amb, sub, MapKind.PULLBACK),
                ("pushforward", sub, amb, MapKind.PUSHFORWARD),
            ):
                if field_name not in entry:
                    continue
                where = f"{path}.{field_name}"
                images = expect(entry[field_name], dict, where, "an object of images")
                parsed = {b: coefficients_at(row, f"{where}.{b}") for b, row in images.items()}
                arrow = f"{amb.name}->{sub.name}" if kind is MapKind.PULLBACK else f"{sub.name}->{amb.name}"
                maps[field_name] = LinearMap.from_images(
                    source.algebra, target.algebra, parsed, kind,
                    shift if kind is MapKind.PUSHFORWARD else 0, arrow,
                )
        except AlgebraError as exc:
            raise CorpusError(path, str(exc)) from None
        explicit[(sub.name, amb.name)] = Inclusion(sub, amb, maps.get("pullback"), maps.get("pushforward"))
    return explicit


def _parse_normal(spec, loci) -> Dict[str, KClass]:
    expect(spec, dict, "$.normal", "an object of normal classes")
    classes = {}
    for name, locus in loci.items():
        if name in spec:
            classes[name] = parse_kclass(spec[name], f"$.normal.{name}", locus.algebra)
        elif WILDCARD in spec:
            classes[name] = parse_kclass(spec[WILDCARD], f"$.normal.*", locus.algebra)
    for name in spec:
        if name != WILDCARD and name not in loci:
            raise CorpusError(f"$.normal.{name}", "unknown locus")
    return classes


def _parse_eigen(spec, group: FiniteGroup, datum_components) -> Dict[Tuple[int, str], EigenDatum]:
    expect(spec, dict, "$.eigen", "an object of eigen data")
    eigen = {}
    for label, per_locus in spec.items():
        path = f"$.eigen.{label}"
        try:
            g = group.index(label)
        except GroupError as exc:
            raise CorpusError(path, str(exc)) from None
        expect(per_locus, dict, path, "an object keyed by locus")
        loci = {c.locus.name: c.locus for c in datum_components((g,))}
        for name in per_locus:
            if name != WILDCARD and name not in loci:
                raise CorpusError(f"{path}.{name}", f"locus is not a component of the sector {label}")
        if g == group.identity and any(per_locus.values()):
            raise CorpusError(path, "the identity acts trivially; no eigen data allowed")
        for name, locus in loci.items():
            entries_spec = per_locus.get(name, per_locus.get(WILDCARD))
            if entries_spec is None:
                continue
            where = f"{path}.{name if name in per_locus else WILDCARD}"
            entries = []
            for i, entry in enumerate(expect(entries_spec, list, where, "a list of eigen entries")):
                item = f"{where}[{i}]"
                expect(entry, dict, item, "an eigen entry")
                alpha = rational_at(entry.get("alpha"), f"{item}.alpha")
                entries.append((alpha, parse_kclass(entry.get("lines", []), f"{item}.lines", locus.algebra)))
            eigen[(g, name)] = EigenDatum(g, locus, tuple(entries))
    return eigen


def _parse_gaction(spec, group: FiniteGroup, loci) -> GActionDatum:
    expect(spec, dict, "$.gaction", "an object keyed by group element")
    moves, transports = {}, {}
    for label, entry in spec.items():
        path = f"$.gaction.{label}"
        try:
            h = group.index(label)
        except GroupError as exc:
            raise CorpusError(path, str(exc)) from None
        expect(entry, dict, path, "an action object")
        move = expect(entry.get("loci", {}), dict, f"{path}.loci", "a locus permutation")
        for src, dst in move.items():
            if src not in loci or dst not in loci:
                raise CorpusError(f"{path}.loci.{src}", f"unknown locus in {src!r} -> {dst!r}")
        if sorted(move.keys()) != sorted(move.values()):
            raise CorpusError(f"{path}.loci", "not a permutation of loci")
        moves[h] = dict(move)
        for name, t in expect(entry.get("transport", {}), dict, f"{path}.transport", "an object").items():
            where = f"{path}.transport.{name}"
            if name not in loci:
                raise CorpusError(where, "unknown locus")
            source = loci[name]
            target = loci[move.get(name, name)]
            expect(t, dict, where, "'images' or 'diagonal'")
            images = {b: {b: 1} for b in source.algebra.basis if b in target.algebra.basis}
            if "diagonal" in t:
                for b, c in coefficients_at(t["diagonal"], f"{where}.diagonal").items():
                    images[b] = {b: c}
            elif "images" in t:
                rows = expect(t["images"], dict, f"{where}.images", "an object of images")
                for b, row in rows.items():
                    images[b] = coefficients_at(row, f"{where}.images.{b}")
            else:
                raise CorpusError(where, "expected 'images' or 'diagonal'")
            try:
                transports[(h, name)] = LinearMap.from_images(
                    source.algebra, target.algebra, images, MapKind.PULLBACK, 0, f"{label}*{name}"
                )
            except AlgebraError as exc:
                raise CorpusError(where, str(exc)) from None
    return GActionDatum(group, loci, moves, transports)


def load_document(document: Mapping, name: Optional[str] = None) -> OrbifoldDatum:
    """Assemble an :class:`OrbifoldDatum` from a parsed corpus document."""
    expect(document, dict, "$", "a corpus object")
    group = _parse_group(document.get("group"))
    loci = _parse_loci(document.get("loci", {}))
    if not loci:
        raise CorpusError("$.loci", "at least one locus is required")
    tables = []
    for arity, block in ((1, "sectors"), (2, "double_sectors"), (3, "triple_sectors")):
        tables.append(_parse_sector_table(document.get(block, {}), f"$.{block}", arity, group, loci))
    if (group.identity,) not in tables[0] and WILDCARD not in tables[0]:
        raise CorpusError("$.sectors", "the untwisted sector is missing")
    explicit = _parse_correspondences(document.get("correspondences", []), loci)
    normal = NormalDatum(_parse_normal(document.get("normal", {}), loci), loci)
    gaction = _parse_gaction(document.get("gaction", {}), group, loci)
    datum = OrbifoldDatum(
        name or document.get("name", "corpus"),
        group,
        loci,
        tables,
        normal,
        {},
        CorrespondenceSet(loci, explicit),
        gaction,
        document.get("description", ""),
        document.get("resolution"),
        document.get("iso_skeleton"),
    )

    def components(elements):
        try:
            return datum.components(elements)
        except MissingDataError as exc:
            raise CorpusError("$.sectors", str(exc)) from None

    datum.eigen_data = _parse_eigen(document.get("eigen", {}), group, components)
    LOGGER.info(
        "loaded %s: |G|=%d, %d loci, %d untwisted components",
        datum.name, group.order, len(loci), len(datum.untwisted),
    )
    return datum


def load(source: Union[str, Path, Mapping]) -> OrbifoldDatum:
    """Load a corpus document from a path or an already parsed mapping."""
    if isinstance(source, Mapping):
        return load_document(source)
    path = Path(source)
    try:
        with path.open(encoding="utf-8") as handle:
            document = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError("$", f"cannot read {path}: {exc}") from None
    return load_document(document, document.get("name", path.stem) if isinstance(document, dict) else None)


# ---------------------------------------------------------------------------
# validation


def _validate_algebras(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    for name, locus in datum.loci.items():
        bad = locus.algebra.associativity_failures()
        if bad:
            reports.append(failed("algebra associativity", name, f"fails on {bad[0]}"))
        else:
            reports.append(passed("algebra associativity", name))
    return reports


def _validate_sectors(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    group = datum.group
    for g in group.elements:
        instance = group.labels[g]
        try:
            loci = {c.locus.name for c in datum.components((g,))}
            inverse = {c.locus.name for c in datum.components((group.inverse(g),))}
            if loci != inverse:
                reports.append(failed("sector inverse symmetry", instance, "X^g and X^(g^-1) differ"))
            e = group.identity
            left = {c.locus.name for c in datum.components((e, g))}
            right = {c.locus.name for c in datum.components((g, e))}
            if left != loci or right != loci:
                reports.append(failed("double sector with identity", instance, "X^(e,g) or X^(g,e) differs from X^g"))
            for c in datum.components((g,)):
                datum.ambient_of(c.locus)
        except MissingDataError as exc:
            reports.append(failed("sector data", instance, str(exc)))
    if not any(not r.passed for r in reports):
        reports.append(passed("sector data", "all"))
    return reports


def _validate_normals(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    for name, locus in datum.loci.items():
        try:
            ambient = datum.ambient_of(locus)
        except MissingDataError:
            continue
        rank = datum.normal_class(locus).rank
        expected = ambient.dim - locus.dim
        if rank != expected:
            reports.append(failed("normal rank mismatch", name, lhs=rank, rhs=expected))
        else:
            reports.append(passed("normal rank", name))
    return reports


def _validate_eigen(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    group = datum.group
    for g in group.elements:
        if g == group.identity:
            continue
        for component in datum.components((g,)):
            instance = datum.label(component)
            try:
                eigen = datum.eigen(g, component.locus)
            except MissingDataError as exc:
                reports.append(failed("eigen-decomposition incomplete", instance, str(exc)))
                continue
            bad_alpha = [a for a, _ in eigen.entries if not 0 < a < 1]
            if bad_alpha:
                reports.append(failed("eigen angle range", instance, f"alpha {bad_alpha[0]} not in (0, 1)"))
            if any(not lines.is_honest() for _, lines in eigen.entries):
                reports.append(failed("eigen multiplicity", instance, "eigenlines must have nonnegative integer multiplicity"))
            normal = datum.normal_class(component.locus)
            if eigen.total() != normal:
                reports.append(failed("eigen-decomposition incomplete", instance,
                                      lhs=describe(eigen.total()), rhs=describe(normal)))
            else:
                reports.append(passed("eigen-decomposition", instance))
    return reports


def _structure_inclusions(datum: OrbifoldDatum) -> List[Tuple[Locus, Locus, bool]]:
    """Every inclusion a structure map uses, with whether its pushforward is needed."""
    needed: Dict[Tuple[str, str], bool] = {}

    def note(sub, amb, push=False):
        key = (sub.name, amb.name)
        needed[key] = needed.get(key, False) or push

    for component in datum.double_components():
        maps = datum.double_maps(component)
        for target in (maps.first, maps.second, maps.inverse):
            note(component.locus, target.locus)
        note(component.locus, maps.product.locus, True)
    for component in datum.triple_components():
        maps = datum.triple_maps(component)
        for target in (maps.left, maps.right, maps.outer_left, maps.outer_right) + maps.corners[:3]:
            note(component.locus, target.locus)
        note(component.locus, maps.corners[3].locus, True)
    return [(datum.loci[s], datum.loci[a], push) for (s, a), push in sorted(needed.items())]


def _validate_correspondences(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    corr = datum.correspondences
    try:
        inclusions = _structure_inclusions(datum)
    except MissingDataError as exc:
        return [failed("structure maps", "all", str(exc))]
    for sub, amb, _ in inclusions:
        instance = f"{sub.name} in {amb.name}"
        try:
            pull = corr.pullback(sub, amb)
            push = corr.pushforward(sub, amb)
        except MissingDataError as exc:
            reports.append(failed("structure maps", instance, str(exc)))
            continue
        problems = pull.failures() + push.failures()
        problems += [f"projection formula fails on {pair}" for pair in projection_formula_failures(push, pull)]
        if problems:
            reports.extend(failed("correspondence", instance, p) for p in problems)
        else:
            reports.append(passed("correspondence", instance))
    for sub, mid, top in product(datum.loci.values(), repeat=3):
        if len({sub.name, mid.name, top.name}) < 3 or not (mid.contains(sub) and top.contains(mid)):
            continue
        instance = f"{sub.name} in {mid.name} in {top.name}"
        try:
            direct = corr.pullback(sub, top)
            composite = corr.pullback(sub, mid).compose(corr.pullback(mid, top))
        except MissingDataError:
            continue
        if direct.matrix != composite.matrix:
            reports.append(failed("pullback composition", instance))
        else:
            reports.append(passed("pullback composition", instance))
        try:
            direct = corr.pushforward(sub, top)
            composite = corr.pushforward(mid, top).compose(corr.pushforward(sub, mid))
        except MissingDataError:
            continue
        if direct.matrix != composite.matrix:
            reports.append(failed("pushforward composition", instance))
    return reports


def _validate_gaction(datum: OrbifoldDatum) -> List[CheckReport]:
    reports = []
    group, action = datum.group, datum.gaction
    for h, g in product(group.elements, repeat=2):
        conj = group.conjugate(h, g)
        instance = f"{group.labels[h]} on {group.labels[g]}"
        try:
            targets = {c.locus.name for c in datum.components((conj,))}
            for component in datum.components((g,)):
                moved = action.move(h, component.locus)
                if moved.name not in targets:
                    reports.append(failed("action on sectors", instance,
                                          f"{moved.name} is not a component of X^{group.labels[conj]}"))
                    continue
                problems = action.transport(h, component.locus).failures()
                reports.extend(failed("action transport", instance, p) for p in problems)
        except MissingDataError as exc:
            reports.append(failed("action on sectors", instance, str(exc)))
    for name, locus in datum.loci.items():
        try:
            if action.move(group.identity, locus) is not locus or \
                    action.transport(group.identity, locus).matrix != LinearMap.identity(locus.algebra).matrix:
                reports.append(failed("action identity", name))
            for h1, h2 in product(group.elements, repeat=2):
                composite = action.transport(h1, action.move(h2, locus)).compose(action.transport(h2, locus))
                direct = action.transport(group.multiply(h1, h2), locus)
                if direct.target is not composite.target or direct.matrix != composite.matrix:
                    reports.append(failed("action functoriality", name,
                                          f"({group.labels[h1]}{group.labels[h2]}) != {group.labels[h1]} after {group.labels[h2]}"))
                    break
            else:
                reports.append(passed("action functoriality", name))
        except (MissingDataError, AlgebraError) as exc:
            reports.append(failed("action functoriality", name, str(exc)))
    return reports


def validate(datum: OrbifoldDatum) -> List[CheckReport]:
    """Run every structural check on a loaded datum; failures are reports, never exceptions."""
    reports: List[CheckReport] = []
    for step in (_validate_algebras, _validate_sectors, _validate_normals, _validate_eigen,
                 _validate_correspondences, _validate_gaction):
        try:
            reports.extend(step(datum))
        except OrbistarError as exc:
            reports.append(failed(step.__name__.replace("_validate_", "validate "), "all", str(exc)))
    bad = sum(1 for r in reports if not r.passed)
    LOGGER.info("validated %s: %d checks, %d failures", datum.name, len(reports), bad)
    return reports
