"""
Finite groups given by multiplication tables.

Elements are the integers ``0 .. order-1`` and ``0`` is always the identity,
so the untwisted sector is indexed by ``0`` everywhere in the package.
Permutations compose right-to-left: ``(s*t)(i) = s(t(i))``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, List, Optional, Sequence

from sympy.combinatorics import Permutation, PermutationGroup

from .errors import GroupError

LOGGER = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: frozenset

    def __len__(self):
        return len(self.members)


class FiniteGroup:
    """A finite group as an index -> label lookup and a Cayley table on indices."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None, name: str = "group"):
        order = len(table)
        if order == 0:
            raise GroupError("a group needs at least one element")
        rows = []
        for g, row in enumerate(table):
            if len(row) != order:
                raise GroupError(f"row {g} of the multiplication table has length {len(row)}, expected {order}")
            for h, entry in enumerate(row):
                if isinstance(entry, bool) or not isinstance(entry, int) or not 0 <= entry < order:
                    raise GroupError(f"table entry ({g}, {h}) = {entry!r} is not an element index")
            rows.append(tuple(row))
        if labels is None:
            labels = ["e"] + [f"g{i}" for i in range(1, order)]
        if len(labels) != order or len(set(labels)) != order:
            raise GroupError("element labels must be distinct and match the table size")
        for label in labels:
            if "," in label or label == "*":
                raise GroupError(f"element label {label!r} may not contain ',' or be '*'")
        self.order = order
        self.name = name
        self.labels = tuple(labels)
        self._table = tuple(rows)
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._check_axioms()
        self._inverse = tuple(row.index(0) for row in self._table)

    def _check_axioms(self):
        n = self.order
        mul = self._table
        for g in range(n):
            if mul[0][g] != g or mul[g][0] != g:
                raise GroupError(f"element 0 is not a two-sided identity (fails at {self.labels[g]})")
        for g in range(n):
            if not any(mul[g][h] == 0 and mul[h][g] == 0 for h in range(n)):
                raise GroupError(f"element {self.labels[g]} has no two-sided inverse")
        for a, b, c in product(range(n), repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise GroupError(
                    f"multiplication is not associative on ({self.labels[a]}, {self.labels[b]}, {self.labels[c]})"
                )

    @staticmethod
    def from_permutations(generators: Iterable[str], degree: int, name: str = "group") -> "FiniteGroup":
        """Build the group generated by permutations written in 1-based cycle notation."""
        perms = [parse_cycles(text, degree) for text in generators]
        if not perms:
            perms = [Permutation(list(range(degree)))]
        pgroup = PermutationGroup(perms)
        elements = sorted(pgroup.generate(af=False), key=lambda p: (not p.is_Identity, p.array_form))
        position = {tuple(p.array_form): i for i, p in enumerate(elements)}
        table = []
        for s in elements:
            # sympy's s*t applies s first; our s.t applies t first
            table.append([position[tuple((t * s).array_form)] for t in elements])
        labels = [cycle_label(p) for p in elements]
        LOGGER.debug("generated permutation group %s of order %d", name, len(elements))
        return FiniteGroup(table, labels, name)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    def _check(self, g):
        if isinstance(g, bool) or not isinstance(g, int) or not 0 <= g < self.order:
            raise GroupError(f"{g!r} is not an element of {self.name}")

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GroupError(f"unknown group element {label!r}") from None

    def label(self, g: int) -> str:
        self._check(g)
        return self.labels[g]

    def multiply(self, g: int, h: int) -> int:
        self._check(g)
        self._check(h)
        return self._table[g][h]

    def inverse(self, g: int) -> int:
        self._check(g)
        return self._inverse[g]

    def product(self, *elements: int) -> int:
        result = 0
        for g in elements:
            result = self.multiply(result, g)
        return result

    def conjugate(self, h: int, g: int) -> int:
        """Return h g h^-1."""
        return self.multiply(self.multiply(h, g), self.inverse(h))

    def centralizer(self, g: int) -> frozenset:
        self._check(g)
        return frozenset(h for h in self.elements if self._table[h][g] == self._table[g][h])

    @cached_property
    def _classes(self) -> List[ConjugacyClass]:
        seen = set()
        classes = []
        for g in self.elements:
            if g in seen:
                continue
            members = frozenset(self.conjugate(h, g) for h in self.elements)
            seen |= members
            classes.append(ConjugacyClass(g, members))
        return classes

    def conjugacy_classes(self) -> List[ConjugacyClass]:
        """Conjugacy classes in order of their smallest member; the identity class comes first."""
        return list(self._classes)

    def class_of(self, g: int) -> ConjugacyClass:
        self._check(g)
        for cls in self._classes:
            if g in cls.members:
                return cls
        raise GroupError(f"{g} lies in no conjugacy class")  # unreachable for a valid group


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse ``"(1 2)(3 4)"`` (1-based points) into a sympy permutation of the given degree."""
    stripped = text.strip()
    if stripped in ("", "e", "()"):
        return Permutation(list(range(degree)))
    cycles = _CYCLE.findall(stripped)
    if not cycles or _CYCLE.sub("", stripped).strip():
        raise GroupError(f"cannot parse permutation {text!r}")
    image = list(range(degree))
    used = set()
    for cycle in cycles:
        points = [int(p) - 1 for p in cycle.replace(",", " ").split()]
        for p in points:
            if not 0 <= p < degree or p in used:
                raise GroupError(f"bad point in permutation {text!r} of degree {degree}")
            used.add(p)
        for a, b in zip(points, points[1:] + points[:1]):
            image[a] = b
    return Permutation(image)


def cycle_label(perm: Permutation) -> str:
    if perm.is_Identity:
        return "e"
    return "".join("(" + " ".join(str(p + 1) for p in cycle) + ")" for cycle in perm.cyclic_form)
