"""Finite twisted groupoids over an ordered point set.

An equivalence relation on a finite set of points, viewed as a groupoid:
arrows are (range, source) pairs of equivalent points, units are the
arrows (x, x), and composition concatenates, (x, y).(y, z) = (x, z).
A twist is a normalized 2-cocycle assigning a unit-modulus phase to every
composable pair of arrows; the trivial cocycle (all phases 1) is the
default and is stored as an empty table.

Point identifiers are opaque strings.  The order in which points are
declared is the total order used for every deterministic iteration and
tie-break in this package.
"""

from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple

from .reporting import ValidationReport, Violation

UNIT_MODULUS_TOL = 1e-12
"""Absolute tolerance for |sigma| = 1, cocycle normalization and the
cocycle identity."""


class UnknownPointError(ValueError):
    """A point identifier is not a member of the unit space."""


class CompositionError(ValueError):
    """An arrow pair cannot be composed."""


class Arrow(NamedTuple):
    """A groupoid arrow, determined by its endpoint pair (range, source)."""

    range: str
    source: str

    def inverse(self) -> "Arrow":
        return Arrow(self.source, self.range)

    def is_unit(self) -> bool:
        return self.range == self.source

    def __str__(self) -> str:
        return f"({self.range}<-{self.source})"


@dataclass(frozen=True)
class UnitSpace:
    """The finite ordered point set X carrying the groupoid."""

    points: tuple[str, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("unit space must contain at least one point")
        index: dict[str, int] = {}
        for i, p in enumerate(self.points):
            if p in index:
                raise ValueError(f"duplicate point identifier {p!r}")
            index[p] = i
        object.__setattr__(self, "_index", index)

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPointError(f"unknown point {point!r}") from None

    def arrow_key(self, arrow: Arrow) -> tuple[int, int]:
        """Sort key for arrows in the declared point order."""
        return (self.index(arrow.range), self.index(arrow.source))

    def __contains__(self, point: object) -> bool:
        return point in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PartialBijection:
    """A partial bijection of points, stored as its (range, source) graph.

    Single-valuedness in both coordinates is enforced at construction.
    The convention matches arrow endpoints: the map sends sources to
    ranges.  Membership of the endpoints in a particular unit space is
    the caller's concern.
    """

    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        by_source: dict[str, str] = {}
        by_range: dict[str, str] = {}
        for r, s in sorted(self.pairs):
            if s in by_source:
                raise ValueError(
                    f"not single-valued: source {s!r} maps to both "
                    f"{by_source[s]!r} and {r!r}"
                )
            if r in by_range:
                raise ValueError(
                    f"not single-valued: range {r!r} receives both "
                    f"{by_range[r]!r} and {s!r}"
                )
            by_source[s] = r
            by_range[r] = s
        object.__setattr__(self, "_by_source", by_source)
        object.__setattr__(self, "_by_range", by_range)

    @classmethod
    def from_pairs(cls, pairs) -> "PartialBijection":
        return cls(frozenset((r, s) for r, s in pairs))

    @classmethod
    def identity_on(cls, points) -> "PartialBijection":
        return cls(frozenset((p, p) for p in points))

    @property
    def domain(self) -> frozenset:
        return frozenset(self._by_source)

    @property
    def image(self) -> frozenset:
        return frozenset(self._by_range)

    def apply(self, point: str) -> str:
        try:
            return self._by_source[point]
        except KeyError:
            raise ValueError(f"point {point!r} not in domain") from None

    def preimage(self, point: str) -> str:
        try:
            return self._by_range[point]
        except KeyError:
            raise ValueError(f"point {point!r} not in image") from None

    def inverse(self) -> "PartialBijection":
        return PartialBijection(frozenset((s, r) for r, s in self.pairs))

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self after other: defined where other lands in self's domain."""
        pairs = set()
        for r, s in other.pairs:
            if r in self._by_source:
                pairs.add((self._by_source[r], s))
        return PartialBijection(frozenset(pairs))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class FiniteTwistedGroupoid:
    """An equivalence-relation groupoid with a T-valued 2-cocycle.

    Structural requirements that would make the object unusable (arrow
    endpoints outside the unit space, cocycle keyed on non-composable or
    unknown arrows) raise at construction.  The relation axioms and the
    cocycle conditions are checked by :func:`validate`, which reports
    instead of raising, so that deliberately broken inputs can be
    diagnosed.
    """

    units: UnitSpace
    arrows: frozenset[Arrow]
    cocycle: Mapping[tuple[Arrow, Arrow], complex] = field(default_factory=dict)

    def __post_init__(self):
        for a in self.arrows:
            if a.range not in self.units or a.source not in self.units:
                raise UnknownPointError(f"arrow {a} has an endpoint outside the unit space")
        cocycle = dict(self.cocycle)
        for (a, b), value in cocycle.items():
            if a not in self.arrows or b not in self.arrows:
                raise ValueError(f"cocycle entry ({a}, {b}) uses an arrow not in the groupoid")
            if a.source != b.range:
                raise ValueError(f"cocycle entry ({a}, {b}) is not a composable pair")
            cocycle[(a, b)] = complex(value)
        object.__setattr__(self, "cocycle", cocycle)
        order = tuple(sorted(self.arrows, key=self.units.arrow_key))
        by_range: dict[str, tuple[Arrow, ...]] = {}
        adjacency: dict[str, set] = {p: set() for p in self.units}
        for a in order:
            by_range.setdefault(a.range, ())
            by_range[a.range] = by_range[a.range] + (a,)
            adjacency[a.range].add(a.source)
            adjacency[a.source].add(a.range)
        object.__setattr__(self, "_sorted_arrows", order)
        object.__setattr__(self, "_by_range", by_range)
        object.__setattr__(self, "_adjacency", adjacency)

    # -- basic structure ------------------------------------------------

    @property
    def sorted_arrows(self) -> tuple[Arrow, ...]:
        return self._sorted_arrows

    def has_arrow(self, a: Arrow) -> bool:
        return a in self.arrows

    def unit(self, point: str) -> Arrow:
        self.units.index(point)
        return Arrow(point, point)

    def arrows_with_range(self, point: str) -> tuple[Arrow, ...]:
        return self._by_range.get(point, ())

    def is_composable(self, a: Arrow, b: Arrow) -> bool:
        return a.source == b.range

    def compose(self, a: Arrow, b: Arrow) -> Arrow:
        """Compose two arrows, (x, y).(y, z) = (x, z)."""
        for arrow in (a, b):
            if arrow not in self.arrows:
                raise CompositionError(f"arrow {arrow} is not in the groupoid")
        if a.source != b.range:
            raise CompositionError(f"cannot compose {a} with {b}: source/range mismatch")
        result = Arrow(a.range, b.source)
        if result not in self.arrows:
            raise CompositionError(
                f"relation is not transitive: product {result} of {a} and {b} is missing"
            )
        return result

    def inverse(self, a: Arrow) -> Arrow:
        if a not in self.arrows:
            raise ValueError(f"arrow {a} is not in the groupoid")
        inv = a.inverse()
        if inv not in self.arrows:
            raise ValueError(f"relation is not symmetric: inverse {inv} of {a} is missing")
        return inv

    def twist(self, a: Arrow, b: Arrow) -> complex:
        """Cocycle value on the composable pair (a, b); defaults to 1."""
        if a.source != b.range:
            raise CompositionError(f"twist undefined on non-composable pair ({a}, {b})")
        return self.cocycle.get((a, b), 1.0 + 0.0j)

    def composable_pairs(self) -> Iterator[tuple[Arrow, Arrow]]:
        for a in self._sorted_arrows:
            for b in self._by_range.get(a.source, ()):
                yield a, b

    # -- orbits ----------------------------------------------------------

    def orbit(self, point: str) -> tuple[str, ...]:
        """Equivalence class of a point, in unit-space order.

        Computed as a transitive closure over the arrows (treated
        symmetrically), so it is meaningful even on relations that fail
        validation.
        """
        self.units.index(point)
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for p in frontier:
                for q in self._adjacency.get(p, ()):
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return tuple(sorted(seen, key=self.units.index))

    def orbits(self) -> tuple[tuple[str, ...], ...]:
        seen: set = set()
        out = []
        for p in self.units:
            if p not in seen:
                orb = self.orbit(p)
                seen.update(orb)
                out.append(orb)
        return tuple(out)

    def orbit_representatives(self) -> tuple[str, ...]:
        return tuple(orb[0] for orb in self.orbits())


def validate(groupoid: FiniteTwistedGroupoid) -> ValidationReport:
    """Check the relation axioms and the cocycle conditions.

    Returns a report listing every violated invariant together with the
    offending arrows; the report is empty exactly when the groupoid is a
    valid twisted equivalence relation.
    """
    g = groupoid
    violations: list[Violation] = []

    missing_units = [p for p in g.units if Arrow(p, p) not in g.arrows]
    if missing_units:
        violations.append(
            Violation(
                "reflexivity",
                "unit arrows missing for some points",
                tuple(missing_units),
            )
        )

    asym = [a for a in g.sorted_arrows if a.inverse() not in g.arrows]
    if asym:
        violations.append(
            Violation(
                "symmetry",
                "arrows whose inverse pair is missing",
                tuple(str(a) for a in asym),
            )
        )

    broken_products = []
    for a, b in g.composable_pairs():
        if Arrow(a.range, b.source) not in g.arrows:
            broken_products.append(f"{a}*{b}")
    if broken_products:
        violations.append(
            Violation(
                "transitivity",
                "composable pairs whose product arrow is missing",
                tuple(broken_products),
            )
        )

    bad_modulus = []
    bad_normalization = []
    for (a, b), value in sorted(g.cocycle.items(), key=lambda kv: (g.units.arrow_key(kv[0][0]), g.units.arrow_key(kv[0][1]))):
        if abs(abs(value) - 1.0) > UNIT_MODULUS_TOL:
            bad_modulus.append(f"sigma({a},{b})={value!r}")
        if (a.is_unit() or b.is_unit()) and abs(value - 1.0) > UNIT_MODULUS_TOL:
            bad_normalization.append(f"sigma({a},{b})={value!r}")
    if bad_modulus:
        violations.append(Violation("cocycle-modulus", "cocycle values off the unit circle", tuple(bad_modulus)))
    if bad_normalization:
        violations.append(
            Violation("cocycle-normalization", "cocycle not normalized on unit arrows", tuple(bad_normalization))
        )

    bad_identity = []
    for a, b in g.composable_pairs():
        ab = Arrow(a.range, b.source)
        if ab not in g.arrows:
            continue  # already reported under transitivity
        for c in g.arrows_with_range(b.source):
            bc = Arrow(b.range, c.source)
            if bc not in g.arrows:
                continue
            lhs = g.twist(a, b) * g.twist(ab, c)
            rhs = g.twist(b, c) * g.twist(a, bc)
            if abs(lhs - rhs) > UNIT_MODULUS_TOL:
                bad_identity.append(f"({a},{b},{c})")
    if bad_identity:
        violations.append(
            Violation("cocycle-identity", "cocycle identity fails on composable triples", tuple(bad_identity))
        )

    return ValidationReport("groupoid", tuple(violations))
