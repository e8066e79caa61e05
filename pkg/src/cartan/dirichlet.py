"""Dirichlet subalgebras cut out by sub-pseudogroups of arrows.

A subset S of the arrows picks out the subalgebra of elements supported
on S.  For S to cut out a Dirichlet subalgebra containing the diagonal it
must contain the units, be closed under composition, and together with
its inverses cover every arrow; the strict variant additionally meets its
inverses only in the units.  The non-strict case is first-class: length
orders on path groupoids satisfy everything except strictness.
"""

from dataclasses import dataclass

from .algebra import AlgebraElement, GroupoidMismatchError
from .groupoid import Arrow, FiniteTwistedGroupoid
from .reporting import ValidationReport, Violation

MAX_WITNESSES = 3
"""Violation reports carry at most this many witnesses per condition,
chosen in unit-space order."""


@dataclass(frozen=True)
class DirichletOrder:
    """A sub-pseudogroup S of arrows; a preorder on each orbit.

    Instances produced by :func:`validate_order` satisfy the three
    conditions above.  Direct construction performs no checks and exists
    so deliberately broken orders can be fed to the diagnostics.
    """

    groupoid: FiniteTwistedGroupoid
    arrows: frozenset[Arrow]
    strong: bool = False

    def contains(self, arrow: Arrow) -> bool:
        return arrow in self.arrows

    def sorted_arrows(self) -> tuple[Arrow, ...]:
        return tuple(sorted(self.arrows, key=self.groupoid.units.arrow_key))


def validate_order(groupoid: FiniteTwistedGroupoid, arrows) -> DirichletOrder | ValidationReport:
    """Accept a sub-pseudogroup or report which conditions fail.

    Accepts iff S contains every unit, is closed under composition and
    S together with S^{-1} covers the arrow set; the strong flag records
    whether S meets S^{-1} only in the units.
    """
    s = frozenset(arrows)
    for arrow in s:
        if arrow not in groupoid.arrows:
            raise ValueError(f"order arrow {arrow} is not an arrow of the groupoid")
    violations: list[Violation] = []
    key = groupoid.units.arrow_key

    missing_units = [p for p in groupoid.units if Arrow(p, p) not in s]
    if missing_units:
        violations.append(
            Violation("units", "order must contain every unit arrow", tuple(missing_units[:MAX_WITNESSES]))
        )

    composition_witnesses = []
    for a in sorted(s, key=key):
        for b in sorted(s, key=key):
            if a.source == b.range:
                product = Arrow(a.range, b.source)
                if product in groupoid.arrows and product not in s:
                    composition_witnesses.append(f"{a}*{b}={product}")
                    if len(composition_witnesses) >= MAX_WITNESSES:
                        break
        if len(composition_witnesses) >= MAX_WITNESSES:
            break
    if composition_witnesses:
        violations.append(
            Violation("composition", "order is not closed under composition", tuple(composition_witnesses))
        )

    totality_witnesses = [
        str(a) for a in groupoid.sorted_arrows if a not in s and a.inverse() not in s
    ][:MAX_WITNESSES]
    if totality_witnesses:
        violations.append(
            Violation("totality", "order and its inverses do not cover the arrows", tuple(totality_witnesses))
        )

    if violations:
        return ValidationReport("dirichlet-order", tuple(violations))
    strong = all(a.inverse() not in s or a.is_unit() for a in s)
    return DirichletOrder(groupoid, s, strong)


def is_member(a: AlgebraElement, order: DirichletOrder) -> bool:
    """Whether an element lies in the subalgebra: support inside S."""
    if a.groupoid is not order.groupoid and a.groupoid != order.groupoid:
        raise GroupoidMismatchError("element and order belong to different groupoids")
    return all(arrow in order.arrows for arrow in a.coeffs)


def density_dimension(order: DirichletOrder) -> tuple[int, int]:
    """Linear dimensions (dim(A + A*), dim of the whole algebra).

    Equality of the pair certifies the Dirichlet property; in finite
    dimensions density is equality.
    """
    covered = order.arrows | {a.inverse() for a in order.arrows}
    return len(covered), len(order.groupoid.arrows)


def diagonal_intersection(order: DirichletOrder) -> frozenset[Arrow]:
    """S intersected with its inverses: the support of A meet A*."""
    return frozenset(a for a in order.arrows if a.inverse() in order.arrows)
