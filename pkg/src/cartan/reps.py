"""GNS representations at unit-space points and their invariant structure.

At a point x0 of a finite principal groupoid the evaluation state extends
uniquely, and the GNS space has the canonical orthonormal basis given by
the classes of the arrow indicators (y, x0), one per orbit point.  The
representing matrix of an element is computed by convolving against those
basis indicators; it is independently reproduced, entry for entry, by the
regular representation in :mod:`cartan.algebra`, which keeps the two
constructions honest against each other.

Invariant coordinate subspaces of a sub-pseudogroup's subalgebra are the
up-closed subsets of the induced preorder on the orbit; the lattice is a
nest exactly when that preorder is total.
"""

import random
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    GroupoidMismatchError,
    convolve,
    expect,
    involute,
    operator_norm,
    random_element,
    random_normalizer,
    random_unit_function,
)
from .dirichlet import DirichletOrder
from .groupoid import Arrow, FiniteTwistedGroupoid
from .linalg import commutant_basis, is_diagonal, span_dimension, spectral_norm

KERNEL_TOL = 1e-12
CHECK_TOL = 1e-12
LATTICE_ENUM_LIMIT = 20
"""Up to this orbit size the lattice is enumerated exhaustively over all
subsets; beyond it the totality criterion on the preorder's condensation
is used instead."""


def isotropy_witnesses(groupoid: FiniteTwistedGroupoid, point: str) -> list[Arrow]:
    """Non-unit arrows from a point to itself.

    Arrows here are determined by their endpoint pair, so a loop is
    always the unit and the list is empty: finite equivalence-relation
    groupoids are principal.  The computation is kept honest rather than
    short-circuited.
    """
    groupoid.units.index(point)
    return [a for a in groupoid.sorted_arrows if a.range == point and a.source == point and not a.is_unit()]


def unique_extension_check(groupoid: FiniteTwistedGroupoid, point: str) -> bool:
    """Whether the evaluation state at the point extends uniquely.

    Equivalent to trivial isotropy; uniqueness is constant along orbits.
    """
    return not isotropy_witnesses(groupoid, point)


@dataclass(frozen=True)
class GnsRep:
    """The representation at a base point on the orbit's coordinate space.

    ``basis`` holds one arrow (y, base_point) per orbit point y; their
    classes form an orthonormal basis, and ``matrix`` expresses left
    convolution in that basis.
    """

    groupoid: FiniteTwistedGroupoid
    base_point: str
    orbit: tuple[str, ...]
    basis: tuple[Arrow, ...]
    order: DirichletOrder | None = None

    @property
    def dimension(self) -> int:
        return len(self.orbit)

    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.orbit)}

    def matrix(self, a: AlgebraElement) -> np.ndarray:
        """Matrix of the element: columns are a * (basis indicator)."""
        if a.groupoid is not self.groupoid and a.groupoid != self.groupoid:
            raise GroupoidMismatchError("element represented over a different groupoid")
        index = self._index()
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for j, arrow in enumerate(self.basis):
            column = convolve(a, AlgebraElement.indicator(self.groupoid, arrow))
            for gamma, value in column.coeffs.items():
                out[index[gamma.range], j] = value
        return out

    def vector(self, a: AlgebraElement) -> np.ndarray:
        """Coordinates of the class [a] in the orthonormal basis."""
        unit = self.groupoid.unit(self.base_point)
        out = np.zeros(self.dimension, dtype=complex)
        for i, arrow in enumerate(self.basis):
            pairing = convolve(involute(AlgebraElement.indicator(self.groupoid, arrow)), a)
            out[i] = pairing.coeffs.get(unit, 0.0)
        return out


def gns_rep(groupoid: FiniteTwistedGroupoid, order: DirichletOrder | None, base_point: str) -> GnsRep:
    """Build the representation at a base point (which has trivial isotropy)."""
    orbit = groupoid.orbit(base_point)
    basis = tuple(Arrow(y, base_point) for y in orbit)
    return GnsRep(groupoid, base_point, orbit, basis, order)


def kernel_test(a: AlgebraElement, rep: GnsRep, tol: float = KERNEL_TOL) -> bool:
    """Whether the element represents as zero at the base point."""
    matrix = rep.matrix(a)
    return bool(np.max(np.abs(matrix), initial=0.0) <= tol)


def kernel_support_test(a: AlgebraElement, rep: GnsRep) -> bool:
    """Support criterion for the kernel: no arrow sourced in the orbit."""
    members = set(rep.orbit)
    return all(arrow.source not in members for arrow in a.coeffs)


@dataclass(frozen=True)
class InvariantLattice:
    """Invariant coordinate subspaces, as subsets of the orbit.

    ``subspaces`` is exhaustive when ``exhaustive`` is set; otherwise it
    carries the chain (total case) or two incomparable witnesses.
    """

    subspaces: tuple[tuple[str, ...], ...]
    is_nest: bool
    exhaustive: bool = True
    incomparable: tuple[tuple[str, ...], tuple[str, ...]] | None = None


def _order_arrows(order) -> frozenset[Arrow]:
    if isinstance(order, DirichletOrder):
        return order.arrows
    return frozenset(order)


def _nest_scan(subsets: list[tuple[int, ...]]):
    for i in range(len(subsets)):
        si = set(subsets[i])
        for j in range(i + 1, len(subsets)):
            sj = set(subsets[j])
            if not (si <= sj or sj <= si):
                return i, j
    return None


def invariant_lattice(rep: GnsRep, order) -> InvariantLattice:
    """Enumerate the invariant coordinate subspaces of the subalgebra.

    ``order`` may be a :class:`DirichletOrder` or any iterable of arrows;
    orders failing totality are accepted on purpose, since they are what
    produce non-nest lattices.
    """
    arrows = _order_arrows(order)
    orbit = rep.orbit
    d = len(orbit)
    index = {p: i for i, p in enumerate(orbit)}
    members = set(orbit)
    pred_mask = [0] * d
    edges: list[tuple[int, int]] = []  # (source index, range index)
    for arrow in arrows:
        if arrow.source in members and arrow.range in members:
            s, r = index[arrow.source], index[arrow.range]
            pred_mask[s] |= 1 << r
            edges.append((s, r))

    if d <= LATTICE_ENUM_LIMIT:
        found: list[tuple[int, ...]] = []
        for mask in range(1 << d):
            ok = True
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                if pred_mask[i] & ~mask:
                    ok = False
                    break
                m &= m - 1
            if ok:
                found.append(tuple(i for i in range(d) if mask >> i & 1))
        found.sort(key=lambda t: (len(t), t))
        clash = _nest_scan(found)
        subspaces = tuple(tuple(orbit[i] for i in t) for t in found)
        if clash is None:
            return InvariantLattice(subspaces, True)
        return InvariantLattice(subspaces, False, True, (subspaces[clash[0]], subspaces[clash[1]]))

    return _lattice_by_condensation(orbit, edges)


def _lattice_by_condensation(orbit: tuple[str, ...], edges: list[tuple[int, int]]) -> InvariantLattice:
    """Large-orbit path: decide nest-ness on the condensation of the preorder.

    Up-closure follows edges source -> range.  When the condensation is a
    chain the full lattice is that chain of cumulative blocks; otherwise
    two incomparable principal up-sets witness the failure and no
    exhaustive enumeration is attempted.
    """
    d = len(orbit)
    succ: list[set[int]] = [set() for _ in range(d)]
    for s, r in edges:
        if s != r:
            succ[s].add(r)
    components, comp_of = _scc(d, succ)
    k = len(components)
    comp_succ: list[set[int]] = [set() for _ in range(k)]
    for s, r in edges:
        cs, cr = comp_of[s], comp_of[r]
        if cs != cr:
            comp_succ[cs].add(cr)
    reach = [_reachable(c, comp_succ) for c in range(k)]

    for a in range(k):
        for b in range(a + 1, k):
            if a not in reach[b] and b not in reach[a]:
                up_a = tuple(sorted((i for c in reach[a] for i in components[c])))
                up_b = tuple(sorted((i for c in reach[b] for i in components[c])))
                wa = tuple(orbit[i] for i in up_a)
                wb = tuple(orbit[i] for i in up_b)
                return InvariantLattice((wa, wb), False, False, (wa, wb))

    chain = sorted(range(k), key=lambda c: len(reach[c]))  # maximal block first
    subspaces: list[tuple[str, ...]] = [()]
    acc: list[int] = []
    for c in chain:
        acc.extend(components[c])
        subspaces.append(tuple(orbit[i] for i in sorted(acc)))
    return InvariantLattice(tuple(subspaces), True, False)


def _scc(n: int, succ: list[set[int]]):
    """Strongly connected components, deterministic (Kosaraju, index order)."""
    order: list[int] = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        stack = [(start, iter(sorted(succ[start])))]
        seen[start] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(sorted(succ[nxt]))))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    pred: list[set[int]] = [set() for _ in range(n)]
    for s in range(n):
        for r in succ[s]:
            pred[r].add(s)
    comp_of = [-1] * n
    components: list[list[int]] = []
    for node in reversed(order):
        if comp_of[node] >= 0:
            continue
        comp = []
        stack = [node]
        comp_of[node] = len(components)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nxt in sorted(pred[cur]):
                if comp_of[nxt] < 0:
                    comp_of[nxt] = len(components)
                    stack.append(nxt)
        components.append(sorted(comp))
    return components, comp_of


def _reachable(start: int, succ: list[set[int]]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in succ[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


@dataclass(frozen=True)
class NormAchievement:
    """Both routes to the norm of an element, with the per-orbit table."""

    operator_norm: float
    gns_norm: float
    per_orbit: tuple[tuple[str, float], ...]

    @property
    def deviation(self) -> float:
        return abs(self.operator_norm - self.gns_norm)


def norm_achievement(a: AlgebraElement) -> NormAchievement:
    """Compare the reduced norm against the per-orbit GNS matrix norms.

    One trivial-isotropy representative per orbit (the first point, in
    unit-space order) realizes the norm; the two sides are built by the
    independent matrix constructions of :mod:`cartan.algebra` and this
    module.
    """
    table = []
    for representative in a.groupoid.orbit_representatives():
        rep = gns_rep(a.groupoid, None, representative)
        table.append((representative, spectral_norm(rep.matrix(a))))
    rhs = max((value for _, value in table), default=0.0)
    return NormAchievement(operator_norm(a), rhs, tuple(table))


@dataclass(frozen=True)
class CartanCheck:
    name: str
    passed: bool
    details: dict
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class CartanReport:
    """Results of the image-algebra structure checks at one base point."""

    base_point: str
    checks: tuple[CartanCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def gns_cartan_check(rep: GnsRep, trials: int = 20, seed: int = 0) -> CartanReport:
    """Verify the image pair is again of Cartan type, by exact linear algebra.

    Checks, on the represented algebra: the diagonal's commutant is the
    diagonal (masa), the normalizer images span everything (regularity),
    and diagonal extraction is an idempotent, bimodular expectation that
    is faithful on positives and agrees with the algebra's expectation.
    Sampling is seeded and deterministic.
    """
    rng = random.Random(seed)
    g = rep.groupoid
    d = rep.dimension
    checks: list[CartanCheck] = []

    diagonal_gens = [rep.matrix(AlgebraElement.indicator(g, g.unit(y))) for y in rep.orbit]
    basis = commutant_basis(diagonal_gens, d)
    all_diag = all(is_diagonal(b, CHECK_TOL) for b in basis)
    checks.append(
        CartanCheck(
            "diagonal-commutant",
            len(basis) == d and all_diag,
            {"commutant_dimension": len(basis), "expected": d, "all_diagonal": all_diag},
        )
    )

    orbit_members = set(rep.orbit)
    orbit_arrows = [a for a in g.sorted_arrows if a.range in orbit_members and a.source in orbit_members]
    images = [rep.matrix(AlgebraElement.indicator(g, a)) for a in orbit_arrows]
    span = span_dimension(images)
    checks.append(
        CartanCheck(
            "normalizer-span",
            span == d * d,
            {"span_dimension": span, "expected": d * d},
        )
    )

    dev_descent = dev_idem = dev_bimod = dev_faithful = dev_normalizing = 0.0
    for _ in range(trials):
        a = random_element(g, rng)
        m = rep.matrix(a)
        e0 = np.diag(np.diag(m))
        dev_descent = max(dev_descent, float(np.max(np.abs(rep.matrix(expect(a)) - e0), initial=0.0)))
        dev_idem = max(dev_idem, float(np.max(np.abs(np.diag(np.diag(e0)) - e0), initial=0.0)))

        d1 = rep.matrix(random_unit_function(g, rng))
        d2 = rep.matrix(random_unit_function(g, rng))
        sandwich = d1 @ m @ d2
        dev_bimod = max(
            dev_bimod,
            float(np.max(np.abs(np.diag(np.diag(sandwich)) - d1 @ e0 @ d2), initial=0.0)),
        )

        p = m.conj().T @ m
        if float(np.max(np.abs(np.diag(p)), initial=0.0)) <= CHECK_TOL:
            dev_faithful = max(dev_faithful, float(np.max(np.abs(p), initial=0.0)))

        n = random_normalizer(g, rng)
        nm = rep.matrix(n.element)
        dm = rep.matrix(random_unit_function(g, rng))
        for x in (nm.conj().T @ dm @ nm, nm @ dm @ nm.conj().T):
            off = x - np.diag(np.diag(x))
            dev_normalizing = max(dev_normalizing, float(np.max(np.abs(off), initial=0.0)))

    checks.append(CartanCheck("expectation-descends", dev_descent <= CHECK_TOL, {"max_deviation": dev_descent}))
    checks.append(CartanCheck("expectation-idempotent", dev_idem <= CHECK_TOL, {"max_deviation": dev_idem}))
    checks.append(CartanCheck("expectation-bimodular", dev_bimod <= CHECK_TOL, {"max_deviation": dev_bimod}))
    checks.append(CartanCheck("expectation-faithful", dev_faithful <= 1e-10, {"max_norm_at_zero_diagonal": dev_faithful}))
    checks.append(
        CartanCheck("normalizer-images-normalize", dev_normalizing <= CHECK_TOL, {"max_deviation": dev_normalizing})
    )
    return CartanReport(rep.base_point, tuple(checks))
