"""The convolution *-algebra of a finite twisted groupoid.

Elements are finitely supported complex functions on arrows.  With the
cocycle sigma the product and adjoint are

    (f * g)(gamma) = sum over factorizations gamma = alpha.beta of
                     sigma(alpha, beta) f(alpha) g(beta)
    f^*(gamma)     = conj(sigma(gamma, gamma^{-1})) conj(f(gamma^{-1}))

and the conditional expectation onto the diagonal restricts a function to
the unit arrows.  For the trivial cocycle and a single orbit this is
exactly the matrix algebra of the orbit, with convolution as matrix
multiplication; that matrix model is what the regular-representation
matrices below realize orbit by orbit.
"""

import cmath
import math
import random
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .groupoid import Arrow, FiniteTwistedGroupoid, PartialBijection
from .linalg import spectral_norm

PRUNE_TOL = 1e-14
"""Coefficients at most this large in magnitude are dropped after every
arithmetic operation, keeping supports canonical."""

EQ_TOL = 1e-12
"""Per-coefficient absolute tolerance for element comparison."""


class GroupoidMismatchError(ValueError):
    """Operands live over different groupoids."""


def _check_same_groupoid(f: "AlgebraElement", g: "AlgebraElement") -> FiniteTwistedGroupoid:
    if f.groupoid is not g.groupoid and f.groupoid != g.groupoid:
        raise GroupoidMismatchError("elements belong to different groupoids")
    return f.groupoid


@dataclass(frozen=True)
class AlgebraElement:
    """A finitely supported function on the arrows of a groupoid.

    Instances are immutable; arithmetic returns new elements with pruned
    supports.  ``a * b`` is convolution, ``a.adjoint()`` the involution.
    """

    groupoid: FiniteTwistedGroupoid
    coeffs: Mapping[Arrow, complex]

    def __post_init__(self):
        pruned: dict[Arrow, complex] = {}
        for arrow, value in self.coeffs.items():
            if arrow not in self.groupoid.arrows:
                raise ValueError(f"coefficient keyed on unknown arrow {arrow}")
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"non-finite coefficient at {arrow}")
            if abs(value) > PRUNE_TOL:
                pruned[arrow] = value
        object.__setattr__(self, "coeffs", pruned)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, groupoid: FiniteTwistedGroupoid) -> "AlgebraElement":
        return cls(groupoid, {})

    @classmethod
    def identity(cls, groupoid: FiniteTwistedGroupoid) -> "AlgebraElement":
        return cls(groupoid, {Arrow(p, p): 1.0 for p in groupoid.units})

    @classmethod
    def indicator(cls, groupoid: FiniteTwistedGroupoid, arrow: Arrow, coeff: complex = 1.0) -> "AlgebraElement":
        return cls(groupoid, {arrow: coeff})

    @classmethod
    def from_unit_values(cls, groupoid: FiniteTwistedGroupoid, values: Mapping[str, complex]) -> "AlgebraElement":
        """Embed a point function as a diagonal element."""
        coeffs = {}
        for point, value in values.items():
            groupoid.units.index(point)
            coeffs[Arrow(point, point)] = value
        return cls(groupoid, coeffs)

    # -- views -----------------------------------------------------------

    def support(self) -> tuple[Arrow, ...]:
        return tuple(sorted(self.coeffs, key=self.groupoid.units.arrow_key))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit_supported(self) -> bool:
        return all(a.is_unit() for a in self.coeffs)

    def unit_values(self) -> dict[str, complex]:
        return {a.range: c for a, c in self.coeffs.items() if a.is_unit()}

    def sup_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def isclose(self, other: "AlgebraElement", tol: float = EQ_TOL) -> bool:
        _check_same_groupoid(self, other)
        for arrow in set(self.coeffs) | set(other.coeffs):
            if abs(self.coeffs.get(arrow, 0.0) - other.coeffs.get(arrow, 0.0)) > tol:
                return False
        return True

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_groupoid(self, other)
        coeffs = dict(self.coeffs)
        for arrow, value in other.coeffs.items():
            coeffs[arrow] = coeffs.get(arrow, 0.0) + value
        return AlgebraElement(self.groupoid, coeffs)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.groupoid, {a: -c for a, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        if isinstance(other, (int, float, complex)):
            return AlgebraElement(self.groupoid, {a: c * other for a, c in self.coeffs.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        return involute(self)

    def __repr__(self) -> str:
        terms = ", ".join(f"{a}: {c:.6g}" for a, c in sorted(self.coeffs.items(), key=lambda kv: self.groupoid.units.arrow_key(kv[0])))
        return f"AlgebraElement({{{terms}}})"


@dataclass(frozen=True)
class Normalizer:
    """An element whose support is a bisection, with its point action."""

    element: AlgebraElement
    action: PartialBijection


@dataclass(frozen=True)
class NormalizerRejection:
    """Why an element is not a normalizer, with two offending arrows."""

    reason: str
    witnesses: tuple[Arrow, Arrow]


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Twisted convolution of two elements over the same groupoid."""
    gpd = _check_same_groupoid(f, g)
    by_range: dict[str, list[tuple[Arrow, complex]]] = {}
    for beta, cg in g.coeffs.items():
        by_range.setdefault(beta.range, []).append((beta, cg))
    out: dict[Arrow, complex] = {}
    for alpha, cf in f.coeffs.items():
        for beta, cg in by_range.get(alpha.source, ()):
            product = gpd.compose(alpha, beta)
            out[product] = out.get(product, 0.0) + gpd.twist(alpha, beta) * cf * cg
    return AlgebraElement(gpd, out)


def involute(f: AlgebraElement) -> AlgebraElement:
    """Adjoint: f^*(gamma) = conj(sigma(gamma, gamma^{-1})) conj(f(gamma^{-1}))."""
    gpd = f.groupoid
    out: dict[Arrow, complex] = {}
    for gamma, c in f.coeffs.items():
        inv = gpd.inverse(gamma)
        out[inv] = out.get(inv, 0.0) + complex(gpd.twist(inv, gamma)).conjugate() * c.conjugate()
    return AlgebraElement(gpd, out)


def expect(f: AlgebraElement) -> AlgebraElement:
    """Conditional expectation onto the diagonal: restrict to unit arrows."""
    return AlgebraElement(f.groupoid, {a: c for a, c in f.coeffs.items() if a.is_unit()})


def as_normalizer(f: AlgebraElement):
    """Recognize a normalizer of the diagonal.

    Accepts exactly the nonzero elements whose support is a bisection (at
    most one arrow per source and one per range) and returns the induced
    partial bijection of points.  Acceptance is double-checked by direct
    computation of n* h n and n h n* on the spanning unit indicators h.

    Returns a :class:`Normalizer` or a :class:`NormalizerRejection`
    carrying two offending arrows; a zero element raises ``ValueError``.
    """
    if f.is_zero():
        raise ValueError("the zero element is not a normalizer")
    by_source: dict[str, Arrow] = {}
    by_range: dict[str, Arrow] = {}
    for arrow in f.support():
        if arrow.source in by_source:
            return NormalizerRejection(
                f"two support arrows share source {arrow.source!r}",
                (by_source[arrow.source], arrow),
            )
        if arrow.range in by_range:
            return NormalizerRejection(
                f"two support arrows share range {arrow.range!r}",
                (by_range[arrow.range], arrow),
            )
        by_source[arrow.source] = arrow
        by_range[arrow.range] = arrow
    action = PartialBijection(frozenset((a.range, a.source) for a in f.coeffs))
    star = involute(f)
    for point in f.groupoid.units:
        h = AlgebraElement.indicator(f.groupoid, f.groupoid.unit(point))
        for conjugated in (convolve(star, convolve(h, f)), convolve(f, convolve(h, star))):
            if not conjugated.is_unit_supported():
                raise RuntimeError(f"bisection-supported element failed to normalize at {point!r}")
    return Normalizer(f, action)


def weyl_covariance_check(n: Normalizer, f: AlgebraElement, tol: float = EQ_TOL) -> bool:
    """Check the covariance law f n = n (f o alpha_n) for diagonal f."""
    if not f.is_unit_supported():
        raise ValueError("covariance check requires a unit-supported element")
    gpd = _check_same_groupoid(n.element, f)
    values = f.unit_values()
    pulled = {y: values.get(n.action.apply(y), 0.0) for y in n.action.domain}
    lhs = convolve(f, n.element)
    rhs = convolve(n.element, AlgebraElement.from_unit_values(gpd, pulled))
    return lhs.isclose(rhs, tol)


def regular_matrix(f: AlgebraElement, base_point: str) -> np.ndarray:
    """Matrix of left convolution on the arrows sourced at a base point.

    Rows and columns are indexed by the orbit of the base point in
    unit-space order; the entry at (x, w) is sigma((x,w),(w,base)) f((x,w)).
    """
    gpd = f.groupoid
    orbit = gpd.orbit(base_point)
    index = {p: i for i, p in enumerate(orbit)}
    matrix = np.zeros((len(orbit), len(orbit)), dtype=complex)
    for arrow, c in f.coeffs.items():
        col = index.get(arrow.source)
        if col is None:
            continue
        row = index[arrow.range]
        matrix[row, col] = gpd.twist(arrow, Arrow(arrow.source, base_point)) * c
    return matrix


def operator_norm(f: AlgebraElement) -> float:
    """Reduced norm: the largest per-orbit regular-representation norm.

    One representative per orbit is taken in unit-space order, so the
    result is deterministic.
    """
    best = 0.0
    for representative in f.groupoid.orbit_representatives():
        best = max(best, spectral_norm(regular_matrix(f, representative)))
    return best


# -- seeded random data ----------------------------------------------------


def random_element(groupoid: FiniteTwistedGroupoid, rng: random.Random, density: float = 1.0, scale: float = 1.0) -> AlgebraElement:
    """Element with independent complex Gaussian coefficients.

    Draws follow the deterministic arrow order, so a fixed seed fixes the
    element.  ``density`` keeps each arrow with the given probability.
    """
    coeffs: dict[Arrow, complex] = {}
    for arrow in groupoid.sorted_arrows:
        keep = density >= 1.0 or rng.random() < density
        value = complex(rng.gauss(0.0, scale), rng.gauss(0.0, scale))
        if keep:
            coeffs[arrow] = value
    return AlgebraElement(groupoid, coeffs)


def random_unit_function(groupoid: FiniteTwistedGroupoid, rng: random.Random, scale: float = 1.0) -> AlgebraElement:
    values = {p: complex(rng.gauss(0.0, scale), rng.gauss(0.0, scale)) for p in groupoid.units}
    return AlgebraElement.from_unit_values(groupoid, values)


def random_normalizer(groupoid: FiniteTwistedGroupoid, rng: random.Random) -> Normalizer:
    """Random bisection-supported element with unit-modulus phases.

    Each orbit contributes a random partial injection of itself; at least
    one arrow is kept overall.
    """
    while True:
        coeffs: dict[Arrow, complex] = {}
        for orbit in groupoid.orbits():
            k = rng.randint(0, len(orbit))
            if k == 0:
                continue
            sources = rng.sample(orbit, k)
            ranges = rng.sample(orbit, k)
            for r, s in zip(ranges, sources):
                coeffs[Arrow(r, s)] = cmath.exp(2j * math.pi * rng.random()) * (0.5 + rng.random())
        if coeffs:
            result = as_normalizer(AlgebraElement(groupoid, coeffs))
            assert isinstance(result, Normalizer)
            return result
