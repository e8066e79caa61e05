"""Desk-scale crossed products of a finite dynamical system by the integers.

A permutation phi of a finite point set X generates the covariance
algebra spanned by formal series sum_k U^k f_k with f_k functions on X
and a unitary U satisfying U^{-1} f U = f o phi.  Every point of a finite
system is periodic, so every evaluation state on the diagonal admits more
than one extension; the explicit second extension built here is what the
rest of the package cannot produce with principal groupoids.

The norm is realized by the family of evaluation representations on the
orbit of a point: U acts as the cyclic shift with a wrap-around phase z
on the unit circle, functions act diagonally, and the norm is the
supremum over z of the per-orbit matrix norms.
"""

import math
import random
from dataclasses import dataclass
from typing import Mapping

import numpy as np

PRUNE_TOL = 1e-14
EQ_TOL = 1e-12
NORM_GRID_START = 4096
NORM_GRID_CAP = 1 << 20
NORM_REFINE_TOL = 1e-8


class SystemMismatchError(ValueError):
    """Operands live over different dynamical systems."""


@dataclass(frozen=True)
class FiniteDynamicalSystem:
    """A finite ordered point set with a permutation."""

    points: tuple[str, ...]
    phi: Mapping[str, str]

    def __post_init__(self):
        if not self.points:
            raise ValueError("system must contain at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point identifiers")
        members = set(self.points)
        phi = dict(self.phi)
        if set(phi) != members or set(phi.values()) != members:
            raise ValueError("phi must be a permutation of the points")
        inverse = {v: k for k, v in phi.items()}
        if len(inverse) != len(phi):
            raise ValueError("phi must be a permutation of the points")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "_inverse", inverse)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise ValueError(f"unknown point {point!r}") from None

    def apply(self, point: str, power: int = 1) -> str:
        self.index(point)
        period = self.period(point)
        steps = power % period
        for _ in range(steps):
            point = self.phi[point]
        return point

    def period(self, point: str) -> int:
        self.index(point)
        current = self.phi[point]
        n = 1
        while current != point:
            current = self.phi[current]
            n += 1
        return n

    def orbit(self, point: str) -> tuple[str, ...]:
        """Forward orbit starting at the point, in iteration order."""
        self.index(point)
        out = [point]
        current = self.phi[point]
        while current != point:
            out.append(current)
            current = self.phi[current]
        return tuple(out)

    def orbits(self) -> tuple[tuple[str, ...], ...]:
        seen: set = set()
        out = []
        for p in self.points:
            if p not in seen:
                orb = self.orbit(p)
                seen.update(orb)
                out.append(orb)
        return tuple(out)


def _prune(values: Mapping[str, complex]) -> dict[str, complex]:
    return {x: complex(c) for x, c in values.items() if abs(c) > PRUNE_TOL}


@dataclass(frozen=True)
class CrossedElement:
    """A finitely supported series sum_k U^k f_k over a finite system."""

    system: FiniteDynamicalSystem
    fourier: Mapping[int, Mapping[str, complex]]

    def __post_init__(self):
        cleaned: dict[int, dict[str, complex]] = {}
        for k, values in self.fourier.items():
            for x in values:
                self.system.index(x)
            pruned = _prune(values)
            if pruned:
                cleaned[int(k)] = pruned
        object.__setattr__(self, "fourier", cleaned)

    @classmethod
    def zero(cls, system: FiniteDynamicalSystem) -> "CrossedElement":
        return cls(system, {})

    @classmethod
    def identity(cls, system: FiniteDynamicalSystem) -> "CrossedElement":
        return cls(system, {0: {x: 1.0 for x in system.points}})

    @classmethod
    def unitary_power(cls, system: FiniteDynamicalSystem, k: int) -> "CrossedElement":
        """The monomial U^k (with constant coefficient one)."""
        return cls(system, {k: {x: 1.0 for x in system.points}})

    @classmethod
    def from_function(cls, system: FiniteDynamicalSystem, values: Mapping[str, complex]) -> "CrossedElement":
        return cls(system, {0: dict(values)})

    @classmethod
    def monomial(cls, system: FiniteDynamicalSystem, k: int, values: Mapping[str, complex]) -> "CrossedElement":
        return cls(system, {k: dict(values)})

    def coefficient(self, k: int) -> dict[str, complex]:
        return dict(self.fourier.get(k, {}))

    def powers(self) -> tuple[int, ...]:
        return tuple(sorted(self.fourier))

    def is_zero(self) -> bool:
        return not self.fourier

    def isclose(self, other: "CrossedElement", tol: float = EQ_TOL) -> bool:
        _check_same_system(self, other)
        for k in set(self.fourier) | set(other.fourier):
            left = self.fourier.get(k, {})
            right = other.fourier.get(k, {})
            for x in set(left) | set(right):
                if abs(left.get(x, 0.0) - right.get(x, 0.0)) > tol:
                    return False
        return True

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        _check_same_system(self, other)
        fourier: dict[int, dict[str, complex]] = {k: dict(v) for k, v in self.fourier.items()}
        for k, values in other.fourier.items():
            bucket = fourier.setdefault(k, {})
            for x, c in values.items():
                bucket[x] = bucket.get(x, 0.0) + c
        return CrossedElement(self.system, fourier)

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        return self + (-other)

    def __neg__(self) -> "CrossedElement":
        return CrossedElement(self.system, {k: {x: -c for x, c in v.items()} for k, v in self.fourier.items()})

    def __mul__(self, other):
        if isinstance(other, CrossedElement):
            return multiply(self, other)
        if isinstance(other, (int, float, complex)):
            return CrossedElement(
                self.system, {k: {x: c * other for x, c in v.items()} for k, v in self.fourier.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "CrossedElement":
        return involute_crossed(self)


def _check_same_system(a: CrossedElement, b: CrossedElement) -> FiniteDynamicalSystem:
    if a.system is not b.system and a.system != b.system:
        raise SystemMismatchError("elements belong to different dynamical systems")
    return a.system


def multiply(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    """Covariant product: (U^k f)(U^m g) = U^{k+m} (f o phi^m) g."""
    system = _check_same_system(a, b)
    fourier: dict[int, dict[str, complex]] = {}
    for k, f in a.fourier.items():
        for m, g in b.fourier.items():
            bucket = fourier.setdefault(k + m, {})
            for x, gv in g.items():
                fv = f.get(system.apply(x, m))
                if fv is None:
                    continue
                bucket[x] = bucket.get(x, 0.0) + fv * gv
    return CrossedElement(system, fourier)


def involute_crossed(a: CrossedElement) -> CrossedElement:
    """Adjoint: (U^k f)^* = U^{-k} (conj(f) o phi^{-k})."""
    system = a.system
    fourier: dict[int, dict[str, complex]] = {}
    for k, f in a.fourier.items():
        bucket = fourier.setdefault(-k, {})
        for x in system.points:
            value = f.get(system.apply(x, -k))
            if value is not None:
                bucket[x] = bucket.get(x, 0.0) + value.conjugate()
    return CrossedElement(system, fourier)


def expect_crossed(a: CrossedElement) -> dict[str, complex]:
    """Expectation onto the diagonal: the zero Fourier coefficient."""
    return a.coefficient(0)


def evaluation_matrix(a: CrossedElement, point: str, z: complex) -> np.ndarray:
    """The matrix of the element in the orbit representation at (point, z).

    Basis vectors are the orbit points in forward order; U shifts them
    cyclically picking up a factor z on each wrap around the orbit.
    """
    orbit = a.system.orbit(point)
    m = len(orbit)
    out = np.zeros((m, m), dtype=complex)
    for k, f in a.fourier.items():
        for j, x in enumerate(orbit):
            value = f.get(x)
            if value is None:
                continue
            wraps = (j + k) // m
            out[(j + k) % m, j] += value * z**wraps
    return out


def _orbit_norm(a: CrossedElement, point: str) -> float:
    """sup over |z| = 1 of the evaluation-representation norm on one orbit."""
    orbit = a.system.orbit(point)
    m = len(orbit)
    powers = sorted({(j + k) // m for k in a.fourier for j in range(m)})
    coeff = {p: np.zeros((m, m), dtype=complex) for p in powers}
    for k, f in a.fourier.items():
        for j, x in enumerate(orbit):
            value = f.get(x)
            if value is None:
                continue
            coeff[(j + k) // m][(j + k) % m, j] += value
    if not coeff:
        return 0.0

    def grid_max(samples: int) -> float:
        best = 0.0
        chunk = 65536
        for start in range(0, samples, chunk):
            idx = np.arange(start, min(start + chunk, samples))
            zs = np.exp(2j * math.pi * idx / samples)
            stack = np.zeros((len(idx), m, m), dtype=complex)
            for p, c in coeff.items():
                stack += zs[:, None, None] ** p * c
            svals = np.linalg.svd(stack, compute_uv=False)
            best = max(best, float(np.max(svals[:, 0])))
        return best

    samples = NORM_GRID_START
    current = grid_max(samples)
    while samples < NORM_GRID_CAP:
        samples *= 2
        refined = grid_max(samples)
        if abs(refined - current) < NORM_REFINE_TOL:
            return refined
        current = refined
    return current


def norm_crossed(a: CrossedElement) -> float:
    """Norm as the max over orbits of the evaluation-family suprema."""
    return max((_orbit_norm(a, orbit[0]) for orbit in a.system.orbits()), default=0.0)


# -- states at a base point --------------------------------------------------


def rho0_state(a: CrossedElement, base_point: str) -> complex:
    """The expectation-composed-with-evaluation state."""
    a.system.index(base_point)
    return complex(a.coefficient(0).get(base_point, 0.0))


def phi_functional(a: CrossedElement, base_point: str) -> complex:
    """The isotropy functional at the point: read off the U^p coefficient.

    The witness normalizer is U^p with p the period of the point: its
    action fixes the point, its expectation vanishes, and U^p is unitary
    so no normalization enters.
    """
    p = a.system.period(base_point)
    return complex(a.coefficient(p).get(base_point, 0.0))


def phi0_state(a: CrossedElement, base_point: str) -> complex:
    """The second extension of evaluation at a periodic point.

    phi0 = rho0 + (phi + phi^adjoint)/2; on a series it reads
    f_0(x0) + (f_p(x0) + f_{-p}(x0))/2 with p the period of x0.  It
    agrees with rho0 on the diagonal but differs on U^p, so the
    evaluation state does not extend uniquely.
    """
    p = a.system.period(base_point)
    f0 = a.coefficient(0).get(base_point, 0.0)
    fp = a.coefficient(p).get(base_point, 0.0)
    fm = a.coefficient(-p).get(base_point, 0.0)
    return complex(f0 + 0.5 * (fp + fm))


@dataclass(frozen=True)
class CrossedState:
    """A named state at a base point: the canonical one or the witness."""

    base_point: str
    kind: str  # "rho0" | "phi0"
    witness_power: int

    def evaluate(self, a: CrossedElement) -> complex:
        if self.kind == "rho0":
            return rho0_state(a, self.base_point)
        if self.kind == "phi0":
            return phi0_state(a, self.base_point)
        raise ValueError(f"unknown state kind {self.kind!r}")


def isotropy_witness_power(system: FiniteDynamicalSystem, point: str) -> int:
    """Minimal positive power p with phi^p fixing the point (its period)."""
    return system.period(point)


def unique_extension_check(system: FiniteDynamicalSystem, point: str) -> bool:
    """Always false: every point of a finite permutation system is periodic."""
    return system.period(point) < 1


@dataclass(frozen=True)
class StateDichotomy:
    """The two extensions of evaluation at a point, told apart on U^p."""

    base_point: str
    period: int
    rho0_on_witness: complex
    phi_on_witness: complex
    phi0_on_witness: complex

    @property
    def distinct(self) -> bool:
        return abs(self.rho0_on_witness - self.phi0_on_witness) > EQ_TOL


def state_dichotomy(system: FiniteDynamicalSystem, base_point: str) -> StateDichotomy:
    p = system.period(base_point)
    witness = CrossedElement.unitary_power(system, p)
    return StateDichotomy(
        base_point,
        p,
        rho0_state(witness, base_point),
        phi_functional(witness, base_point),
        phi0_state(witness, base_point),
    )


def random_crossed(system: FiniteDynamicalSystem, rng: random.Random, max_power: int = 3, scale: float = 1.0) -> CrossedElement:
    """Series with Gaussian coefficients on powers -max_power..max_power."""
    fourier = {
        k: {x: complex(rng.gauss(0.0, scale), rng.gauss(0.0, scale)) for x in system.points}
        for k in range(-max_power, max_power + 1)
    }
    return CrossedElement(system, fourier)
