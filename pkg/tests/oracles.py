"""Independent reference implementations the package is tested against.

Everything here follows the defining formulas literally (full sums over
all arrows, no support-driven shortcuts) or delegates to numpy, so these
paths share no code with the implementations they check.
"""

import numpy as np

from cartan.algebra import AlgebraElement
from cartan.groupoid import Arrow


def naive_convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """(f*g)(gamma) = sum over tau with s(tau)=s(gamma) of
    sigma(gamma tau^{-1}, tau) f(gamma tau^{-1}) g(tau)."""
    gpd = f.groupoid
    out = {}
    for gamma in gpd.sorted_arrows:
        total = 0j
        for tau in gpd.sorted_arrows:
            if tau.source != gamma.source:
                continue
            left = Arrow(gamma.range, tau.range)
            if left not in gpd.arrows:
                continue
            total += gpd.twist(left, tau) * f.coeffs.get(left, 0j) * g.coeffs.get(tau, 0j)
        out[gamma] = total
    return AlgebraElement(gpd, out)


def naive_involute(f: AlgebraElement) -> AlgebraElement:
    gpd = f.groupoid
    out = {}
    for gamma in gpd.sorted_arrows:
        inv = Arrow(gamma.source, gamma.range)
        out[gamma] = complex(gpd.twist(gamma, inv)).conjugate() * f.coeffs.get(inv, 0j).conjugate()
    return AlgebraElement(gpd, out)


def matrix_model(a: AlgebraElement, orbit) -> np.ndarray:
    """Coefficient matrix over one orbit (the trivial-cocycle matrix model)."""
    index = {p: i for i, p in enumerate(orbit)}
    out = np.zeros((len(orbit), len(orbit)), dtype=complex)
    for arrow, c in a.coeffs.items():
        if arrow.range in index and arrow.source in index:
            out[index[arrow.range], index[arrow.source]] = c
    return out


def element_from_matrix(groupoid, orbit, m: np.ndarray) -> AlgebraElement:
    coeffs = {}
    for i, r in enumerate(orbit):
        for j, s in enumerate(orbit):
            coeffs[Arrow(r, s)] = m[i, j]
    return AlgebraElement(groupoid, coeffs)


def svd_norm(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


class BruteForceGns:
    """GNS model built from scratch at a base point.

    Takes the full arrow basis of the algebra, computes the Gram form of
    the evaluation state by the naive product and adjoint, quotients out
    the null space by modified Gram-Schmidt, and represents elements as
    left multiplication expanded against that orthonormal basis.
    """

    NULL_TOL = 1e-8

    def __init__(self, groupoid, base_point: str):
        self.groupoid = groupoid
        self.base_point = base_point
        self.arrows = list(groupoid.sorted_arrows)
        self.arrow_index = {a: i for i, a in enumerate(self.arrows)}
        n = len(self.arrows)
        unit = Arrow(base_point, base_point)
        gram = np.zeros((n, n), dtype=complex)
        for i, bi in enumerate(self.arrows):
            bi_star = naive_involute(AlgebraElement.indicator(groupoid, bi))
            for j, bj in enumerate(self.arrows):
                product = naive_convolve(bi_star, AlgebraElement.indicator(groupoid, bj))
                gram[i, j] = product.coeffs.get(unit, 0j)
        self.gram = gram
        # modified Gram-Schmidt over the arrow basis w.r.t. the Gram form
        basis: list[np.ndarray] = []
        for i in range(n):
            v = np.zeros(n, dtype=complex)
            v[i] = 1.0
            for u in basis:
                v = v - self._inner(v, u) * u
            norm = np.sqrt(max(self._inner(v, v).real, 0.0))
            if norm > self.NULL_TOL:
                basis.append(v / norm)
        self.basis = basis

    def _inner(self, v: np.ndarray, w: np.ndarray) -> complex:
        # <v, w> = w^H G v  with G[i, j] = <b_j, b_i>
        return complex(np.conj(w) @ (self.gram @ v))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def _coeff_vector(self, a: AlgebraElement) -> np.ndarray:
        v = np.zeros(len(self.arrows), dtype=complex)
        for arrow, c in a.coeffs.items():
            v[self.arrow_index[arrow]] = c
        return v

    def matrix(self, a: AlgebraElement) -> np.ndarray:
        n = len(self.arrows)
        mult = np.zeros((n, n), dtype=complex)  # columns: a * b_j in the arrow basis
        for j, bj in enumerate(self.arrows):
            product = naive_convolve(a, AlgebraElement.indicator(self.groupoid, bj))
            mult[:, j] = self._coeff_vector(product)
        d = self.dimension
        out = np.zeros((d, d), dtype=complex)
        for k, u in enumerate(self.basis):
            image = mult @ u
            for l, w in enumerate(self.basis):
                out[l, k] = self._inner(image, w)
        return out

    def intertwiner(self, rep) -> np.ndarray:
        """Pairings of the package's canonical basis against this one."""
        d = self.dimension
        out = np.zeros((d, d), dtype=complex)
        for column, arrow in enumerate(rep.basis):
            e = np.zeros(len(self.arrows), dtype=complex)
            e[self.arrow_index[arrow]] = 1.0
            for l, w in enumerate(self.basis):
                out[l, column] = self._inner(e, w)
        return out
