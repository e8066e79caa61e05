"""Finite twisted groupoid algebras: Cartan pairs, representations, nests.

A desk-scale model of twisted groupoid convolution algebras over finite
equivalence relations, together with the structures built on them:
Dirichlet subalgebras cut out by sub-pseudogroups, GNS representations at
unit-space points with their invariant-subspace lattices, and finite
crossed products exhibiting the state-extension dichotomy at periodic
points.
"""

from .algebra import (
    AlgebraElement,
    GroupoidMismatchError,
    Normalizer,
    NormalizerRejection,
    as_normalizer,
    convolve,
    expect,
    involute,
    operator_norm,
    weyl_covariance_check,
)
from .dirichlet import (
    DirichletOrder,
    density_dimension,
    diagonal_intersection,
    is_member,
    validate_order,
)
from .groupoid import (
    Arrow,
    CompositionError,
    FiniteTwistedGroupoid,
    PartialBijection,
    UnitSpace,
    UnknownPointError,
    validate,
)
from .reps import (
    GnsRep,
    InvariantLattice,
    NormAchievement,
    gns_cartan_check,
    gns_rep,
    invariant_lattice,
    isotropy_witnesses,
    kernel_test,
    norm_achievement,
    unique_extension_check,
)
from .semicrossed import (
    CrossedElement,
    CrossedState,
    FiniteDynamicalSystem,
    expect_crossed,
    involute_crossed,
    multiply,
    norm_crossed,
    phi0_state,
    phi_functional,
    rho0_state,
    state_dichotomy,
)

__version__ = "0.1.0"
