"""Geometric means of symmetric positive definite matrices."""

from .barycenter import (
    DiscreteMeasure,
    contractivity_check,
    iterativity_check,
    karcher_barycenter,
    uniformize,
    wasserstein,
)
from .binary import (
    arithmetic_mean,
    check_basic_properties,
    geometric_mean,
    harmonic_mean,
    riccati_residual,
)
from .config import PropertyCheck, SolverConfig, SolverResult
from .linalg import (
    ConvergenceError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SpdMatrix,
    congruence,
    determinant,
    expm,
    frobenius_norm,
    jacobi_eigh,
    logm,
    loewner_leq,
    matrix_function,
    powm,
    spectral_decompose,
    spectral_projections,
    sqrtm,
    trace,
)
from .means import (
    Weight,
    WeightedTuple,
    alm_mean,
    check_alm_axioms,
    inductive_mean,
    karcher_mean,
    karcher_residual,
    karcher_via_power_limit,
    power_mean,
    weighted_arithmetic,
    weighted_harmonic,
    yamazaki_check,
)
from .metrics import MetricTag, delta, distance, npc_check, thompson, weighted_geometric
from .stochastic import (
    WalkTrace,
    deterministic_walk,
    monotonicity_experiment,
    sturm_walk,
)

__version__ = "0.1.0"
