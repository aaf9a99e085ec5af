"""Non-Markovianity of a qubit in a Lorentzian environment.

Hierarchy-of-matrices propagation of the reduced qubit dynamics for bosonic
and fermionic baths with tunable counter-rotating coupling strength, the
exact excitation-conserving oracle, and the trace-distance measure of
memory effects.
"""

__version__ = "0.1.0"

from .bath import BathModel, Statistics
from .errors import ConfigError, DepthConvergenceError, NumericalDivergenceError
from .heom import (
    HierarchyPropagator,
    HierarchyState,
    PropagatorConfig,
    Trajectory,
    bosonic_rhs,
    converged_depth,
    fermionic_rhs,
    propagate,
    propagate_states,
)
from .measure import (
    InitialPair,
    MeasureResult,
    PairSampler,
    maximize,
    nonmarkovianity_for_pair,
    pair_distance_series,
    pair_states,
    positive_variation,
)
from .operators import (
    CouplingOperator,
    EXCITED,
    GROUND,
    IDENTITY,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    commutator,
    check_density_matrix,
    dagger,
    hermitian_eigenvalues,
    is_density_matrix,
    phase_unitary,
    trace_distance,
)
from .rwa import RwaSolution, closed_form_G, propagate_rwa, solve_F, solve_rwa

__all__ = [
    "BathModel",
    "Statistics",
    "ConfigError",
    "DepthConvergenceError",
    "NumericalDivergenceError",
    "HierarchyPropagator",
    "HierarchyState",
    "PropagatorConfig",
    "Trajectory",
    "bosonic_rhs",
    "fermionic_rhs",
    "propagate",
    "propagate_states",
    "converged_depth",
    "InitialPair",
    "MeasureResult",
    "PairSampler",
    "maximize",
    "nonmarkovianity_for_pair",
    "pair_distance_series",
    "pair_states",
    "positive_variation",
    "CouplingOperator",
    "EXCITED",
    "GROUND",
    "IDENTITY",
    "SIGMA_MINUS",
    "SIGMA_PLUS",
    "SIGMA_Z",
    "commutator",
    "check_density_matrix",
    "dagger",
    "hermitian_eigenvalues",
    "is_density_matrix",
    "phase_unitary",
    "trace_distance",
    "RwaSolution",
    "closed_form_G",
    "propagate_rwa",
    "solve_F",
    "solve_rwa",
]
