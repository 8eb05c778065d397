"""Numerical laboratory for hidden optical-polarization states.

Truncated two-mode Fock-space operator algebra, degenerate parametric
amplification, a classical random-phase field ensemble, and squeezing
onset analysis, cross-checked against closed-form Heisenberg solutions.
"""

from hopslab.classical import (
    FixedAmplitude,
    HopsEnsembleSpec,
    OrdinaryEnsembleSpec,
    RayleighAmplitude,
    classical_hidden,
    classical_stokes,
    hidden_index,
    polarization_index,
    sample_hops,
    sample_ordinary,
)
from hopslab.dpa import (
    DpaConfig,
    TruncationError,
    evolve,
    heisenberg_moments,
    interaction_hamiltonian,
    oracle_moments,
    suggest_cutoff,
    thermal_heisenberg_moments,
)
from hopslab.fock import (
    FockCutoff,
    Operator,
    QuantumState,
    annihilation,
    boundary_leakage,
    creation,
    expectation,
    fock_state,
    number_operator,
    pair_annihilation,
    variance,
)
from hopslab.polarization import (
    FitUndefinedError,
    HiddenSet,
    StokesSet,
    build_hidden,
    build_stokes,
    coherence_function,
    factorization_residuals,
    fit_hops_criterion,
    uncertainty_products,
    verify_hidden_commutators,
    verify_stokes_commutators,
)
from hopslab.squeezing import (
    FockModel,
    ThermalMixtureModel,
    WeightedProjectorModel,
    claimed_moment_table,
    onset_by_bisection,
    onset_time,
    squeezing_function,
    sweep,
    thermal_weight,
)

__version__ = "0.1.0"

__all__ = [
    "DpaConfig",
    "FitUndefinedError",
    "FixedAmplitude",
    "FockCutoff",
    "FockModel",
    "HiddenSet",
    "HopsEnsembleSpec",
    "Operator",
    "OrdinaryEnsembleSpec",
    "QuantumState",
    "RayleighAmplitude",
    "StokesSet",
    "ThermalMixtureModel",
    "TruncationError",
    "WeightedProjectorModel",
    "annihilation",
    "boundary_leakage",
    "build_hidden",
    "build_stokes",
    "claimed_moment_table",
    "classical_hidden",
    "classical_stokes",
    "coherence_function",
    "creation",
    "evolve",
    "expectation",
    "factorization_residuals",
    "fit_hops_criterion",
    "fock_state",
    "heisenberg_moments",
    "hidden_index",
    "interaction_hamiltonian",
    "number_operator",
    "onset_by_bisection",
    "onset_time",
    "oracle_moments",
    "pair_annihilation",
    "polarization_index",
    "sample_hops",
    "sample_ordinary",
    "squeezing_function",
    "suggest_cutoff",
    "sweep",
    "thermal_heisenberg_moments",
    "thermal_weight",
    "uncertainty_products",
    "variance",
    "verify_hidden_commutators",
    "verify_stokes_commutators",
]
