"""Biorthogonal eigensystems, antilinear operators and transition probabilities
for non-self-adjoint Hamiltonians with complex eigenvalues on C^n."""

from .antilinear import AntilinearOp, adjoint, apply, compose_aa, compose_al, compose_la, conjugation
from .biortho import BiorthogonalSystem, build_system, flat_adjoint, inner_phi, inner_psi, sharp_adjoint
from .dynamics import EvolutionSpec, EvolutionTrace, evolve, trace, transition_probability
from .intertwine import DerivedOperators, build_derived, build_v_ops
from .numerics import DEFAULT_TOL, EigenDecomposition, Tolerances, general_eig, hermitian_eig
from .two_level import DasGreenwoodParams, Regime, TwoLevelParams, build_h, map_das_greenwood

__version__ = "0.1.0"

__all__ = [
    "AntilinearOp", "adjoint", "apply", "compose_aa", "compose_al", "compose_la", "conjugation",
    "BiorthogonalSystem", "build_system", "flat_adjoint", "inner_phi", "inner_psi", "sharp_adjoint",
    "EvolutionSpec", "EvolutionTrace", "evolve", "trace", "transition_probability",
    "DerivedOperators", "build_derived", "build_v_ops",
    "DEFAULT_TOL", "EigenDecomposition", "Tolerances", "general_eig", "hermitian_eig",
    "DasGreenwoodParams", "Regime", "TwoLevelParams", "build_h", "map_das_greenwood",
]
