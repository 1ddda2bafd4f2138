"""Transitive Lie algebroids as exact transition data over a nerve."""

from .algebroid import (
    AlgebroidDescriptor,
    ClassificationResult,
    EquivalenceResult,
    GaugeDatum,
    TransitionMatrix,
    classify_commutative,
    compose_gauges,
    compose_transitions,
    equivalent_abelian,
    equivalent_given_eta,
    gauge_transform,
    induced_class,
    pullback_descriptor,
    trivial_descriptor,
    validate,
)
from .lie import LieAlgebra, LieMap, abelian, heisenberg, sl2
from .linalg import Matrix
from .local_system import CohomologyClass, LocalSystem, TwistedCochain
from .nerve import SimplicialComplex, SimplicialMap, builtin

__version__ = "0.1.0"

__all__ = [
    "AlgebroidDescriptor",
    "ClassificationResult",
    "CohomologyClass",
    "EquivalenceResult",
    "GaugeDatum",
    "LieAlgebra",
    "LieMap",
    "LocalSystem",
    "Matrix",
    "SimplicialComplex",
    "SimplicialMap",
    "TransitionMatrix",
    "TwistedCochain",
    "abelian",
    "builtin",
    "classify_commutative",
    "compose_gauges",
    "compose_transitions",
    "equivalent_abelian",
    "equivalent_given_eta",
    "gauge_transform",
    "heisenberg",
    "induced_class",
    "pullback_descriptor",
    "sl2",
    "trivial_descriptor",
    "validate",
]
