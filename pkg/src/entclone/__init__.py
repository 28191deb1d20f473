"""Entanglement broadcasting simulator: a six-photon linear-optics cloning
network with qubit-level and Fock-level models, tomography, and metrics."""

from .cloner import (
    CloneOutcome,
    InputSpec,
    NetworkConfig,
    fidelity_sweep,
    fit_overlap,
    hom_visibility,
    ideal_clone_sigma,
    run_ideal,
    run_physical,
)
from .qmath import DensityMatrix, PureState, bell_state

__all__ = [
    "CloneOutcome",
    "DensityMatrix",
    "InputSpec",
    "NetworkConfig",
    "PureState",
    "bell_state",
    "fidelity_sweep",
    "fit_overlap",
    "hom_visibility",
    "ideal_clone_sigma",
    "run_ideal",
    "run_physical",
]
