"""Grover quantum walks on jellyfish graphs: simulation, stationary solvers and observables."""

from .graph import JellyfishGraph, build_jellyfish, degree, incoming_arrows, outgoing_arrows, validate
from .walk import AmplitudeState, BoundaryInput, detect_convergence, evolve, grover_coin, step
from .solver import StationaryState, build_laplacian, solve, solve_electric, solve_fixed_point
from .observables import (
    J_out,
    P0,
    ObservableReport,
    accumulation_argmax,
    analyze,
    current_J,
    random_walk_baseline,
    scattering_matrix,
    verify_theorem4,
)

__all__ = [
    "AmplitudeState",
    "BoundaryInput",
    "JellyfishGraph",
    "J_out",
    "ObservableReport",
    "P0",
    "StationaryState",
    "accumulation_argmax",
    "analyze",
    "build_jellyfish",
    "build_laplacian",
    "current_J",
    "degree",
    "detect_convergence",
    "evolve",
    "grover_coin",
    "incoming_arrows",
    "outgoing_arrows",
    "random_walk_baseline",
    "scattering_matrix",
    "solve",
    "solve_electric",
    "solve_fixed_point",
    "step",
    "validate",
    "verify_theorem4",
]
