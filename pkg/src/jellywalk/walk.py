"""Discrete-time Grover walk on a jellyfish graph with constant tail injection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyTrajectory, NonPositiveDegree
from .graph import JellyfishGraph, diameter

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
WINDOW = 10


def grover_coin(r: int) -> np.ndarray:
    """Return the r x r Grover coin: ``2/r`` off the diagonal, ``2/r - 1`` on it."""
    if r < 1:
        raise NonPositiveDegree(f"Grover coin needs r >= 1, got {r}")
    return np.full((r, r), 2.0 / r) - np.eye(r)


@dataclass(frozen=True)
class BoundaryInput:
    """Constant inward amplitudes, one per tail, in tail order."""

    alphas: np.ndarray

    def __init__(self, alphas: Sequence[complex] | np.ndarray):
        object.__setattr__(self, "alphas", np.asarray(alphas, dtype=complex).reshape(-1))

    @property
    def ave(self) -> complex:
        return complex(self.alphas.mean())

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.alphas.imag == 0))


@dataclass(frozen=True)
class AmplitudeState:
    """Amplitudes on core arrows and on the first outward arrow of each tail."""

    core_amps: np.ndarray
    tail_out: np.ndarray

    @classmethod
    def zeros(cls, g: JellyfishGraph) -> AmplitudeState:
        return cls(np.zeros(g.n_arrows, dtype=complex), np.zeros(g.m, dtype=complex))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.core_amps, self.tail_out])

    @classmethod
    def from_vector(cls, g: JellyfishGraph, x: np.ndarray) -> AmplitudeState:
        x = np.asarray(x, dtype=complex)
        if x.shape != (g.n_arrows + g.m,):
            raise DimensionMismatch(f"expected {g.n_arrows + g.m} amplitudes, got {x.shape}")
        return cls(x[: g.n_arrows].copy(), x[g.n_arrows :].copy())

    def __add__(self, other: AmplitudeState) -> AmplitudeState:
        return AmplitudeState(self.core_amps + other.core_amps, self.tail_out + other.tail_out)


def sup_distance(s: AmplitudeState, t: AmplitudeState) -> float:
    return float(np.max(np.abs(s.vector() - t.vector()), initial=0.0))


def _check_dims(g: JellyfishGraph, s: AmplitudeState, b: BoundaryInput) -> None:
    if s.core_amps.shape != (g.n_arrows,) or s.tail_out.shape != (g.m,):
        raise DimensionMismatch(
            f"state has {s.core_amps.shape}/{s.tail_out.shape}, graph needs ({g.n_arrows},)/({g.m},)"
        )
    if b.alphas.shape != (g.m,):
        raise DimensionMismatch(f"{b.alphas.size} boundary amplitudes for {g.m} tails")


def step(g: JellyfishGraph, s: AmplitudeState, b: BoundaryInput) -> AmplitudeState:
    """Advance one time step.

    At a vertex of degree r the amplitude leaving along the reverse of input
    slot k is ``(2/r) * sum(inputs) - input_k``, which is the Grover coin
    applied to the incoming block. Tail inputs are the constant alphas.
    """
    _check_dims(g, s, b)
    sums = np.zeros(g.n, dtype=complex)
    np.add.at(sums, g.targets, s.core_amps)
    np.add.at(sums, g.attach, b.alphas)
    scaled = 2.0 * sums / g.degrees
    core = scaled[g.origins] - s.core_amps[g.reverse]
    tail = scaled[g.attach] - b.alphas
    return AmplitudeState(core, tail)


@dataclass
class Trajectory:
    states: list[AmplitudeState]
    deltas: list[float] = field(default_factory=list)
    converged_at: int | None = None
    oscillating: bool = False

    @property
    def T(self) -> int:
        return len(self.states) - 1

    @property
    def final(self) -> AmplitudeState:
        return self.states[-1]


def evolve(
    g: JellyfishGraph,
    b: BoundaryInput,
    T: int,
    initial: AmplitudeState | None = None,
) -> Trajectory:
    """Run ``T`` steps from ``initial`` (all zeros by default)."""
    if T < 0:
        raise ValueError(f"step count must be >= 0, got {T}")
    s = AmplitudeState.zeros(g) if initial is None else initial
    _check_dims(g, s, b)
    traj = Trajectory([s])
    for _ in range(T):
        nxt = step(g, s, b)
        traj.deltas.append(sup_distance(nxt, s))
        traj.states.append(nxt)
        s = nxt
    return traj


@dataclass(frozen=True)
class Convergence:
    converged_at: int | None
    oscillating: bool
    cesaro: AmplitudeState


def detect_convergence(traj: Trajectory, tol: float = DEFAULT_TOL) -> Convergence:
    """Locate pointwise convergence or period-2 oscillation in a trajectory.

    ``converged_at`` is the first t whose step deltas stay below ``tol`` for
    ``WINDOW`` consecutive steps, or for every remaining step when fewer are
    recorded. ``cesaro`` averages the trailing window of states; for a
    period-2 tail the window holds an even number of states so the average is
    exact.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    states = traj.states
    if not states:
        raise EmptyTrajectory("trajectory has no states")
    deltas = traj.deltas or [sup_distance(states[i + 1], states[i]) for i in range(len(states) - 1)]

    converged_at = None
    for t in range(len(deltas)):
        window = deltas[t : t + WINDOW]
        if all(d < tol for d in window) and (len(window) == WINDOW or t + len(window) == len(deltas)):
            converged_at = t
            break

    oscillating = (
        converged_at is None
        and len(states) >= 3
        and sup_distance(states[-1], states[-3]) < tol
        and deltas[-1] >= tol
    )

    k = min(2 * WINDOW, len(states))
    if k > 1 and k % 2:
        k -= 1
    tail = states[-k:]
    cesaro = AmplitudeState(
        np.mean([s.core_amps for s in tail], axis=0),
        np.mean([s.tail_out for s in tail], axis=0),
    )
    traj.converged_at = converged_at
    traj.oscillating = oscillating
    return Convergence(converged_at, oscillating, cesaro)


def evolve_until(
    g: JellyfishGraph,
    b: BoundaryInput,
    tol: float = DEFAULT_TOL,
    max_steps: int = 10_000,
) -> tuple[AmplitudeState, Convergence, int]:
    """Step until convergence or period-2 oscillation is detected.

    Returns the limit estimate, the convergence record and the number of steps
    taken. Only the trailing window of states is kept in memory.
    """
    s = AmplitudeState.zeros(g)
    recent = [s]
    deltas: list[float] = []
    for t in range(1, max_steps + 1):
        s = step(g, s, b)
        deltas.append(sup_distance(s, recent[-1]))
        recent.append(s)
        if len(recent) > 2 * WINDOW + 1:
            recent.pop(0)
            deltas.pop(0)
        if len(deltas) >= WINDOW and all(d < tol for d in deltas[-WINDOW:]):
            return s, Convergence(t - WINDOW, False, s), t
        if (
            len(recent) >= 2 * WINDOW
            and all(sup_distance(recent[-1 - i], recent[-3 - i]) < tol for i in range(WINDOW))
        ):
            conv = detect_convergence(Trajectory(recent, deltas), tol)
            log.info("period-2 oscillation after %d steps; reporting Cesaro average", t)
            return conv.cesaro, Convergence(None, True, conv.cesaro), t
    conv = detect_convergence(Trajectory(recent, deltas), tol)
    return s, conv, max_steps


def evolution_horizon(g: JellyfishGraph) -> int:
    """Step count ``50 * diameter``, at least 50 so a one-vertex core still evolves."""
    return 50 * max(diameter(g), 1)
