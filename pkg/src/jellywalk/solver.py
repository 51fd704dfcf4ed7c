"""Limit amplitudes of the Grover walk, computed without time stepping.

Two independent routes:

* ``solve_fixed_point`` solves ``x = U x + B alpha`` for the one-step map
  assembled from per-vertex Grover coins.
* ``solve_electric`` treats the core as a unit-resistance network driven by
  tail currents ``alpha_i - ave`` and reads amplitudes off the branch
  currents as ``psi = ave + J``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import SingularBeyondRepair, SingularMatrix, SingularSystem
from .graph import CoreGraph, JellyfishGraph
from .linalg import LinearSystem, grounded_solve, least_squares_solve, lu_solve
from .walk import AmplitudeState, BoundaryInput, _check_dims, grover_coin, step

FIXED_POINT_TOL = 1e-10
LSTSQ_TOL = 1e-8


@dataclass(frozen=True)
class StationaryState:
    core_amps: np.ndarray
    betas: np.ndarray
    ave: complex
    alphas: np.ndarray
    residual: float = 0.0
    method: str = ""
    currents: np.ndarray | None = None  # branch currents, when solved for directly

    def as_amplitudes(self) -> AmplitudeState:
        return AmplitudeState(self.core_amps, self.betas)

    @classmethod
    def from_amplitudes(
        cls, g: JellyfishGraph, s: AmplitudeState, b: BoundaryInput, method: str = "evolve"
    ) -> StationaryState:
        return cls(
            s.core_amps.copy(),
            s.tail_out.copy(),
            b.ave,
            b.alphas.copy(),
            fixed_point_residual(g, s, b),
            method,
        )


def fixed_point_residual(g: JellyfishGraph, s: AmplitudeState, b: BoundaryInput) -> float:
    nxt = step(g, s, b)
    return float(np.max(np.abs(nxt.vector() - s.vector()), initial=0.0))


def transfer_operator(g: JellyfishGraph) -> tuple[np.ndarray, np.ndarray]:
    """One-step map as matrices ``U`` (on state) and ``B`` (on alphas).

    State layout: core arrows by id, then tail output slots by tail order.
    Built block by block from ``grover_coin`` at each vertex.
    """
    E2, m = g.n_arrows, g.m
    N = E2 + m
    U = np.zeros((N, N))
    B = np.zeros((N, m))
    for v in g.vertices:
        # Input slots at v, each paired with the output slot on its reverse.
        ins: list[tuple[str, int]] = []
        outs: list[int] = []
        for a in g.arrows:
            if a.target == v:
                ins.append(("core", a.id))
                outs.append(a.reverse_id)
        for i, t in enumerate(g.tails):
            if t.attach == v:
                ins.append(("tail", i))
                outs.append(E2 + i)
        C = grover_coin(len(ins))
        for row, out in enumerate(outs):
            for col, (kind, idx) in enumerate(ins):
                if kind == "core":
                    U[out, idx] += C[row, col]
                else:
                    B[out, idx] += C[row, col]
    return U, B


def solve_fixed_point(g: JellyfishGraph, b: BoundaryInput) -> StationaryState:
    """Stationary state of the step map by a direct linear solve.

    ``I - U`` is singular exactly when the core has cycles (circulating
    currents are bound states). In that case the minimum-norm least-squares
    solution is returned, which is the limit reached from the zero state.
    """
    _check_dims(g, AmplitudeState.zeros(g), b)
    U, B = transfer_operator(g)
    sys = LinearSystem(np.eye(U.shape[0]) - U, B @ b.alphas)
    try:
        x = lu_solve(sys)
        method = "fixed-point/lu"
    except SingularMatrix:
        x, res = least_squares_solve(sys)
        if res > LSTSQ_TOL * max(1.0, float(np.abs(b.alphas).max(initial=0.0))):
            raise SingularBeyondRepair(f"least-squares residual {res:.3e}")
        method = "fixed-point/lstsq"
    s = AmplitudeState.from_vector(g, x)
    st = StationaryState.from_amplitudes(g, s, b, method)
    if st.residual > LSTSQ_TOL * max(1.0, float(np.abs(b.alphas).max(initial=0.0))):
        raise SingularBeyondRepair(f"fixed-point residual {st.residual:.3e}")
    return st


def build_laplacian(core: CoreGraph) -> np.ndarray:
    """Graph Laplacian ``D - A`` of the core (tails excluded)."""
    L = np.zeros((core.n, core.n))
    for a in core.arrows:
        L[a.origin - 1, a.target - 1] -= 1.0
        L[a.origin - 1, a.origin - 1] += 1.0
    return L


def tail_currents(g: JellyfishGraph, b: BoundaryInput) -> np.ndarray:
    """Net current ``sum(alpha_i - ave)`` injected at each vertex by its tails."""
    I = np.zeros(g.n, dtype=complex)
    np.add.at(I, g.attach, b.alphas - b.ave)
    return I


def solve_electric(g: JellyfishGraph, b: BoundaryInput) -> StationaryState:
    _check_dims(g, AmplitudeState.zeros(g), b)
    ave = b.ave
    I = tail_currents(g, b)
    L = build_laplacian(g.core)
    scale = float(np.abs(b.alphas).max(initial=0.0))
    try:
        phi = grounded_solve(L, I, ground=1, atol=1e-13 * scale)
    except SingularMatrix as exc:
        raise SingularSystem("core Laplacian is singular after grounding") from exc
    J = phi[g.origins] - phi[g.targets]
    s = AmplitudeState(J + ave, 2 * ave - b.alphas)
    return replace(StationaryState.from_amplitudes(g, s, b, "electric"), currents=J)


SOLVERS = {"fixed-point": solve_fixed_point, "electric": solve_electric}


def solve(g: JellyfishGraph, b: BoundaryInput, method: str = "fixed-point") -> StationaryState:
    try:
        fn = SOLVERS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(SOLVERS)}") from None
    return fn(g, b)
