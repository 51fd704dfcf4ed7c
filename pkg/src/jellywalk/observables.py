"""Currents, accumulation and scattering quantities derived from a stationary state."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import KirchhoffMismatch, UndefinedForZeroAve
from .graph import JellyfishGraph, _check_vertex
from .solver import StationaryState, solve
from .walk import BoundaryInput, grover_coin

KIRCHHOFF_TOL = 1e-12
ARGMAX_ATOL = 1e-9


@dataclass(frozen=True)
class Currents:
    """J on core arrows and on both directions of every tail."""

    core: np.ndarray
    tail_in: np.ndarray
    tail_out: np.ndarray


def current_J(s: StationaryState) -> Currents:
    """``J(a) = psi(a) - ave`` on every arrow, tails included.

    Core currents computed directly by the electric route are used as is, so
    their antisymmetry stays exact.
    """
    core = s.currents if s.currents is not None else s.core_amps - s.ave
    return Currents(core, s.alphas - s.ave, s.betas - s.ave)


def core_inflow(g: JellyfishGraph, J: Currents, v: int) -> complex:
    """Sum of J over core arrows entering ``v``."""
    _check_vertex(g, v)
    return complex(J.core[g.targets == v - 1].sum())


def J_out(g: JellyfishGraph, J: Currents, v: int, tol: float | None = KIRCHHOFF_TOL) -> complex:
    """Total J on the outward tail arrows at ``v``.

    The current law makes this equal to the core inflow at ``v``; the two
    forms are compared and KirchhoffMismatch is raised when they differ by
    more than ``tol`` (pass ``tol=None`` to skip, e.g. for a transient state).
    """
    _check_vertex(g, v)
    out = complex(J.tail_out[g.attach == v - 1].sum())
    if tol is not None:
        gap = abs(out - core_inflow(g, J, v))
        if gap > tol * max(1.0, float(np.abs(J.core).max(initial=0.0))):
            raise KirchhoffMismatch(f"vertex {v}: tail outflow and core inflow differ by {gap:.3e}")
    return out


def P0(g: JellyfishGraph, s: StationaryState, v: int) -> float:
    """Squared moduli on core arrows into ``v`` minus those on their reverses."""
    _check_vertex(g, v)
    into = g.targets == v - 1
    sq = np.abs(s.core_amps) ** 2
    return float(sq[into].sum() - sq[g.reverse[into]].sum())


def predicted_P0(ave: complex, j_out: complex) -> float:
    """``4 Re(conj(ave) * J_out)``; reduces to ``4 ave J_out`` for real inputs.

    Expanding ``|ave + J|^2 - |ave - J|^2`` leaves only the cross terms
    ``2 Re(conj(ave) J)`` twice.
    """
    return 4.0 * (np.conj(ave) * j_out).real


def kirchhoff_residual(g: JellyfishGraph, J: Currents) -> float:
    """Max violation of antisymmetry and of vertex current conservation."""
    anti = np.abs(J.core + J.core[g.reverse]).max(initial=0.0)
    inflow = np.zeros(g.n, dtype=complex)
    np.add.at(inflow, g.targets, J.core)
    np.add.at(inflow, g.attach, J.tail_in)
    tail_anti = np.abs(J.tail_in + J.tail_out).max(initial=0.0)
    return float(max(anti, np.abs(inflow).max(initial=0.0), tail_anti))


@dataclass(frozen=True)
class VertexRow:
    vertex: int
    J_out: complex
    P0: float
    predicted: float

    @property
    def residual(self) -> float:
        return abs(self.P0 - self.predicted)


def verify_theorem4(
    g: JellyfishGraph, s: StationaryState, kirchhoff_tol: float | None = KIRCHHOFF_TOL
) -> tuple[float, list[VertexRow]]:
    """Compare the accumulation P0 with ``4 ave J_out`` at every vertex.

    For complex inputs the comparison uses ``4 Re(conj(ave) J_out)``.
    """
    J = current_J(s)
    rows = [
        VertexRow(v, jo := J_out(g, J, v, kirchhoff_tol), P0(g, s, v), predicted_P0(s.ave, jo))
        for v in g.vertices
    ]
    return max(r.residual for r in rows), rows


def accumulation_argmax(values: np.ndarray | list[float], atol: float = ARGMAX_ATOL) -> list[int]:
    """1-based vertices attaining the maximum of ``values``, ties included."""
    x = np.asarray(values, dtype=float)
    top = x.max()
    return [int(i) + 1 for i in np.flatnonzero(x >= top - atol * max(1.0, abs(top)))]


@dataclass(frozen=True)
class ScatteringMatrix:
    S: np.ndarray

    @property
    def m(self) -> int:
        return self.S.shape[0]

    @property
    def deviation(self) -> float:
        """Largest entrywise gap from the m x m Grover coin."""
        return float(np.abs(self.S - grover_coin(self.m)).max())


def scattering_matrix(g: JellyfishGraph, method: str = "fixed-point") -> ScatteringMatrix:
    """Map from tail inputs to tail outputs, one basis vector per column."""
    m = g.m
    S = np.zeros((m, m), dtype=complex)
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        S[:, i] = solve(g, BoundaryInput(e), method).betas
    if np.abs(S.imag).max(initial=0.0) == 0:
        S = S.real
    return ScatteringMatrix(S)


def random_walk_baseline(g: JellyfishGraph) -> np.ndarray:
    """Edge-uniform limit measure of the classical walk, one entry per core arrow."""
    if g.n_arrows == 0:
        return np.zeros(0)
    return np.full(g.n_arrows, 1.0 / g.n_arrows)


@dataclass(frozen=True)
class ObservableReport:
    graph: JellyfishGraph
    state: StationaryState
    J: Currents
    rows: list[VertexRow]
    thm4_residual: float
    kirchhoff_residual: float
    argmax_P0: list[int]
    argmax_J_out: list[int]
    zero_ave: bool
    baseline: np.ndarray

    @property
    def ave(self) -> complex:
        return self.state.ave

    @property
    def J_out(self) -> np.ndarray:
        return np.array([r.J_out for r in self.rows])

    @property
    def P0(self) -> np.ndarray:
        return np.array([r.P0 for r in self.rows])

    @property
    def argmax_vertex(self) -> list[int]:
        return self.argmax_P0

    @property
    def argmax_agree(self) -> bool:
        return self.argmax_P0 == self.argmax_J_out


def analyze(g: JellyfishGraph, s: StationaryState, kirchhoff_tol: float | None = KIRCHHOFF_TOL) -> ObservableReport:
    J = current_J(s)
    resid, rows = verify_theorem4(g, s, kirchhoff_tol)
    P = np.array([r.P0 for r in rows])
    ave = s.ave
    zero_ave = abs(ave) <= 1e-12 * max(1.0, float(np.abs(s.alphas).max(initial=0.0)))
    if zero_ave:
        warnings.warn("mean input amplitude is zero; P0 vanishes identically", UndefinedForZeroAve, stacklevel=2)
        by_P0 = list(g.vertices)
        by_J = list(g.vertices)
    else:
        by_P0 = accumulation_argmax(P)
        # Rank the outflow by its projection on the mean input, so that the
        # ranking matches P0 for either sign of ave (and for complex inputs).
        proj = np.array([(np.conj(ave) * r.J_out).real for r in rows]) / abs(ave)
        by_J = accumulation_argmax(proj)
    return ObservableReport(
        graph=g,
        state=s,
        J=J,
        rows=rows,
        thm4_residual=resid,
        kirchhoff_residual=kirchhoff_residual(g, J),
        argmax_P0=by_P0,
        argmax_J_out=by_J,
        zero_ave=zero_ave,
        baseline=random_walk_baseline(g),
    )


def analyze_input(g: JellyfishGraph, b: BoundaryInput, method: str = "fixed-point") -> ObservableReport:
    return analyze(g, solve(g, b, method))
