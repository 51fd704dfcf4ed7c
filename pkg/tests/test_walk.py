from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state
from jellywalk import io as jio
from jellywalk.errors import DimensionMismatch, EmptyTrajectory, NonPositiveDegree
from jellywalk.graph import build_jellyfish
from jellywalk.solver import solve_electric, transfer_operator
from jellywalk.walk import (
    AmplitudeState,
    BoundaryInput,
    Trajectory,
    detect_convergence,
    evolve,
    evolve_until,
    grover_coin,
    step,
    sup_distance,
)


def test_coin_small():
    np.testing.assert_array_equal(grover_coin(1), [[1.0]])
    np.testing.assert_array_equal(grover_coin(2), [[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(
        grover_coin(3), np.array([[-1, 2, 2], [2, -1, 2], [2, 2, -1]]) / 3, atol=1e-15
    )


def test_coin_rejects_nonpositive():
    with pytest.raises(NonPositiveDegree):
        grover_coin(0)


@pytest.mark.parametrize("r", range(1, 33))
def test_coin_algebra(r):
    C = grover_coin(r)
    np.testing.assert_allclose(C, C.T, atol=0)
    np.testing.assert_allclose(C @ C, np.eye(r), atol=1e-14)
    np.testing.assert_allclose(C.sum(axis=1), 1.0, atol=1e-14)


def test_step_two_vertex(two_vertex, aid):
    g = two_vertex
    s = step(g, AmplitudeState.zeros(g), BoundaryInput([1, 0]))
    assert s.core_amps[aid(g, 1, 2)] == 1
    assert s.core_amps[aid(g, 2, 1)] == 0
    np.testing.assert_array_equal(s.tail_out, [0, 0])


def test_step_star(star):
    s = step(star, AmplitudeState.zeros(star), BoundaryInput([1, 0, 0]))
    np.testing.assert_allclose(s.tail_out, [-1 / 3, 2 / 3, 2 / 3], atol=1e-15)


def test_step_zero(triangle):
    s = step(triangle, AmplitudeState.zeros(triangle), BoundaryInput([0, 0]))
    assert not s.vector().any()


def test_step_dimension_mismatch(triangle):
    with pytest.raises(DimensionMismatch):
        step(triangle, AmplitudeState.zeros(triangle), BoundaryInput([1, 0, 0]))


def _coin_step_exact(g, core, alphas):
    """Apply each vertex coin with rational arithmetic, slot by slot."""
    out_core = [None] * g.n_arrows
    out_tail = [None] * g.m
    for v in g.vertices:
        ins = [(core[a.id], ("core", a.reverse_id)) for a in g.arrows if a.target == v]
        ins += [(alphas[i], ("tail", i)) for i, t in enumerate(g.tails) if t.attach == v]
        r = len(ins)
        for row, (_, (kind, idx)) in enumerate(ins):
            val = sum(
                (Fraction(2, r) - (1 if row == col else 0)) * x for col, (x, _) in enumerate(ins)
            )
            if kind == "core":
                out_core[idx] = val
            else:
                out_tail[idx] = val
    return out_core, out_tail


def test_step_matches_rational_coins(triangle):
    rng = np.random.default_rng(3)
    core = [Fraction(int(x), 7) for x in rng.integers(-10, 10, triangle.n_arrows)]
    alphas = [Fraction(1), Fraction(-2, 5)]
    want_core, want_tail = _coin_step_exact(triangle, core, alphas)
    s = step(triangle, AmplitudeState(np.array(core, float), np.zeros(2)), BoundaryInput([float(a) for a in alphas]))
    np.testing.assert_allclose(s.core_amps, [float(x) for x in want_core], atol=1e-15)
    np.testing.assert_allclose(s.tail_out, [float(x) for x in want_tail], atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_step_matches_transfer_operator(seed):
    g, alphas = jio.random_instance(seed)
    rng = np.random.default_rng(seed)
    s = random_state(g, rng)
    U, B = transfer_operator(g)
    b = BoundaryInput(alphas)
    np.testing.assert_allclose(step(g, s, b).vector(), U @ s.vector() + B @ b.alphas, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_linearity(seed):
    g, _ = jio.random_instance(seed)
    rng = np.random.default_rng(seed)
    s1, s2 = random_state(g, rng), random_state(g, rng)
    b1 = BoundaryInput(rng.normal(size=g.m) + 1j * rng.normal(size=g.m))
    b2 = BoundaryInput(rng.normal(size=g.m))
    lhs = step(g, s1 + s2, BoundaryInput(b1.alphas + b2.alphas))
    rhs = step(g, s1, b1) + step(g, s2, b2)
    np.testing.assert_allclose(lhs.vector(), rhs.vector(), atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_per_vertex_norm(seed):
    g, _ = jio.random_instance(seed)
    rng = np.random.default_rng(seed)
    s = random_state(g, rng)
    b = BoundaryInput(rng.normal(size=g.m) + 1j * rng.normal(size=g.m))
    nxt = step(g, s, b)
    for v in range(g.n):
        into = np.concatenate([s.core_amps[g.targets == v], b.alphas[g.attach == v]])
        out = np.concatenate([nxt.core_amps[g.origins == v], nxt.tail_out[g.attach == v]])
        assert abs(np.linalg.norm(into) - np.linalg.norm(out)) < 1e-13


@pytest.mark.parametrize("seed", range(10))
def test_uniform_input_fixed(seed):
    g, _ = jio.random_instance(seed)
    c = 0.3 - 0.7j
    s = AmplitudeState(np.full(g.n_arrows, c), np.full(g.m, c))
    nxt = step(g, s, BoundaryInput(np.full(g.m, c)))
    np.testing.assert_allclose(nxt.vector(), c, atol=1e-15)


def _materialize_tails(g, L):
    """Replace each tail by an explicit path of L vertices ending in a tail."""
    edges = g.edges()
    attach = []
    paths = []
    n = g.n
    for t in g.tails:
        prev = t.attach
        path = []
        for _ in range(L):
            n += 1
            edges.append((prev, n))
            path.append((prev, n))
            prev = n
        attach.append(prev)
        paths.append(path)
    return build_jellyfish(n, edges, attach), paths


@pytest.mark.parametrize("seed", range(8))
def test_free_tail_harness(seed, aid):
    L = 20
    g, alphas = jio.random_instance(seed)
    big, paths = _materialize_tails(g, L)
    b = BoundaryInput(alphas)
    # Explicit tails start with alpha on every inward arrow, 0 outward.
    init = AmplitudeState.zeros(big)
    for path, a in zip(paths, alphas):
        for u, v in path:
            init.core_amps[aid(big, v, u)] = a
    small = evolve(g, b, L).states
    large = evolve(big, b, L, initial=init).states
    first_outward = [aid(big, *path[0]) for path in paths]
    for t in range(L + 1):
        np.testing.assert_allclose(large[t].core_amps[: g.n_arrows], small[t].core_amps, atol=1e-13)
        np.testing.assert_allclose(large[t].core_amps[first_outward], small[t].tail_out, atol=1e-13)


def test_evolve_two_vertex(two_vertex, aid):
    g = two_vertex
    traj = evolve(g, BoundaryInput([1, 0]), 4)
    assert traj.T == 4
    for s in traj.states[2:]:
        assert s.core_amps[aid(g, 1, 2)] == 1 and s.core_amps[aid(g, 2, 1)] == 0
        np.testing.assert_array_equal(s.tail_out, [0, 1])
    conv = detect_convergence(traj, 1e-12)
    assert conv.converged_at == 2 and not conv.oscillating


def test_evolve_zero_steps(triangle):
    traj = evolve(triangle, BoundaryInput([1, 0]), 0)
    assert len(traj.states) == 1


def test_zero_input_converges_at_once(triangle):
    conv = detect_convergence(evolve(triangle, BoundaryInput([0, 0]), 30))
    assert conv.converged_at == 0


def test_triangle_evolution_reaches_solver(triangle):
    b = BoundaryInput([1, 0])
    traj = evolve(triangle, b, 200)
    ref = solve_electric(triangle, b).as_amplitudes()
    assert sup_distance(traj.final, ref) < 1e-8
    conv = detect_convergence(traj, 1e-10)
    assert conv.converged_at is not None
    assert sup_distance(traj.states[conv.converged_at], ref) < 1e-8


def test_detect_period_two():
    g = build_jellyfish(2, [(1, 2)], [1, 2])
    a = AmplitudeState(np.array([1.0, -1.0]), np.zeros(2))
    b = AmplitudeState(np.array([-1.0, 1.0]), np.zeros(2))
    traj = Trajectory([a, b] * 15)
    conv = detect_convergence(traj)
    assert conv.converged_at is None and conv.oscillating
    np.testing.assert_allclose(conv.cesaro.core_amps, 0, atol=1e-15)


def test_detect_empty():
    with pytest.raises(EmptyTrajectory):
        detect_convergence(Trajectory([]))


def test_evolve_until(triangle):
    b = BoundaryInput([1, 0])
    s, conv, t = evolve_until(triangle, b)
    assert not conv.oscillating and t < 1000
    assert sup_distance(s, solve_electric(triangle, b).as_amplitudes()) < 1e-9
