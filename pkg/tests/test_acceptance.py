"""Exit criteria, one test per criterion, each recording a PASS/FAIL line.

Criteria 5 (evolution half) and 6 use the step horizons stated for them
and fail on part of the corpus: several instances have resonances whose
escape rate is far below what those horizons allow. See README.
"""

import io
import json
import logging
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, arrow_id
from jellywalk import io as jio
from jellywalk.cli import run_command
from jellywalk.errors import UndefinedForZeroAve
from jellywalk.observables import analyze, current_J, kirchhoff_residual, random_walk_baseline, scattering_matrix
from jellywalk.solver import StationaryState, solve_electric, solve_fixed_point
from jellywalk.walk import (
    AmplitudeState,
    BoundaryInput,
    evolution_horizon,
    evolve,
    evolve_until,
    grover_coin,
    step,
    sup_distance,
)

log = logging.getLogger("jellywalk.acceptance")


def record(tag, ok, detail):
    ACCEPTANCE_LINES.append(f"{tag:4s} {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])
    return ok


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UndefinedForZeroAve)
        yield


def test_c1_two_vertex(two_vertex):
    g = two_vertex
    t0 = time.perf_counter()
    b = BoundaryInput([1, 0])
    fp, el = solve_fixed_point(g, b), solve_electric(g, b)
    evo = StationaryState.from_amplitudes(g, evolve(g, b, 20).final, b)
    reports = [analyze(g, s) for s in (fp, el, evo)]
    elapsed = time.perf_counter() - t0
    want_psi = np.zeros(2)
    want_psi[arrow_id(g, 1, 2)] = 1
    errs = []
    for s, r in zip((fp, el, evo), reports):
        errs += [
            np.abs(s.core_amps - want_psi).max(),
            np.abs(s.betas - [0, 1]).max(),
            np.abs(r.P0 - [-1, 1]).max(),
            np.abs(r.J_out - [-0.5, 0.5]).max(),
        ]
    err = max(errs)
    ok = record("C1", err < 1e-12 and elapsed < 0.1, f"two-vertex worked example: max error {err:.1e}, {elapsed * 1e3:.1f} ms")
    assert ok


def test_c2_triangle(triangle):
    g = triangle
    t0 = time.perf_counter()
    b = BoundaryInput([1, 0])
    el = solve_electric(g, b)
    r = analyze(g, el)
    fp_res = sup_distance(step(g, el.as_amplitudes(), b), el.as_amplitudes())
    elapsed = time.perf_counter() - t0
    J = r.J.core
    errs = [
        abs(J[arrow_id(g, 1, 2)] - 1 / 3),
        abs(J[arrow_id(g, 1, 3)] - 1 / 6),
        abs(J[arrow_id(g, 3, 2)] - 1 / 6),
        np.abs(r.P0 - [-1, 1, 0]).max(),
        np.abs(el.betas - [0, 1]).max(),
    ]
    err = max(errs)
    ok = err < 1e-12 and r.thm4_residual < 1e-12 and fp_res < 1e-12 and elapsed < 0.1
    record(
        "C2",
        ok,
        f"triangle worked example: value error {err:.1e}, thm4 residual {r.thm4_residual:.1e}, "
        f"fixed-point residual {fp_res:.1e}, {elapsed * 1e3:.1f} ms",
    )
    assert ok


def test_c3_scattering(corpus500):
    t0 = time.perf_counter()
    worst = max(scattering_matrix(g).deviation for _, g, _ in corpus500)
    elapsed = time.perf_counter() - t0
    ok = record("C3", worst < 1e-10 and elapsed < 30, f"scattering = Grover(m) on 500 graphs: max deviation {worst:.1e}, {elapsed:.1f} s")
    assert ok


def test_c4_kirchhoff(corpus500):
    worst = 0.0
    for _, g, alphas in corpus500:
        for s in (solve_fixed_point(g, BoundaryInput(alphas)), solve_electric(g, BoundaryInput(alphas))):
            worst = max(worst, kirchhoff_residual(g, current_J(s)))
    ok = record("C4", worst < 1e-12, f"antisymmetry + vertex current sums on 500 graphs: max residual {worst:.1e}")
    assert ok


def test_c5a_accumulation_solver(corpus500):
    t0 = time.perf_counter()
    worst = max(analyze(g, solve_fixed_point(g, BoundaryInput(a))).thm4_residual for _, g, a in corpus500)
    elapsed = time.perf_counter() - t0
    ok = record("C5a", worst < 1e-10 and elapsed < 60, f"P0 = 4 ave J_out from solver states: max residual {worst:.1e}, {elapsed:.1f} s")
    assert ok


def test_c5b_accumulation_evolution(corpus500):
    t0 = time.perf_counter()
    resid = []
    for _, g, a in corpus500:
        b = BoundaryInput(a)
        s = StationaryState.from_amplitudes(g, evolve(g, b, evolution_horizon(g)).final, b)
        resid.append(analyze(g, s, kirchhoff_tol=None).thm4_residual)
    elapsed = time.perf_counter() - t0
    resid = np.array(resid)
    bad = int((resid >= 1e-6).sum())
    ok = record(
        "C5b",
        bad == 0 and elapsed < 60,
        f"P0 = 4 ave J_out from states at T = 50*diameter: {bad}/500 above 1e-6 (worst {resid.max():.1e}), {elapsed:.1f} s",
    )
    assert ok


def test_c6_convergence(corpus500):
    bad, cesaro = [], []
    for seed, g, a in corpus500:
        b = BoundaryInput(a)
        ref = solve_fixed_point(g, b).as_amplitudes()
        limit, conv, steps = evolve_until(g, b, tol=1e-10, max_steps=10_000)
        if conv.oscillating:
            cesaro.append(seed)
            log.warning("instance %d needed the Cesaro average", seed)
        d = sup_distance(limit, ref)
        if d >= 1e-6:
            bad.append((seed, d))
    worst = max((d for _, d in bad), default=0.0)
    ok = record(
        "C6",
        not bad,
        f"evolution within 1e-6 of solver in <= 10000 steps: {len(bad)}/500 failed (worst {worst:.1e}); "
        f"Cesaro path used on {len(cesaro)} instances {cesaro}",
    )
    assert ok, f"slow instances (seed, distance): {bad[:10]}"


def test_c7_structural_zero(corpus500):
    worst = 0.0
    for _, g, a in corpus500:
        r = analyze(g, solve_fixed_point(g, BoundaryInput(a)))
        attached = {t.attach for t in g.tails}
        for v in g.vertices:
            if v not in attached:
                worst = max(worst, abs(r.P0[v - 1]))
    ok = record("C7", worst < 1e-12, f"P0 at tail-free vertices: max |P0| {worst:.1e}")
    assert ok


def test_c8_random_walk_contrast(corpus500, tmp_path):
    checked = mismatched = 0
    uniform = True
    for seed, g, a in corpus500:
        if a.mean() <= 0:
            continue
        path = tmp_path / f"g{seed}.json"
        path.write_text(jio.serialize_graph(g))
        out = io.StringIO()
        code = run_command(["analyze", "--graph", str(path), "--alphas=" + ",".join(repr(float(x)) for x in a)], out)
        assert code == 0
        d = json.loads(out.getvalue())
        base = [x["baseline"] for x in d["arrows"]]
        uniform &= len(set(base)) <= 1 and np.allclose(base, random_walk_baseline(g))
        checked += 1
        mismatched += d["argmax_P0"] != d["argmax_J_out"]
    ok = record(
        "C8",
        uniform and mismatched == 0 and checked > 0,
        f"analyze reports on {checked} ave>0 instances: baseline uniform={uniform}, argmax P0 != argmax J_out on {mismatched}",
    )
    assert ok


def test_c9_coin_algebra():
    worst = 0.0
    for r in range(1, 33):
        C = grover_coin(r)
        worst = max(
            worst,
            np.abs(C - C.T).max(),
            np.abs(C @ C.T - np.eye(r)).max(),
            np.abs(C @ C - np.eye(r)).max(),
            np.abs(C.sum(axis=1) - 1).max(),
        )
    ok = record("C9", worst < 1e-14, f"Grover coin r=1..32 symmetric/orthogonal/involutive/row sums 1: max error {worst:.1e}")
    assert ok
