"""Command-line interface.

Exit codes: 0 success, 1 invalid input (graph or arguments), 2 solver
failure, 3 a verification residual above tolerance. Errors are reported as
one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as jio
from .errors import GraphViolation, JellyfishError, UndefinedForZeroAve
from .graph import JellyfishGraph
from .observables import KIRCHHOFF_TOL, analyze, scattering_matrix
from .solver import StationaryState, solve
from .walk import (
    DEFAULT_TOL,
    BoundaryInput,
    detect_convergence,
    evolution_horizon,
    evolve,
    evolve_until,
    sup_distance,
)

log = logging.getLogger("jellywalk")

EVOLVE_TOL = 1e-6
METHODS = ("fixed-point", "electric", "evolve")


@dataclass
class RunConfig:
    alphas: list[complex] | None = None
    steps: int = 1000
    tol: float = DEFAULT_TOL
    method: str = "fixed-point"
    output: str = "json"
    seed: int | None = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.output not in ("json", "csv"):
            raise ValueError("output must be json or csv")

    def boundary(self, g: JellyfishGraph) -> BoundaryInput:
        if self.alphas is None:
            alphas = np.zeros(g.m)
            alphas[0] = 1.0
            return BoundaryInput(alphas)
        if len(self.alphas) != g.m:
            raise ValueError(f"{len(self.alphas)} alphas given for {g.m} tails")
        return BoundaryInput(self.alphas)


def parse_alphas(text: str) -> list[complex]:
    """``"1,0"``, ``"1+2j,0"`` or a JSON list whose items are numbers or ``[re, im]``."""
    text = text.strip()
    if text.startswith("["):
        items = json.loads(text)
        return [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in items]
    return [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]


def default_tol() -> float:
    return float(os.environ.get("JELLYWALK_TOL", DEFAULT_TOL))


class _Fail(Exception):
    def __init__(self, code: int, payload: dict):
        self.code = code
        self.payload = payload


def _stationary(g: JellyfishGraph, b: BoundaryInput, cfg: RunConfig) -> StationaryState:
    if cfg.method == "evolve":
        s, conv, t = evolve_until(g, b, tol=cfg.tol, max_steps=max(cfg.steps, 1))
        if conv.oscillating:
            log.warning("period-2 oscillation detected; using the Cesaro average")
        return StationaryState.from_amplitudes(g, s, b, f"evolve/{t}")
    return solve(g, b, cfg.method)


def cmd_validate(args, cfg, out) -> int:
    try:
        jio.parse_graph(args.graph)
    except jio.ValidationError as exc:
        out.write(json.dumps({"valid": False, "violations": [f"{type(v).__name__}: {v}" for v in exc.violations]}) + "\n")
        return 1
    out.write(json.dumps({"valid": True, "violations": []}) + "\n")
    return 0


def cmd_evolve(args, cfg, out) -> int:
    g = jio.parse_graph(args.graph)
    b = cfg.boundary(g)
    traj = evolve(g, b, cfg.steps)
    conv = detect_convergence(traj, cfg.tol)
    if conv.oscillating:
        log.warning("period-2 oscillation detected; limit reported as the Cesaro average")
    limit = conv.cesaro if conv.oscillating else traj.final
    ref = solve(g, b, "fixed-point")
    summary = {
        "steps": traj.T,
        "converged_at": conv.converged_at,
        "oscillating": conv.oscillating,
        "final_delta": traj.deltas[-1] if traj.deltas else 0.0,
        "distance_to_stationary": sup_distance(limit, ref.as_amplitudes()),
        "limit": jio.stationary_to_dict(g, StationaryState.from_amplitudes(g, limit, b, "evolve")),
    }
    out.write(json.dumps(summary, indent=2) + "\n")
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "arrow", "re", "im"])
            for t, s in enumerate(traj.states):
                for a in g.arrows:
                    z = complex(s.core_amps[a.id])
                    w.writerow([t, a.id, repr(z.real), repr(z.imag)])
                for i, z in enumerate(s.tail_out):
                    w.writerow([t, f"tail{i + 1}", repr(z.real), repr(z.imag)])
    return 0


def cmd_solve(args, cfg, out) -> int:
    g = jio.parse_graph(args.graph)
    s = _stationary(g, cfg.boundary(g), cfg)
    out.write(jio.serialize_stationary(g, s, cfg.output))
    return 0


def cmd_analyze(args, cfg, out) -> int:
    g = jio.parse_graph(args.graph)
    s = _stationary(g, cfg.boundary(g), cfg)
    report = analyze(g, s, KIRCHHOFF_TOL if cfg.method != "evolve" else None)
    out.write(jio.serialize_report(report, cfg.output))
    return 0


def cmd_scatter(args, cfg, out) -> int:
    g = jio.parse_graph(args.graph)
    method = cfg.method if cfg.method != "evolve" else "fixed-point"
    out.write(jio.serialize_scattering(scattering_matrix(g, method), cfg.output))
    return 0


def verify_instance(
    g: JellyfishGraph, b: BoundaryInput, tol: float, with_evolution: bool = False, evolve_tol: float = EVOLVE_TOL
) -> dict:
    """Residuals of every identity checked by ``verify`` and whether each passes.

    With ``with_evolution`` the accumulation identity is also checked on the
    state reached after ``50 * diameter`` steps from zero.
    """
    scale = max(1.0, float(np.abs(b.alphas).max(initial=0.0)))
    fp = solve(g, b, "fixed-point")
    el = solve(g, b, "electric")
    r_fp = analyze(g, fp, kirchhoff_tol=None)
    sm = scattering_matrix(g)
    checks = {
        "fixed_point_residual": (max(fp.residual, el.residual), tol * scale),
        "cross_solver": (sup_distance(fp.as_amplitudes(), el.as_amplitudes()), 10 * tol * scale),
        "scattering_grover": (sm.deviation, tol),
        "current_law": (r_fp.kirchhoff_residual, KIRCHHOFF_TOL * scale),
        "accumulation_solver": (r_fp.thm4_residual, tol * scale**2),
    }
    if with_evolution:
        evo = StationaryState.from_amplitudes(g, evolve(g, b, evolution_horizon(g)).final, b)
        checks["accumulation_evolution"] = (analyze(g, evo, kirchhoff_tol=None).thm4_residual, evolve_tol * scale**2)
    return {k: {"residual": v, "tol": t, "pass": bool(v < t)} for k, (v, t) in checks.items()}


def cmd_verify(args, cfg, out) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UndefinedForZeroAve)
        if args.random:
            seed = cfg.seed or 0
            results = []
            for s, g, alphas in jio.corpus(args.random, seed):
                checks = verify_instance(g, BoundaryInput(alphas), cfg.tol, args.evolve)
                results.append({"seed": s, "pass": all(c["pass"] for c in checks.values()), "checks": checks})
            ok = all(r["pass"] for r in results)
            failed = [r for r in results if not r["pass"]]
            out.write(json.dumps({"instances": len(results), "pass": ok, "failed": failed}, indent=2) + "\n")
        else:
            if not args.graph:
                raise ValueError("verify needs --graph or --random N")
            g = jio.parse_graph(args.graph)
            checks = verify_instance(g, cfg.boundary(g), cfg.tol, args.evolve)
            ok = all(c["pass"] for c in checks.values())
            out.write(json.dumps({"pass": ok, "checks": checks}, indent=2) + "\n")
    return 0 if ok else 3


def cmd_generate(args, cfg, out) -> int:
    g = jio.random_jellyfish(args.n, args.edges, args.tails, seed=cfg.seed)
    text = jio.serialize_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jellywalk", description="Grover walks on jellyfish graphs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph_required=True, method=True):
        sp.add_argument("--graph", required=graph_required, help="graph JSON file")
        sp.add_argument("--alphas", type=parse_alphas, help="tail inputs, e.g. 1,0 or [1,[0,1]]; default e_1")
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        if method:
            sp.add_argument("--method", choices=METHODS, default="fixed-point")

    sp = sub.add_parser("validate", help="check a graph file")
    sp.add_argument("--graph", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("evolve", help="time-step the walk from the zero state")
    common(sp, method=False)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--trace", help="write per-step amplitudes as CSV here")
    sp.set_defaults(func=cmd_evolve)

    for name, fn, text in [
        ("solve", cmd_solve, "stationary amplitudes"),
        ("analyze", cmd_analyze, "currents, accumulation and baseline report"),
        ("scatter", cmd_scatter, "tail scattering matrix"),
    ]:
        sp = sub.add_parser(name, help=text)
        common(sp)
        sp.add_argument("--steps", type=int, default=10_000, help="step cap for --method evolve")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("verify", help="check every identity on a graph or a random corpus")
    common(sp, graph_required=False, method=False)
    sp.add_argument("--random", type=int, default=0, metavar="N", help="verify N seeded random instances")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--evolve", action="store_true", help="also check the identity on the state after 50*diameter steps")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", help="emit a random connected jellyfish graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--edges", type=int, required=True)
    sp.add_argument("--tails", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_generate)
    return p


def _error(code: int, exc: BaseException, err) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, jio.ValidationError):
        payload["violations"] = [f"{type(v).__name__}: {v}" for v in exc.violations]
    err.write(json.dumps(payload) + "\n")
    return code


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        tol = getattr(args, "tol", None) or default_tol()
        cfg = RunConfig(
            alphas=getattr(args, "alphas", None),
            steps=getattr(args, "steps", 1000),
            tol=tol,
            method=getattr(args, "method", "fixed-point"),
            output=getattr(args, "format", "json"),
            seed=getattr(args, "seed", None),
        )
        return args.func(args, cfg, out)
    except (jio.ParseError, jio.ValidationError, GraphViolation, OSError) as exc:
        return _error(1, exc, err)
    except (JellyfishError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _error(2, exc, err)
    except ValueError as exc:
        return _error(1, exc, err)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
