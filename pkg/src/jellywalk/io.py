"""Graph files, report serialization and seeded random instances.

Graph file (JSON, 1-based vertices; tail order fixes the alpha/beta order)::

    {"vertices": 3, "edges": [[1, 2], [2, 3], [1, 3]],
     "tails": [{"attach": 1}, {"attach": 2}]}
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import GraphViolation, JellyfishError
from .graph import JellyfishGraph, build_jellyfish
from .observables import ObservableReport, ScatteringMatrix
from .solver import StationaryState


class ParseError(JellyfishError, ValueError):
    pass


class ValidationError(JellyfishError, ValueError):
    def __init__(self, violations: list[GraphViolation]):
        self.violations = violations
        super().__init__("; ".join(f"{type(v).__name__}: {v}" for v in violations))


def graph_from_dict(data: Any) -> JellyfishGraph:
    try:
        n = int(data["vertices"])
        edges = [tuple(int(x) for x in e) for e in data["edges"]]
        attach = [int(t["attach"]) for t in data["tails"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph description: {exc!r}") from exc
    if any(len(e) != 2 for e in edges):
        raise ParseError("every edge must have exactly two endpoints")
    try:
        return build_jellyfish(n, edges, attach)
    except GraphViolation as exc:
        # Collect the full violation list rather than only the first.
        from .graph import Arrow, CoreGraph, Tail, validate

        arrows = []
        for k, (u, v) in enumerate(edges):
            arrows += [Arrow(2 * k, u, v, 2 * k + 1), Arrow(2 * k + 1, v, u, 2 * k)]
        raw = JellyfishGraph(CoreGraph(n, tuple(arrows)), tuple(Tail(i + 1, a) for i, a in enumerate(attach)))
        raise ValidationError(validate(raw) if n >= 1 else [exc]) from exc


def parse_graph(path: str | Path) -> JellyfishGraph:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return graph_from_dict(data)


def graph_to_dict(g: JellyfishGraph) -> dict:
    return {
        "vertices": g.n,
        "edges": [list(e) for e in g.edges()],
        "tails": [{"attach": t.attach} for t in g.tails],
    }


def serialize_graph(g: JellyfishGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"


def random_jellyfish(n: int, n_edges: int, m: int, seed: int | None = None) -> JellyfishGraph:
    """Random connected jellyfish graph.

    A uniform spanning tree (Wilson's loop-erased random walks) is topped up
    with distinct random extra edges, then ``m`` tails are attached at
    uniformly chosen vertices.
    """
    max_edges = n * (n - 1) // 2
    if not n - 1 <= n_edges <= max_edges:
        raise ValueError(f"{n_edges} edges impossible for a connected simple graph on {n} vertices")
    if m < 1:
        raise ValueError("need at least one tail")
    rng = np.random.default_rng(seed)

    in_tree = np.zeros(n + 1, dtype=bool)
    in_tree[int(rng.integers(1, n + 1))] = True
    nxt = {}
    edges: list[tuple[int, int]] = []
    for start in rng.permutation(np.arange(1, n + 1)):
        u = int(start)
        while not in_tree[u]:
            w = int(rng.integers(1, n))
            nxt[u] = w if w < u else w + 1
            u = nxt[u]
        u = int(start)
        while not in_tree[u]:
            in_tree[u] = True
            edges.append((u, nxt[u]))
            u = nxt[u]

    present = {frozenset(e) for e in edges}
    missing = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if frozenset((u, v)) not in present]
    extra = n_edges - len(edges)
    if extra:
        picks = rng.choice(len(missing), size=extra, replace=False)
        edges += [missing[int(i)] for i in picks]
    attach = [int(x) for x in rng.integers(1, n + 1, size=m)]
    return build_jellyfish(n, edges, attach)


def random_instance(seed: int, n_max: int = 10, e_max: int = 20, m_max: int = 6) -> tuple[JellyfishGraph, np.ndarray]:
    """One corpus member: random sizes, random graph and real alphas in [-1, 1]."""
    rng = np.random.default_rng([seed, 0xA1FA])
    n = int(rng.integers(1, n_max + 1))
    e_hi = min(e_max, n * (n - 1) // 2)
    n_edges = int(rng.integers(n - 1, e_hi + 1)) if n > 1 else 0
    m = int(rng.integers(1, m_max + 1))
    g = random_jellyfish(n, n_edges, m, seed=int(rng.integers(2**32)))
    alphas = rng.uniform(-1.0, 1.0, size=m)
    return g, alphas


def corpus(count: int = 500, seed: int = 0, **kw) -> list[tuple[int, JellyfishGraph, np.ndarray]]:
    return [(s, *random_instance(s, **kw)) for s in range(seed, seed + count)]


# -- reports -----------------------------------------------------------------

def _num(x: complex | float) -> float | list[float]:
    """JSON number for real values, ``[re, im]`` for genuinely complex ones."""
    z = complex(x)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _text(x: complex | float) -> str:
    z = complex(x)
    if z.imag == 0:
        return repr(z.real if z.real != 0 else 0.0)
    return f"{z.real!r}{z.imag:+}j"


def stationary_to_dict(g: JellyfishGraph, s: StationaryState) -> dict:
    return {
        "method": s.method,
        "ave": _num(s.ave),
        "fixed_point_residual": s.residual,
        "arrows": [
            {"arrow": a.id, "origin": a.origin, "target": a.target, "psi": _num(s.core_amps[a.id])}
            for a in g.arrows
        ],
        "tails": [
            {"tail": t.tail_index, "attach": t.attach, "alpha": _num(s.alphas[i]), "beta": _num(s.betas[i])}
            for i, t in enumerate(g.tails)
        ],
    }


def report_to_dict(r: ObservableReport) -> dict:
    g, s = r.graph, r.state
    return {
        "ave": _num(r.ave),
        "thm4_residual": r.thm4_residual,
        "kirchhoff_residual": r.kirchhoff_residual,
        "fixed_point_residual": s.residual,
        "undefined_zero_ave": r.zero_ave,
        "argmax_P0": r.argmax_P0,
        "argmax_J_out": r.argmax_J_out,
        "argmax_agree": r.argmax_agree,
        "vertices": [
            {
                "vertex": row.vertex,
                "degree": int(g.degrees[row.vertex - 1]),
                "J_out": _num(row.J_out),
                "P0": row.P0,
                "predicted_P0": row.predicted,
                "residual": row.residual,
                "baseline_net": 0.0,
            }
            for row in r.rows
        ],
        "arrows": [
            {
                "arrow": a.id,
                "origin": a.origin,
                "target": a.target,
                "psi": _num(s.core_amps[a.id]),
                "J": _num(r.J.core[a.id]),
                "baseline": float(r.baseline[a.id]),
            }
            for a in g.arrows
        ],
        "tails": [
            {
                "tail": t.tail_index,
                "attach": t.attach,
                "alpha": _num(s.alphas[i]),
                "beta": _num(s.betas[i]),
                "J_in": _num(r.J.tail_in[i]),
                "J_out": _num(r.J.tail_out[i]),
            }
            for i, t in enumerate(g.tails)
        ],
    }


def serialize_report(r: ObservableReport, fmt: str = "json") -> str:
    """Render a report as JSON or as CSV.

    The CSV holds a vertex block ``vertex,J_out,P0,4*ave*J_out,residual`` and
    an arrow block ``arrow,origin,target,psi_re,psi_im,J`` separated by a
    blank line.
    """
    if fmt == "json":
        return json.dumps(report_to_dict(r), indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex", "J_out", "P0", "4*ave*J_out", "residual"])
    for row in r.rows:
        w.writerow([row.vertex, _text(row.J_out), _text(row.P0), _text(row.predicted), _text(row.residual)])
    if r.zero_ave:
        w.writerow(["# undefined_zero_ave"])
    buf.write("\n")
    w.writerow(["arrow", "origin", "target", "psi_re", "psi_im", "J"])
    for a in r.graph.arrows:
        psi = complex(r.state.core_amps[a.id])
        w.writerow([a.id, a.origin, a.target, repr(psi.real), repr(psi.imag), _text(r.J.core[a.id])])
    return buf.getvalue()


def serialize_stationary(g: JellyfishGraph, s: StationaryState, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(stationary_to_dict(g, s), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "index", "origin", "target", "re", "im"])
    for a in g.arrows:
        z = complex(s.core_amps[a.id])
        w.writerow(["arrow", a.id, a.origin, a.target, repr(z.real), repr(z.imag)])
    for i, t in enumerate(g.tails):
        z = complex(s.betas[i])
        w.writerow(["beta", t.tail_index, t.attach, "", repr(z.real), repr(z.imag)])
    return buf.getvalue()


def serialize_scattering(sm: ScatteringMatrix, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(
            {"m": sm.m, "S": [[_num(x) for x in row] for row in sm.S], "grover_deviation": sm.deviation},
            indent=2,
        ) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in sm.S:
        w.writerow([_text(x) for x in row])
    return buf.getvalue()

