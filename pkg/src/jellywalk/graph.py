"""Jellyfish graphs: a finite symmetric simple core plus half-line tails.

Tails are stored only by their attachment vertex. Their interiors are pure
delay lines under the walk and never need to be materialized.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConnectivityViolation,
    GraphViolation,
    InvalidVertex,
    SimplicityViolation,
    SymmetryViolation,
)


@dataclass(frozen=True)
class Arrow:
    """A directed arc between two core vertices (1-based vertex ids)."""

    id: int
    origin: int
    target: int
    reverse_id: int


@dataclass(frozen=True)
class CoreGraph:
    n: int
    arrows: tuple[Arrow, ...]

    @property
    def n_edges(self) -> int:
        return len(self.arrows) // 2


@dataclass(frozen=True)
class Tail:
    tail_index: int
    attach: int


@dataclass(frozen=True)
class JellyfishGraph:
    core: CoreGraph
    tails: tuple[Tail, ...]

    @property
    def n(self) -> int:
        return self.core.n

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.core.arrows

    @property
    def n_arrows(self) -> int:
        return len(self.core.arrows)

    @property
    def vertices(self) -> range:
        return range(1, self.core.n + 1)

    # Index arrays used by the vectorized walk and the observables.  Vertex
    # entries are 0-based here.
    @cached_property
    def origins(self) -> np.ndarray:
        return np.array([a.origin - 1 for a in self.arrows], dtype=np.intp)

    @cached_property
    def targets(self) -> np.ndarray:
        return np.array([a.target - 1 for a in self.arrows], dtype=np.intp)

    @cached_property
    def reverse(self) -> np.ndarray:
        return np.array([a.reverse_id for a in self.arrows], dtype=np.intp)

    @cached_property
    def attach(self) -> np.ndarray:
        return np.array([t.attach - 1 for t in self.tails], dtype=np.intp)

    @cached_property
    def core_degrees(self) -> np.ndarray:
        return np.bincount(self.targets, minlength=self.n)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.core_degrees + np.bincount(self.attach, minlength=self.n)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges in input order and input orientation."""
        return [(a.origin, a.target) for a in self.arrows[::2]]

    def tails_at(self, v: int) -> list[Tail]:
        _check_vertex(self, v)
        return [t for t in self.tails if t.attach == v]


def _check_vertex(g: JellyfishGraph, v: int) -> None:
    if not isinstance(v, (int, np.integer)) or not 1 <= v <= g.n:
        raise InvalidVertex(f"vertex {v!r} is not in 1..{g.n}")


def build_jellyfish(
    n: int, edges: Iterable[Sequence[int]], attachments: Iterable[int]
) -> JellyfishGraph:
    """Build and validate a jellyfish graph.

    Each undirected edge ``(u, v)`` becomes arrows ``2k: u->v`` and
    ``2k+1: v->u`` in input order. Tail order is kept as given and fixes the
    index order of the boundary amplitudes everywhere downstream.

    Raises the first violation found (see :func:`validate`).
    """
    if n < 1:
        raise InvalidVertex(f"core needs at least one vertex, got n={n}")
    arrows = []
    for k, pair in enumerate(edges):
        u, v = (int(x) for x in pair)
        arrows.append(Arrow(2 * k, u, v, 2 * k + 1))
        arrows.append(Arrow(2 * k + 1, v, u, 2 * k))
    tails = tuple(Tail(i + 1, int(a)) for i, a in enumerate(attachments))
    g = JellyfishGraph(CoreGraph(n, tuple(arrows)), tails)
    problems = validate(g)
    if problems:
        raise problems[0]
    return g


def validate(g: JellyfishGraph) -> list[GraphViolation]:
    """Return every structural violation found in ``g`` (empty when valid)."""
    problems: list[GraphViolation] = []
    n = g.core.n
    arrows = g.core.arrows
    in_range = lambda v: isinstance(v, (int, np.integer)) and 1 <= v <= n

    for a in arrows:
        if not (in_range(a.origin) and in_range(a.target)):
            problems.append(InvalidVertex(f"arrow {a.id} has endpoint outside 1..{n}"))
    for t in g.tails:
        if not in_range(t.attach):
            problems.append(InvalidVertex(f"tail {t.tail_index} attaches to {t.attach!r}, not in 1..{n}"))
    if not g.tails:
        problems.append(GraphViolation("a jellyfish graph needs at least one tail"))

    seen: dict[tuple[int, int], int] = {}
    for a in arrows:
        if a.origin == a.target:
            problems.append(SimplicityViolation(f"arrow {a.id} is a self-loop at {a.origin}"))
            continue
        key = (a.origin, a.target)
        if key in seen:
            problems.append(
                SimplicityViolation(f"arrows {seen[key]} and {a.id} both run {a.origin}->{a.target}")
            )
        else:
            seen[key] = a.id

    ids = [a.id for a in arrows]
    if ids != list(range(len(arrows))):
        problems.append(SymmetryViolation("arrow ids must be 0..N-1 in storage order"))
    else:
        for a in arrows:
            if not 0 <= a.reverse_id < len(arrows):
                problems.append(SymmetryViolation(f"arrow {a.id} has no reverse partner"))
                continue
            b = arrows[a.reverse_id]
            if b.reverse_id != a.id or b.origin != a.target or b.target != a.origin:
                problems.append(SymmetryViolation(f"arrow {a.id} and {b.id} are not a reverse pair"))

    if not any(isinstance(p, InvalidVertex) for p in problems) and not is_connected(g.core):
        problems.append(ConnectivityViolation("core graph is not connected"))
    return problems


def _neighbours(core: CoreGraph) -> list[list[int]]:
    nbrs: list[list[int]] = [[] for _ in range(core.n + 1)]
    for a in core.arrows:
        nbrs[a.origin].append(a.target)
        nbrs[a.target].append(a.origin)
    return nbrs


def _bfs(nbrs: list[list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(core: CoreGraph) -> bool:
    """Connectivity of the symmetrized core (a one-vertex core counts as connected)."""
    return len(_bfs(_neighbours(core), 1)) == core.n


def diameter(g: JellyfishGraph) -> int:
    nbrs = _neighbours(g.core)
    return max(max(_bfs(nbrs, v).values()) for v in g.vertices)


def degree(g: JellyfishGraph, v: int) -> int:
    """Core degree of ``v`` plus the number of tails attached there."""
    _check_vertex(g, v)
    return int(g.degrees[v - 1])


def incoming_arrows(g: JellyfishGraph, v: int) -> list[Arrow]:
    _check_vertex(g, v)
    return [a for a in g.arrows if a.target == v]


def outgoing_arrows(g: JellyfishGraph, v: int) -> list[Arrow]:
    _check_vertex(g, v)
    return [a for a in g.arrows if a.origin == v]
