"""Hypergraph view of a GF(2) matrix and its 2-core.

Rows are hyperedges, columns are vertices.  The 2-core is the terminal state
of repeatedly deleting a hyperedge incident to a degree-1 vertex; the result
does not depend on the deletion order.  Columns are never deleted, so
"occupied" counts the columns that still meet an alive edge at termination.
"""

from __future__ import annotations

import random as _pyrandom
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .gf2 import GF2Matrix, row_cols

PEEL_ORDERS = ("fifo", "lifo", "random")


class Hypergraph:
    """Incidence structure with per-vertex degrees, mutable only by peeling."""

    __slots__ = ("n_vertices", "edges", "vertex_degree", "alive", "_incident")

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]]):
        self.n_vertices = n_vertices
        self.edges: List[Tuple[int, ...]] = []
        for e in edges:
            te = tuple(sorted(set(e)))
            if te and (te[0] < 0 or te[-1] >= n_vertices):
                raise ValueError(f"edge {te} out of range for {n_vertices} vertices")
            self.edges.append(te)
        self.vertex_degree = [0] * n_vertices
        self._incident: List[List[int]] = [[] for _ in range(n_vertices)]
        for i, e in enumerate(self.edges):
            for v in e:
                self.vertex_degree[v] += 1
                self._incident[v].append(i)
        self.alive = [True] * len(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @classmethod
    def from_matrix(cls, matrix: GF2Matrix) -> "Hypergraph":
        return cls(matrix.n_cols, (row_cols(r) for r in matrix.rows))


@dataclass(frozen=True)
class CoreStats:
    """Terminal statistics of the peeling process."""

    core_rows: int
    occupied_cols: int
    incidences: int
    rows_by_weight: dict
    cols_by_degree: dict
    core_edge_ids: tuple

    def __post_init__(self):
        assert self.incidences == sum(k * v for k, v in self.rows_by_weight.items())


def peel_2core(h: Hypergraph, order: str = "fifo", rng_seed: int = 0) -> CoreStats:
    """Run the degree-1 deletion process to termination and report the core.

    ``order`` picks which pending degree-1 vertex is processed next (fifo,
    lifo, or random); the terminal core is the same for every choice, which
    the test suite fuzzes.  The hypergraph is consumed (degrees and alive
    flags reflect the terminal state afterwards).
    """
    degree = h.vertex_degree
    alive = h.alive
    edges = h.edges
    incident = h._incident

    pending = deque(v for v in range(h.n_vertices) if degree[v] == 1)
    rng = _pyrandom.Random(rng_seed) if order == "random" else None

    while pending:
        if order == "fifo":
            v = pending.popleft()
        elif order == "lifo":
            v = pending.pop()
        elif order == "random":
            i = rng.randrange(len(pending))
            pending[i], pending[-1] = pending[-1], pending[i]
            v = pending.pop()
        else:
            raise ValueError(f"order {order!r} not in {PEEL_ORDERS}")
        if degree[v] != 1:
            continue  # stale entry
        eid = next(i for i in incident[v] if alive[i])
        alive[eid] = False
        for u in edges[eid]:
            degree[u] -= 1
            if degree[u] == 1:
                pending.append(u)

    core_ids = tuple(i for i in range(len(edges)) if alive[i])
    rows_by_weight: dict = {}
    occupied = 0
    cols_by_degree: dict = {}
    for i in core_ids:
        w = len(edges[i])
        rows_by_weight[w] = rows_by_weight.get(w, 0) + 1
    for v in range(h.n_vertices):
        d = degree[v]
        if d > 0:
            occupied += 1
            cols_by_degree[d] = cols_by_degree.get(d, 0) + 1
    incidences = sum(len(edges[i]) for i in core_ids)
    return CoreStats(
        core_rows=len(core_ids),
        occupied_cols=occupied,
        incidences=incidences,
        rows_by_weight=rows_by_weight,
        cols_by_degree=cols_by_degree,
        core_edge_ids=core_ids,
    )


def check_E(stats: CoreStats, n: int, eps: float) -> bool:
    """Event E(n, m; eps): the core keeps at least eps*n rows and has strictly
    more rows than occupied columns."""
    if eps <= 0:
        raise ValueError(f"eps {eps} <= 0")
    return stats.core_rows >= eps * n and stats.core_rows > stats.occupied_cols


def core_implies_hypercycle(stats: CoreStats) -> bool:
    """Pigeonhole witness: more core rows than occupied columns forces a
    hypercycle, hence corank >= 1 for the underlying matrix."""
    return stats.core_rows > stats.occupied_cols
