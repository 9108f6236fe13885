"""Finite curve-graph computations over exact intersection data.

Vertices are curves (torus classes or origami traces) with a symmetric
table of exact intersection numbers; edges join distinct disjoint curves.
Distances are plain BFS, and re-marking actions are checked to act by
graph automorphisms.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from . import origami as origami_mod
from . import torus as torus_mod

UNREACHABLE = math.inf


@dataclass(frozen=True)
class CurveSet:
    """Curves with their exact pairwise intersection numbers."""

    vertices: tuple  # identifiers
    payloads: tuple  # parallel tuple of CurveTrace / TorusCurve payloads
    i_matrix: tuple  # tuple of tuples, exact nonnegative entries

    def __post_init__(self):
        n = len(self.vertices)
        if len(self.payloads) != n or len(self.i_matrix) != n:
            raise ValueError("vertices, payloads and i_matrix sizes differ")
        for r, row in enumerate(self.i_matrix):
            if len(row) != n:
                raise ValueError("i_matrix is not square")
            if row[r] != 0:
                raise ValueError("i_matrix diagonal must be zero")
            for c in range(n):
                if row[c] < 0 or row[c] != self.i_matrix[c][r]:
                    raise ValueError("i_matrix must be symmetric and nonnegative")

    def index(self, v):
        return self.vertices.index(v)


def _pairwise(payloads, pairing):
    n = len(payloads)
    return tuple(
        tuple(0 if r == c else pairing(payloads[r], payloads[c]) for c in range(n))
        for r in range(n)
    )


def curve_set_from_traces(ids: Sequence, traces: Sequence) -> CurveSet:
    return CurveSet(
        tuple(ids), tuple(traces), _pairwise(tuple(traces), origami_mod.crossing_number)
    )


def curve_set_from_torus(ids: Sequence, curves: Sequence) -> CurveSet:
    return CurveSet(
        tuple(ids), tuple(curves), _pairwise(tuple(curves), torus_mod.intersection)
    )


def verify_curve_set(cs: CurveSet) -> bool:
    """Recompute the table from the payloads and compare exactly."""
    p = cs.payloads[0]
    pairing = (
        origami_mod.crossing_number
        if isinstance(p, origami_mod.CurveTrace)
        else torus_mod.intersection
    )
    return _pairwise(cs.payloads, pairing) == cs.i_matrix


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    adjacency: tuple  # parallel tuple of frozensets of vertex indices

    def neighbors(self, v):
        return self.adjacency[self.vertices.index(v)]

    @property
    def edges(self):
        out = []
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    out.append((self.vertices[i], self.vertices[j]))
        return tuple(out)


def build_graph(cs: CurveSet) -> Graph:
    """Edge between distinct curves iff their intersection number is 0."""
    n = len(cs.vertices)
    adj = tuple(
        frozenset(j for j in range(n) if j != i and cs.i_matrix[i][j] == 0)
        for i in range(n)
    )
    return Graph(cs.vertices, adj)


def graph_distance(g: Graph, u, v):
    """BFS edge count; UNREACHABLE when no path exists in the finite set."""
    iu, iv = g.vertices.index(u), g.vertices.index(v)
    if iu == iv:
        return 0
    dist = {iu: 0}
    queue = deque([iu])
    while queue:
        i = queue.popleft()
        for j in g.adjacency[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                if j == iv:
                    return dist[j]
                queue.append(j)
    return UNREACHABLE


def automorphism_check(g: Graph, sigma: Dict) -> bool:
    """True iff the vertex bijection preserves adjacency and non-adjacency."""
    verts = set(g.vertices)
    if set(sigma.keys()) != verts or set(sigma.values()) != verts:
        raise ValueError("sigma must be a bijection on the vertex set")
    index = {v: i for i, v in enumerate(g.vertices)}
    for i, v in enumerate(g.vertices):
        image_nbrs = {index[sigma[g.vertices[j]]] for j in g.adjacency[i]}
        if image_nbrs != g.adjacency[index[sigma[v]]]:
            return False
    return True


def curve_set_table(cs: CurveSet) -> List[dict]:
    """Serializable rows: id, payload descriptor, intersection row."""
    rows = []
    for i, v in enumerate(cs.vertices):
        p = cs.payloads[i]
        if isinstance(p, origami_mod.CurveTrace):
            desc = f"trace dir={p.direction} hol={p.holonomy}"
        elif isinstance(p, torus_mod.TorusCurve):
            desc = f"torus ({p.p},{p.q})"
        else:
            desc = repr(p)
        rows.append(
            {
                "id": v,
                "payload": desc,
                "i_row": [str(x) for x in cs.i_matrix[i]],
            }
        )
    return rows
