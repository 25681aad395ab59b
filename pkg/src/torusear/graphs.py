"""Undirected multigraphs, their Laplacians, and the constructors used throughout."""
from __future__ import annotations

import functools
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter


@dataclass(frozen=True)
class MultiGraph:
    """Undirected loopless multigraph on vertices ``0..n-1``.

    ``edges`` is a sorted tuple of ``(u, v, multiplicity)`` with ``u < v``.
    Build instances with :meth:`from_edges`, which validates and merges.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...] = ()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> MultiGraph:
        if n < 1:
            raise InvalidParameter(f"a graph needs at least one vertex, got n={n}")
        acc: dict[tuple[int, int], int] = {}
        for edge in edges:
            if len(edge) == 2:
                u, v, mult = edge[0], edge[1], 1
            else:
                u, v, mult = edge
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameter(f"edge ({u}, {v}) out of range for n={n}")
            if mult < 0:
                raise InvalidParameter(f"negative multiplicity on ({u}, {v})")
            if mult:
                pair = (u, v) if u < v else (v, u)
                acc[pair] = acc.get(pair, 0) + mult
        return cls(n, tuple(sorted((u, v, m) for (u, v), m in acc.items())))

    @functools.cached_property
    def adjacency(self) -> tuple[dict[int, int], ...]:
        """Per-vertex map ``neighbour -> multiplicity``."""
        adj: list[dict[int, int]] = [{} for _ in range(self.n)]
        for u, v, m in self.edges:
            adj[u][v] = m
            adj[v][u] = m
        return tuple(adj)

    def multiplicity(self, u: int, v: int) -> int:
        return self.adjacency[u].get(v, 0)

    def degree(self, v: int) -> int:
        return sum(self.adjacency[v].values())

    def degrees(self) -> list[int]:
        return [sum(a.values()) for a in self.adjacency]

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(m for _, _, m in self.edges)

    def is_regular(self, d: int | None = None) -> bool:
        degs = set(self.degrees())
        return len(degs) == 1 and (d is None or d in degs)

    def relabel(self, perm: Sequence[int]) -> MultiGraph:
        """Image of the graph under the vertex map ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidParameter("relabelling must be a permutation of the vertices")
        return MultiGraph.from_edges(self.n, ((perm[u], perm[v], m) for u, v, m in self.edges))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> MultiGraph:
        """Parse ``{"n": int, "edges": [[u, v, mult], ...]}`` with ``u < v``."""
        try:
            data = json.loads(text)
            n = data["n"]
            raw = data["edges"]
        except (ValueError, KeyError, TypeError) as exc:
            raise InvalidParameter(f"malformed graph JSON: {exc}") from exc
        if not isinstance(n, int) or isinstance(n, bool):
            raise InvalidParameter("graph JSON field 'n' must be an integer")
        seen = set()
        edges = []
        for item in raw:
            if not (isinstance(item, list) and len(item) == 3 and all(isinstance(x, int) for x in item)):
                raise InvalidParameter(f"edge entry must be [u, v, multiplicity]: {item!r}")
            u, v, m = item
            if u >= v:
                raise InvalidParameter(f"edge [{u}, {v}] must satisfy u < v")
            if (u, v) in seen:
                raise InvalidParameter(f"edge [{u}, {v}] listed twice")
            if m < 1:
                raise InvalidParameter(f"edge [{u}, {v}] has non-positive multiplicity")
            seen.add((u, v))
            edges.append((u, v, m))
        return cls.from_edges(n, edges)


def laplacian(g: MultiGraph) -> np.ndarray:
    """Dense Laplacian D - A as an object array of Python ints."""
    L = np.zeros((g.n, g.n), dtype=object)
    L[:, :] = 0
    for u, v, m in g.edges:
        L[u, v] -= m
        L[v, u] -= m
        L[u, u] += m
        L[v, v] += m
    return L


def cycle_graph(m: int) -> MultiGraph:
    """C_m; for m = 2 the two vertices share a double edge so both have degree 2."""
    if m < 2:
        raise InvalidParameter(f"cycle length must be at least 2, got {m}")
    if m == 2:
        return MultiGraph(2, ((0, 1, 2),))
    return MultiGraph.from_edges(m, ((i, (i + 1) % m) for i in range(m)))


def circulant_graph(n: int, jumps: Sequence[int]) -> MultiGraph:
    """C_n(s_1, ..., s_k): vertex i adjacent to i +- s_j (mod n), with 0 < s_1 < ... < s_k < n/2."""
    jumps = tuple(jumps)
    if n < 3:
        raise InvalidParameter(f"circulant needs n >= 3, got {n}")
    if not jumps:
        raise InvalidParameter("circulant needs at least one jump")
    if any(b <= a for a, b in zip(jumps, jumps[1:])):
        raise InvalidParameter(f"jumps must be strictly increasing: {jumps}")
    if jumps[0] <= 0 or 2 * jumps[-1] >= n:
        raise InvalidParameter(f"jumps must satisfy 0 < s < n/2: {jumps}")
    return MultiGraph.from_edges(n, ((i, (i + s) % n) for s in jumps for i in range(n)))


def cartesian_product(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    """G1 x G2 with vertex (u, v) stored at index u * |V(G2)| + v."""
    n2 = g2.n
    edges = []
    for u in range(g1.n):
        for a, b, m in g2.edges:
            edges.append((u * n2 + a, u * n2 + b, m))
    for a, b, m in g1.edges:
        for v in range(n2):
            edges.append((a * n2 + v, b * n2 + v, m))
    return MultiGraph(g1.n * n2, tuple(sorted(edges)))


def torus_graph(shape: Sequence[int]) -> MultiGraph:
    """Left-associated product C_{m_1} x ... x C_{m_p}."""
    shape = tuple(shape)
    if not shape:
        raise InvalidParameter("a torus needs at least one factor")
    g = cycle_graph(shape[0])
    for m in shape[1:]:
        g = cartesian_product(g, cycle_graph(m))
    return g


def is_connected(g: MultiGraph) -> bool:
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == g.n


def complete_graph(n: int) -> MultiGraph:
    """K_n; K_2 is the single edge that is *not* an admissible torus factor."""
    return MultiGraph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))
