"""Closed walks in which some colour occurs exactly once, and the covers they yield.

The search first grows rainbow paths breadth-first from random starts and
splices two paths that reach a vertex with different colour sets.  On
small explicit graphs an exact search (shortest qualifying walk) runs
afterwards, so a miss there means no qualifying walk exists.
"""

from __future__ import annotations

import json
import math
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hypergraph import EvenCover, mask_of, vertices_of
from .kikuchi import KEdge, KGraph

EXHAUSTIVE_VERTEX_LIMIT = 5 * 10**4
DEFAULT_STATE_BUDGET = 200_000


@dataclass(frozen=True)
class RainbowPath:
    vertices: tuple[int, ...]
    edges: tuple[KEdge, ...]
    colors: frozenset

    def extend(self, v: int, e: KEdge) -> "RainbowPath":
        return RainbowPath(self.vertices + (v,), self.edges + (e,), self.colors | frozenset(e.colors))


@dataclass(frozen=True)
class ClosedWalk:
    """``edges[i]`` joins ``vertices[i]`` and ``vertices[(i + 1) % L]``."""

    vertices: tuple[int, ...]
    edges: tuple[KEdge, ...]
    certified: int | None = None

    @property
    def length(self) -> int:
        return len(self.edges)

    def color_multiplicity(self) -> Counter:
        cnt: Counter = Counter()
        for e in self.edges:
            cnt.update(e.colors)
        return cnt

    def unique_colors(self) -> list[int]:
        return sorted(c for c, x in self.color_multiplicity().items() if x == 1)

    def assoc_multiset(self) -> Counter:
        cnt: Counter = Counter()
        for e in self.edges:
            cnt.update(e.assoc)
        return cnt

    def to_json(self) -> dict:
        return {
            "vertices": [list(vertices_of(v)) for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
            "certified": self.certified,
            "length": self.length,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ClosedWalk":
        return cls(
            tuple(mask_of(v) for v in obj["vertices"]),
            tuple(KEdge.from_json(e) for e in obj["edges"]),
            obj.get("certified"),
        )


def dumps_walk(w: ClosedWalk) -> str:
    return json.dumps(w.to_json(), sort_keys=True)


def loads_walk(text: str) -> ClosedWalk:
    return ClosedWalk.from_json(json.loads(text))


def default_max_len(g: KGraph) -> int:
    return 2 * max(1, math.ceil(math.log2(max(g.vertex_count, 2))))


def _splice(p: RainbowPath, e: KEdge, y: int, q: RainbowPath) -> ClosedWalk:
    # p runs start -> x, e joins x -> y, q runs start -> y and is walked backwards
    verts = p.vertices + tuple(reversed(q.vertices[1:]))
    edges = p.edges + (e,) + tuple(reversed(q.edges))
    unique = sorted((p.colors | frozenset(e.colors)) ^ q.colors)
    return ClosedWalk(verts, edges, unique[0])


def rainbow_search(
    g: KGraph, start: int, depth: int, max_len: int, budget: int = DEFAULT_STATE_BUDGET
) -> ClosedWalk | None:
    """Rainbow BFS from ``start`` keeping the first path to each vertex.

    A second rainbow path with a different colour set closes a walk.
    """
    first = {start: RainbowPath((start,), (), frozenset())}
    queue = deque([first[start]])
    while queue and len(first) <= budget:
        p = queue.popleft()
        x = p.vertices[-1]
        if len(p.edges) >= depth:
            continue
        for y, e in g.neighbors(x):
            cols = e.colors
            if len(set(cols)) != len(cols) or not p.colors.isdisjoint(cols):
                continue
            q = first.get(y)
            if q is None:
                np_ = p.extend(y, e)
                first[y] = np_
                queue.append(np_)
            elif q.colors != p.colors | frozenset(cols) and len(p.edges) + 1 + len(q.edges) <= max_len:
                return _splice(p, e, y, q)
    return None


def _length_floor(indptr: np.ndarray, nbr: np.ndarray, eu: np.ndarray, ev: np.ndarray) -> int:
    """A lower bound on any closed walk's length: 1 with loops, 2 with parallel edges, 4 if bipartite, else 3."""
    if np.any(eu == ev):
        return 1
    pairs = np.stack([np.minimum(eu, ev), np.maximum(eu, ev)], axis=1)
    if len(np.unique(pairs, axis=0)) < len(pairs):
        return 2
    ptr = indptr.tolist()
    adj = nbr.tolist()
    side = [-1] * (len(ptr) - 1)
    for root in range(len(side)):
        if side[root] >= 0:
            continue
        side[root] = 0
        q = deque([root])
        while q:
            x = q.popleft()
            for p in range(ptr[x], ptr[x + 1]):
                y = adj[p]
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    q.append(y)
                elif side[y] == side[x]:
                    return 3
    return 4


def exhaustive_unique_color_walk(g: KGraph, max_len: int | None = None) -> ClosedWalk | None:
    """Shortest closed walk of length <= ``max_len`` with a colour used exactly once.

    Exact on explicit graphs: for each edge and each colour it carries once,
    a BFS avoiding that colour decides whether the walk can be closed.
    """
    if g.edges is None:
        raise ValueError("exhaustive search needs the explicit backend")
    if max_len is None:
        max_len = default_max_len(g)
    if not g.edges or max_len < 1:
        return None
    verts, indptr, nbr, nbr_edge, eu, ev, c0, c1 = g.csr()
    floor = _length_floor(indptr, nbr, eu, ev)
    found = _kernels.shortest_unique_color_walk(indptr, nbr, nbr_edge, eu, ev, c0, c1, max_len, floor)
    if found is None:
        return None
    vids, eids = found
    edges = tuple(g.edges[i] for i in eids)
    w = ClosedWalk(tuple(verts[i] for i in vids), edges)
    return ClosedWalk(w.vertices, w.edges, w.unique_colors()[0])


def find_unique_color_walk(
    g: KGraph,
    max_len: int | None = None,
    seed: int = 0,
    effort: int = 16,
    exhaustive: bool = True,
    budget: int = DEFAULT_STATE_BUDGET,
) -> ClosedWalk | None:
    """Closed walk of length <= ``max_len`` with a colour of multiplicity one.

    ``effort`` seeded rainbow searches of depth ``ceil(log2 N)`` run first,
    in seed order; then, for explicit graphs with at most 5e4 non-isolated
    vertices, the exact search.
    """
    if max_len is None:
        max_len = default_max_len(g)
    depth = min(max(1, math.ceil(math.log2(max(g.vertex_count, 2)))), max_len)
    has_edges = bool(g.edges) if g.edges is not None else bool(g.generators)
    if not has_edges:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(effort):
        w = rainbow_search(g, g.random_vertex(rng), depth, max_len, budget)
        if w is not None:
            return w
    if exhaustive and g.edges is not None and len(g.non_isolated()) <= EXHAUSTIVE_VERTEX_LIMIT:
        return exhaustive_unique_color_walk(g, max_len)
    return None


def _chain_ok(w: ClosedWalk) -> bool:
    L = len(w.edges)
    if L == 0 or len(w.vertices) != L:
        return False
    for i, e in enumerate(w.edges):
        a, b = w.vertices[i], w.vertices[(i + 1) % L]
        if {e.s, e.t} != {a, b} or a == b:
            return False
    return True


def verify_walk(g: KGraph, w: ClosedWalk) -> bool:
    """Recheck every step against the graph's neighbour lists and the certificate."""
    if not _chain_ok(w):
        return False
    L = len(w.edges)
    for i, e in enumerate(w.edges):
        a, b = w.vertices[i], w.vertices[(i + 1) % L]
        if (b, e) not in g.neighbors(a):
            return False
    if w.certified is not None and w.color_multiplicity()[w.certified] != 1:
        return False
    return True


def extract_even_cover(g: KGraph, w: ClosedWalk) -> EvenCover:
    """Host edges associated an odd number of times along the walk."""
    if not _chain_ok(w):
        raise ValueError("malformed walk")
    cnt = w.assoc_multiset()
    return EvenCover(tuple(sorted(i for i, c in cnt.items() if c % 2)))
