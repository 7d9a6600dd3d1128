"""Pure-Python kernels; same signatures and outputs as ``_ckernels``.

Rows are packed little-endian into ``uint64`` words: bit ``j`` of row ``i``
lives in ``rows[i, j // 64]`` at position ``j % 64``.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def _to_ints(rows: np.ndarray) -> list[int]:
    out = []
    for r in rows:
        v = 0
        for w in range(len(r) - 1, -1, -1):
            v = (v << 64) | int(r[w])
        out.append(v)
    return out


def reduce_rows(rows: np.ndarray, stop_at_first: bool = False) -> tuple[int, list[list[int]]]:
    """Incremental XOR-basis elimination in row order.

    Returns ``(rank, deps)`` where each entry of ``deps`` lists the row
    indices whose XOR is zero, one per row that reduced to zero.  Pivots are
    lowest set bits, so results are deterministic.
    """
    vecs = _to_ints(rows)
    basis: dict[int, tuple[int, int]] = {}
    deps: list[list[int]] = []
    rank = 0
    for i, v in enumerate(vecs):
        hist = 1 << i
        while v:
            low = v & -v
            p = low.bit_length() - 1
            b = basis.get(p)
            if b is None:
                basis[p] = (v, hist)
                rank += 1
                break
            v ^= b[0]
            hist ^= b[1]
        else:
            deps.append(_bits(hist))
            if stop_at_first:
                break
    return rank, deps


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def min_weight_subset(rows: np.ndarray, max_size: int) -> tuple[int, ...] | None:
    """Smallest nonempty index set (lexicographic among equals) with XOR zero.

    Sizes ``1..max_size`` are tried in order; subsets of each size are
    visited in lexicographic order with a popcount bound for pruning.
    """
    vecs = _to_ints(rows)
    m = len(vecs)
    if m == 0:
        return None
    kmax = max(v.bit_count() for v in vecs) or 1
    chosen: list[int] = []

    def dfs(start: int, acc: int, left: int) -> bool:
        if left == 0:
            return acc == 0
        if acc.bit_count() > left * kmax:
            return False
        for j in range(start, m - left + 1):
            chosen.append(j)
            if dfs(j + 1, acc ^ vecs[j], left - 1):
                return True
            chosen.pop()
        return False

    for size in range(1, min(max_size, m) + 1):
        if dfs(0, 0, size):
            return tuple(chosen)
    return None


def shortest_unique_color_walk(
    indptr: np.ndarray,
    nbr: np.ndarray,
    nbr_edge: np.ndarray,
    edge_u: np.ndarray,
    edge_v: np.ndarray,
    col0: np.ndarray,
    col1: np.ndarray,
    max_len: int,
    floor: int = 2,
) -> tuple[list[int], list[int]] | None:
    """Shortest closed walk (length <= max_len) in which some colour occurs once.

    The graph is in CSR form; edge ``e`` joins ``edge_u[e]`` and
    ``edge_v[e]`` and carries colours ``col0[e]`` and ``col1[e]`` (``-1`` for
    absent).  For each edge ``e`` and colour ``c`` carried once by ``e``, a
    BFS from ``edge_v[e]`` to ``edge_u[e]`` avoiding every edge carrying
    ``c`` closes the walk.  This is exact: any qualifying walk contains such
    an edge plus a ``c``-free return walk, which a shortest path can only
    shorten.  Returns ``(vertices, edges)`` with ``edges[i]`` joining
    ``vertices[i]`` and ``vertices[i+1 mod L]``.  ``floor`` is a known
    lower bound on the answer; the scan stops once a walk that short is found.
    """
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    nbr_edge = nbr_edge.tolist()
    eu = edge_u.tolist()
    ev = edge_v.tolist()
    c0 = col0.tolist()
    c1 = col1.tolist()
    n_vert = len(indptr) - 1
    best_len = max_len + 1
    best: tuple[list[int], list[int]] | None = None
    parent_edge = [-1] * n_vert
    stamp = [-1] * n_vert
    dist = [0] * n_vert
    run = 0
    for e in range(len(eu)):
        if best_len <= floor:
            break
        for c in (c0[e], c1[e]):
            if c < 0 or c0[e] == c1[e]:
                continue
            src, dst = ev[e], eu[e]
            limit = best_len - 2  # path length must satisfy 1 + dist < best_len
            if limit < 1:
                continue
            run += 1
            stamp[src] = run
            dist[src] = 0
            parent_edge[src] = -1
            q = deque([src])
            found = False
            while q and not found:
                x = q.popleft()
                dx = dist[x]
                if dx >= limit:
                    break
                for p in range(indptr[x], indptr[x + 1]):
                    f = nbr_edge[p]
                    if c0[f] == c or c1[f] == c:
                        continue
                    y = nbr[p]
                    if stamp[y] == run:
                        continue
                    stamp[y] = run
                    dist[y] = dx + 1
                    parent_edge[y] = f
                    if y == dst:
                        found = True
                        break
                    q.append(y)
            if found:
                path_edges = []
                y = dst
                while y != src:
                    f = parent_edge[y]
                    path_edges.append(f)
                    y = eu[f] if ev[f] == y else ev[f]
                path_edges.reverse()
                verts = [dst, src]
                y = src
                for f in path_edges[:-1]:
                    y = eu[f] if ev[f] == y else ev[f]
                    verts.append(y)
                best = (verts, [e] + path_edges)
                best_len = 1 + len(path_edges)
                if best_len <= floor:
                    break
    return best
