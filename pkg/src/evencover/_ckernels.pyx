# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels`` exactly."""

import numpy as np

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int _lowest_bit(const uint64_t[:] v, Py_ssize_t w) nogil:
    cdef Py_ssize_t i
    for i in range(w):
        if v[i]:
            return <int>(i * 64 + _ctz(v[i]))
    return -1


def reduce_rows(rows, bint stop_at_first=False):
    cdef uint64_t[:, :] a = np.ascontiguousarray(rows, dtype=np.uint64).copy()
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t w = a.shape[1]
    cdef Py_ssize_t hw = (m + 63) // 64 if m else 1
    cdef uint64_t[:, :] hist = np.zeros((m, hw), dtype=np.uint64)
    cdef Py_ssize_t nbits = w * 64
    cdef int64_t[:] pivot_row = np.full(max(nbits, 1), -1, dtype=np.int64)
    cdef Py_ssize_t i, j, r
    cdef int p
    cdef int rank = 0
    deps = []
    for i in range(m):
        hist[i, i // 64] = (<uint64_t>1) << (i % 64)
        while True:
            p = _lowest_bit(a[i], w)
            if p < 0:
                out = []
                for j in range(hw):
                    word = hist[i, j]
                    while word:
                        out.append(j * 64 + _ctz(word))
                        word &= word - 1
                deps.append(out)
                break
            r = pivot_row[p]
            if r < 0:
                pivot_row[p] = i
                rank += 1
                break
            for j in range(w):
                a[i, j] ^= a[r, j]
            for j in range(hw):
                hist[i, j] ^= hist[r, j]
        if stop_at_first and deps:
            break
    return rank, deps


cdef bint _dfs(uint64_t[:, :] vecs, uint64_t[:, :] acc, int64_t[:] chosen,
               Py_ssize_t depth, Py_ssize_t start, Py_ssize_t left,
               Py_ssize_t m, Py_ssize_t w, int kmax) nogil:
    cdef Py_ssize_t j, x
    cdef int pc = 0
    cdef bint zero
    if left == 0:
        for x in range(w):
            if acc[depth, x]:
                return False
        return True
    for x in range(w):
        pc += _popcount(acc[depth, x])
    if pc > left * kmax:
        return False
    for j in range(start, m - left + 1):
        chosen[depth] = j
        for x in range(w):
            acc[depth + 1, x] = acc[depth, x] ^ vecs[j, x]
        if _dfs(vecs, acc, chosen, depth + 1, j + 1, left - 1, m, w, kmax):
            return True
    return False


def min_weight_subset(rows, int max_size):
    cdef uint64_t[:, :] vecs = np.ascontiguousarray(rows, dtype=np.uint64)
    cdef Py_ssize_t m = vecs.shape[0]
    if m == 0:
        return None
    cdef Py_ssize_t w = vecs.shape[1]
    cdef Py_ssize_t i, x
    cdef int kmax = 0, pc
    for i in range(m):
        pc = 0
        for x in range(w):
            pc += _popcount(vecs[i, x])
        if pc > kmax:
            kmax = pc
    if kmax == 0:
        kmax = 1
    cdef Py_ssize_t top = min(max_size, m)
    cdef uint64_t[:, :] acc = np.zeros((top + 1, max(w, 1)), dtype=np.uint64)
    cdef int64_t[:] chosen = np.zeros(top + 1, dtype=np.int64)
    cdef Py_ssize_t size
    cdef bint hit
    for size in range(1, top + 1):
        with nogil:
            hit = _dfs(vecs, acc, chosen, 0, 0, size, m, w, kmax)
        if hit:
            return tuple(int(chosen[i]) for i in range(size))
    return None


def shortest_unique_color_walk(indptr_, nbr_, nbr_edge_, edge_u_, edge_v_, col0_, col1_, int max_len, int floor=2):
    cdef int64_t[:] indptr = np.ascontiguousarray(indptr_, dtype=np.int64)
    cdef int64_t[:] nbr = np.ascontiguousarray(nbr_, dtype=np.int64)
    cdef int64_t[:] nbr_edge = np.ascontiguousarray(nbr_edge_, dtype=np.int64)
    cdef int64_t[:] eu = np.ascontiguousarray(edge_u_, dtype=np.int64)
    cdef int64_t[:] ev = np.ascontiguousarray(edge_v_, dtype=np.int64)
    cdef int64_t[:] c0 = np.ascontiguousarray(col0_, dtype=np.int64)
    cdef int64_t[:] c1 = np.ascontiguousarray(col1_, dtype=np.int64)
    cdef Py_ssize_t n_vert = indptr.shape[0] - 1
    cdef Py_ssize_t n_edge = eu.shape[0]
    if n_vert <= 0 or n_edge == 0:
        return None
    cdef int64_t[:] parent_edge = np.full(n_vert, -1, dtype=np.int64)
    cdef int64_t[:] stamp = np.full(n_vert, -1, dtype=np.int64)
    cdef int64_t[:] dist = np.zeros(n_vert, dtype=np.int64)
    cdef int64_t[:] queue = np.zeros(n_vert, dtype=np.int64)
    cdef int64_t[:] best_path = np.zeros(max(max_len, 1), dtype=np.int64)
    cdef Py_ssize_t best_len = max_len + 1
    cdef Py_ssize_t best_edge = -1, best_plen = 0
    cdef Py_ssize_t e, k, head, tail, p, x, y, f, limit, plen
    cdef int64_t c, run = 0, src, dst
    cdef bint found
    with nogil:
        for e in range(n_edge):
            if best_len <= floor:
                break
            for k in range(2):
                c = c0[e] if k == 0 else c1[e]
                if c < 0 or c0[e] == c1[e]:
                    continue
                src = ev[e]
                dst = eu[e]
                limit = best_len - 2
                if limit < 1:
                    continue
                run += 1
                stamp[src] = run
                dist[src] = 0
                parent_edge[src] = -1
                head = 0
                tail = 0
                queue[tail] = src
                tail += 1
                found = False
                while head < tail and not found:
                    x = queue[head]
                    head += 1
                    if dist[x] >= limit:
                        break
                    for p in range(indptr[x], indptr[x + 1]):
                        f = nbr_edge[p]
                        if c0[f] == c or c1[f] == c:
                            continue
                        y = nbr[p]
                        if stamp[y] == run:
                            continue
                        stamp[y] = run
                        dist[y] = dist[x] + 1
                        parent_edge[y] = f
                        if y == dst:
                            found = True
                            break
                        queue[tail] = y
                        tail += 1
                if found:
                    plen = dist[dst]
                    y = dst
                    p = plen - 1
                    while y != src:
                        f = parent_edge[y]
                        best_path[p] = f
                        p -= 1
                        y = eu[f] if ev[f] == y else ev[f]
                    best_len = 1 + plen
                    best_plen = plen
                    best_edge = e
                    if best_len <= floor:
                        break
    if best_edge < 0:
        return None
    path_edges = [int(best_path[i]) for i in range(best_plen)]
    verts = [int(eu[best_edge]), int(ev[best_edge])]
    yy = int(ev[best_edge])
    for f in path_edges[:-1]:
        yy = int(eu[f]) if int(ev[f]) == yy else int(ev[f])
        verts.append(yy)
    return verts, [int(best_edge)] + path_edges
