"""Hypergraph preprocessing: min-degree cores, bucket decompositions,
codegree pruning, the pair reduction for odd k and multilevel cleaning.

All thresholds are exact Fractions; edge extraction counts are their
ceilings.  Ties are broken towards the lowest vertex / edge index or the
lexicographically smallest vertex set.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence, Union

from .hypergraph import Bucket, BucketDecomposition, ColoredHypergraph, EvenCover, Hypergraph

Threshold = Union[int, float, Fraction]


class OutcomeKind(str, Enum):
    PRUNED = "PrunedLowCodegree"
    BUCKETED = "Bucketed"
    MIN_DEGREE_CORE = "MinDegreeCore"


class DegenerateBucketError(ValueError):
    """A pair bucket whose two edges coincide."""


@dataclass(frozen=True)
class CleaningOutcome:
    """Result of a cleaning step.

    ``sub`` lives on the host's vertex set; ``edge_ids[i]`` is the host index
    of ``sub.edges[i]``.  ``decomposition`` indexes into ``sub``.
    """

    kind: OutcomeKind
    sub: Hypergraph
    edge_ids: tuple[int, ...]
    decomposition: BucketDecomposition | None = None
    t: int = 1
    notes: dict = field(default_factory=dict, compare=False)
    reduction: "PairReduction | None" = None
    direct_cover: EvenCover | None = None

    @property
    def degenerate(self) -> bool:
        return self.sub.m == 0

    def lift(self, cover: EvenCover) -> EvenCover:
        """Map a cover of ``sub`` to host edge indices."""
        return EvenCover(tuple(self.edge_ids[i] for i in cover.edges))

    def host_decomposition(self) -> BucketDecomposition | None:
        if self.decomposition is None:
            return None
        d = self.decomposition
        return BucketDecomposition(
            tuple(Bucket(b.core, tuple(self.edge_ids[i] for i in b.members)) for b in d.buckets),
            d.m,
            d.t,
        )

    def compose(self, inner: "CleaningOutcome") -> "CleaningOutcome":
        """Re-express ``inner`` (a cleaning of ``self.sub``) against our host."""
        return CleaningOutcome(
            inner.kind,
            inner.sub,
            tuple(self.edge_ids[i] for i in inner.edge_ids),
            inner.decomposition,
            inner.t,
            inner.notes,
            inner.reduction,
            inner.direct_cover and EvenCover(tuple(self.edge_ids[i] for i in inner.direct_cover.edges)),
        )


def _base(h: Hypergraph | ColoredHypergraph) -> Hypergraph:
    return h.base if isinstance(h, ColoredHypergraph) else h


def _frac(x: Threshold) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _sub_with_decomposition(
    h: Hypergraph, buckets: list[tuple[tuple[int, ...], list[int]]], m: int, t: int
) -> tuple[Hypergraph, tuple[int, ...], BucketDecomposition]:
    ids = sorted(i for _, members in buckets for i in members)
    pos = {host: i for i, host in enumerate(ids)}
    dec = BucketDecomposition(
        tuple(Bucket(core, tuple(pos[i] for i in members)) for core, members in buckets), m, t
    )
    return h.subhypergraph(ids), tuple(ids), dec


def min_degree_core(h: Hypergraph | ColoredHypergraph) -> CleaningOutcome:
    """Delete low-degree vertices until every survivor has degree >= d/2.

    ``d = e(h)/n`` is fixed from the input; the lowest-indexed offending
    vertex goes first.  Vertex ids are preserved.
    """
    h = _base(h)
    d = h.average_degree()
    thr = d / 2
    deg = h.degrees()
    alive_v = [True] * h.n
    alive_e = [True] * h.m
    heap = [v for v in range(h.n) if deg[v] < thr]
    heapq.heapify(heap)
    removed = []
    while heap:
        v = heapq.heappop(heap)
        if not alive_v[v]:
            continue
        alive_v[v] = False
        removed.append(v)
        for ei in h.incidence[v]:
            if not alive_e[ei]:
                continue
            alive_e[ei] = False
            for u in h.edges[ei]:
                if u != v:
                    deg[u] -= 1
                    if alive_v[u] and deg[u] < thr:
                        heapq.heappush(heap, u)
    ids = tuple(i for i in range(h.m) if alive_e[i])
    return CleaningOutcome(
        OutcomeKind.MIN_DEGREE_CORE,
        h.subhypergraph(ids),
        ids,
        t=1,
        notes={"d": d, "threshold": thr, "removed_vertices": removed},
    )


def min_degree(h: Hypergraph) -> int:
    """Minimum degree over non-isolated vertices (0 for an empty hypergraph)."""
    degs = [x for x in h.degrees() if x]
    return min(degs) if degs else 0


def single_vertex_buckets(h: Hypergraph | ColoredHypergraph) -> CleaningOutcome:
    """Greedy (b, 1)-bucket decomposition covering at least half the edges.

    ``b = max(1, floor(d/2))``; at each step the lowest-indexed vertex with
    residual degree >= b donates its b lowest-indexed residual edges.
    """
    h = _base(h)
    if h.m < 2:
        raise ValueError("single_vertex_buckets needs at least two edges")
    d = h.average_degree()
    b = max(1, math.floor(d / 2))
    alive = [True] * h.m
    deg = h.degrees()
    covered = 0
    v = 0
    buckets: list[tuple[tuple[int, ...], list[int]]] = []
    while 2 * covered < h.m:
        while v < h.n and deg[v] < b:
            v += 1
        # residual has >= e/2 edges, so some vertex has degree >= kd/2 >= b
        assert v < h.n, "no vertex of residual degree >= b"
        members = [ei for ei in h.incidence[v] if alive[ei]][:b]
        for ei in members:
            alive[ei] = False
            for u in h.edges[ei]:
                deg[u] -= 1
        buckets.append(((v,), members))
        covered += b
    sub, ids, dec = _sub_with_decomposition(h, buckets, b, 1)
    return CleaningOutcome(OutcomeKind.BUCKETED, sub, ids, dec, 1, {"d": d, "bucket_size": b})


class _HeavySets:
    """Codegree bookkeeping for all r-sets of the residual edges."""

    def __init__(self, h: Hypergraph, r: int, threshold: int):
        self.r = r
        self.threshold = threshold
        self.count: Counter = Counter()
        self.index: dict[tuple[int, ...], list[int]] = {}
        for ei, e in enumerate(h.edges):
            for s in combinations(e, r):
                self.count[s] += 1
                self.index.setdefault(s, []).append(ei)
        self.cands = sorted(s for s, c in self.count.items() if c >= threshold)
        self.ptr = 0

    def first_heavy(self) -> tuple[int, ...] | None:
        # codegrees only decrease, so the lexicographically first heavy set never moves back
        while self.ptr < len(self.cands) and self.count[self.cands[self.ptr]] < self.threshold:
            self.ptr += 1
        return self.cands[self.ptr] if self.ptr < len(self.cands) else None

    def remove_edge(self, e: Sequence[int]) -> None:
        for s in combinations(e, self.r):
            self.count[s] -= 1


def prune_or_bucket(
    h: Hypergraph | ColoredHypergraph, t: int, m: Threshold, e_budget: Threshold
) -> CleaningOutcome:
    """Either prune all heavy t-sets cheaply or return an (m, t)-decomposition.

    Repeatedly take the lexicographically smallest t-set of codegree >= m and
    extract its m lowest-indexed edges.  As soon as the extracted edges
    number at least ``e_budget`` (and at least one bucket exists) they are
    returned as a Bucketed outcome.  Otherwise the residual is returned:
    every t-set has codegree < m there and at most ``e_budget`` edges were
    lost.
    """
    h = _base(h)
    if not 1 <= t <= h.k:
        raise ValueError(f"need 1 <= t <= k, got t={t}")
    m_int = _ceil(_frac(m))
    if m_int < 1:
        raise ValueError("bucket size must be positive")
    budget = _frac(e_budget)
    heavy = _HeavySets(h, t, m_int)
    alive = [True] * h.m
    buckets: list[tuple[tuple[int, ...], list[int]]] = []
    extracted = 0
    bucketed = False
    while True:
        R = heavy.first_heavy()
        if R is None:
            break
        members = [ei for ei in heavy.index[R] if alive[ei]][:m_int]
        for ei in members:
            alive[ei] = False
            heavy.remove_edge(h.edges[ei])
        buckets.append((R, members))
        extracted += m_int
        if extracted >= budget:
            bucketed = True
            break
    notes = {"m": m_int, "m_ceiled": m_int != _frac(m), "e_budget": budget, "extracted": extracted}
    if bucketed:
        sub, ids, dec = _sub_with_decomposition(h, buckets, m_int, t)
        return CleaningOutcome(OutcomeKind.BUCKETED, sub, ids, dec, t, notes)
    ids = tuple(i for i in range(h.m) if alive[i])
    return CleaningOutcome(OutcomeKind.PRUNED, h.subhypergraph(ids), ids, None, t, notes)


@dataclass(frozen=True)
class PairReduction:
    """Edges ``Y xor Z`` of the surviving two-edge buckets.

    ``pairs[i]`` holds the host indices ``(Y, Z)`` behind ``graph.edges[i]``.
    """

    graph: Hypergraph
    pairs: tuple[tuple[int, int], ...]
    j: int
    kept_buckets: tuple[int, ...]
    j_counts: Mapping[int, int]

    def lift(self, cover: EvenCover) -> EvenCover:
        parity: Counter = Counter()
        for gi in cover.edges:
            y, z = self.pairs[gi]
            parity[y] += 1
            parity[z] += 1
        return EvenCover(tuple(i for i, c in parity.items() if c % 2))


def pair_reduction(d: BucketDecomposition, host: Hypergraph | ColoredHypergraph) -> PairReduction:
    """Collapse a (2, (k+1)/2)-decomposition into a 2(k-j)-uniform multi-hypergraph.

    ``j`` is the most frequent intersection size ``|Y & Z|`` over buckets
    (smallest on ties); only buckets with that intersection size survive.
    """
    host = _base(host)
    if host.k % 2 == 0:
        raise ValueError("pair reduction needs odd k")
    if d.m != 2:
        raise ValueError(f"pair reduction needs buckets of two edges, got m={d.m}")
    inters = []
    for bi, b in enumerate(d.buckets):
        y, z = b.members
        j = len(set(host.edges[y]) & set(host.edges[z]))
        if j == host.k:
            raise DegenerateBucketError(f"bucket {bi} holds two copies of edge {host.edges[y]}")
        inters.append(j)
    counts = Counter(inters)
    if not counts:
        return PairReduction(Hypergraph(host.n, 2, (), True), (), 0, (), {})
    best = max(counts.values())
    j = min(x for x, c in counts.items() if c == best)
    kept = tuple(bi for bi, x in enumerate(inters) if x == j)
    edges = []
    pairs = []
    for bi in kept:
        y, z = d.buckets[bi].members
        edges.append(tuple(sorted(set(host.edges[y]) ^ set(host.edges[z]))))
        pairs.append((y, z))
    g = Hypergraph(host.n, 2 * (host.k - j), tuple(edges), multi=True)
    return PairReduction(g, tuple(pairs), j, kept, dict(counts))


def default_pair_budget(n: int, k: int, l: int, C: float = 1.0) -> int:
    """``C * n * (n/l)^((k-3)/2) * log2 n``, ceiled."""
    return math.ceil(C * n * (n / l) ** ((k - 3) / 2) * math.log2(max(n, 2)))


def low_codegree_reduct(
    h: Hypergraph | ColoredHypergraph, l: int, budget: Threshold | None = None, C: float = 1.0
) -> CleaningOutcome:
    """Make every ((k+1)/2)-set have codegree <= 1, or hand over a pair reduction.

    Runs ``prune_or_bucket`` with ``t = (k+1)/2`` and ``m = 2``.  In the
    Bucketed case the outcome carries ``reduction`` (lifting back to host
    indices), or ``direct_cover`` when a bucket holds a repeated edge.
    """
    h = _base(h)
    if h.k % 2 == 0:
        raise ValueError("low_codegree_reduct needs odd k")
    if budget is None:
        budget = default_pair_budget(h.n, h.k, l, C)
    s = (h.k + 1) // 2
    out = prune_or_bucket(h, s, 2, budget)
    if out.kind is OutcomeKind.PRUNED:
        return out
    hdec = out.host_decomposition()
    for b in hdec.buckets:
        y, z = b.members
        if h.edges[y] == h.edges[z]:
            return CleaningOutcome(
                out.kind, out.sub, out.edge_ids, out.decomposition, s, out.notes,
                direct_cover=EvenCover((y, z)),
            )
    red = pair_reduction(hdec, h)
    return CleaningOutcome(out.kind, out.sub, out.edge_ids, out.decomposition, s, out.notes, reduction=red)


def multilevel_clean(
    h: Hypergraph | ColoredHypergraph,
    m: Callable[[int], Threshold] | Mapping[int, Threshold] | Sequence[Threshold],
) -> CleaningOutcome:
    """Find a level t with light sets above t and either min degree or buckets at t.

    ``m`` gives a threshold per set size ``1..k`` (callable, mapping, or a
    sequence indexed from size 1).  At each step the largest r >= 2 with an
    r-set of codegree >= m(r) donates ceil(m(r)) edges (smallest such set,
    lowest-indexed edges) to pool r.  Extraction halts at the first step
    where more than e(h)/2 edges have been taken; the largest pool then
    becomes the answer with its (m(t), t)-decomposition.  If the process
    dies out first, the min-degree core of the residual is returned with
    t = 1.
    """
    h = _base(h)
    k = h.k
    if callable(m):
        raw = {r: m(r) for r in range(1, k + 1)}
    elif isinstance(m, Mapping):
        raw = {r: m[r] for r in range(1, k + 1)}
    else:
        raw = {r: m[r - 1] for r in range(1, k + 1)}
    thr = {r: _frac(v) for r, v in raw.items()}
    if any(v <= 0 for v in thr.values()):
        raise ValueError("thresholds must be positive")
    mc = {r: _ceil(v) for r, v in thr.items()}
    notes = {
        "thresholds": thr,
        "ceiled": tuple(r for r in range(1, k + 1) if mc[r] != thr[r]),
        "d": h.average_degree(),
    }
    levels = {r: _HeavySets(h, r, mc[r]) for r in range(2, k + 1)}
    alive = [True] * h.m
    pools: dict[int, list[tuple[tuple[int, ...], list[int]]]] = {r: [] for r in levels}
    extracted = 0
    overflow = False
    while True:
        pick = None
        for r in range(k, 1, -1):
            S = levels[r].first_heavy()
            if S is not None:
                pick = (r, S)
                break
        if pick is None:
            break
        r, S = pick
        members = [ei for ei in levels[r].index[S] if alive[ei]][: mc[r]]
        for ei in members:
            alive[ei] = False
            for lv in levels.values():
                lv.remove_edge(h.edges[ei])
        pools[r].append((S, members))
        extracted += len(members)
        if 2 * extracted > h.m:
            overflow = True
            break
    notes["extracted"] = extracted
    notes["pool_sizes"] = {r: sum(len(x) for _, x in p) for r, p in pools.items() if p}
    if overflow:
        sizes = notes["pool_sizes"]
        best = max(sizes.values())
        t = min(r for r, s in sizes.items() if s == best)
        sub, ids, dec = _sub_with_decomposition(h, pools[t], mc[t], t)
        return CleaningOutcome(OutcomeKind.BUCKETED, sub, ids, dec, t, notes)
    ids = tuple(i for i in range(h.m) if alive[i])
    residual = CleaningOutcome(OutcomeKind.PRUNED, h.subhypergraph(ids), ids)
    core = residual.compose(min_degree_core(residual.sub))
    notes["min_degree"] = min_degree(core.sub)
    notes["min_degree_ok"] = notes["min_degree"] >= thr[1] or core.sub.m == 0
    return CleaningOutcome(OutcomeKind.MIN_DEGREE_CORE, core.sub, core.edge_ids, None, 1, notes)


def even_cover_thresholds(d: Threshold, k: int, n: int) -> Callable[[int], Fraction]:
    """Per-size thresholds for the odd-k even-cover route.

    ``m(1) = d/10k`` and ``m(t) = (d/10k)^((k/2-t)/(k/2-1)) * log2(n)^(1-1/(k+1))``
    for ``2 <= t <= (k-1)/2``, never below 2.  Larger sets already have codegree <= 1 after
    ``low_codegree_reduct``, so their threshold is 2 (never heavy).
    """
    d = _frac(d)
    base = d / (10 * k)
    logn = math.log2(max(n, 2))

    def m(t: int) -> Fraction:
        if t == 1:
            return base
        if 2 * t >= k + 1:
            return Fraction(2)
        expo = (k / 2 - t) / (k / 2 - 1)
        # a bucket needs two edges before it yields any Kikuchi edge
        return max(Fraction(2), Fraction(float(base) ** expo * logn ** (1 - 1 / (k + 1))))

    return m
