"""Kikuchi graphs over l-subsets, with implicit and explicit backends.

Every mode is described by a list of generators.  A generator has a mask
``D`` (the required ``S xor T``), one or more split patterns (per part of
``D``, how many of its elements ``S`` must hold), the host edges it stands
for and its colours.  ``S`` is adjacent to ``S xor D`` whenever ``S`` meets
a pattern.  Vertices are int bitmasks over the ground set: ``[0, n)`` for
the even-k and flower graphs, ``2n`` ids (red ``v``, blue ``n + v``) for the
bipartite odd-k graph.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .hypergraph import BucketDecomposition, ColoredHypergraph, Hypergraph, mask_of, vertices_of

MAX_EXPLICIT_VERTICES = 10**6
MAX_EXPLICIT_EDGES = 2 * 10**6


class Mode(str, Enum):
    EVENK = "evenk"
    ODDK = "oddk"
    FLOWER = "flower"
    PLAIN = "plain"


class Backend(str, Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


class KikuchiGuardError(ValueError):
    """An explicit build would be too large."""


class ColoringRetryError(RuntimeError):
    """No red/blue colouring with enough good gadgets within the retry budget."""


@dataclass(frozen=True)
class KEdge:
    """An edge ``{s, t}`` (masks, ``s < t``) with its host edges and colours."""

    s: int
    t: int
    assoc: tuple[int, ...]
    colors: tuple[int, ...]

    @classmethod
    def make(cls, a: int, b: int, assoc: tuple[int, ...], colors: tuple[int, ...]) -> "KEdge":
        return cls(a, b, assoc, colors) if a < b else cls(b, a, assoc, colors)

    def other(self, v: int) -> int:
        if v == self.s:
            return self.t
        if v == self.t:
            return self.s
        raise ValueError("vertex is not an endpoint")

    def to_json(self) -> dict:
        return {
            "s": list(vertices_of(self.s)),
            "t": list(vertices_of(self.t)),
            "assoc": list(self.assoc),
            "colors": list(self.colors),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KEdge":
        return cls.make(mask_of(obj["s"]), mask_of(obj["t"]), tuple(obj["assoc"]), tuple(obj["colors"]))


@dataclass(frozen=True)
class Generator:
    diff: int
    patterns: tuple[tuple[tuple[int, int], ...], ...]
    assoc: tuple[int, ...]
    colors: tuple[int, ...]

    def matches(self, s: int) -> bool:
        for pat in self.patterns:
            if all((s & part).bit_count() == size for part, size in pat):
                return True
        return False

    def half_splits(self) -> Iterator[int]:
        """Masks ``S & D`` over all patterns, each unordered split once.

        Of the two orientations of an edge exactly one puts the lowest bit
        of ``D`` on the ``S`` side; only that one is produced.
        """
        low = self.diff & -self.diff
        seen = set()
        for pat in self.patterns:
            choices = [
                [mask_of(c) for c in combinations(vertices_of(part), size)] for part, size in pat
            ]
            for combo in product(*choices):
                a = 0
                for x in combo:
                    a |= x
                if a & low and a not in seen:
                    seen.add(a)
                    yield a

    def split_count(self) -> int:
        total = 0
        for pat in self.patterns:
            c = 1
            for part, size in pat:
                c *= math.comb(part.bit_count(), size)
            total += c
        # each unordered split is counted once from either side
        return total // 2


@dataclass(frozen=True)
class FlowerGadget:
    """Centre edge plus one petal per centre vertex (in sorted-vertex order)."""

    center: int
    petals: tuple[int, ...]
    good: bool = False

    @property
    def key(self) -> tuple[int, ...]:
        return (self.center,) + self.petals


@dataclass(frozen=True)
class ColorHypergraph:
    """The multi-hypergraph of a colour over the red/blue ground set."""

    color: int
    uniformity: int
    n: int
    edges: tuple[tuple[int, ...], ...]

    def masks(self) -> list[int]:
        return [mask_of(e) for e in self.edges]


@dataclass
class KGraph:
    mode: Mode
    backend: Backend
    host: ColoredHypergraph
    l: int
    ground: int
    generators: tuple[Generator, ...]
    t: int | None = None
    decomposition: BucketDecomposition | None = None
    gadgets: tuple[FlowerGadget, ...] = ()
    red: tuple[bool, ...] | None = None
    edges: tuple[KEdge, ...] | None = None
    adjacency: dict[int, list[tuple[int, int]]] | None = None
    pruned: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def vertex_count(self) -> int:
        return math.comb(self.ground, self.l)

    @property
    def explicit(self) -> bool:
        return self.edges is not None

    @property
    def edge_count(self) -> int:
        if self.edges is None:
            raise ValueError("edge count needs the explicit backend")
        return len(self.edges)

    def average_degree(self) -> Fraction:
        return Fraction(2 * self.edge_count, self.vertex_count)

    def is_vertex(self, s: int) -> bool:
        return s >= 0 and s.bit_count() == self.l and s >> self.ground == 0

    def neighbors(self, s: int) -> list[tuple[int, KEdge]]:
        """Neighbours of ``s`` with the connecting edges, in deterministic order."""
        if self.adjacency is not None and (self.pruned or self.backend is Backend.EXPLICIT):
            return [(t, self.edges[ei]) for t, ei in self.adjacency.get(s, ())]
        return implicit_neighbors(self, s)

    def non_isolated(self) -> list[int]:
        if self.adjacency is None:
            raise ValueError("needs the explicit backend")
        return sorted(v for v, a in self.adjacency.items() if a)

    def random_vertex(self, rng: np.random.Generator) -> int:
        """A vertex with at least one incident edge (when any exist)."""
        if self.adjacency is not None:
            verts = self.non_isolated()
            if not verts:
                return _random_subset(rng, self.ground, self.l)
            return verts[int(rng.integers(len(verts)))]
        if not self.generators:
            return _random_subset(rng, self.ground, self.l)
        gen = self.generators[int(rng.integers(len(self.generators)))]
        pat = gen.patterns[int(rng.integers(len(gen.patterns)))]
        s = 0
        for part, size in pat:
            verts = vertices_of(part)
            pick = rng.choice(len(verts), size=size, replace=False)
            s |= mask_of(verts[i] for i in pick)
        rest = [v for v in range(self.ground) if not (gen.diff >> v) & 1]
        need = self.l - s.bit_count()
        pick = rng.choice(len(rest), size=need, replace=False)
        return s | mask_of(rest[i] for i in pick)

    def csr(self):
        """Compact CSR arrays over non-isolated vertices for the walk kernels.

        Returns ``(verts, indptr, nbr, nbr_edge, edge_u, edge_v, col0, col1)``
        where vertex ids index ``verts`` and edge ids index ``self.edges``.
        """
        verts = self.non_isolated()
        vid = {v: i for i, v in enumerate(verts)}
        indptr = np.zeros(len(verts) + 1, dtype=np.int64)
        for i, v in enumerate(verts):
            indptr[i + 1] = indptr[i] + len(self.adjacency[v])
        nbr = np.empty(indptr[-1], dtype=np.int64)
        nbr_edge = np.empty(indptr[-1], dtype=np.int64)
        p = 0
        for v in verts:
            for t, ei in self.adjacency[v]:
                nbr[p] = vid[t]
                nbr_edge[p] = ei
                p += 1
        m = len(self.edges)
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        c0 = np.full(m, -1, dtype=np.int64)
        c1 = np.full(m, -1, dtype=np.int64)
        for i, e in enumerate(self.edges):
            eu[i] = vid.get(e.s, -1)
            ev[i] = vid.get(e.t, -1)
            c0[i] = e.colors[0]
            if len(e.colors) > 1:
                c1[i] = e.colors[1]
        return verts, indptr, nbr, nbr_edge, eu, ev, c0, c1

    def with_edges(self, keep: Sequence[int], notes: dict) -> "KGraph":
        edges = tuple(self.edges[i] for i in keep)
        g = KGraph(
            self.mode, Backend.EXPLICIT, self.host, self.l, self.ground, self.generators, self.t,
            self.decomposition, self.gadgets, self.red, edges, _adjacency(edges), True,
            {**self.notes, **notes},
        )
        return g


def plain_graph(n: int, edges: Sequence[tuple[int, int, Sequence[int]]]) -> KGraph:
    """An explicit coloured multigraph on ``n`` vertices (vertex ``u`` is mask ``1 << u``).

    ``edges`` holds ``(u, v, colours)`` triples; ``assoc`` is the edge's own index.
    """
    kedges = []
    for i, (u, v, cols) in enumerate(edges):
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"bad edge ({u}, {v})")
        kedges.append(KEdge.make(1 << u, 1 << v, (i,), tuple(int(c) for c in cols)))
    host = ColoredHypergraph(Hypergraph(n, 2, tuple(tuple(sorted((u, v))) for u, v, _ in edges), multi=True),
                             tuple(range(len(edges))), has_colors=False)
    kedges = tuple(kedges)
    return KGraph(Mode.PLAIN, Backend.EXPLICIT, host, 1, n, (), edges=kedges, adjacency=_adjacency(kedges))


def _random_subset(rng: np.random.Generator, ground: int, l: int) -> int:
    return mask_of(int(x) for x in rng.choice(ground, size=l, replace=False))


def implicit_neighbors(g: KGraph, s: int) -> list[tuple[int, KEdge]]:
    out = []
    seen: set[int] = set()
    dedupe = g.mode is Mode.FLOWER
    for gen in g.generators:
        if gen.matches(s):
            t = s ^ gen.diff
            if dedupe:
                if t in seen:
                    continue
                seen.add(t)
            out.append((t, KEdge.make(s, t, gen.assoc, gen.colors)))
    return out


def neighbors(g: KGraph, s: int | Iterable[int]) -> list[tuple[int, KEdge]]:
    """Neighbours of a vertex given as a mask or as an iterable of ground ids."""
    mask = s if isinstance(s, int) else mask_of(s)
    if not g.is_vertex(mask):
        raise ValueError(f"not an {g.l}-subset of the ground set")
    return g.neighbors(mask)


def _adjacency(edges: Sequence[KEdge]) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, e in enumerate(edges):
        adj.setdefault(e.s, []).append((e.t, i))
        adj.setdefault(e.t, []).append((e.s, i))
    return adj


def _materialize(g: KGraph) -> KGraph:
    if g.vertex_count > MAX_EXPLICIT_VERTICES:
        raise KikuchiGuardError(f"C({g.ground},{g.l}) = {g.vertex_count} vertices exceeds {MAX_EXPLICIT_VERTICES}")
    estimate = 0
    for gen in g.generators:
        half = gen.diff.bit_count() // 2
        estimate += gen.split_count() * math.comb(g.ground - 2 * half, g.l - half)
    if estimate > MAX_EXPLICIT_EDGES:
        raise KikuchiGuardError(f"about {estimate} edges exceeds {MAX_EXPLICIT_EDGES}")
    edges: list[KEdge] = []
    seen: set[tuple[int, int]] = set()
    dedupe = g.mode is Mode.FLOWER
    for gen in g.generators:
        half = gen.diff.bit_count() // 2
        rest = [1 << v for v in range(g.ground) if not (gen.diff >> v) & 1]
        splits = list(gen.half_splits())
        for common in combinations(rest, g.l - half):
            r = sum(common)
            for a in splits:
                e = KEdge.make(a | r, (gen.diff ^ a) | r, gen.assoc, gen.colors)
                if dedupe:
                    key = (e.s, e.t)
                    if key in seen:
                        continue
                    seen.add(key)
                edges.append(e)
    g.edges = tuple(edges)
    g.adjacency = _adjacency(g.edges)
    return g


def _finish(g: KGraph, backend: Backend | str) -> KGraph:
    backend = Backend(backend)
    g.backend = backend
    return _materialize(g) if backend is Backend.EXPLICIT else g


def _colored(h: Hypergraph | ColoredHypergraph) -> ColoredHypergraph:
    return h if isinstance(h, ColoredHypergraph) else ColoredHypergraph.uncolored(h)


def build_even_kikuchi(h: Hypergraph | ColoredHypergraph, l: int, backend: Backend | str = Backend.EXPLICIT) -> KGraph:
    """Edges ``{S, T}`` with ``S xor T = E`` and ``|S & E| = |T & E| = k/2``; colour is E's."""
    h = _colored(h)
    k = h.k
    if k % 2:
        raise ValueError("even-k Kikuchi graph needs even k")
    if l < k // 2 or l > h.n:
        raise ValueError(f"need k/2 <= l <= n, got l={l}")
    gens = tuple(
        Generator(m, (((m, k // 2),),), (i,), (h.colors[i],)) for i, m in enumerate(h.base.masks)
    )
    return _finish(KGraph(Mode.EVENK, Backend(backend), h, l, h.n, gens), backend)


def build_odd_kikuchi(
    h: Hypergraph | ColoredHypergraph, d: BucketDecomposition, l: int, backend: Backend | str = Backend.EXPLICIT
) -> KGraph:
    """Bipartite Kikuchi graph of a bucket decomposition.

    For every ordered same-bucket pair ``(C, C')`` the difference is the red
    copy of ``C - X`` plus the blue copy of ``C' - X``; ``S`` takes ``a`` red
    and ``b`` blue elements of it or vice versa (``a, b`` = ceil/floor of
    ``(k - t)/2``).  Edges are coloured by ``(colour(C), colour(C'))``.
    """
    h = _colored(h)
    n, k, t = h.n, h.k, d.t
    if t >= k:
        raise ValueError("core size must be below k")
    q = k - t
    if l < q or l > 2 * n:
        raise ValueError(f"need k - t <= l <= 2n, got l={l}")
    d.validate(h.base)
    a, b = (q + 1) // 2, q // 2
    gens = []
    for bucket in d.buckets:
        core = set(bucket.core)
        for ci in bucket.members:
            red = mask_of(v for v in h.edges[ci] if v not in core)
            for cj in bucket.members:
                if cj == ci:
                    continue
                blue = mask_of(n + v for v in h.edges[cj] if v not in core)
                pats = (((red, a), (blue, b)),) if a == b else (((red, a), (blue, b)), ((red, b), (blue, a)))
                gens.append(Generator(red | blue, pats, (ci, cj), (h.colors[ci], h.colors[cj])))
    g = KGraph(Mode.ODDK, Backend(backend), h, l, 2 * n, tuple(gens), t=t, decomposition=d)
    return _finish(g, backend)


def _hc_items(h: ColoredHypergraph, d: BucketDecomposition) -> Iterator[tuple[int, int, set[int]]]:
    """Yield ``(bucket index, colour, F masks)`` for each ordered pair."""
    n = h.n
    q = h.k - d.t
    a, b = (q + 1) // 2, q // 2
    splits = {(a, b), (b, a)}
    for bi, bucket in enumerate(d.buckets):
        core = set(bucket.core)
        for ci in bucket.members:
            ct = [v for v in h.edges[ci] if v not in core]
            for cj in bucket.members:
                if cj == ci:
                    continue
                cpt = [v for v in h.edges[cj] if v not in core]
                fs: set[int] = set()
                for x, y in splits:
                    for A in combinations(ct, x):
                        for B in combinations(cpt, y):
                            # C red with C' blue, and the mirrored colouring
                            fs.add(mask_of(A) | mask_of(n + v for v in B))
                            fs.add(mask_of(n + v for v in A) | mask_of(B))
                yield bi, h.colors[ci], fs


def build_Hc(h: Hypergraph | ColoredHypergraph, d: BucketDecomposition, c: int) -> ColorHypergraph:
    """Multi-hypergraph of all F induced by same-bucket pairs whose first edge has colour c.

    Each pair contributes every F that splits between a copy of ``C - X`` and
    the opposite copy of ``C' - X`` in ceil/floor proportions.  Edges use the
    red/blue ids of the bipartite ground set.
    """
    h = _colored(h)
    if c not in set(h.colors):
        raise KeyError(f"unknown colour {c}")
    edges = []
    for _, col, fs in _hc_items(h, d):
        if col == c:
            edges.extend(vertices_of(f) for f in sorted(fs))
    return ColorHypergraph(c, h.k - d.t, h.n, tuple(edges))


def all_Hc(h: ColoredHypergraph, d: BucketDecomposition) -> dict[int, Counter]:
    """Per colour, a Counter of F masks (with multiplicity)."""
    out: dict[int, Counter] = {}
    for _, col, fs in _hc_items(h, d):
        cnt = out.setdefault(col, Counter())
        for f in fs:
            cnt[f] += 1
    return out


@dataclass(frozen=True)
class CodegreeReport:
    ok: bool
    violations: int
    checked: int
    worst: dict | None


def default_hc_threshold(g: KGraph) -> Callable[[int], float]:
    """``(d(G) / (2000 log2 v(G))) * (n/l)^(k - t - j)``."""
    dG = float(g.average_degree())
    logv = math.log2(max(g.vertex_count, 2))
    n, q = g.host.n, g.host.k - g.t
    return lambda j: dG / (2000 * logv) * (n / g.l) ** (q - j)


def check_Hc_codegrees(g: KGraph, thresholds: Callable[[int], float] | Sequence[float] | None = None) -> CodegreeReport:
    """Count, per colour c, F in H_c and overlap j, the F' in H_c with ``|F & F'| = j``.

    The worst violator is the one with the largest count/threshold ratio.
    """
    if g.mode is not Mode.ODDK:
        raise ValueError("H_c codegrees apply to the odd-k graph")
    if thresholds is None:
        thresholds = default_hc_threshold(g)
    thr = thresholds if callable(thresholds) else (lambda j, s=thresholds: s[j])
    q = g.host.k - g.t
    limits = [thr(j) for j in range(q + 1)]
    violations = 0
    checked = 0
    worst = None
    best_ratio = -1.0
    for c, cnt in sorted(all_Hc(g.host, g.decomposition).items()):
        items = sorted(cnt.items())
        for f, _ in items:
            counts = [0] * (q + 1)
            for f2, mult in items:
                counts[(f & f2).bit_count()] += mult
            for j in range(q + 1):
                checked += 1
                lim = limits[j]
                if counts[j] > lim:
                    violations += 1
                ratio = counts[j] / lim if lim > 0 else (math.inf if counts[j] else 0.0)
                if ratio > best_ratio:
                    best_ratio = ratio
                    worst = {"color": c, "F": list(vertices_of(f)), "j": j, "count": counts[j], "threshold": lim}
    return CodegreeReport(violations == 0, violations, checked, worst)


def _require_explicit(g: KGraph) -> None:
    if g.edges is None:
        raise ValueError("pruning needs the explicit backend")


def default_prune_threshold(g: KGraph) -> float:
    """``d(G) / (80 log2 v(G))`` from exact counts."""
    return float(g.average_degree()) / (80 * math.log2(max(g.vertex_count, 2)))


def prune_heavy_colors(g: KGraph, threshold: float | None = None) -> KGraph:
    """Delete edges with an endpoint carrying more than ``threshold`` edges of one of their colours.

    Incidence counts come from the input graph in a single pass.
    """
    if g.mode is not Mode.ODDK:
        raise ValueError("prune_heavy_colors applies to the odd-k graph")
    _require_explicit(g)
    if threshold is None:
        threshold = default_prune_threshold(g)
    cnt: Counter = Counter()
    for e in g.edges:
        for c in set(e.colors):
            cnt[(e.s, c)] += 1
            cnt[(e.t, c)] += 1
    keep = [
        i for i, e in enumerate(g.edges)
        if all(cnt[(e.s, c)] <= threshold and cnt[(e.t, c)] <= threshold for c in e.colors)
    ]
    return g.with_edges(keep, _prune_notes(g, keep, threshold))


def _prune_notes(g: KGraph, keep: Sequence[int], threshold) -> dict:
    before = len(g.edges)
    return {
        "prune_threshold": threshold,
        "edges_before": before,
        "edges_after": len(keep),
        "survival": len(keep) / before if before else 1.0,
    }


def flower_prune(g: KGraph) -> KGraph:
    """Drop every edge with an endpoint holding two or more edges of its colour."""
    if g.mode is not Mode.FLOWER:
        raise ValueError("flower_prune applies to the flower graph")
    _require_explicit(g)
    cnt: Counter = Counter()
    for e in g.edges:
        cnt[(e.s, e.colors[0])] += 1
        cnt[(e.t, e.colors[0])] += 1
    keep = [i for i, e in enumerate(g.edges) if cnt[(e.s, e.colors[0])] < 2 and cnt[(e.t, e.colors[0])] < 2]
    return g.with_edges(keep, _prune_notes(g, keep, 2))


def is_properly_edge_colored(g: KGraph) -> bool:
    """No vertex meets two edges sharing a colour."""
    _require_explicit(g)
    seen: set[tuple[int, int]] = set()
    for e in g.edges:
        for c in e.colors:
            for v in (e.s, e.t):
                if (v, c) in seen:
                    return False
                seen.add((v, c))
    return True


def check_low_codegree(h: Hypergraph, size: int, bound: int = 1) -> tuple[int, ...] | None:
    """The first ``size``-set with codegree above ``bound``, or None."""
    cnt: Counter = Counter()
    for e in h.edges:
        for s in combinations(e, size):
            cnt[s] += 1
    bad = sorted(s for s, c in cnt.items() if c > bound)
    return bad[0] if bad else None


def enumerate_flower_gadgets(
    h: Hypergraph | ColoredHypergraph,
    E_v: Sequence[Sequence[int]],
    red: Sequence[bool] | None = None,
) -> list[FlowerGadget]:
    """All gadgets with centre C and petals ``P_i`` from the fixed edge list of ``v_i``.

    Petals are pairwise disjoint and meet C exactly in their own vertex.
    ``good`` is set when a colouring is supplied (centre blue, petals red).
    Order is lexicographic in ``(C, P_1, ..., P_k)``.
    """
    base = h.base if isinstance(h, ColoredHypergraph) else h
    k = base.k
    if k % 2 == 0:
        raise ValueError("flower gadgets need odd k")
    if len(E_v) != base.n:
        raise ValueError("need one fixed edge list per vertex")
    # vertices outside the core carry empty lists
    sizes = {len(x) for x in E_v if x}
    if len(sizes) > 1:
        raise ValueError("fixed edge lists must all have the same size")
    for v, lst in enumerate(E_v):
        for ei in lst:
            if v not in base.edges[ei]:
                raise ValueError(f"edge {ei} in the list of vertex {v} does not contain it")
    bad = check_low_codegree(base, k - 1)
    if bad is not None:
        raise ValueError(f"({k - 1})-set {bad} has codegree above 1")
    masks = base.masks
    out = []
    for ci, C in enumerate(base.edges):
        cmask = masks[ci]
        cands = []
        for v in C:
            cands.append([p for p in sorted(E_v[v]) if masks[p] & cmask == 1 << v])
        chosen: list[int] = []

        def rec(i: int, used: int) -> None:
            if i == k:
                petals = tuple(chosen)
                good = red is not None and not red[ci] and all(red[p] for p in petals)
                out.append(FlowerGadget(ci, petals, good))
                return
            for p in cands[i]:
                if masks[p] & used == 0:
                    chosen.append(p)
                    rec(i + 1, used | masks[p])
                    chosen.pop()

        rec(0, 0)
    return out


def with_coloring(gadgets: Iterable[FlowerGadget], red: Sequence[bool]) -> list[FlowerGadget]:
    return [FlowerGadget(g.center, g.petals, (not red[g.center]) and all(red[p] for p in g.petals)) for g in gadgets]


@dataclass(frozen=True)
class RedBlueColoring:
    red: tuple[bool, ...]
    good_count: int
    total: int
    retries: int
    ok: bool


def color_red_blue(h: Hypergraph | ColoredHypergraph, gadgets: Sequence[FlowerGadget], seed: int, max_retries: int = 64) -> RedBlueColoring:
    """Independent fair red/blue edge colouring, retried until enough gadgets are good.

    Attempt ``i`` draws from ``default_rng([seed, i])``; success needs at
    least ``total / 2^(k+2)`` good gadgets.  With no gadgets at all the
    result is returned immediately with ``ok=False``.
    """
    base = h.base if isinstance(h, ColoredHypergraph) else h
    total = len(gadgets)
    if total == 0:
        return RedBlueColoring(tuple([True] * base.m), 0, 0, 0, False)
    need = Fraction(total, 2 ** (base.k + 2))
    for attempt in range(max_retries + 1):
        rng = np.random.default_rng([seed, attempt])
        red = tuple(bool(x) for x in rng.integers(0, 2, size=base.m))
        good = sum(1 for g in gadgets if not red[g.center] and all(red[p] for p in g.petals))
        if good >= need and good > 0:
            return RedBlueColoring(red, good, total, attempt, True)
    raise ColoringRetryError(f"fewer than {float(need):.2f} good gadgets after {max_retries} retries")


def build_flower_kikuchi(
    h: Hypergraph | ColoredHypergraph,
    gadgets: Sequence[FlowerGadget],
    l: int,
    backend: Backend | str = Backend.EXPLICIT,
    red: Sequence[bool] | None = None,
) -> KGraph:
    """Flower graph over the good gadgets.

    The difference for gadget ``(C, P_1..P_k)`` is the union of the petal
    parts ``A_i = P_i - {v_i}``; ``S`` and ``T`` each hold ``(k-1)/2`` of
    every ``A_i``.  An edge generated by several gadgets keeps the
    lexicographically smallest one; its colour is that gadget's centre index.
    """
    h = _colored(h)
    k = h.k
    if k % 2 == 0:
        raise ValueError("flower graph needs odd k")
    if l < k * (k - 1) // 2 or l > h.n:
        raise ValueError(f"need k(k-1)/2 <= l <= n, got l={l}")
    masks = h.base.masks
    half = (k - 1) // 2
    good = sorted((g for g in gadgets if g.good), key=lambda g: g.key)
    gens = []
    for gd in good:
        C = h.edges[gd.center]
        parts = tuple((masks[p] & ~(1 << v), half) for p, v in zip(gd.petals, C))
        diff = 0
        for part, _ in parts:
            diff |= part
        gens.append(Generator(diff, (parts,), gd.key, (gd.center,)))
    g = KGraph(Mode.FLOWER, Backend(backend), h, l, h.n, tuple(gens), gadgets=tuple(good),
               red=tuple(red) if red is not None else None)
    return _finish(g, backend)


def decode_flower_edge(g: KGraph, s: int, t: int) -> list[FlowerGadget]:
    """All gadgets of the host that could generate ``{s, t}``.

    Splits ``s - t`` and ``t - s`` into ``(k-1)`` sets that each lie in a
    unique host edge (codegree of ``(k-1)``-sets is at most one), then reads
    the centre off the leftover petal vertices.
    """
    h = g.host.base
    k = h.k
    half = (k - 1) // 2
    left, right = s & ~t, t & ~s
    by_set: dict[tuple[int, ...], int] = {}
    for ei, e in enumerate(h.edges):
        for sub in combinations(e, k - 1):
            by_set.setdefault(sub, ei)
    edge_index = {e: i for i, e in enumerate(h.edges)}
    cands: list[tuple[int, int, int]] = []  # (part mask, petal, petal vertex)
    for A in combinations(vertices_of(left), half):
        for B in combinations(vertices_of(right), half):
            part = tuple(sorted(A + B))
            p = by_set.get(part)
            if p is None:
                continue
            (v,) = set(h.edges[p]) - set(part)
            if (s | t) >> v & 1:
                continue
            cands.append((mask_of(part), p, v))
    diff = left | right
    results = []

    def rec(rest: int, picked: list[tuple[int, int, int]]) -> None:
        if rest == 0:
            center = tuple(sorted(v for _, _, v in picked))
            ci = edge_index.get(center)
            if ci is None or len(set(center)) != k:
                return
            by_v = {v: p for _, p, v in picked}
            results.append(FlowerGadget(ci, tuple(by_v[v] for v in center), True))
            return
        low = rest & -rest
        for part, p, v in cands:
            if part & low and part & rest == part:
                rec(rest & ~part, picked + [(part, p, v)])

    rec(diff, [])
    return sorted(set(results), key=lambda x: x.key)


@dataclass(frozen=True)
class KikuchiStats:
    vertices: int
    edges: float
    average_degree: float
    lower_bound: float
    estimated: bool = False
    stderr: float | None = None
    samples: int | None = None

    def to_json(self) -> dict:
        out = {
            "N": self.vertices,
            "edges": self.edges,
            "averageDegree": self.average_degree,
            "lowerBound": self.lower_bound,
            "estimated": self.estimated,
        }
        if self.estimated:
            out["stderr"] = self.stderr
            out["samples"] = self.samples
        return out


def degree_lower_bound(g: KGraph) -> Fraction:
    """Closed-form average-degree lower bound for the graph's mode."""
    n, k, l, N = g.host.n, g.host.k, g.l, g.vertex_count
    if g.mode is Mode.EVENK:
        return Fraction(g.host.m * math.comb(k, k // 2) * math.comb(n - k, l - k // 2), N)
    if g.mode is Mode.ODDK:
        d = g.decomposition
        q = k - d.t
        covered = d.m * len(d.buckets)
        return Fraction(
            covered * (d.m - 1) * math.comb(q, q // 2) ** 2 * math.comb(2 * n - 2 * q, l - q), N
        )
    if g.mode is Mode.PLAIN:
        return Fraction(0)
    r = k * (k - 1)
    return Fraction(len(g.gadgets) * math.comb(n - r, l - r // 2), 2 ** (k**3) * N)


def kikuchi_stats(g: KGraph, samples: int = 200, seed: int = 0) -> KikuchiStats:
    """Vertex/edge counts and average degree; sampled when the graph is implicit."""
    bound = float(degree_lower_bound(g))
    N = g.vertex_count
    if g.edges is not None:
        return KikuchiStats(N, len(g.edges), float(g.average_degree()), bound)
    rng = np.random.default_rng(seed)
    degs = np.array([len(g.neighbors(_random_subset(rng, g.ground, g.l))) for _ in range(samples)], dtype=float)
    mean = float(degs.mean()) if samples else 0.0
    se = float(degs.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return KikuchiStats(N, N * mean / 2, mean, bound, True, se, samples)
