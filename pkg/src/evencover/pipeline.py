"""End-to-end even-cover search: cleaning, Kikuchi graph, walk, cover, lift.

Routes: ``EvenK`` for even k; for odd k either ``PairReduced`` (pairs of
edges sharing a large core collapse to an even-uniformity instance),
``OddK-t>1`` (bucket decomposition at level t >= 2) or ``OddK-flower``
(min-degree case).  ``LinearAlgebraFallback`` reports the elimination
cover when the Kikuchi route finds nothing.
"""

from __future__ import annotations

import ast
import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Mapping

import numpy as np

from .cleaning import (
    CleaningOutcome,
    default_pair_budget,
    even_cover_thresholds,
    low_codegree_reduct,
    min_degree_core,
    multilevel_clean,
    single_vertex_buckets,
)
from .gf2 import BRUTE_FORCE_EDGE_LIMIT, find_dependency, min_weight_cover_bruteforce
from .hypergraph import ColoredHypergraph, EvenCover, Hypergraph, verify_even_cover
from .kikuchi import (
    Backend,
    ColoringRetryError,
    KGraph,
    KikuchiGuardError,
    build_even_kikuchi,
    build_flower_kikuchi,
    build_odd_kikuchi,
    color_red_blue,
    enumerate_flower_gadgets,
    flower_prune,
    kikuchi_stats,
    prune_heavy_colors,
    with_coloring,
)
from .walks import ClosedWalk, default_max_len, extract_even_cover, find_unique_color_walk

ROUTES = ("auto", "evenk", "oddk", "flower")
CSV_COLUMNS = ["n", "k", "m", "l", "seed", "route", "success", "coverSize", "walkLen", "oracleMin", "ms"]


@dataclass(frozen=True)
class PipelineOptions:
    seed: int = 0
    effort: int = 16
    route: str = "auto"
    max_walk_len: int | None = None
    allow_fallback: bool = True
    prune: bool = True
    C: float = 1.0
    budget: int | None = None
    petal_list_size: int | None = None


@dataclass
class PipelineReport:
    route: str
    cover: EvenCover | None = None
    walk_length: int | None = None
    baseline: EvenCover | None = None
    stats: dict = field(default_factory=dict)
    wall_time: float = 0.0
    walk: ClosedWalk | None = None
    certified: int | None = None

    @property
    def success(self) -> bool:
        return self.cover is not None

    def to_json(self, timing: bool = False) -> dict:
        out: dict = {
            "route": self.route,
            "success": self.success,
            "edges": list(self.cover.edges) if self.cover else [],
            "size": self.cover.size if self.cover else 0,
            "walkLength": self.walk_length,
            "baselineSize": self.baseline.size if self.baseline else None,
            "stats": _jsonable(self.stats),
        }
        if timing:
            out["wallTime"] = self.wall_time
        return out


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def l_regime(n: int, l: int) -> str:
    """Where ``l`` sits relative to ``n / log2(n)^2`` and ``n / (100 log2 n)``."""
    logn = math.log2(max(n, 2))
    if l <= n / logn**2:
        return "small"
    if l <= n / (100 * logn):
        return "intermediate"
    return "large"


def density_threshold(n: int, k: int, l: int, C: float = 1.0) -> float:
    """``C * n * (n/l)^(k/2 - 1) * log2 n`` edges."""
    return C * n * (n / l) ** (k / 2 - 1) * math.log2(max(n, 2))


@dataclass
class _Attempt:
    cover: EvenCover | None = None
    walk: ClosedWalk | None = None
    stats: dict = field(default_factory=dict)


def _walk_and_extract(graphs: list[KGraph], opts: PipelineOptions, stats: dict) -> tuple[EvenCover, ClosedWalk] | None:
    for gi, g in enumerate(graphs):
        w = find_unique_color_walk(g, max_len=opts.max_walk_len, seed=opts.seed, effort=opts.effort)
        if w is None:
            continue
        stats["walk_graph"] = "pruned" if gi == 0 and len(graphs) > 1 else "unpruned"
        stats["max_walk_len"] = opts.max_walk_len or default_max_len(g)
        cover = extract_even_cover(g, w)
        if cover.degenerate:
            continue
        return cover, w
    return None


def _even_route(h: Hypergraph, l: int, opts: PipelineOptions) -> _Attempt:
    att = _Attempt()
    l = max(l, h.k // 2)
    att.stats["l"] = l
    try:
        g = build_even_kikuchi(h, l, Backend.EXPLICIT)
    except KikuchiGuardError as exc:
        att.stats["error"] = str(exc)
        return att
    att.stats["kikuchi"] = kikuchi_stats(g).to_json()
    found = _walk_and_extract([g], opts, att.stats)
    if found:
        att.cover, att.walk = found
    return att


def _oddk_route(sub: Hypergraph, dec, l: int, opts: PipelineOptions) -> _Attempt:
    att = _Attempt()
    l = max(l, sub.k - dec.t)
    att.stats.update({"l": l, "t": dec.t, "bucket_size": dec.m, "buckets": len(dec.buckets)})
    try:
        g = build_odd_kikuchi(ColoredHypergraph.uncolored(sub), dec, l, Backend.EXPLICIT)
    except KikuchiGuardError as exc:
        att.stats["error"] = str(exc)
        return att
    att.stats["kikuchi"] = kikuchi_stats(g).to_json()
    graphs = [g]
    if opts.prune:
        gp = prune_heavy_colors(g)
        att.stats["prune_survival"] = gp.notes["survival"]
        att.stats["prune_threshold"] = gp.notes["prune_threshold"]
        graphs = [gp, g]
    found = _walk_and_extract(graphs, opts, att.stats)
    if found:
        att.cover, att.walk = found
    return att


def _flower_route(core: Hypergraph, delta: int, l: int, opts: PipelineOptions) -> _Attempt:
    att = _Attempt()
    k = core.k
    l = max(l, k * (k - 1) // 2)
    att.stats.update({"l": l, "petal_list_size": delta})
    if delta < 1 or core.m == 0:
        att.stats["error"] = "empty core"
        return att
    E_v = []
    for v in range(core.n):
        inc = list(core.incidence[v])
        E_v.append(inc[:delta] if len(inc) >= delta else [])
    try:
        gadgets = enumerate_flower_gadgets(core, E_v)
    except ValueError as exc:
        att.stats["error"] = str(exc)
        return att
    att.stats["gadgets"] = len(gadgets)
    try:
        col = color_red_blue(core, gadgets, opts.seed)
    except ColoringRetryError as exc:
        att.stats["error"] = str(exc)
        return att
    if not col.ok:
        att.stats["error"] = "no flower gadgets"
        return att
    att.stats.update({"good_gadgets": col.good_count, "coloring_retries": col.retries})
    good = with_coloring(gadgets, col.red)
    try:
        g = build_flower_kikuchi(core, good, l, Backend.EXPLICIT, red=col.red)
    except KikuchiGuardError as exc:
        att.stats["error"] = str(exc)
        return att
    att.stats["kikuchi"] = kikuchi_stats(g).to_json()
    graphs = [g]
    if opts.prune:
        gp = flower_prune(g)
        att.stats["prune_survival"] = gp.notes["survival"]
        graphs = [gp, g]
    found = _walk_and_extract(graphs, opts, att.stats)
    if found:
        att.cover, att.walk = found
    return att


def _lift(outcome: CleaningOutcome, cover: EvenCover) -> EvenCover:
    return EvenCover(tuple(sorted(outcome.edge_ids[i] for i in cover.edges)))


def find_even_cover(h: Hypergraph | ColoredHypergraph, l: int | None = None, options: PipelineOptions | None = None) -> PipelineReport:
    """Run the route for ``h``'s uniformity and return a verified cover, if any.

    Every cover is lifted to ``h``'s edge indices and checked against ``h``.
    """
    opts = options or PipelineOptions()
    if opts.route not in ROUTES:
        raise ValueError(f"unknown route {opts.route!r}")
    base = h.base if isinstance(h, ColoredHypergraph) else h
    start = time.perf_counter()
    n, k = base.n, base.k
    if l is None:
        l = max(1, k // 2)
    rep = PipelineReport(route="none")
    rep.stats.update(
        {
            "n": n,
            "k": k,
            "e": base.m,
            "l": l,
            "l_regime": l_regime(n, l),
            "density_met": base.m >= density_threshold(n, k, l, opts.C),
        }
    )
    if base.m >= n + 1 and opts.allow_fallback:
        rep.baseline = find_dependency(base)
    if base.m == 0:
        rep.stats["reason"] = "empty hypergraph"
        rep.wall_time = time.perf_counter() - start
        return rep
    attempt, route = _dispatch(base, l, opts, rep.stats)
    if attempt is not None and attempt.cover is not None:
        rep.route = route
        rep.cover = attempt.cover
        rep.walk = attempt.walk
        rep.walk_length = attempt.walk.length if attempt.walk else None
        rep.certified = attempt.walk.certified if attempt.walk else None
    else:
        rep.stats["attempted_route"] = route
        if rep.baseline is not None:
            rep.route = "LinearAlgebraFallback"
            rep.cover = rep.baseline
        else:
            rep.route = route
    if rep.cover is not None:
        if rep.cover.degenerate or not verify_even_cover(base, rep.cover):
            raise AssertionError(f"route {rep.route} produced an invalid cover {rep.cover.edges}")
    rep.wall_time = time.perf_counter() - start
    return rep


def _dispatch(h: Hypergraph, l: int, opts: PipelineOptions, stats: dict) -> tuple[_Attempt | None, str]:
    k = h.k
    if opts.route == "evenk" or (opts.route == "auto" and k % 2 == 0):
        if k % 2:
            stats["reason"] = "evenk route needs even k"
            return None, "EvenK"
        att = _even_route(h, l, opts)
        stats["evenk"] = att.stats
        return att, "EvenK"

    # odd k: make ((k+1)/2)-sets light or collapse heavy pairs
    budget = opts.budget
    if budget is None:
        # the asymptotic budget exceeds e(h) at small n, which would rule out buckets
        budget = min(default_pair_budget(h.n, k, l, opts.C), math.ceil(h.m / 2))
    red = low_codegree_reduct(h, l, budget, opts.C)
    stats["low_codegree"] = {"kind": red.kind.value, "kept": red.sub.m, **_notes(red.notes)}
    if red.direct_cover is not None:
        return _Attempt(red.direct_cover, None, {"direct": True}), "PairReduced"
    if red.reduction is not None:
        pr = red.reduction
        stats["pair_reduction"] = {"j": pr.j, "uniformity": pr.graph.k, "edges": pr.graph.m}
        inner = _even_route(pr.graph, max(l, pr.graph.k // 2), opts)
        stats["pair_reduction"].update(inner.stats)
        if inner.cover is not None:
            inner.cover = pr.lift(inner.cover)
        return inner, "PairReduced"

    h1 = red.sub
    if h1.m == 0:
        stats["reason"] = "nothing left after codegree pruning"
        return None, "OddK-t>1"
    d1 = h1.average_degree()
    m_fn = even_cover_thresholds(d1, k, h.n)
    if opts.route == "flower":
        clean = red.compose(min_degree_core(h1))
        t = 1
    else:
        clean = red.compose(multilevel_clean(h1, m_fn))
        t = clean.t
    stats["multilevel"] = {"kind": clean.kind.value, "t": t, "kept": clean.sub.m, **_notes(clean.notes)}
    # the flower bound is only claimed for small l; intermediate l goes through OddK
    use_oddk = opts.route == "oddk" or (opts.route == "auto" and stats.get("l_regime") == "intermediate")
    if t >= 2 or use_oddk:
        outcome = clean
        if t == 1:
            if clean.sub.m < 2:
                stats["reason"] = "core too small"
                return None, "OddK-t>1"
            outcome = clean.compose(single_vertex_buckets(clean.sub))
        att = _oddk_route(outcome.sub, outcome.decomposition, l, opts)
        stats["oddk"] = att.stats
        if att.cover is not None:
            att.cover = _lift(outcome, att.cover)
        return att, "OddK-t>1"
    delta = opts.petal_list_size or math.ceil(m_fn(1))
    att = _flower_route(clean.sub, delta, l, opts)
    stats["flower"] = att.stats
    if att.cover is not None:
        att.cover = _lift(clean, att.cover)
    return att, "OddK-flower"


def _notes(notes: Mapping) -> dict:
    keep = {}
    for key, v in notes.items():
        if key in ("removed_vertices",):
            continue
        keep[key] = v
    return _jsonable(keep)


def gen_random(n: int, k: int, m: int, seed: int, model: str = "simple") -> Hypergraph:
    """``m`` uniform distinct k-sets (``simple``) or i.i.d. k-sets (``multi``)."""
    rng = np.random.default_rng(seed)
    if model == "multi":
        edges = [tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False))) for _ in range(m)]
        return Hypergraph(n, k, tuple(edges), multi=True)
    if model != "simple":
        raise ValueError(f"unknown model {model!r}")
    total = math.comb(n, k)
    if m > total:
        raise ValueError(f"m={m} exceeds C({n},{k})={total}")
    if m > total // 2 and total <= 10**6:
        allc = list(combinations(range(n), k))
        pick = rng.choice(total, size=m, replace=False)
        return Hypergraph(n, k, tuple(allc[int(i)] for i in pick))
    seen: set[tuple[int, ...]] = set()
    edges = []
    while len(edges) < m:
        e = tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False)))
        if e not in seen:
            seen.add(e)
            edges.append(e)
    return Hypergraph(n, k, tuple(edges))


def parse_config(text: str) -> dict:
    """``key = value`` lines; values are Python literals or bare strings."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key = value: {raw!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        try:
            out[key] = ast.literal_eval(val)
        except (ValueError, SyntaxError):
            out[key] = val.strip("'\"")
    return out


def _as_list(x) -> list:
    if x is None:
        return []
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _cells(cfg: Mapping) -> list[tuple[int, int, int, int, int]]:
    seeds = cfg.get("seeds", 1)
    seed_list = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    grid = product(_as_list(cfg.get("n")), _as_list(cfg.get("k")), _as_list(cfg.get("m")), _as_list(cfg.get("l")))
    return [(n, k, m, l, s) for (n, k, m, l) in grid for s in seed_list]


def run_cell(cell: tuple[int, int, int, int, int], cfg: Mapping, timing: bool = False) -> dict:
    n, k, m, l, seed = cell
    row: dict = {"n": n, "k": k, "m": m, "l": l, "seed": seed, "route": "", "success": 0,
                 "coverSize": "", "walkLen": "", "oracleMin": "", "ms": ""}
    t0 = time.perf_counter()
    try:
        h = gen_random(n, k, m, seed, cfg.get("model", "simple"))
        opts = PipelineOptions(
            seed=seed,
            effort=int(cfg.get("effort", 16)),
            route=cfg.get("route", "auto"),
            allow_fallback=bool(cfg.get("fallback", True)),
        )
        rep = find_even_cover(h, l, opts)
        row["route"] = rep.route
        row["success"] = int(rep.success)
        if rep.cover is not None:
            row["coverSize"] = rep.cover.size
        if rep.walk_length is not None:
            row["walkLen"] = rep.walk_length
        if cfg.get("oracle", True) and h.m <= BRUTE_FORCE_EDGE_LIMIT:
            best = min_weight_cover_bruteforce(h)
            row["oracleMin"] = best.size if best else 0
    except ValueError as exc:
        row["route"] = f"error: {exc}"
    if timing:
        row["ms"] = f"{(time.perf_counter() - t0) * 1000:.1f}"
    return row


def sweep(cfg: Mapping, timing: bool = False, jobs: int = 1) -> str:
    """CSV text with one row per grid cell and seed, in grid order."""
    cells = _cells(cfg)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(run_cell, cells, [cfg] * len(cells), [timing] * len(cells)))
    else:
        rows = [run_cell(c, cfg, timing) for c in cells]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
