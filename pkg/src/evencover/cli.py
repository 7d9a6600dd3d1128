"""Command-line entry point: ``evencover <command> ...``.

Every command writes sorted-key JSON (or CSV for ``sweep``) so repeated runs
with the same flags are byte-identical; wall-clock fields appear only with
``--timing``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .cleaning import (
    even_cover_thresholds,
    low_codegree_reduct,
    min_degree,
    min_degree_core,
    multilevel_clean,
    prune_or_bucket,
    single_vertex_buckets,
)
from .hypergraph import (
    Bucket,
    BucketDecomposition,
    ColoredHypergraph,
    EvenCover,
    HypergraphFormatError,
    format_hypergraph,
    load_hypergraph,
    verify_even_cover,
)
from .kikuchi import (
    Backend,
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
from .ldc import find_odd_color_cover, load_code, normal_form
from .pipeline import ROUTES, PipelineOptions, _jsonable, find_even_cover, gen_random, parse_config, sweep


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True)


def _emit(obj, out: str | None = None) -> None:
    text = _dump(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_cover(arg: str) -> EvenCover:
    """``--cover`` accepts a JSON list, a JSON object with ``edges``, or a path to either."""
    p = Path(arg)
    text = p.read_text() if p.exists() else arg
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = obj["edges"]
    return EvenCover(tuple(sorted(int(i) for i in obj)))


def cmd_find_cover(a: argparse.Namespace) -> int:
    h = load_hypergraph(a.file)
    opts = PipelineOptions(
        seed=a.seed,
        effort=a.effort,
        route=a.route,
        max_walk_len=a.max_walk_len,
        allow_fallback=not a.no_fallback,
        prune=not a.no_prune,
        petal_list_size=a.petal_list_size,
    )
    rep = find_even_cover(h, a.l, opts)
    out = rep.to_json(timing=a.timing)
    out["certified"] = rep.certified
    if a.walk and rep.walk is not None:
        out["walk"] = rep.walk.to_json()
    _emit(out, a.out)
    return 0 if rep.success else 1


def cmd_sweep(a: argparse.Namespace) -> int:
    cfg = parse_config(Path(a.config).read_text())
    text = sweep(cfg, timing=a.timing, jobs=a.jobs)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(a: argparse.Namespace) -> int:
    h = load_hypergraph(a.file)
    cover = _parse_cover(a.cover)
    ok = not cover.degenerate and verify_even_cover(h, cover)
    sys.stdout.write(_dump({"valid": ok, "size": cover.size}) + "\n")
    return 0 if ok else 1


CLEAN_OPS = ("min-degree-core", "single-vertex-buckets", "prune-or-bucket", "low-codegree-reduct", "multilevel")


def cmd_clean(a: argparse.Namespace) -> int:
    h = load_hypergraph(a.file).base
    if a.op == "min-degree-core":
        res = min_degree_core(h)
    elif a.op == "single-vertex-buckets":
        res = single_vertex_buckets(h)
    elif a.op == "prune-or-bucket":
        if a.t is None or a.m is None:
            raise SystemExit("prune-or-bucket needs --t and --m")
        budget = a.budget if a.budget is not None else Fraction(h.m, 2)
        res = prune_or_bucket(h, a.t, a.m, budget)
    elif a.op == "low-codegree-reduct":
        res = low_codegree_reduct(h, a.l, None if a.budget is None else math.ceil(a.budget))
    else:
        if a.m is not None:
            thresholds = [a.m] * h.k
        else:
            thresholds = even_cover_thresholds(h.average_degree(), h.k, h.n)
        res = multilevel_clean(h, thresholds)
    side = {
        "op": a.op,
        "kind": res.kind.value,
        "t": res.t,
        "edges": res.sub.m,
        "edgeIds": list(res.edge_ids),
        "decomposition": res.host_decomposition().to_json() if res.decomposition else None,
        "notes": {k: v for k, v in res.notes.items() if k != "removed_vertices"},
    }
    if res.direct_cover is not None:
        side["directCover"] = list(res.direct_cover.edges)
    if res.reduction is not None:
        pr = res.reduction
        side["pairReduction"] = {"j": pr.j, "uniformity": pr.graph.k, "pairs": [list(p) for p in pr.pairs]}
    hg = format_hypergraph(res.sub)
    if a.out:
        Path(a.out + ".hg").write_text(hg)
        Path(a.out + ".json").write_text(_dump(side) + "\n")
    else:
        side["hypergraph"] = hg
        _emit(side)
    return 0


def _kikuchi_graph(a: argparse.Namespace, h: ColoredHypergraph):
    backend = Backend(a.backend)
    if a.mode == "evenk":
        return build_even_kikuchi(h, a.l, backend), {}
    if a.mode == "oddk":
        if a.decomposition:
            obj = json.loads(Path(a.decomposition).read_text())
            dec = BucketDecomposition.from_json(obj.get("decomposition") or obj)
            # ids refer to this file; keep only the bucketed edges and renumber
            ids = sorted(dec.edge_ids())
            pos = {e: i for i, e in enumerate(ids)}
            local = BucketDecomposition(
                tuple(Bucket(b.core, tuple(pos[e] for e in b.members)) for b in dec.buckets), dec.m, dec.t
            )
            return build_odd_kikuchi(h.subhypergraph(ids), local, a.l, backend), {"t": dec.t}
        sv = single_vertex_buckets(h.base)
        sub = h.subhypergraph(sv.edge_ids)
        return build_odd_kikuchi(sub, sv.decomposition, a.l, backend), {"t": 1, "derived": "single-vertex-buckets"}
    core = min_degree_core(h.base)
    delta = a.petal_list_size or max(1, min_degree(core.sub))
    E_v = [list(ids)[:delta] if len(ids) >= delta else [] for ids in core.sub.incidence]
    gadgets = enumerate_flower_gadgets(core.sub, E_v)
    col = color_red_blue(core.sub, gadgets, a.seed)
    g = build_flower_kikuchi(core.sub, with_coloring(gadgets, col.red), a.l, backend, red=col.red)
    return g, {"gadgets": len(gadgets), "goodGadgets": col.good_count, "petalListSize": delta, "coreEdges": core.sub.m}


def cmd_kikuchi(a: argparse.Namespace) -> int:
    h = load_hypergraph(a.file)
    try:
        g, extra = _kikuchi_graph(a, h)
    except KikuchiGuardError as exc:
        _emit({"error": str(exc)})
        return 2
    out: dict = {"mode": g.mode.value, "backend": g.backend.value, "l": g.l, **extra}
    if a.prune:
        if not g.explicit:
            raise SystemExit("--prune needs the explicit backend")
        g = flower_prune(g) if a.mode == "flower" else prune_heavy_colors(g)
        out["prune"] = {k: v for k, v in g.notes.items() if k != "kept"}
    if a.stats:
        out["stats"] = kikuchi_stats(g, seed=a.seed).to_json()
    else:
        out["vertices"] = g.vertex_count
        if g.explicit:
            out["edges"] = g.edge_count
    _emit(out, a.out)
    return 0


def cmd_ldc_normal_form(a: argparse.Namespace) -> int:
    nf = normal_form(load_code(a.file))
    out = nf.summary()
    out["matchings"] = [[list(tr) for tr in mt] for mt in nf.matchings]
    if a.union_out:
        Path(a.union_out).write_text(format_hypergraph(nf.union, colored=True))
    _emit(out, a.out)
    return 0


def cmd_ldc_find_odd_cover(a: argparse.Namespace) -> int:
    h = load_hypergraph(a.file)
    res = find_odd_color_cover(h, alpha=a.alpha, K=a.K, l=a.l, seed=a.seed, effort=a.effort)
    if res is None:
        _emit({"found": False})
        return 1
    _emit(
        {
            "found": True,
            "edges": list(res.cover.edges),
            "size": res.cover.size,
            "oddColor": res.certificate,
            "colorCounts": res.color_counts,
            "report": res.report,
        },
        a.out,
    )
    return 0


def cmd_gen(a: argparse.Namespace) -> int:
    h = gen_random(a.n, a.k, a.m, a.seed, a.model)
    text = format_hypergraph(h)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evencover", description="Short even covers in uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("find-cover", help="run the cleaning + Kikuchi + walk pipeline")
    f.add_argument("file")
    f.add_argument("--l", type=int, default=None)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--effort", type=int, default=16)
    f.add_argument("--route", choices=ROUTES, default="auto")
    f.add_argument("--max-walk-len", type=int, default=None)
    f.add_argument("--petal-list-size", type=int, default=None)
    f.add_argument("--no-fallback", action="store_true", help="skip the elimination baseline")
    f.add_argument("--no-prune", action="store_true")
    f.add_argument("--walk", action="store_true", help="include the closed walk in the output")
    f.add_argument("--timing", action="store_true")
    f.add_argument("--out")
    f.set_defaults(func=cmd_find_cover)

    s = sub.add_parser("sweep", help="grid of random instances, CSV out")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--timing", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="check an even cover; exit 0 iff valid")
    v.add_argument("file")
    v.add_argument("--cover", required=True, help="JSON list, JSON object with 'edges', or a file")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("clean", help="run one cleaning operation")
    c.add_argument("file")
    c.add_argument("--op", choices=CLEAN_OPS, required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--m", type=_fraction)
    c.add_argument("--budget", type=_fraction)
    c.add_argument("--l", type=int, default=2)
    c.add_argument("--out", help="prefix for <out>.hg and <out>.json")
    c.set_defaults(func=cmd_clean)

    k = sub.add_parser("kikuchi", help="build a Kikuchi graph and report statistics")
    k.add_argument("file")
    k.add_argument("--mode", choices=("evenk", "oddk", "flower"), required=True)
    k.add_argument("--l", type=int, required=True)
    k.add_argument("--backend", choices=[b.value for b in Backend], default="explicit")
    k.add_argument("--stats", action="store_true", help="degree statistics as JSON")
    k.add_argument("--prune", action="store_true")
    k.add_argument("--decomposition", help="bucket decomposition JSON (e.g. a clean sidecar) for oddk")
    k.add_argument("--petal-list-size", type=int)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--out")
    k.set_defaults(func=cmd_kikuchi)

    ldc = sub.add_parser("ldc", help="3-query linear code tools")
    lsub = ldc.add_subparsers(dest="ldc_command", required=True)
    nf = lsub.add_parser("normal-form")
    nf.add_argument("file")
    nf.add_argument("--union-out", help="write the coloured union hypergraph here")
    nf.add_argument("--out")
    nf.set_defaults(func=cmd_ldc_normal_form)
    oc = lsub.add_parser("find-odd-cover")
    oc.add_argument("file")
    oc.add_argument("--alpha", type=float, default=0.5)
    oc.add_argument("--K", type=float, default=None)
    oc.add_argument("--l", type=int, default=None)
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--effort", type=int, default=16)
    oc.add_argument("--out")
    oc.set_defaults(func=cmd_ldc_find_odd_cover)

    g = sub.add_parser("gen", help="random k-uniform hypergraph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--model", choices=("simple", "multi"), default="simple")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HypergraphFormatError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"evencover: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
