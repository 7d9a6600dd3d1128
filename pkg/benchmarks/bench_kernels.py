"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Each kernel runs on the same inputs through both implementations; outputs
are compared before timings are printed.
"""

from __future__ import annotations

import argparse
import sys
import time


from evencover import _kernels
from evencover.gf2 import incidence_rows
from evencover.kikuchi import build_even_kikuchi
from evencover.pipeline import gen_random
from evencover.walks import default_max_len


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(seed: int):
    h = gen_random(600, 4, 1200, seed)
    rows = incidence_rows(h)
    yield "reduce_rows n=600 m=1200", "reduce_rows", (rows,)

    h = gen_random(60, 3, 24, seed)
    yield "min_weight_subset n=60 e=24 size<=6", "min_weight_subset", (incidence_rows(h), 6)

    g = build_even_kikuchi(gen_random(20, 4, 60, seed), 4)
    verts, indptr, nbr, nbr_edge, eu, ev, c0, c1 = g.csr()
    args = (indptr, nbr, nbr_edge, eu, ev, c0, c1, default_max_len(g))
    yield f"shortest_unique_color_walk N={g.vertex_count} e={g.edge_count}", "shortest_unique_color_walk", args


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    if _kernels.compiled_impl is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':50s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for label, name, args in cases(a.seed):
        py = getattr(_kernels.python_impl, name)
        cy = getattr(_kernels.compiled_impl, name)
        if py(*args) != cy(*args):
            print(f"{label}: outputs differ", file=sys.stderr)
            return 2
        tp = best_of(lambda: py(*args), a.repeat)
        tc = best_of(lambda: cy(*args), a.repeat)
        print(f"{label:50s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
