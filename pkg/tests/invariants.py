"""Independent postcondition checks for the cleaning operations.

Each checker returns a list of violation strings (empty when all hold); the
checks recompute codegrees and degrees from scratch rather than reusing the
library's bookkeeping.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

from evencover.cleaning import CleaningOutcome, OutcomeKind


def _codegrees(edges, r) -> Counter:
    c: Counter = Counter()
    for e in edges:
        c.update(combinations(e, r))
    return c


def _degrees(edges) -> Counter:
    return Counter(v for e in edges for v in e)


def _sub_consistent(h, out: CleaningOutcome) -> list[str]:
    bad = []
    if len(set(out.edge_ids)) != len(out.edge_ids):
        bad.append("edge ids repeat")
    if tuple(h.edges[i] for i in out.edge_ids) != out.sub.edges:
        bad.append("sub edges differ from the host edges they name")
    return bad


def _decomposition_ok(out: CleaningOutcome, m: int, t: int) -> list[str]:
    d = out.decomposition
    if d is None:
        return ["missing decomposition"]
    bad = []
    if (d.m, d.t) != (m, t):
        bad.append(f"decomposition sizes {(d.m, d.t)} != {(m, t)}")
    try:
        d.validate(out.sub)
    except ValueError as exc:
        bad.append(str(exc))
    if sorted(d.edge_ids()) != list(range(out.sub.m)):
        bad.append("decomposition does not cover sub exactly")
    return bad


def check_min_degree_core(h, out: CleaningOutcome) -> list[str]:
    bad = _sub_consistent(h, out)
    d = Fraction(h.m, h.n)
    if 2 * out.sub.m < h.m:
        bad.append(f"kept {out.sub.m} < e/2 = {h.m / 2}")
    for v, x in _degrees(out.sub.edges).items():
        if x < d / 2:
            bad.append(f"vertex {v} degree {x} < d/2 = {float(d / 2)}")
    removed = set(out.notes.get("removed_vertices", ()))
    for i in range(h.m):
        should = not (set(h.edges[i]) & removed)
        if should != (i in out.edge_ids):
            bad.append(f"edge {i} membership disagrees with the removed vertex set")
    return bad


def check_single_vertex_buckets(h, out: CleaningOutcome) -> list[str]:
    bad = _sub_consistent(h, out)
    b = max(1, math.floor(Fraction(h.m, h.n) / 2))
    bad += _decomposition_ok(out, b, 1)
    if 2 * out.sub.m < h.m:
        bad.append(f"covered {out.sub.m} < e/2")
    return bad


def check_prune_or_bucket(h, t, m, budget, out: CleaningOutcome) -> list[str]:
    bad = _sub_consistent(h, out)
    mc = math.ceil(Fraction(m))
    if out.kind is OutcomeKind.PRUNED:
        if out.decomposition is not None:
            bad.append("pruned outcome carries a decomposition")
        if out.sub.m < h.m - budget:
            bad.append(f"pruned lost more than the budget: {h.m - out.sub.m} > {budget}")
        for s, c in _codegrees(out.sub.edges, t).items():
            if c >= mc:
                bad.append(f"{t}-set {s} still has codegree {c} >= {mc}")
                break
    elif out.kind is OutcomeKind.BUCKETED:
        bad += _decomposition_ok(out, mc, t)
        if out.sub.m < budget:
            bad.append(f"buckets cover {out.sub.m} < budget {budget}")
        if not out.decomposition or not out.decomposition.buckets:
            bad.append("bucketed outcome without buckets")
    else:
        bad.append(f"unexpected kind {out.kind}")
    return bad


def check_multilevel(h, thresholds, out: CleaningOutcome, max_t: int | None = None) -> list[str]:
    """``thresholds`` maps set size r (1..k) to the raw threshold m(r)."""
    bad = _sub_consistent(h, out)
    k = h.k
    thr = {r: Fraction(thresholds(r)) for r in range(1, k + 1)}
    mc = {r: math.ceil(v) for r, v in thr.items()}
    t = out.t
    if not 1 <= t <= (max_t or k):
        bad.append(f"level t={t} outside 1..{max_t or k}")
    if 2 * k * out.sub.m < h.m:
        bad.append(f"kept {out.sub.m} < e/(2k) = {h.m / (2 * k)}")
    for r in range(t + 1, k + 1):
        for s, c in _codegrees(out.sub.edges, r).items():
            if c >= mc[r]:
                bad.append(f"{r}-set {s} has codegree {c} >= m({r}) = {mc[r]}")
                break
    if out.kind is OutcomeKind.BUCKETED:
        bad += _decomposition_ok(out, mc[t], t)
    elif out.kind is OutcomeKind.MIN_DEGREE_CORE:
        if t != 1:
            bad.append("min-degree outcome at t != 1")
        degs = _degrees(out.sub.edges)
        if out.sub.m and min(degs.values()) < thr[1]:
            bad.append(f"min degree {min(degs.values())} < m(1) = {float(thr[1])}")
    else:
        bad.append(f"unexpected kind {out.kind}")
    return bad
