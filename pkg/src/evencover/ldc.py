"""Linear 3-query locally decodable codes as coloured hypergraphs.

A code is given by its generator rows: codeword bit ``j`` is
``<row_j, x>``.  Message bit ``i`` is decoded by triples of positions whose
rows sum to the unit vector ``u_i``; disjoint such triples form matching
``H_i`` and the union of all matchings, coloured by ``i``, is the hypergraph
in which even covers with an odd colour class are sought.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .cleaning import OutcomeKind, prune_or_bucket, single_vertex_buckets
from .hypergraph import ColoredHypergraph, EvenCover, Hypergraph, is_properly_colored, verify_even_cover
from .kikuchi import (
    Backend,
    KikuchiGuardError,
    build_odd_kikuchi,
    check_Hc_codegrees,
    kikuchi_stats,
    prune_heavy_colors,
)
from .walks import extract_even_cover, find_unique_color_walk

MAX_DISTANCE_MESSAGE_BITS = 16
MAX_NORMAL_FORM_LENGTH = 2**16


class NormalFormError(ValueError):
    """Some message bit has no decoding triple."""


class CodeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LinearCode:
    """Generator rows as int bitsets over ``m`` message bits (bit i = coordinate i)."""

    m: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        rows = tuple(int(r) for r in self.rows)
        for r in rows:
            if r < 0 or r >> self.m:
                raise ValueError("row wider than the message length")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def encode(self, x: int) -> int:
        out = 0
        for j, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << j
        return out

    def weights(self) -> np.ndarray:
        """Codeword weight of every message ``0 .. 2^m - 1``."""
        if self.m > MAX_DISTANCE_MESSAGE_BITS:
            raise ValueError(f"exact distance limited to m <= {MAX_DISTANCE_MESSAGE_BITS}")
        xs = np.arange(1 << self.m, dtype=np.uint32)
        w = np.zeros(1 << self.m, dtype=np.int64)
        for r in self.rows:
            v = xs & np.uint32(r)
            # parity of the popcount by folding
            for shift in (16, 8, 4, 2, 1):
                v ^= v >> np.uint32(shift)
            w += (v & np.uint32(1)).astype(np.int64)
        return w

    def distance(self) -> int:
        if self.m == 0:
            return 0
        return int(self.weights()[1:].min())

    def relative_distance(self) -> Fraction:
        return Fraction(self.distance(), self.n) if self.n else Fraction(0)


def hadamard_code(r: int) -> LinearCode:
    """All ``2^r`` vectors of length ``r`` as rows; position ``a`` holds ``<a, x>``."""
    if not 0 <= r <= 12:
        raise ValueError("hadamard_code supports 0 <= r <= 12")
    return LinearCode(r, tuple(range(1 << r)))


def parse_code(text: str) -> LinearCode:
    """``.gm`` text: ``n m`` header then n rows of m characters from {0,1}."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise CodeFormatError("empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise CodeFormatError("header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise CodeFormatError("header must be integers") from exc
    body = lines[1:]
    if len(body) != n:
        raise CodeFormatError(f"expected {n} rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        if len(ln) != m or set(ln) - {"0", "1"}:
            raise CodeFormatError(f"row {i} must be {m} characters of 0/1")
        rows.append(sum(1 << c for c, ch in enumerate(ln) if ch == "1"))
    return LinearCode(m, tuple(rows))


def format_code(c: LinearCode) -> str:
    out = [f"{c.n} {c.m}"]
    for r in c.rows:
        out.append("".join("1" if (r >> i) & 1 else "0" for i in range(c.m)))
    return "\n".join(out) + "\n"


def load_code(path: str | Path) -> LinearCode:
    return parse_code(Path(path).read_text())


def store_code(c: LinearCode, path: str | Path) -> None:
    Path(path).write_text(format_code(c))


def all_triples(c: LinearCode, i: int) -> list[tuple[int, int, int]]:
    """Lexicographically sorted 3-subsets of positions whose rows sum to ``u_i``."""
    target = 1 << i
    where: dict[int, list[int]] = {}
    for j, r in enumerate(c.rows):
        where.setdefault(r, []).append(j)
    out = []
    rows = c.rows
    for j1 in range(c.n):
        r1 = rows[j1] ^ target
        for j2 in range(j1 + 1, c.n):
            for j3 in where.get(r1 ^ rows[j2], ()):
                if j3 > j2:
                    out.append((j1, j2, j3))
    return out


def greedy_matching(triples: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    used: set[int] = set()
    out = []
    for tr in triples:
        if used.isdisjoint(tr):
            out.append(tr)
            used.update(tr)
    return out


@dataclass(frozen=True)
class NormalFormLDC:
    code: LinearCode
    matchings: tuple[tuple[tuple[int, int, int], ...], ...]
    triple_counts: tuple[int, ...]
    union: ColoredHypergraph
    delta: Fraction
    floor: int

    @property
    def min_matching(self) -> int:
        return min(len(x) for x in self.matchings) if self.matchings else 0

    @property
    def meets_floor(self) -> bool:
        return self.min_matching >= self.floor

    def summary(self) -> dict:
        d = self.delta
        return {
            "m": self.code.m,
            "n": self.code.n,
            "distance": int(d * self.code.n),
            "delta": f"{d.numerator}/{d.denominator}",
            "matchingSizes": [len(x) for x in self.matchings],
            "tripleCounts": list(self.triple_counts),
            "minMatching": self.min_matching,
            "floorSixth": self.floor,
            "floorFull": math.ceil(d * self.code.n),
            "meetsFloor": self.meets_floor,
        }


def normal_form(c: LinearCode) -> NormalFormLDC:
    """Greedy maximal matchings of decoding triples for every message bit.

    Raises ``NormalFormError`` when some bit has no triple at all.  The
    union hypergraph colours each triple by its message bit.
    """
    if c.n > MAX_NORMAL_FORM_LENGTH:
        raise ValueError(f"block length limited to {MAX_NORMAL_FORM_LENGTH}")
    matchings = []
    counts = []
    for i in range(c.m):
        triples = all_triples(c, i)
        if not triples:
            raise NormalFormError(f"message bit {i} has no decoding triple")
        counts.append(len(triples))
        matchings.append(tuple(greedy_matching(triples)))
    edges = [tr for mt in matchings for tr in mt]
    colors = [i for i, mt in enumerate(matchings) for _ in mt]
    union = ColoredHypergraph(Hypergraph(c.n, 3, tuple(edges), multi=True), tuple(colors), proper=True)
    delta = c.relative_distance() if c.m <= MAX_DISTANCE_MESSAGE_BITS else Fraction(0)
    floor = math.ceil(delta * c.n / 6)
    return NormalFormLDC(c, tuple(matchings), tuple(counts), union, delta, floor)


def row_sum_identity_holds(c: LinearCode, i: int, triple: Sequence[int]) -> bool:
    acc = 0
    for j in triple:
        acc ^= c.rows[j]
    return acc == 1 << i and len(set(triple)) == 3


def check_even_contribution(nf: NormalFormLDC | ColoredHypergraph, cover: EvenCover) -> bool:
    """True when every colour class meets the cover an even number of times."""
    union = nf.union if isinstance(nf, NormalFormLDC) else nf
    cnt = Counter(union.colors[i] for i in cover.edges)
    return all(x % 2 == 0 for x in cnt.values())


@dataclass(frozen=True)
class OddColorCover:
    cover: EvenCover
    certificate: int
    color_counts: dict
    report: dict = field(default_factory=dict, compare=False)


def find_odd_color_cover(
    h: ColoredHypergraph,
    alpha: float = 0.5,
    K: float | None = None,
    l: int | None = None,
    seed: int = 0,
    effort: int = 16,
    max_len: int | None = None,
    prune: bool = True,
) -> OddColorCover | None:
    """Search a properly coloured 3-uniform hypergraph for an even cover with an odd colour.

    Case split: with ``m = ceil(K log2 n)``, either a ``(m, 2)``-bucket
    decomposition covers half the edges, or after pruning heavy pairs the
    single-vertex buckets are used (``t = 1``).  The odd-k Kikuchi graph of
    that decomposition is pruned, searched for a walk with a unique colour,
    and the cover is read off.  The density hypothesis (every colour has at
    least ``alpha * n`` edges) is reported but not enforced.
    """
    if h.k != 3:
        raise ValueError("needs a 3-uniform hypergraph")
    if not is_properly_colored(h.base, h.colors):
        raise ValueError("colouring is not proper")
    n = h.n
    if K is None:
        K = 1e7 / alpha**2
    classes = h.color_classes()
    report: dict = {
        "K": K,
        "alpha": alpha,
        "density_met": bool(classes) and all(len(v) >= alpha * n for v in classes.values()),
    }
    if h.m < 2:
        report["reason"] = "too few edges"
        return None
    bucket_size = math.ceil(K * math.log2(max(n, 2)))
    first = prune_or_bucket(h.base, 2, bucket_size, Fraction(h.m, 2))
    if first.kind is OutcomeKind.BUCKETED:
        outcome = first
        report["case"] = 1
    else:
        report["case"] = 2
        if first.sub.m < 2:
            report["reason"] = "pruned hypergraph too small"
            return None
        outcome = first.compose(single_vertex_buckets(first.sub))
    sub = h.subhypergraph(outcome.edge_ids)
    dec = outcome.decomposition
    t = dec.t
    if l is None:
        l = max(3 - t, math.ceil(n ** (1 / 3)))
    report.update({"t": t, "l": l, "bucket_size": dec.m})
    try:
        g = build_odd_kikuchi(sub, dec, l, Backend.EXPLICIT)
    except KikuchiGuardError as exc:
        report["reason"] = str(exc)
        return None
    report["stats"] = kikuchi_stats(g).to_json()
    hc = check_Hc_codegrees(g)
    report["hc_ok"] = hc.ok
    report["hc_violations"] = hc.violations
    graphs = [g]
    if prune:
        gp = prune_heavy_colors(g)
        report["prune_survival"] = gp.notes["survival"]
        graphs = [gp, g]
    for gi, graph in enumerate(graphs):
        w = find_unique_color_walk(graph, max_len=max_len, seed=seed, effort=effort)
        if w is None:
            continue
        local = extract_even_cover(graph, w)
        cover = EvenCover(tuple(sorted(outcome.edge_ids[i] for i in local.edges)))
        counts = Counter(h.colors[i] for i in cover.edges)
        odd = sorted(c for c, x in counts.items() if x % 2)
        if not odd or not verify_even_cover(h, cover):
            continue
        report["walk_length"] = w.length
        report["used_unpruned"] = prune and gi == 1
        cert = w.certified if w.certified in odd else odd[0]
        return OddColorCover(cover, cert, dict(sorted(counts.items())), report)
    report["reason"] = "no walk with a unique colour"
    return None
