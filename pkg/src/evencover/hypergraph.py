"""Uniform hypergraphs, GF(2) edge arithmetic, codegrees and the .hg format.

Vertices are 0-based integers in ``[0, n)``.  Edges are stored as sorted
tuples and are identified by their position in ``Hypergraph.edges``, so
repeated edges (multi-hypergraphs) are first-class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class HypergraphFormatError(ValueError):
    """Raised for malformed .hg input."""


def mask_of(vertices: Iterable[int]) -> int:
    """Pack a vertex set into an int bitset (bit v set for vertex v)."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    """Unpack an int bitset into a sorted vertex tuple."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def symmetric_difference(a: Iterable[int], b: Iterable[int]) -> tuple[int, ...]:
    """Elements lying in exactly one of ``a`` and ``b``, sorted."""
    return tuple(sorted(set(a) ^ set(b)))


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n-1``.

    ``edges`` is ordered; edge identity is the index.  With ``multi=False``
    no two edges may be equal as sets.
    """

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]
    multi: bool = False

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 1:
            raise ValueError(f"invalid sizes n={self.n}, k={self.k}")
        norm = []
        for idx, e in enumerate(self.edges):
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise ValueError(f"edge {idx} {e!r} is not a set of {self.k} distinct vertices")
            if t and (t[0] < 0 or t[-1] >= self.n):
                raise ValueError(f"edge {idx} {e!r} has a vertex outside [0, {self.n})")
            norm.append(t)
        norm_t = tuple(norm)
        if not self.multi and len(set(norm_t)) != len(norm_t):
            raise ValueError("duplicate edge in a simple hypergraph")
        object.__setattr__(self, "edges", norm_t)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(e) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the sorted indices of edges containing it."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for idx, e in enumerate(self.edges):
            for v in e:
                inc[v].append(idx)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> list[int]:
        return [len(x) for x in self.incidence]

    def average_degree(self) -> Fraction:
        """``e(H)/n`` as an exact Fraction (the ``d`` of ``nd`` edges)."""
        return Fraction(self.m, self.n) if self.n else Fraction(0)

    def has_duplicates(self) -> bool:
        return len(set(self.edges)) != len(self.edges)

    def subhypergraph(self, edge_ids: Sequence[int], multi: bool | None = None) -> "Hypergraph":
        """Edges at ``edge_ids`` (in that order) on the same vertex set."""
        return Hypergraph(
            self.n,
            self.k,
            tuple(self.edges[i] for i in edge_ids),
            self.multi if multi is None else multi,
        )


@dataclass(frozen=True)
class ColoredHypergraph:
    """A hypergraph with a dense integer colour per edge.

    ``labels`` optionally maps colour ids to display names.  With
    ``proper=True`` the constructor checks that no vertex lies in two edges
    of the same colour.
    """

    base: Hypergraph
    colors: tuple[int, ...]
    proper: bool = False
    labels: Mapping[int, str] | None = field(default=None, compare=False)
    has_colors: bool = True

    def __post_init__(self) -> None:
        cols = tuple(int(c) for c in self.colors)
        if len(cols) != self.base.m:
            raise ValueError(f"{len(cols)} colours for {self.base.m} edges")
        if any(c < 0 for c in cols):
            raise ValueError("colour ids must be non-negative")
        object.__setattr__(self, "colors", cols)
        if self.proper and not is_properly_colored(self.base, cols):
            raise ValueError("colouring is not proper")

    @classmethod
    def uncolored(cls, h: Hypergraph) -> "ColoredHypergraph":
        """Colour every edge with its own index (stored without colours)."""
        return cls(h, tuple(range(h.m)), has_colors=False)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def edges(self) -> tuple[tuple[int, ...], ...]:
        return self.base.edges

    @property
    def m(self) -> int:
        return self.base.m

    def color_classes(self) -> dict[int, list[int]]:
        classes: dict[int, list[int]] = {}
        for idx, c in enumerate(self.colors):
            classes.setdefault(c, []).append(idx)
        return classes

    def subhypergraph(self, edge_ids: Sequence[int]) -> "ColoredHypergraph":
        return ColoredHypergraph(
            self.base.subhypergraph(edge_ids),
            tuple(self.colors[i] for i in edge_ids),
            self.proper,
            self.labels,
            self.has_colors,
        )


def is_properly_colored(h: Hypergraph, colors: Sequence[int]) -> bool:
    seen: set[tuple[int, int]] = set()
    for e, c in zip(h.edges, colors):
        for v in e:
            if (v, c) in seen:
                return False
            seen.add((v, c))
    return True


@dataclass(frozen=True)
class EvenCover:
    """A set (or sub-multiset) of edge indices of some host hypergraph."""

    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(int(i) for i in self.edges)))

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def degenerate(self) -> bool:
        """The empty cover is valid but carries no information."""
        return not self.edges

    def __len__(self) -> int:
        return len(self.edges)


def verify_even_cover(h: Hypergraph | ColoredHypergraph, cover: EvenCover | Iterable[int]) -> bool:
    """True iff the GF(2) sum of the cover's edge vectors is zero.

    The empty cover verifies; check ``EvenCover.degenerate`` where a
    nonempty certificate is required.
    """
    if isinstance(h, ColoredHypergraph):
        h = h.base
    ids = cover.edges if isinstance(cover, EvenCover) else tuple(cover)
    acc = 0
    masks = h.masks
    for i in ids:
        if not 0 <= i < h.m:
            raise IndexError(f"edge index {i} out of range for {h.m} edges")
        acc ^= masks[i]
    return acc == 0


def codegree(h: Hypergraph | ColoredHypergraph, s: Iterable[int]) -> int:
    """Number of edges containing ``s``; ``codegree(h, ()) == e(h)``."""
    base = h.base if isinstance(h, ColoredHypergraph) else h
    s = tuple(s)
    if not s:
        return base.m
    if len(s) > base.k:
        return 0
    # intersect incidence lists, smallest first
    lists = sorted((base.incidence[v] for v in s), key=len)
    common = set(lists[0])
    for other in lists[1:]:
        common.intersection_update(other)
        if not common:
            return 0
    return len(common)


def codegree_table(h: Hypergraph, t: int) -> Counter:
    """Codegree of every t-set contained in some edge."""
    table: Counter = Counter()
    for e in h.edges:
        table.update(combinations(e, t))
    return table


@dataclass(frozen=True)
class Bucket:
    """Edges (by index) that all contain ``core``."""

    core: tuple[int, ...]
    members: tuple[int, ...]


@dataclass(frozen=True)
class BucketDecomposition:
    """Pairwise disjoint buckets, each with ``m`` members and a ``t``-vertex core."""

    buckets: tuple[Bucket, ...]
    m: int
    t: int

    def edge_ids(self) -> list[int]:
        return [i for b in self.buckets for i in b.members]

    def bucket_of(self) -> dict[int, int]:
        return {i: bi for bi, b in enumerate(self.buckets) for i in b.members}

    def validate(self, h: Hypergraph) -> None:
        """Raise ValueError unless the decomposition is consistent with ``h``."""
        seen: set[int] = set()
        for bi, b in enumerate(self.buckets):
            if len(b.core) != self.t:
                raise ValueError(f"bucket {bi}: core size {len(b.core)} != t={self.t}")
            if len(b.members) != self.m:
                raise ValueError(f"bucket {bi}: {len(b.members)} members != m={self.m}")
            core = set(b.core)
            for i in b.members:
                if not 0 <= i < h.m:
                    raise ValueError(f"bucket {bi}: edge index {i} out of range")
                if i in seen:
                    raise ValueError(f"edge {i} lies in two buckets")
                if not core <= set(h.edges[i]):
                    raise ValueError(f"bucket {bi}: edge {i} misses core {b.core}")
                seen.add(i)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "buckets": [{"core": list(b.core), "members": list(b.members)} for b in self.buckets],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BucketDecomposition":
        return cls(
            tuple(Bucket(tuple(b["core"]), tuple(b["members"])) for b in obj["buckets"]),
            int(obj["m"]),
            int(obj["t"]),
        )


# -- .hg text format ---------------------------------------------------------
#
#   n k m [multi] [colored]
#   v1 v2 ... vk [c=<colour>]      (m lines, ids increasing)
#
# Lines starting with '#' and blank lines are ignored.


def parse_hypergraph(text: str) -> ColoredHypergraph:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise HypergraphFormatError("missing header")
    head = lines[0].split()
    if len(head) < 3:
        raise HypergraphFormatError(f"header needs 'n k m': {lines[0]!r}")
    try:
        n, k, m = (int(x) for x in head[:3])
    except ValueError:
        raise HypergraphFormatError(f"non-integer header field: {lines[0]!r}") from None
    flags = set(head[3:])
    unknown = flags - {"multi", "colored"}
    if unknown:
        raise HypergraphFormatError(f"unknown header flags {sorted(unknown)}")
    multi = "multi" in flags
    colored = "colored" in flags
    body = lines[1:]
    if len(body) != m:
        raise HypergraphFormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    colors = []
    for lineno, line in enumerate(body, start=2):
        toks = line.split()
        color = None
        if toks and toks[-1].startswith("c="):
            try:
                color = int(toks[-1][2:])
            except ValueError:
                raise HypergraphFormatError(f"line {lineno}: bad colour {toks[-1]!r}") from None
            toks = toks[:-1]
        if len(toks) != k:
            raise HypergraphFormatError(f"line {lineno}: expected {k} vertices, got {len(toks)}")
        try:
            e = [int(x) for x in toks]
        except ValueError:
            raise HypergraphFormatError(f"line {lineno}: non-integer vertex") from None
        if any(v < 0 or v >= n for v in e):
            raise HypergraphFormatError(f"line {lineno}: vertex id outside [0, {n})")
        if any(a >= b for a, b in zip(e, e[1:])):
            raise HypergraphFormatError(f"line {lineno}: vertex ids must be strictly increasing")
        if color is None and colored:
            raise HypergraphFormatError(f"line {lineno}: missing colour in a coloured file")
        if color is not None and not colored:
            raise HypergraphFormatError(f"line {lineno}: colour given but header lacks 'colored'")
        edges.append(tuple(e))
        colors.append(color if color is not None else 0)
    if not multi and len(set(edges)) != len(edges):
        raise HypergraphFormatError("duplicate edge but header lacks 'multi'")
    h = Hypergraph(n, k, tuple(edges), multi)
    if colored:
        return ColoredHypergraph(h, tuple(colors))
    return ColoredHypergraph.uncolored(h)


def format_hypergraph(h: Hypergraph | ColoredHypergraph, colored: bool | None = None) -> str:
    """Canonical .hg text; ``colored`` defaults to ``h.has_colors``."""
    if isinstance(h, ColoredHypergraph):
        base, colors = h.base, h.colors
        if colored is None:
            colored = h.has_colors
    else:
        base, colors = h, None
        colored = False
    head = [str(base.n), str(base.k), str(base.m)]
    if base.multi:
        head.append("multi")
    if colored:
        head.append("colored")
    out = [" ".join(head)]
    for idx, e in enumerate(base.edges):
        line = " ".join(map(str, e))
        if colored:
            line += f" c={colors[idx]}"
        out.append(line)
    return "\n".join(out) + "\n"


def load_hypergraph(path: str | Path) -> ColoredHypergraph:
    """Read a .hg file.  Uncoloured files get colour = edge index."""
    return parse_hypergraph(Path(path).read_text())


def store_hypergraph(h: Hypergraph | ColoredHypergraph, path: str | Path, colored: bool | None = None) -> None:
    Path(path).write_text(format_hypergraph(h, colored))
