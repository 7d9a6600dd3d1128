"""GF(2) linear algebra over packed bit rows.

``GF2Vector`` and ``GF2Matrix`` hold bits in Python ints (LSB = index 0);
the elimination and brute-force search run in the kernels of
``evencover._kernels`` on ``uint64``-packed copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .hypergraph import ColoredHypergraph, EvenCover, Hypergraph


@dataclass(frozen=True)
class GF2Vector:
    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "GF2Vector":
        bits = 0
        for i, b in enumerate(values):
            if b & 1:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def unit(cls, length: int, i: int) -> "GF2Vector":
        return cls(length, 1 << i)

    def _check(self, other: "GF2Vector") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch {self.length} != {other.length}")

    def __xor__(self, other: "GF2Vector") -> "GF2Vector":
        self._check(other)
        return GF2Vector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def dot(self, other: "GF2Vector") -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]


@dataclass(frozen=True)
class GF2Matrix:
    """Rectangular matrix; ``rows[i]`` is an int bitset of width ``ncols``."""

    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        rows = tuple(int(r) for r in self.rows)
        for r in rows:
            if r < 0 or r >> self.ncols:
                raise ValueError("row has bits beyond ncols")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "GF2Matrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        vecs = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            vecs.append(GF2Vector.from_list(r).bits)
        return cls(ncols, tuple(vecs))

    @classmethod
    def from_vectors(cls, vectors: Sequence[GF2Vector], ncols: int | None = None) -> "GF2Matrix":
        if ncols is None:
            ncols = vectors[0].length if vectors else 0
        for v in vectors:
            if v.length != ncols:
                raise ValueError("vector length mismatch")
        return cls(ncols, tuple(v.bits for v in vectors))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "GF2Matrix":
        return cls(ncols, (0,) * nrows)

    @classmethod
    def identity(cls, size: int) -> "GF2Matrix":
        return cls(size, tuple(1 << i for i in range(size)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> GF2Vector:
        return GF2Vector(self.ncols, self.rows[i])

    def transpose(self) -> "GF2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return GF2Matrix(self.nrows, tuple(cols))

    def mul_vector(self, v: GF2Vector) -> GF2Vector:
        """``M @ v`` over GF(2)."""
        if v.length != self.ncols:
            raise ValueError("dimension mismatch")
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v.bits).bit_count() & 1:
                out |= 1 << i
        return GF2Vector(self.nrows, out)

    def packed(self) -> np.ndarray:
        return pack_rows(self.rows, self.ncols)


def pack_rows(rows: Sequence[int], ncols: int) -> np.ndarray:
    """Pack int bitsets into a ``(len(rows), ceil(ncols/64))`` uint64 array."""
    w = max(1, (ncols + 63) // 64)
    out = np.zeros((len(rows), w), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, r in enumerate(rows):
        for j in range(w):
            out[i, j] = (r >> (64 * j)) & mask
    return out


def rank(M: GF2Matrix) -> int:
    """Row rank over GF(2)."""
    r, _ = _kernels.reduce_rows(M.packed())
    return r


def kernel_basis(M: GF2Matrix) -> list[GF2Vector]:
    """A basis of ``{x : M x = 0}``, one vector per dependent column.

    Columns are eliminated in index order; each column that reduces to zero
    yields the combination that killed it, so the basis has exactly
    ``ncols - rank(M)`` vectors.
    """
    cols = M.transpose()
    _, deps = _kernels.reduce_rows(cols.packed())
    basis = []
    for dep in deps:
        bits = 0
        for j in dep:
            bits |= 1 << j
        basis.append(GF2Vector(M.ncols, bits))
    return basis


def incidence_rows(h: Hypergraph | ColoredHypergraph) -> np.ndarray:
    base = h.base if isinstance(h, ColoredHypergraph) else h
    return pack_rows(base.masks, base.n)


def find_dependency(h: Hypergraph | ColoredHypergraph) -> EvenCover | None:
    """A nonempty even cover from linear dependence of the edge vectors.

    Edges are inserted into an XOR basis in index order; the first edge that
    reduces to zero closes the cover, whose members are read off the
    recorded elimination history.  Always succeeds once ``e(h) >= n + 1``.
    """
    _, deps = _kernels.reduce_rows(incidence_rows(h), stop_at_first=True)
    if not deps:
        return None
    return EvenCover(tuple(deps[0]))


def all_dependencies(h: Hypergraph | ColoredHypergraph) -> list[EvenCover]:
    """One cover per edge that is dependent on its predecessors."""
    _, deps = _kernels.reduce_rows(incidence_rows(h))
    return [EvenCover(tuple(d)) for d in deps]


BRUTE_FORCE_EDGE_LIMIT = 24
BRUTE_FORCE_SIZE_LIMIT = 6


def min_weight_cover_bruteforce(h: Hypergraph | ColoredHypergraph, max_size: int | None = None) -> EvenCover | None:
    """Minimum-cardinality nonempty even cover of size at most ``max_size``.

    Exhaustive subset enumeration, smallest size first and lexicographic
    within a size.  Allowed when ``e(h) <= 24`` or ``max_size <= 6``.
    """
    base = h.base if isinstance(h, ColoredHypergraph) else h
    if max_size is None:
        max_size = base.m
    if base.m > BRUTE_FORCE_EDGE_LIMIT and max_size > BRUTE_FORCE_SIZE_LIMIT:
        raise ValueError(
            f"brute force guard: e(h)={base.m} > {BRUTE_FORCE_EDGE_LIMIT} "
            f"with max_size={max_size} > {BRUTE_FORCE_SIZE_LIMIT}"
        )
    found = _kernels.min_weight_subset(incidence_rows(base), max_size)
    return None if found is None else EvenCover(found)


def is_dependent(vectors: Iterable[GF2Vector]) -> bool:
    vectors = list(vectors)
    if not vectors:
        return False
    M = GF2Matrix.from_vectors(vectors)
    return rank(M) < len(vectors)
