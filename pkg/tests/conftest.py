"""Instance builders shared by the test modules."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from evencover.hypergraph import Hypergraph


def steiner_15() -> Hypergraph:
    """Lines of PG(3,2): triples {a, b, a^b} of nonzero 4-bit vectors, shifted to 0-based ids."""
    lines = set()
    for a in range(1, 16):
        for b in range(a + 1, 16):
            lines.add(tuple(sorted((a - 1, b - 1, (a ^ b) - 1))))
    return Hypergraph(15, 3, tuple(sorted(lines)))


def fano() -> Hypergraph:
    return Hypergraph(7, 3, ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)))


TRIANGLE_FAMILY = ((0, 1, 2), (2, 3, 4), (4, 5, 0), (1, 3, 5))


def two_sided_planted(seed: int = 0, n: int = 24, noise: int = 5) -> Hypergraph:
    """5-uniform instance with four 2-cores whose halves XOR to zero on both sides.

    Bucket i has core {2i, 2i+1} and members core+T_i, core+U_i where the
    T_i (ids 8..13) and the U_i (ids 14..19) each form an even cover of
    triples.  ``noise`` extra edges meet everything in at most one vertex,
    so no other pair is heavy and multilevel cleaning stops after taking
    exactly the four planted buckets.
    """
    edges = []
    for i, tr in enumerate(TRIANGLE_FAMILY):
        core = (2 * i, 2 * i + 1)
        edges.append(tuple(sorted(core + tuple(8 + v for v in tr))))
        edges.append(tuple(sorted(core + tuple(14 + v for v in tr))))
    rng = random.Random(seed)
    planted = len(edges)
    tries = 0
    while len(edges) < planted + noise:
        tries += 1
        if tries > 100000:
            raise RuntimeError("could not place noise edges")
        e = tuple(sorted(rng.sample(range(n), 5)))
        if all(len(set(e) & set(f)) <= 1 for f in edges):
            edges.append(e)
    return Hypergraph(n, 5, tuple(edges))


def random_linear(n: int, k: int, m: int, seed: int, max_overlap: int = 1) -> Hypergraph:
    """Random k-sets added greedily while pairwise intersections stay <= max_overlap."""
    rng = random.Random(seed)
    edges: list[tuple[int, ...]] = []
    tries = 0
    while len(edges) < m and tries < 20000:
        tries += 1
        e = tuple(sorted(rng.sample(range(n), k)))
        if all(len(set(e) & set(f)) <= max_overlap for f in edges):
            edges.append(e)
    return Hypergraph(n, k, tuple(edges))


def all_k_sets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


@pytest.fixture
def sts15() -> Hypergraph:
    return steiner_15()
