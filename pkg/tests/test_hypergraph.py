from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from evencover.hypergraph import (
    Bucket,
    BucketDecomposition,
    ColoredHypergraph,
    EvenCover,
    Hypergraph,
    HypergraphFormatError,
    codegree,
    format_hypergraph,
    load_hypergraph,
    parse_hypergraph,
    store_hypergraph,
    symmetric_difference,
    verify_even_cover,
)
from evencover.pipeline import gen_random


def test_symmetric_difference_examples():
    assert symmetric_difference((1, 2, 3), (1, 4, 5)) == (2, 3, 4, 5)
    assert symmetric_difference((1, 2, 3, 4), (1, 2, 3, 4)) == ()
    # S ∩ E = {2,3}, T ∩ E = {1,4}, same outside part
    assert symmetric_difference((2, 3, 7), (1, 4, 7)) == (1, 2, 3, 4)


sets = st.frozensets(st.integers(0, 20), max_size=8)


@given(sets, sets, sets)
def test_symmetric_difference_algebra(a, b, c):
    ab = symmetric_difference(a, b)
    assert ab == symmetric_difference(b, a)
    assert symmetric_difference(ab, c) == symmetric_difference(a, symmetric_difference(b, c))
    assert symmetric_difference(a, a) == ()


def test_edges_validated():
    with pytest.raises(ValueError):
        Hypergraph(3, 2, ((0, 0),))
    with pytest.raises(ValueError):
        Hypergraph(3, 2, ((0, 3),))
    with pytest.raises(ValueError):
        Hypergraph(3, 2, ((0, 1), (1, 0)))
    h = Hypergraph(3, 2, ((1, 0), (0, 1)), multi=True)
    assert h.edges == ((0, 1), (0, 1))


def test_verify_examples():
    dup = Hypergraph(4, 2, ((0, 1), (0, 1)), multi=True)
    assert verify_even_cover(dup, EvenCover((0, 1)))
    tri = Hypergraph(3, 2, ((0, 1), (1, 2), (0, 2)))
    assert verify_even_cover(tri, [0, 1, 2])
    k3 = Hypergraph(6, 3, ((0, 1, 2), (2, 3, 4), (4, 5, 0), (1, 3, 5)))
    assert verify_even_cover(k3, [0, 1, 2, 3])
    assert not verify_even_cover(k3, [0, 1, 2])
    empty = EvenCover(())
    assert verify_even_cover(k3, empty) and empty.degenerate
    with pytest.raises(IndexError):
        verify_even_cover(k3, [9])


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.lists(st.integers(0, 29), max_size=12))
def test_verify_matches_vertex_parity(seed, ids):
    h = gen_random(12, 3, 30, seed)
    parity = Counter()
    for i in ids:
        parity[i] ^= 1
    cover = [i for i, p in parity.items() if p]
    cnt = Counter(v for i in cover for v in h.edges[i])
    assert verify_even_cover(h, cover) == all(c % 2 == 0 for c in cnt.values())


def test_codegree_examples():
    star = Hypergraph(4, 2, ((0, 1), (0, 2), (0, 3)))
    assert codegree(star, (0,)) == 3
    assert codegree(star, (0, 1, 2)) == 0
    assert codegree(star, ()) == 3
    h = Hypergraph(6, 3, ((1, 2, 3), (1, 2, 4), (1, 2, 5)))
    assert codegree(h, (1, 2)) == 3


def test_parse_minimal_and_colored():
    h = parse_hypergraph("3 2 1\n0 1\n")
    assert (h.n, h.k, h.edges) == (3, 2, ((0, 1),))
    c = parse_hypergraph("# comment\n3 3 1 colored\n0 1 2 c=7\n")
    assert c.edges == ((0, 1, 2),) and c.colors == (7,)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3 2\n0 1\n",
        "3 2 2\n0 1\n",
        "3 2 1\n0 1 2\n",
        "3 2 1\n0 3\n",
        "3 2 2\n0 1\n0 1\n",
        "3 2 1\n1 0\n",
        "3 2 1 colored\n0 1\n",
        "3 2 1\n0 1 c=2\n",
        "3 2 1 weird\n0 1\n",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(HypergraphFormatError):
        parse_hypergraph(text)


def test_round_trip_random(tmp_path):
    h = gen_random(30, 4, 100, 3)
    p = tmp_path / "a.hg"
    store_hypergraph(h, p)
    back = load_hypergraph(p)
    assert back.base == h
    assert format_hypergraph(back) == p.read_text()
    multi = ColoredHypergraph(Hypergraph(5, 2, ((0, 1), (0, 1), (2, 3)), multi=True), (4, 5, 4))
    store_hypergraph(multi, p)
    assert p.read_text().splitlines()[0] == "5 2 3 multi colored"
    back = load_hypergraph(p)
    assert back.base == multi.base and back.colors == multi.colors


def test_proper_colour_flag():
    h = Hypergraph(4, 2, ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        ColoredHypergraph(h, (0, 0), proper=True)
    assert ColoredHypergraph(h, (0, 1), proper=True).proper


def test_bucket_decomposition_validate():
    h = Hypergraph(6, 3, ((0, 1, 2), (0, 1, 3), (0, 4, 5), (2, 3, 4)))
    d = BucketDecomposition((Bucket((0, 1), (0, 1)),), 2, 2)
    d.validate(h)
    assert BucketDecomposition.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        BucketDecomposition((Bucket((0, 1), (0, 2)),), 2, 2).validate(h)
    with pytest.raises(ValueError):
        BucketDecomposition((Bucket((0,), (0, 1)), Bucket((0,), (1, 2))), 2, 1).validate(h)
