import random
from collections import Counter

import pytest

from evencover.hypergraph import Hypergraph, mask_of, verify_even_cover
from evencover.kikuchi import (
    Backend,
    build_even_kikuchi,
    build_flower_kikuchi,
    color_red_blue,
    enumerate_flower_gadgets,
    flower_prune,
    plain_graph,
    with_coloring,
)
from evencover import _kernels
from evencover.pipeline import gen_random
from evencover.walks import (
    _length_floor,
    ClosedWalk,
    default_max_len,
    dumps_walk,
    exhaustive_unique_color_walk,
    extract_even_cover,
    find_unique_color_walk,
    loads_walk,
    rainbow_search,
    verify_walk,
)

from conftest import steiner_15


def test_triangle():
    g = plain_graph(3, [(0, 1, [0]), (1, 2, [1]), (2, 0, [2])])
    w = find_unique_color_walk(g, seed=0)
    assert w.length == 3 and w.unique_colors() == [0, 1, 2]
    assert verify_walk(g, w)
    assert exhaustive_unique_color_walk(g).length == 3


def test_abab_cycle_has_no_walk():
    g = plain_graph(4, [(0, 1, [0]), (1, 2, [1]), (2, 3, [0]), (3, 0, [1])])
    assert exhaustive_unique_color_walk(g, 8) is None
    assert find_unique_color_walk(g, max_len=8, seed=3) is None


def test_max_len_is_hard():
    # a 5-cycle with distinct colours needs length 5
    g = plain_graph(5, [(i, (i + 1) % 5, [i]) for i in range(5)])
    assert find_unique_color_walk(g, max_len=4) is None
    w = find_unique_color_walk(g, max_len=5)
    assert w is not None and w.length == 5


def test_extract_even_k_example():
    # 0-based: E1 = {0,1,2,3}, E2 = {2,3,4,5}, E3 = {4,5,0,1}
    h = Hypergraph(6, 4, ((0, 1, 2, 3), (2, 3, 4, 5), (0, 1, 4, 5)))
    g = build_even_kikuchi(h, 2)
    a, b, c = mask_of((0, 1)), mask_of((2, 3)), mask_of((4, 5))
    edges = []
    for x, y in ((a, b), (b, c), (c, a)):
        (e,) = [e for t, e in g.neighbors(x) if t == y]
        edges.append(e)
    w = ClosedWalk((a, b, c), tuple(edges))
    assert verify_walk(g, w)
    cover = extract_even_cover(g, w)
    assert cover.edges == (0, 1, 2) and verify_even_cover(h, cover)


def test_edge_twice_drops_out():
    g = plain_graph(3, [(0, 1, [0]), (1, 2, [1]), (2, 0, [2])])
    e0, e1, e2 = g.edges
    # 0 -> 1 -> 0 -> 1 -> 2 -> 0 uses edge 0 three times: odd, stays
    w = ClosedWalk((1, 2, 1, 2, 4), (e0, e0, e0, e1, e2))
    assert extract_even_cover(g, w).edges == (0, 1, 2)
    w2 = ClosedWalk((1, 2), (e0, e0))
    assert extract_even_cover(g, w2).edges == ()


def test_verify_walk_rejects():
    g = plain_graph(4, [(0, 1, [0]), (1, 2, [1]), (2, 0, [2]), (2, 3, [3])])
    w = find_unique_color_walk(g)
    assert verify_walk(g, w)
    e0, e1, e2, e3 = g.edges
    assert not verify_walk(g, ClosedWalk((1, 2, 8), (e0, e1, e3)))
    ghost = plain_graph(4, [(0, 3, [5])]).edges[0]
    assert not verify_walk(g, ClosedWalk((1, 8), (ghost, ghost)))
    bad_cert = ClosedWalk(w.vertices, w.edges, certified=99)
    assert not verify_walk(g, bad_cert)
    with pytest.raises(ValueError):
        extract_even_cover(g, ClosedWalk((1, 2, 8), (e0, e1, e3)))


def test_round_trip_and_implicit_check():
    h = gen_random(10, 4, 20, 1)
    g = build_even_kikuchi(h, 3)
    w = find_unique_color_walk(g, seed=2)
    back = loads_walk(dumps_walk(w))
    assert back == w and verify_walk(g, back)
    gi = build_even_kikuchi(h, 3, Backend.IMPLICIT)
    assert verify_walk(gi, back)


def test_determinism():
    h = gen_random(12, 4, 18, 7)
    g = build_even_kikuchi(h, 3)
    a = [find_unique_color_walk(g, seed=s, effort=4) for s in range(5)]
    b = [find_unique_color_walk(g, seed=s, effort=4) for s in range(5)]
    assert a == b


def test_rainbow_search_splice_is_valid():
    for seed in range(20):
        h = gen_random(10, 4, 25, seed)
        g = build_even_kikuchi(h, 3)
        rng = random.Random(seed)
        start = rng.choice(list(g.adjacency))
        w = rainbow_search(g, start, 6, default_max_len(g))
        if w is None:
            continue
        assert verify_walk(g, w)
        assert w.color_multiplicity()[w.certified] == 1
        cover = extract_even_cover(g, w)
        assert not cover.degenerate and verify_even_cover(h, cover)


def test_implicit_search():
    h = gen_random(14, 4, 40, 3)
    g = build_even_kikuchi(h, 4, Backend.IMPLICIT)
    w = find_unique_color_walk(g, seed=0, effort=8)
    assert w is not None and verify_walk(g, w)
    assert verify_even_cover(h, extract_even_cover(g, w))
    with pytest.raises(ValueError):
        exhaustive_unique_color_walk(g)


def _planted_instance(seed):
    """One rainbow cycle of length L plus doubled background edges."""
    rng = random.Random(seed)
    n = rng.randint(8, 14)
    L = rng.randint(3, 6)
    cyc = rng.sample(range(n), L)
    edges = [(cyc[i], cyc[(i + 1) % L], [100 + i]) for i in range(L)]
    # each background edge comes with a same-coloured twin, so alone it has no walk
    for _ in range(rng.randint(0, 10)):
        u, v, w = rng.sample(range(n), 3)
        c = rng.randrange(5)
        edges.append((u, v, [c]))
        edges.append((v, u, [c]))
    rng.shuffle(edges)
    return plain_graph(n, edges), L


def test_exhaustive_completeness_on_planted_cycles():
    for seed in range(50):
        g, L = _planted_instance(seed)
        w = exhaustive_unique_color_walk(g, L)
        assert w is not None and w.length <= L and verify_walk(g, w)
        assert w.unique_colors()


def test_exhaustive_is_shortest():
    for seed in range(30):
        g, L = _planted_instance(seed)
        w = exhaustive_unique_color_walk(g, 12)
        if w.length > 1:
            assert exhaustive_unique_color_walk(g, w.length - 1) is None


def test_flower_walk_identity():
    h = steiner_15()
    E_v = [list(h.incidence[v])[:7] for v in range(h.n)]
    gs = enumerate_flower_gadgets(h, E_v)
    found = 0
    for seed in range(6):
        col = color_red_blue(h, gs, seed)
        g = build_flower_kikuchi(h, with_coloring(gs, col.red), 3, red=col.red)
        for graph in (flower_prune(g), g):
            w = find_unique_color_walk(graph, seed=seed)
            if w is None:
                continue
            found += 1
            acc = 0
            for e in w.edges:
                for ei in e.assoc:
                    acc ^= h.masks[ei]
            assert acc == 0
            cover = extract_even_cover(graph, w)
            assert verify_even_cover(h, cover) and not cover.degenerate
            assert cover.size <= (h.k + 1) * w.length
    assert found > 0


def test_color_multiplicity_counts_pairs():
    g = plain_graph(3, [(0, 1, [0, 1]), (1, 2, [1, 2]), (2, 0, [2, 3])])
    w = find_unique_color_walk(g)
    assert w.color_multiplicity() == Counter({0: 1, 1: 2, 2: 2, 3: 1})
    assert w.unique_colors() == [0, 3]


def test_length_floor_cases():
    tri = plain_graph(3, [(0, 1, [0]), (1, 2, [1]), (2, 0, [2])])
    sq = plain_graph(4, [(0, 1, [0]), (1, 2, [1]), (2, 3, [2]), (3, 0, [3])])
    par = plain_graph(2, [(0, 1, [0]), (1, 0, [1])])
    floors = []
    for g in (tri, sq, par):
        _, indptr, nbr, _, eu, ev, _, _ = g.csr()
        floors.append(_length_floor(indptr, nbr, eu, ev))
    assert floors == [3, 4, 2]


def test_early_stop_keeps_shortest():
    rng = random.Random(11)
    for seed in range(40):
        n = rng.randint(6, 14)
        bip = seed % 2 == 0
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if bip and (u % 2) == (v % 2):
                    continue
                if rng.random() < 0.35:
                    edges.append((u, v, [rng.randrange(6)]))
        if not edges:
            continue
        g = plain_graph(n, edges)
        w = exhaustive_unique_color_walk(g, 10)
        args = g.csr()[1:]
        # floor=1 never stops early, so it is the plain shortest scan
        full = _kernels.python_impl.shortest_unique_color_walk(*args, 10, 1)
        assert (w.length if w else None) == (len(full[1]) if full else None)
