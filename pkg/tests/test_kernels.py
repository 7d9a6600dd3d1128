"""The compiled kernels and the pure-Python fallback must agree exactly."""

import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from evencover import _kernels
from evencover.gf2 import incidence_rows
from evencover.kikuchi import build_even_kikuchi, plain_graph
from evencover.pipeline import gen_random

needs_ext = pytest.mark.skipif(_kernels.compiled_impl is None, reason="compiled extension not built")
py = _kernels.python_impl


@needs_ext
@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 80), st.integers(1, 90))
def test_reduce_rows_agree(seed, n, m):
    h = gen_random(n, 2, min(m, n * (n - 1) // 2), seed)
    rows = incidence_rows(h)
    cy = _kernels.compiled_impl
    assert cy.reduce_rows(rows) == py.reduce_rows(rows)
    assert cy.reduce_rows(rows, True) == py.reduce_rows(rows, True)


@needs_ext
def test_reduce_rows_wide_rows_agree():
    # more than one 64-bit word per row
    h = gen_random(200, 5, 210, 4)
    rows = incidence_rows(h)
    assert _kernels.compiled_impl.reduce_rows(rows) == py.reduce_rows(rows)


@needs_ext
@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_min_weight_subset_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 70)
    h = gen_random(n, rng.choice((2, 3, 4)), rng.randint(1, 16), seed, model="multi")
    rows = incidence_rows(h)
    size = rng.randint(1, 6)
    assert _kernels.compiled_impl.min_weight_subset(rows, size) == py.min_weight_subset(rows, size)


def _random_plain(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 14)
    edges = []
    for _ in range(rng.randint(1, 30)):
        u, v = rng.sample(range(n), 2)
        cols = rng.sample(range(8), rng.choice((1, 2)))
        edges.append((u, v, cols))
    return plain_graph(n, edges)


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_walk_kernel_agree(seed, max_len):
    g = _random_plain(seed)
    _, indptr, nbr, nbr_edge, eu, ev, c0, c1 = g.csr()
    args = (indptr, nbr, nbr_edge, eu, ev, c0, c1, max_len)
    assert _kernels.compiled_impl.shortest_unique_color_walk(*args) == py.shortest_unique_color_walk(*args)


@needs_ext
def test_walk_kernel_agree_on_kikuchi():
    g = build_even_kikuchi(gen_random(12, 4, 20, 2), 3)
    _, indptr, nbr, nbr_edge, eu, ev, c0, c1 = g.csr()
    args = (indptr, nbr, nbr_edge, eu, ev, c0, c1, 10)
    assert _kernels.compiled_impl.shortest_unique_color_walk(*args) == py.shortest_unique_color_walk(*args)


def test_pure_python_switch():
    env = dict(os.environ, EVENCOVER_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import evencover; print(evencover.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_reported():
    assert _kernels.BACKEND in ("compiled", "python")
    if _kernels.compiled_impl is not None:
        assert _kernels.BACKEND == "compiled"
