import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lagspec.contfrac import make_context
from lagspec.exact import Surd
from lagspec.graphs import shift_weight
from lagspec.oracle import compare_values, lagrange_periodic, within
from lagspec.spectra import (
    BOTTOM,
    LAGRANGE,
    MARKOV,
    WeightedDigraph,
    hausdorff_distance,
    incremental_weight_sets,
    insertion_order,
    is_lagrange_edge,
    is_markov_edge,
    naive_weight_sets,
    offline_weight_sets,
    cycle_times,
    spectrum,
)

from conftest import cylinders, pair, product


def bridged_cycles():
    # two low cycles joined by a path whose middle edge is the heaviest
    return WeightedDigraph.from_edges(
        6,
        [(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 1), (5, 4, 1)],
    )


def test_self_loop():
    g = WeightedDigraph.from_edges(1, [(0, 0, 5)])
    assert is_lagrange_edge(g, 0) and is_markov_edge(g, 0)


def test_two_cycle():
    g = WeightedDigraph.from_edges(2, [(0, 1, 1), (1, 0, 2)])
    assert not is_lagrange_edge(g, 0)
    assert is_lagrange_edge(g, 1)
    assert naive_weight_sets(g) == ([2], [2])


def test_dag():
    g = WeightedDigraph.from_edges(4, [(0, 1, 3), (1, 2, 1), (0, 2, 2), (2, 3, 5)])
    assert not any(is_lagrange_edge(g, e) or is_markov_edge(g, e) for e in range(4))
    assert naive_weight_sets(g) == ([], []) == incremental_weight_sets(g)


def test_bridged_cycles_markov_only():
    g = bridged_cycles()
    assert is_markov_edge(g, 3) and not is_lagrange_edge(g, 3)
    lag, mar = naive_weight_sets(g)
    assert lag == [1] and mar == [1, 2]
    assert incremental_weight_sets(g) == (lag, mar)
    assert incremental_weight_sets(g, reverse_ties=True) == (lag, mar)
    assert offline_weight_sets(g) == (lag, mar)


def test_bottom_sorts_first():
    assert BOTTOM < 0 and BOTTOM < Surd(-100, 0, 1)
    assert insertion_order([3, BOTTOM, 1, BOTTOM]) == [1, 3, 2, 0]
    g = WeightedDigraph.from_edges(2, [(0, 1, BOTTOM), (1, 0, 4), (1, 1, BOTTOM)])
    assert naive_weight_sets(g) == incremental_weight_sets(g) == offline_weight_sets(g)


@st.composite
def digraphs(draw, max_vertices=50, max_edges=400, max_weight=6):
    n = draw(st.integers(1, max_vertices))
    m = draw(st.integers(0, max_edges))
    edges = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, max_weight)),
            min_size=m,
            max_size=m,
        )
    )
    return WeightedDigraph.from_edges(n, edges)


@settings(max_examples=100)
@given(digraphs())
def test_incremental_matches_naive(g):
    expected = naive_weight_sets(g)
    assert incremental_weight_sets(g) == expected
    assert incremental_weight_sets(g, reverse_ties=True) == expected
    assert offline_weight_sets(g) == expected
    lag, mar = expected
    assert set(lag) <= set(mar)


def closure(n, edges):
    r = [[False] * n for _ in range(n)]
    for s, t in edges:
        r[s][t] = True
    for k in range(n):
        for i in range(n):
            if r[i][k]:
                for j in range(n):
                    if r[k][j]:
                        r[i][j] = True
    return r


def exhaustive_sets(g):
    """Lagrange: max over all simple cycles; Markov: cycle -> edge -> cycle via closures."""
    n = g.n_vertices
    adj = {}
    for e in range(g.n_edges):
        adj.setdefault((g.src[e], g.dst[e]), []).append(g.weights[e])
    lag = set()
    for size in range(1, n + 1):
        for cyc in itertools.permutations(range(n), size):
            if cyc[0] != min(cyc):
                continue
            hops = list(zip(cyc, cyc[1:] + cyc[:1]))
            if not all(h in adj for h in hops):
                continue
            # any choice of parallel edges
            for ws in itertools.product(*(adj[h] for h in hops)):
                lag.add(max(ws))
    mar = set()
    for e in range(g.n_edges):
        w = g.weights[e]
        low = [(g.src[f], g.dst[f]) for f in range(g.n_edges) if g.weights[f] <= w]
        r = closure(n, low)
        on_cycle = [x for x in range(n) if r[x][x]]
        s, t = g.src[e], g.dst[e]
        if any(x == s or r[x][s] for x in on_cycle) and any(y == t or r[t][y] for y in on_cycle):
            mar.add(w)
    return sorted(lag), sorted(mar)


@settings(max_examples=150)
@given(digraphs(max_vertices=6, max_edges=12, max_weight=4))
def test_matches_exhaustive_enumeration(g):
    assert naive_weight_sets(g) == exhaustive_sets(g)
    assert incremental_weight_sets(g) == exhaustive_sets(g)
    assert offline_weight_sets(g) == exhaustive_sets(g)


@settings(max_examples=100)
@given(digraphs(max_vertices=12, max_edges=30, max_weight=5))
def test_cycle_times_brute_force(g):
    cls = [w for w in g.weights]
    got = cycle_times(g.n_vertices, g.src, g.dst, cls, 6)
    for e in range(g.n_edges):
        expected = 6
        for t in range(cls[e], 6):
            low = [(g.src[f], g.dst[f]) for f in range(g.n_edges) if cls[f] <= t]
            if g.src[e] == g.dst[e] or closure(g.n_vertices, low)[g.dst[e]][g.src[e]]:
                expected = t
                break
        assert got[e] == expected


@pytest.mark.parametrize("compress", [False, True])
@pytest.mark.parametrize("q", [3, 7, 20, 50])
def test_product_graph_equivalence(q, compress):
    g = WeightedDigraph.from_product(product(2, q, compress))
    expected = naive_weight_sets(g)
    assert incremental_weight_sets(g) == expected
    assert incremental_weight_sets(g, reverse_ties=True) == expected
    assert offline_weight_sets(g) == expected
    assert BOTTOM not in expected[0] + expected[1]


@pytest.mark.parametrize("k,q", [(2, 20), (2, 100), (3, 30)])
def test_compression_equivalence(k, q):
    full = incremental_weight_sets(WeightedDigraph.from_product(product(k, q, False)))
    comp = incremental_weight_sets(WeightedDigraph.from_product(product(k, q, True)))
    assert full == comp


@pytest.mark.parametrize("q", [100, 1000])
def test_k2_endpoints(q):
    lag = pair(2, q)[LAGRANGE]
    r = Fraction(1, q)
    assert within(lag.weights[0], Surd.sqrt(5), r)
    assert abs(lag.weights[-1] - lagrange_periodic((1, 2))) <= r


def test_k3_top():
    lag = pair(3, 100)[LAGRANGE]
    assert within(lag.weights[-1], Surd.sqrt(21), Fraction(1, 100))
    assert within(lag.weights[0], Surd.sqrt(5), Fraction(1, 100))


@pytest.mark.parametrize("k,q", [(2, 50), (2, 100), (3, 50)])
def test_spectrum_metadata(k, q):
    cs = cylinders(k, q)
    sp = pair(k, q)
    for kind in (LAGRANGE, MARKOV):
        sa = sp[kind]
        assert sa.kind == kind and sa.q == q and sa.ctx.k == k
        assert list(sa.weights) == sorted(set(sa.weights))
        index = {w: i for i, w in enumerate(cs.leaves)}
        for w, (p, a0, s) in zip(sa.weights, sa.provenance):
            assert shift_weight(cs, index[p], a0, index[s]) == w
    assert set(sp[LAGRANGE].weights) <= set(sp[MARKOV].weights)
    assert spectrum(cs, LAGRANGE).weights == sp[LAGRANGE].weights


def test_range_bounds():
    for k, q in [(2, 100), (3, 100)]:
        ctx = make_context(k)
        r = Fraction(1, q)
        for sa in pair(k, q).values():
            assert compare_values(Surd.sqrt(5) - r, sa.weights[0]) <= 0
            assert compare_values(sa.weights[-1], Surd.sqrt(ctx.d) + r) <= 0


def test_hausdorff_distance():
    s3 = Surd.sqrt(3)
    xs = [s3, s3 + 1]
    ys = [s3 + Fraction(1, 10), s3 + 2]
    assert hausdorff_distance(xs, ys) == 1
    assert hausdorff_distance(xs, xs) == 0
    with pytest.raises(ValueError):
        hausdorff_distance([], ys)


@pytest.mark.parametrize("k,q", [(2, 1000), (3, 100)])
def test_solvers_agree_on_larger_graphs(k, q):
    g = WeightedDigraph.from_product(product(k, q, True))
    assert incremental_weight_sets(g) == offline_weight_sets(g)
