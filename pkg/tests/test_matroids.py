import itertools
import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidkit import graphs as gr
from rigidkit import matroids as mt
from rigidkit.matroids import (Birigidity, BirigidityAB, Hyperconnectivity, RankQueryConfig,
                               Rigidity, SymCompletion)
from tests.conftest import all_graphs


def rational_rank(rows):
    """Rank over Q by exact elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def rational_matrix(g, kind, seed=1):
    """Independent construction of the generic matrix with integer points."""
    rnd = random.Random(seed)
    if isinstance(kind, BirigidityAB):
        a, b = kind.a, kind.b
        p = [[rnd.randint(-40, 40) for _ in range(a)] for _ in range(g.a)]
        q = [[rnd.randint(-40, 40) for _ in range(b)] for _ in range(g.b)]
        rows = []
        for x, y in g.edges:
            row = [0] * (b * g.a + a * g.b)
            row[x * b:(x + 1) * b] = q[y - g.a]
            off = g.a * b + (y - g.a) * a
            row[off:off + a] = p[x]
            rows.append(row)
        return rows
    d = kind.d
    p = [[rnd.randint(-40, 40) for _ in range(d)] for _ in range(g.n)]
    rows = []
    for u, v in g.edges:
        row = [0] * (d * g.n)
        if u == v:
            row[u * d:(u + 1) * d] = p[u]
        elif isinstance(kind, SymCompletion):
            row[u * d:(u + 1) * d], row[v * d:(v + 1) * d] = p[v], p[u]
        elif isinstance(kind, Hyperconnectivity):
            row[u * d:(u + 1) * d], row[v * d:(v + 1) * d] = p[v], [-x for x in p[u]]
        else:
            diff = [x - y for x, y in zip(p[u], p[v])]
            row[u * d:(u + 1) * d], row[v * d:(v + 1) * d] = diff, [-x for x in diff]
        rows.append(row)
    return rows


def generic_rational_rank(g, kind):
    if not g.num_edges:
        return 0
    return max(rational_rank(rational_matrix(g, kind, s)) for s in range(3))


CASES = [
    (gr.complete_semisimple(4), SymCompletion(2)),
    (gr.complete_semisimple(5), SymCompletion(3)),
    (gr.complete_graph(5), Hyperconnectivity(2)),
    (gr.complete_graph(6), Rigidity(2)),
    (gr.complete_graph(5), Rigidity(3)),
    (gr.complete_bipartite(3, 4), Birigidity(2)),
    (gr.complete_bipartite(3, 3), BirigidityAB(1, 2)),
    (gr.cycle_graph(5), Hyperconnectivity(2)),
    (gr.complete_tripartite(3, 3, 1), Hyperconnectivity(3)),
]


@pytest.mark.parametrize("g, kind", CASES, ids=lambda x: getattr(x, "name", None))
def test_rank_matches_rational_route(g, kind):
    assert mt.generic_rank(g, kind) == generic_rational_rank(g, kind)


def test_frozen_ranks():
    # values computed by the rational-elimination route above
    assert mt.generic_rank(gr.complete_bipartite(3, 3).to_semisimple(), Hyperconnectivity(2)) == 8
    assert mt.generic_rank(gr.complete_graph(6), Rigidity(2)) == 9
    assert mt.generic_rank(gr.complete_graph(5), Rigidity(3)) == 9
    assert mt.generic_rank(gr.complete_bipartite(3, 3), BirigidityAB(1, 2)) == 7


@pytest.mark.parametrize("n", range(2, 8))
def test_laman_count(n):
    assert mt.generic_rank(gr.complete_graph(n), Rigidity(2)) == 2 * n - 3


def test_formula_edge_cases():
    assert mt.rank_formula(SymCompletion(3), 2) == 3
    assert mt.rank_formula(Hyperconnectivity(3), 2) == 1
    assert mt.rank_formula(Birigidity(3), (2, 5)) == 10
    assert mt.rank_formula(BirigidityAB(2, 3), (2, 2)) == 4
    with pytest.raises(ValueError):
        mt.rank_formula(Rigidity(2), 4)


def test_row_patterns():
    g = gr.SemisimpleGraph.from_edges(3, [(0, 1), (2, 2)])
    cfg = RankQueryConfig()
    for kind in (SymCompletion(2), Hyperconnectivity(2)):
        if isinstance(kind, Hyperconnectivity):
            g = g.delete_edge(2, 2)
        asg = mt.GenericAssignment.draw(g, kind, cfg.prime, 0, 0)
        m = np.array(mt.build_matrix(g, kind, asg).tolist(), dtype=object)
        p = asg.p.astype(object)
        assert list(m[0, 0:2]) == list(p[1])
        if isinstance(kind, SymCompletion):
            assert list(m[0, 2:4]) == list(p[0])
            assert list(m[1, 4:6]) == list(p[2]) and not any(m[1, :4])
        else:
            assert list(m[0, 2:4]) == [(cfg.prime - x) % cfg.prime for x in p[0]]
        assert not any(m[0, 4:6])


def test_loops_rejected_outside_sym():
    g = gr.complete_semisimple(3)
    for kind in (Hyperconnectivity(2), Rigidity(2)):
        with pytest.raises(mt.KindMismatchError):
            mt.generic_rank(g, kind)
    with pytest.raises(mt.KindMismatchError):
        mt.generic_rank(g, Birigidity(2))
    with pytest.raises(mt.KindMismatchError):
        mt.generic_rank(gr.complete_bipartite(2, 2), Hyperconnectivity(2))


@pytest.mark.parametrize("n", range(1, 5))
def test_d1_oracles_exhaustive(n):
    for g in all_graphs(n, loops=True):
        assert mt.generic_rank(g, SymCompletion(1)) == mt.even_cycle_rank(g)
        simple = gr.SemisimpleGraph(g.n, g.non_loop_edges)
        assert mt.generic_rank(simple, Hyperconnectivity(1)) == mt.cycle_matroid_rank(simple)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7), st.sampled_from([1, 2, 3]),
       st.sampled_from(["sym", "hyper", "rigid"]))
def test_rank_bounds_and_monotone(seed, n, d, name):
    rng = np.random.default_rng(seed)
    g = gr.random_graph(n, 0.5, rng, loops=0.4 if name == "sym" else 0.0)
    kind = mt.parse_kind(name, d)
    r = mt.generic_rank(g, kind)
    assert 0 <= r <= g.num_edges
    if name != "rigid":
        assert r <= mt.rank_formula(kind, n)
    for e in g.edges[:3]:
        assert mt.generic_rank(g.delete_edge(*e), kind) in (r - 1, r)
    basis = mt.generic_basis(g, kind)
    assert len(basis) == r
    assert mt.is_independent(gr.SemisimpleGraph.from_edges(n, basis), kind)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 5), st.sampled_from([1, 2, 3]))
def test_bipartite_ceiling(seed, a, b, d):
    g = gr.random_bipartite(a, b, 0.6, np.random.default_rng(seed))
    r = mt.generic_rank(g, Birigidity(d))
    assert r <= mt.rank_formula(Birigidity(d), (a, b))
    assert r == mt.generic_rank(g, BirigidityAB(d, d))


def test_closure_fixed_point():
    rng = np.random.default_rng(5)
    for _ in range(6):
        g = gr.random_graph(6, 0.45, rng)
        kind = Hyperconnectivity(2)
        c = mt.closure(g, kind)
        assert mt.generic_rank(c, kind) == mt.generic_rank(g, kind)
        assert mt.is_closed(c, kind)
        assert set(g.edges) <= set(c.edges)


def test_closure_of_rigid_graph_is_complete():
    g = gr.complete_graph(5).delete_edge(0, 1)
    assert mt.is_rigid(g, Hyperconnectivity(2))
    assert mt.closure(g, Hyperconnectivity(2)) == gr.complete_graph(5)
    assert mt.is_linked(g, Hyperconnectivity(2), 0, 1)
    with pytest.raises(gr.GraphError):
        mt.is_linked(g, Hyperconnectivity(2), 0, 0)


def test_link_check_examples():
    assert mt.rigidity_completability_link_check(gr.complete_graph(4), 2)
    assert mt.rigidity_completability_link_check(gr.cycle_graph(5), 2)
    with pytest.raises(gr.GraphError):
        mt.rigidity_completability_link_check(gr.complete_semisimple(3), 2)


def test_trials_raise_estimate():
    g = gr.complete_graph(5)
    one = mt.generic_rank(g, Rigidity(2), RankQueryConfig(trials=1))
    assert one <= mt.generic_rank(g, Rigidity(2), RankQueryConfig(trials=4))


def test_small_prime_agrees_generically():
    g = gr.complete_semisimple(5)
    cfg = RankQueryConfig(trials=6, prime=1_000_003)
    assert mt.generic_rank(g, SymCompletion(2), cfg) == mt.rank_formula(SymCompletion(2), 5)


def test_parse_kind():
    assert mt.parse_kind("sym", 2) == SymCompletion(2)
    assert mt.parse_kind("ab", ab=(1, 2)) == BirigidityAB(1, 2)
    with pytest.raises(ValueError):
        mt.parse_kind("unknown", 2)
    with pytest.raises(ValueError):
        mt.parse_kind("hyper")


def test_config_validation():
    with pytest.raises(ValueError):
        RankQueryConfig(trials=0)
    assert RankQueryConfig(trials=3).boosted().trials == 12
