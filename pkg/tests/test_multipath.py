import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hornlab.trop import NEG_INF, GZPattern, gz_check
from hornlab.network import (concat_all, lindstrom_minor, random_network, standard_network,
                             standard_weighting)
from hornlab.multipath import (EnumerationCapExceeded, MFunction, calA, calA_inverse,
                               calA_matrix, check_multi_gz, enumerate_multipaths,
                               family_maxima, gz_trop, m_alpha, m_alpha_minor_route, m_map,
                               max_multipath, simplex_points, tropical_singular_values)
from hornlab.samples import (WORKED_EXAMPLE_M, make_rng, random_full_weighting,
                             random_gz_pattern, random_gz_weighting, worked_example)

seeds = st.integers(0, 10 ** 6)


def test_worked_example_values():
    m = m_map(worked_example())
    assert m.values == WORKED_EXAMPLE_M
    f1, f2, f3 = worked_example()
    assert tropical_singular_values(f1) == (2, 1)
    assert tropical_singular_values(concat_all([f2, f3])) == (3, -1)


def test_single_network_gives_singular_value_sums():
    w = worked_example()[0]
    m = m_map([w])
    assert [m[(l,)] for l in (1, 2)] == family_maxima(w) == [2, 3]


def test_simplex_points():
    assert len(simplex_points(2, 3)) == 10
    assert len(simplex_points(3, 3)) == 20
    assert simplex_points(1, 2) == [(0, 0), (0, 1), (1, 0)]


def _brute_multipath_max(ws, alpha):
    # independent oracle: raw paths of the concatenated network from its
    # sources to seam vertices, combined by a disjointness search
    from hornlab.multipath import factor_vertex_maps
    w = concat_all(ws)
    net = w.network
    maps = factor_vertex_maps([x.network for x in ws])
    seams = [[maps[t][v] for v in x.network.sinks] for t, x in enumerate(ws)]
    cands = []
    for t, seam in enumerate(seams):
        for src in net.sources:
            for end in seam:
                for vs, es in net.paths(src, end):
                    cands.append((t, frozenset(vs), src, sum(w.weights[e] for e in es)))
    best = [NEG_INF]

    def rec(start, need, used, srcs, acc):
        if not any(need):
            best[0] = max(best[0], acc)
            return
        for c in range(start, len(cands)):
            t, vs, src, wt = cands[c]
            if need[t] and not (vs & used) and src not in srcs:
                need[t] -= 1
                rec(c + 1, need, used | vs, srcs | {src}, acc + wt)
                need[t] += 1

    rec(0, list(alpha), frozenset(), frozenset(), 0)
    return best[0]


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(1, 2))
def test_brute_force_oracle(seed, n, k):
    rng = make_rng(seed)
    ws = [random_full_weighting(random_network(n, rng.randint(0, 2), rng), rng) for _ in range(k)]
    for a in simplex_points(n, k):
        if any(a):
            assert m_alpha(ws, a) == _brute_multipath_max(ws, a)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(1, 3))
def test_three_routes_agree(seed, n, k):
    rng = make_rng(seed)
    ws = [random_full_weighting(random_network(n, rng.randint(0, 3), rng), rng) for _ in range(k)]
    for a in simplex_points(n, k):
        if any(a):
            v = m_alpha(ws, a)
            assert v == m_alpha_minor_route(ws, a)
            assert v == max((wt for _, wt in enumerate_multipaths(ws, a)), default=NEG_INF)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_multipaths_are_vertex_disjoint(seed, n):
    rng = make_rng(seed)
    ws = [random_full_weighting(standard_network(n), rng) for _ in range(2)]
    for a in simplex_points(n, 2):
        for mp, _ in enumerate_multipaths(ws, a):
            # glued seam vertices appear once per path that crosses them
            inner = [v for fam in mp.families for p in fam for v in p[1:]]
            assert len(inner) == len(set(inner))
            assert len(mp.sources) == sum(a)
    best, wit = max_multipath(ws, (1, 0))
    assert best == m_alpha(ws, (1, 0))


def test_k1_equals_best_minor():
    rng = make_rng(11)
    w = random_full_weighting(standard_network(3), rng)
    for l in range(1, 4):
        best = max(lindstrom_minor(w, I, J)
                   for I in itertools.combinations(range(1, 4), l)
                   for J in itertools.combinations(range(1, 4), l))
        assert m_alpha([w], (l,)) == best


def test_calA_small_case():
    w = standard_weighting(2, {(1, 1): 0, (2, 1): 1, (2, 2): 0})
    assert calA(w) == GZPattern([[0], [1, 0]])


def test_calA_matrix_is_unitriangular():
    for n in range(1, 5):
        labs, mat = calA_matrix(n)
        for i in range(len(labs)):
            assert mat[i][i] == 1
            assert all(mat[i][j] == 0 for j in range(i + 1, len(labs)))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_calA_roundtrip(seed, n):
    p = random_gz_pattern(n, make_rng(seed))
    assert calA(calA_inverse(p)) == p


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3))
def test_gz_weightings(seed, n):
    rng = make_rng(seed)
    w = random_gz_weighting(n, rng)
    assert gz_trop(w) == calA(w)
    ws = [w] + [random_gz_weighting(n, rng) for _ in range(2)]
    for part in (ws[:2], ws[1:], ws):
        assert check_multi_gz(part)


def test_non_gz_weighting_breaks_multi_gz():
    # slant weight 5 makes the path 2 -> 1 beat the pinned choice
    w = standard_weighting(2, {(1, 1): 0, (2, 1): 5, (2, 2): 9})
    assert not gz_check(calA(w))
    assert not check_multi_gz([w])


def test_cap(monkeypatch):
    ws = worked_example()
    with pytest.raises(EnumerationCapExceeded):
        m_map(ws, cap=2)
    monkeypatch.setenv("HORNLAB_MAX_STATES", "2")
    with pytest.raises(EnumerationCapExceeded):
        m_map(ws)


def test_mfunction_json_and_domain():
    m = m_map(worked_example())
    assert MFunction.from_json(m.to_json()) == m
    vals = dict(m.values)
    del vals[(1, 0, 0)]
    with pytest.raises(ValueError):
        MFunction(2, 3, vals)
    vals = dict(m.values)
    vals[(0, 0, 0)] = 1
    with pytest.raises(ValueError):
        MFunction(2, 3, vals)


def test_neg_inf_values():
    # the straight network has no path between different lines
    rng = make_rng(2)
    net = random_network(2, 0, rng)
    w = random_full_weighting(net, rng)
    assert m_alpha([w], (2,)) != NEG_INF
    w2 = standard_weighting(2, {(1, 1): "-inf", (2, 1): 0, (2, 2): 0})
    assert m_alpha([w2], (1,)) == 0
    assert m_alpha([w2], (2,)) is NEG_INF
