from fractions import Fraction
import math

import pytest
from hypothesis import assume, given, settings, strategies as st
import sympy

from hornlab.trop import NEG_INF
from hornlab.network import RATIONAL, Weighting, correspondence_matrix, standard_network
from hornlab.horncheck import fill_domain, small_tetrahedra
from hornlab.multipath import m_alpha, simplex_points
from hornlab.minors import (MinorError, as_matrix, cauchy_binet_expansion, det,
                            geometric_fill, geometric_octahedron_residual, gz_pattern_of, hw,
                            identity, inverse, matmul, matprod, minor, multi_corner_minor,
                            multipath_minor_sum, m_tilde, m_values, phi_bk, phi_bk_lambda,
                            phi_k, phi_k_from_minors, random_matrix, random_positive_lambdas,
                            random_unipotent, sorted_block_minor_sum, theta_gz, u_action,
                            w0_bar)
from hornlab.samples import make_rng, random_full_weighting, random_gz_weighting

seeds = st.integers(0, 10 ** 6)
G = [[1, 0], [2, 3]]


def test_small_examples():
    assert minor(G, (1, 2), (1, 2)) == 3
    assert minor(G, (), ()) == 1
    assert multi_corner_minor([G], (1,)) == 2
    assert multi_corner_minor([G], (2,)) == 3
    A, B = [[1, 0], [2, 3]], [[1, 0], [4, 5]]
    assert multi_corner_minor([A, B], (1, 1)) == 12
    assert cauchy_binet_expansion([A, B], (1, 1)) == 12
    assert multi_corner_minor([A, B], (0, 0)) == 1
    assert hw(G) == (Fraction(3, 2), 2)
    with pytest.raises(MinorError):
        hw(identity(2))
    with pytest.raises(ValueError):
        minor(G, (1,), (1, 2))


def test_det_matches_sympy():
    rng = make_rng(5)
    for n in range(1, 6):
        m = random_matrix(n, rng)
        assert det(m) == sympy.Matrix(m).det()
    assert inverse(G) == [[1, 0], [Fraction(-2, 3), Fraction(1, 3)]]


def test_m_tilde_against_sympy():
    # the coefficient definition, expanded symbolically as an oracle
    rng = make_rng(7)
    for n, k in ((2, 1), (2, 2), (3, 2), (3, 3)):
        gs = [random_matrix(n, rng) for _ in range(k)]
        xs = sympy.symbols("x0:%d" % (k + 1))
        tot = xs[0] * sympy.eye(n)
        for t in range(1, k + 1):
            tot += xs[t] * sympy.Matrix(matprod(gs[:t]))
        poly = sympy.Poly(sympy.expand(tot.det()), *xs)
        for a in simplex_points(n, k):
            mono = (n - sum(a),) + tuple(a)
            assert m_tilde(gs, a) == poly.coeff_monomial(mono)


def test_two_readings_of_m_tilde_differ():
    # coefficient of x0 x1 in det(x0 + x1 diag(2, 3)) is the trace 5; the
    # sum of sorted-column minors of [Id, g] is 1
    g = [[2, 0], [0, 3]]
    assert m_tilde([g], (1,)) == 5
    assert sorted_block_minor_sum([g], (1,)) == 1
    assert multipath_minor_sum([g], (1,)) == 5


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(1, 3))
def test_cauchy_binet(seed, n, k):
    rng = make_rng(seed)
    gs = [random_matrix(n, rng) for _ in range(k)]
    for a in simplex_points(n, k):
        assert cauchy_binet_expansion(gs, a) == multi_corner_minor(gs, a)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 4))
def test_octahedron_residual_vanishes(seed, n):
    rng = make_rng(seed)
    gs = [random_matrix(n, rng) for _ in range(3)]
    vals = m_values(gs)
    for t in small_tetrahedra(n):
        assert geometric_octahedron_residual(gs, *t, vals=vals) == 0


def test_residual_on_identities():
    I = identity(2)
    assert geometric_octahedron_residual([I, I, I], 0, 0, 0) == 0


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(1, 3))
def test_unipotent_invariance(seed, n, k):
    rng = make_rng(seed)
    gs = [random_matrix(n, rng) for _ in range(k)]
    us = [random_unipotent(n, rng) for _ in range(k + 1)]
    assert m_values(u_action(us, gs)) == m_values(gs)
    assert u_action([identity(n)] * (k + 1), gs) == [as_matrix(g) for g in gs]


def test_m_tilde_is_not_invariant():
    # witness by seeded search
    rng = make_rng(13)
    for _ in range(50):
        gs = [random_matrix(2, rng) for _ in range(2)]
        us = [random_unipotent(2, rng) for _ in range(3)]
        if m_tilde(u_action(us, gs), (1, 0)) != m_tilde(gs, (1, 0)):
            return
    pytest.fail("no witness found")


def test_u_action_rejects_non_unipotent():
    with pytest.raises(ValueError):
        u_action([G, identity(2)], [G])


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4), st.sampled_from(["k0-i0", "j0-top"]))
def test_geometric_fill(seed, n, direction):
    rng = make_rng(seed)
    gs = [random_matrix(n, rng) for _ in range(3)]
    vals = m_values(gs)
    try:
        filled = geometric_fill({a: vals[a] for a in fill_domain(n, direction)}, n, direction)
    except MinorError:
        assume(False)
    assert filled == vals


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 4))
def test_theta_gz_roundtrip_and_potential(seed, n):
    lams = random_positive_lambdas(n, make_rng(seed))
    b = theta_gz(lams)
    assert gz_pattern_of(b) == lams
    if n > 1:
        assert phi_bk(b) == phi_bk_lambda(lams)
    # the top row of the pattern is the highest weight, reversed
    assert hw(b) == tuple(reversed(lams[-1]))


def test_theta_gz_small_case():
    assert theta_gz([(1,), (2, 3)]) == [[6, 0], [2, 1]]
    assert phi_bk([[6, 0], [2, 1]]) == Fraction(7, 2)
    assert gz_pattern_of([[6, 0], [2, 1]]) == [(1,), (2, 3)]
    ones = theta_gz([(1,) * l for l in range(1, 4)])
    assert all(ones[i][i] == 1 for i in range(3))
    with pytest.raises(MinorError):
        phi_bk(identity(2))
    with pytest.raises(MinorError):
        gz_pattern_of(identity(2))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3))
def test_hw_recovers_torus_factor(seed, n):
    rng = make_rng(seed)
    d = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
    h = [[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    u, v = random_unipotent(n, rng), random_unipotent(n, rng)
    g = matmul(matmul(matmul(u, h), w0_bar(n)), v)
    assert hw(g) == tuple(d)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3))
def test_phi_k_two_ways(seed, n):
    rng = make_rng(seed)
    gs = [theta_gz(random_positive_lambdas(n, rng)) for _ in range(3)]
    assert phi_k(gs) == phi_k_from_minors(gs)
    assert phi_k(gs[:2]) == phi_k_from_minors(gs[:2])
    # splitting of the three-factor potential
    assert phi_k(gs) == phi_k(gs[:2]) + phi_k([matmul(gs[0], gs[1]), gs[2]])


def _scaled(w, q):
    vals = [Fraction(0) if x is NEG_INF else q ** x for x in w.weights]
    return correspondence_matrix(Weighting(w.network, vals, RATIONAL))


def _log_q(v, bits):
    return (math.log2(v.numerator) - math.log2(v.denominator)) / bits


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 3), st.booleans())
def test_tropical_limit(seed, n, gz):
    # exact base-2^20 scaling; fewer than 2^10 tied multipaths shift log_q by < 1/2
    rng = make_rng(seed)
    bits = 20
    q = Fraction(2) ** bits
    if gz:
        ws = [random_gz_weighting(n, rng) for _ in range(3)]
    else:
        ws = [random_full_weighting(standard_network(n), rng) for _ in range(3)]
    gs = [_scaled(w, q) for w in ws]
    for a in simplex_points(n, 3):
        m = m_alpha(ws, a)
        full = multipath_minor_sum(gs, a)
        assert abs(_log_q(full, bits) - m) < 0.5
        corner = multi_corner_minor(gs, a)
        if gz:
            assert abs(_log_q(corner, bits) - m) < 0.5
        elif corner > 0:
            # a single summand of the full sum
            assert _log_q(corner, bits) < m + 0.5
