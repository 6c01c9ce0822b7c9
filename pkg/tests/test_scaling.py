import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hornlab.trop import gz_slack
from hornlab.network import standard_weighting
from hornlab.horncheck import horn_trop
from hornlab.multipath import m_map
from hornlab.scaling import (closed_form_error, convergence_error, convergence_experiment,
                             distance_to_octahedron_locus, f_trace, genericity_filter, gz_s,
                             haar_unitary, hermitian_eigenvalues, horn_s, lower_retraction,
                             m_s, mu_s, n2_inequalities, n2_products, random_angles,
                             random_generic_weighting, random_n2_triples, sample_lower,
                             singular_values, trial_rng, zeta_s, concentration_experiment)
from hornlab.samples import make_rng, random_gz_weighting, worked_example

seeds = st.integers(0, 10 ** 6)
CLOSED = {(1, 1): 1, (2, 1): 0, (2, 2): 0}


def _f(x):
    return [[complex(v) for v in row] for row in x]


def test_mu_s():
    assert mu_s(0, 1, 3) == 1
    assert abs(mu_s(1, 1, 2) - math.e ** 2) < 1e-12
    assert abs(mu_s(1, 1j, 1) - math.e * 1j) < 1e-12
    with pytest.raises(OverflowError):
        mu_s(1, 1, 800)
    with pytest.raises(ValueError):
        mu_s(1, 1, 0)


def test_m_s_closed_form_case():
    A = _f(m_s(standard_weighting(2, CLOSED), s=10))
    e = math.exp(10)
    assert np.allclose(A, [[e, 0], [e, 1]], rtol=1e-12)


def test_eigen_and_singular_values():
    ev = hermitian_eigenvalues([[2, 0], [0, 1]])
    assert [float(v) for v in ev] == [2, 1]
    ev = hermitian_eigenvalues([[2, 1], [1, 2]])
    assert abs(ev[0] - 3) < 1e-12 and abs(ev[1] - 1) < 1e-12
    sv = singular_values([[3, 0], [0, mpmath.mpf(1) / 3]])
    assert abs(sv[0] - 3) < 1e-12 and abs(sv[1] - mpmath.mpf(1) / 3) < 1e-12
    sv = singular_values(m_s(standard_weighting(2, CLOSED), s=10))
    assert 1.0 <= float(mpmath.log(sv[0])) / 10 <= 1.05
    with pytest.raises(ArithmeticError):
        singular_values([[1, 2], [2, 4]])


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_singular_values_against_numpy(seed, n):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = G + G.conj().T
    ev = [float(v) for v in hermitian_eigenvalues(H.tolist())]
    assert abs(sum(ev) - np.trace(H).real) < 1e-10
    assert np.allclose(ev, sorted(np.linalg.eigvalsh(H), reverse=True), atol=1e-10)
    U, V = haar_unitary(n, rng), haar_unitary(n, rng)
    sv = [float(v) for v in singular_values(G.tolist())]
    sv2 = [float(v) for v in singular_values((U @ G @ V).tolist())]
    assert np.allclose(sv, np.linalg.svd(G, compute_uv=False), rtol=1e-9)
    assert np.allclose(sv, sv2, rtol=1e-9)


def test_gz_s_diagonal():
    s = 2
    p = gz_s([[math.exp(3 * s), 0], [0, math.exp(s)]], s)
    assert abs(p.m(1, 1) - 3) < 1e-12
    assert abs(p.m(1, 2) - 3) < 1e-12 and abs(p.m(2, 2) - 4) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_gz_s_lands_in_gz_cone(seed):
    # lower-triangular with positive diagonal; full matrices need not interlace
    rng = np.random.default_rng(seed)
    A = np.tril(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    A[np.diag_indices(3)] = np.abs(A.diagonal())
    assert gz_slack(gz_s(A.tolist(), 1.0)) >= -1e-9


def test_closed_form_rate():
    w = standard_weighting(2, CLOSED)
    for s in (5, 10, 20):
        err = convergence_error(w, None, s)
        assert abs(err - closed_form_error(s)) < 1e-12
        assert abs(err - math.log(2) / (2 * s)) < 1e-4
    assert abs(convergence_error(w, None, 10) - 0.035) < 1e-3
    with pytest.raises(OverflowError):
        convergence_error(w, None, 400)


def test_generic_weightings_converge_exponentially():
    rng = make_rng(21)
    for n in (2, 3):
        w = random_generic_weighting(n, rng, delta=0.5)
        phi = random_angles(n, rng)
        out = convergence_experiment(w, phi, [5, 10, 20])
        errs = [r["error"] for r in out["rows"]]
        assert errs[0] > errs[1] > errs[2]
        assert out["slope"] <= -0.4


def test_genericity_filter():
    w = standard_weighting(2, {(1, 1): 0, (2, 1): 0, (2, 2): 0})
    assert not genericity_filter(w, 0.1)
    assert genericity_filter(random_generic_weighting(2, make_rng(1)), 0.5)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 3))
def test_zeta_roundtrip(seed, n):
    rng = make_rng(seed)
    w = random_generic_weighting(n, rng)
    phi = random_angles(n, rng)
    w2, phi2 = zeta_s(m_s(w, phi, 1), 1)
    assert max(abs(float(a) - float(b)) for a, b in zip(w.weights, w2.weights)) < 1e-8
    assert all(abs(phi[e] - complex(phi2[e])) < 1e-8 for e in phi)


def test_zeta_small_case():
    w, phi = zeta_s([[6, 0], [2, 1]], 1)
    net = w.network
    got = {lab: float(w.weights[e]) for lab, e in net.essential.items()}
    assert abs(got[(1, 1)] - math.log(6)) < 1e-12
    assert abs(got[(2, 1)] - math.log(1 / 3)) < 1e-12
    assert abs(got[(2, 2)]) < 1e-12
    assert all(abs(complex(v) - 1) < 1e-12 for v in phi.values())
    with pytest.raises(ArithmeticError):
        zeta_s([[6, 0], [0, 1]], 1)


def test_horn_s_near_horn_trop():
    ws = worked_example()
    ref = np.ravel(horn_trop(m_map(ws))).astype(float)
    mats = [m_s(w, s=20) for w in ws]
    got = np.ravel([[float(v) for v in row] for row in horn_s(*mats, 20)])
    assert np.abs(got - ref).max() < 0.2
    I = [[1, 0], [0, 1]]
    assert np.abs(np.ravel([[float(v) for v in r] for r in horn_s(I, I, I, 3)])).max() < 1e-20


def test_sampler_has_prescribed_singular_values():
    rng = trial_rng(0, 0)
    L = sample_lower([1, 0, -1], 2, rng)
    assert np.allclose(np.triu(L, 1), 0)
    assert np.all(np.diag(L).real > 0) and np.allclose(np.diag(L).imag, 0)
    assert np.allclose(np.linalg.svd(L, compute_uv=False), np.exp([2, 0, -2]))
    A = haar_unitary(3, rng)
    assert np.allclose(lower_retraction(A) @ lower_retraction(A).conj().T, np.eye(3))


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(2, 3))
def test_gz_boundaries_are_on_the_locus(seed, n):
    rng = make_rng(seed)
    m = m_map([random_gz_weighting(n, rng) for _ in range(3)])
    t = np.ravel(horn_trop(m)).astype(float)
    assert distance_to_octahedron_locus(t, n) <= 1e-9
    t2 = t.copy()
    t2[rng.randrange(len(t))] += 1
    d = distance_to_octahedron_locus(t2, n)
    assert 0 <= d <= 1 + 1e-9


def test_distance_methods_agree():
    rng = np.random.default_rng(4)
    for _ in range(3):
        t = rng.uniform(-3, 3, 12)
        a = distance_to_octahedron_locus(t, 2)
        b = distance_to_octahedron_locus(t, 2, method="local", starts=10)
        assert a > 0 and abs(a - b) < 1e-3
    assert distance_to_octahedron_locus(np.zeros(12), 2) == 0


def test_concentration_shrinks():
    rows = concentration_experiment((1, -1), (1, -1), (1, -1), [2, 5, 10], 60, seed=0)
    med = [r["median"] for r in rows]
    assert med[0] > med[1] > med[2]
    rows = concentration_experiment((0, 0), (0, 0), (0, 0), [5], 5)
    assert rows[0]["max"] < 1e-9


def test_f_trace():
    assert f_trace(np.eye(2)) == 2
    assert f_trace([[2, 0], [0, 0.5]]) == 4.25
    with pytest.raises(ValueError):
        f_trace([[2, 0], [0, 1]])


def test_n2_inequalities_hold():
    rng = np.random.default_rng(0)
    u, v = random_n2_triples(20000, rng)
    rep = n2_inequalities(n2_products(u, v))
    assert min(rep["min_slack"]) >= -1e-9
    for b in rep["bound"]:
        assert b["max_excess"] <= b["limit"]
    one = n2_products(np.ones((1, 3)), np.zeros((1, 3)))
    assert n2_inequalities(one)["min_slack"][0] > 0
