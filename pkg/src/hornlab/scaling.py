"""Floating-point side: matrices e^{s w}, singular values, scaling limits.

Precise work (convergence rates, zeta_s) runs in mpmath at a precision
large enough for the dynamic range of e^{s w}; Monte-Carlo work on 2x2
matrices uses numpy closed forms.
"""

from fractions import Fraction
import contextlib
import math
import os
import sys

import mpmath
import numpy as np

from .trop import NEG_INF, GZPattern, gz_check
from .network import COMPLEX, Weighting, correspondence_matrix, standard_network
from .multipath import _calA_structure, alpha_families, gz_trop

EXP_LIMIT = 700     # |s x| accepted by mu_s
S_CAP = 300         # |s x| allowed inside experiments


# ---------------------------------------------------------------------------
# mu_s and m_s

def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def mu_s(x, phi, s, limit=EXP_LIMIT):
    """e^{s x} phi as an mpmath complex."""
    if s == 0:
        raise ValueError("s must be nonzero")
    if abs(float(x) * float(s)) > limit:
        raise OverflowError("|s x| = %g exceeds %d" % (abs(float(x) * float(s)), limit))
    phi = mpmath.mpc(phi)
    # angles arrive as doubles; renormalize so |phi| = 1 at working precision
    return mpmath.exp(_mpf(s) * _mpf(x)) * phi / abs(phi)


def unit(theta):
    return complex(math.cos(theta), math.sin(theta))


def m_s(w, phi=None, s=1, limit=EXP_LIMIT):
    """Correspondence matrix of the weighting e^{s w(e)} phi(e) (mpmath complex).

    phi maps edge index -> unit complex; missing edges get 1.  Edges of
    weight -inf carry 0.
    """
    phi = phi or {}
    vals = []
    for e, x in enumerate(w.weights):
        if x is NEG_INF:
            vals.append(mpmath.mpc(0))
        else:
            vals.append(mu_s(x, phi.get(e, 1), s, limit))
    return correspondence_matrix(Weighting(w.network, vals, COMPLEX))


def slant_edges(n):
    net = standard_network(n)
    return sorted(e for (l, i), e in net.essential.items() if i < l)


def random_angles(n, rng):
    """Unit-modulus angles on the slants of the standard network."""
    return {e: unit(rng.uniform(0, 2 * math.pi)) for e in slant_edges(n)}


# ---------------------------------------------------------------------------
# eigenvalues and singular values

def _mpmat(A):
    return [[mpmath.mpc(v) for v in row] for row in A]


def _conj_t(A):
    return [[mpmath.conj(A[j][i]) for j in range(len(A))] for i in range(len(A[0]))]


def _mul(A, B):
    return [[mpmath.fsum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _fro(A):
    return mpmath.sqrt(mpmath.fsum(abs(v) ** 2 for row in A for v in row))


def hermitian_eigenvalues(H, tol=None, max_sweeps=100):
    """Descending eigenvalues by cyclic complex Jacobi rotations.

    Each rotation first turns h_pq real by a diagonal phase, then applies
    the real symmetric rotation that kills it.
    """
    A = _mpmat(H)
    n = len(A)
    norm = _fro(A)
    if norm == 0:
        return tuple(mpmath.mpf(0) for _ in range(n))
    skew = _fro([[A[i][j] - mpmath.conj(A[j][i]) for j in range(n)] for i in range(n)])
    if skew > mpmath.mpf("1e-10") * norm:
        raise ValueError("matrix is not Hermitian")
    if tol is None:
        tol = max(mpmath.mpf(10) ** (-(mpmath.mp.dps - 3)), mpmath.mpf(0))
    for _ in range(max_sweeps):
        off = mpmath.sqrt(mpmath.fsum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(A[p][q])
                if r == 0:
                    continue
                ph = A[p][q] / r
                theta = (A[q][q].real - A[p][p].real) / (2 * r)
                t = (1 if theta >= 0 else -1) / (abs(theta) + mpmath.sqrt(theta ** 2 + 1))
                c = 1 / mpmath.sqrt(t ** 2 + 1)
                sn = t * c
                # U = D P with D = diag(.., conj(ph) at q, ..)
                U = [[mpmath.mpc(int(i == j)) for j in range(n)] for i in range(n)]
                U[p][p] = c
                U[p][q] = sn
                U[q][p] = -sn * mpmath.conj(ph)
                U[q][q] = c * mpmath.conj(ph)
                A = _mul(_mul(_conj_t(U), A), U)
    else:
        raise ArithmeticError("Jacobi did not converge in %d sweeps" % max_sweeps)
    return tuple(sorted((A[i][i].real for i in range(n)), reverse=True))


def singular_values(A):
    """Descending singular values: square roots of the eigenvalues of A A*."""
    A = _mpmat(A)
    ev = hermitian_eigenvalues(_mul(A, _conj_t(A)))
    floor = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)) * ev[0]
    if ev[-1] <= floor:
        raise ArithmeticError("matrix is singular to working precision")
    return tuple(mpmath.sqrt(v) for v in ev)


def adaptive(fn, dps=30, max_dps=4000):
    """Evaluate fn() at dps and 2 dps until the float lists agree to 10^(-dps/2)."""
    def at(d):
        with mpmath.workdps(d):
            return [mpmath.mpf(v) for v in fn()]

    # too little precision shows up as a spurious singular matrix
    while True:
        try:
            prev = at(dps)
            break
        except ArithmeticError:
            if dps >= max_dps:
                raise
            dps *= 2
    while True:
        dps *= 2
        cur = at(dps)
        gap = max((abs(a - b) for a, b in zip(prev, cur)), default=0)
        if gap <= mpmath.mpf(10) ** (-(dps // 4)) or dps >= max_dps:
            return cur
        prev = cur


def log_sv_sums(A, s):
    """Partial sums (1/s) sum_{j<=i} log sigma_j, as mpf."""
    sv = singular_values(A)
    out = []
    acc = mpmath.mpf(0)
    for v in sv:
        acc += mpmath.log(v)
        out.append(acc / s)
    return out


def _leading(A, l):
    return [row[:l] for row in A[:l]]


def _start_dps(w, s):
    big = sum(abs(float(x)) for x in w.weights if x is not NEG_INF)
    return 30 + int(abs(s) * big / 2.3)


def _pattern(rows):
    return GZPattern([[0] + [Fraction(float(v)) for v in r] for r in rows])


def gz_s(A, s):
    """Row l: (1/s) log partial products of singular values of the top-left l x l block."""
    n = len(A)
    return _pattern([log_sv_sums(_leading(A, l), s) for l in range(1, n + 1)])


def gz_s_of_weighting(w, phi, s):
    """gz_s(m_s(w, phi)) at adaptively chosen precision; rows of mpf."""
    n = w.network.rank

    def run():
        A = m_s(w, phi, s)
        return [v for l in range(1, n + 1) for v in log_sv_sums(_leading(A, l), s)]

    flat = adaptive(run, dps=_start_dps(w, s))
    rows, k = [], 0
    for l in range(1, n + 1):
        rows.append(flat[k:k + l])
        k += l
    return rows


def convergence_error(w, phi, s):
    """max |gz_s(m_s(w, phi)) - gz_trop(w)| over all entries (float)."""
    if any(x is not NEG_INF and abs(float(x) * s) > S_CAP for x in w.weights):
        raise OverflowError("s too large for these weights; rescale")
    got = gz_s_of_weighting(w, phi, s)
    ref = gz_trop(w)
    with mpmath.workdps(2 * _start_dps(w, s)):
        err = mpmath.mpf(0)
        for l, row in enumerate(got, start=1):
            for i, v in enumerate(row, start=1):
                err = max(err, abs(v - _mpf(ref.m(i, l))))
        return float(err)


def closed_form_error(s):
    """Error for the rank-2 weighting a11 = 1, a21 = a22 = 0: (1/s) log sigma_1 - 1."""
    with mpmath.workdps(50 + int(s)):
        e2 = mpmath.exp(2 * mpmath.mpf(s))
        T = 2 * e2 + 1
        sig2 = (T + mpmath.sqrt(T * T - 4 * e2)) / 2
        return float(mpmath.log(sig2) / (2 * s) - 1)


def convergence_experiment(w, phi, s_list):
    """Rows (s, error, s * error) and the fitted slope of log(error) against s."""
    rows = []
    for s in s_list:
        e = convergence_error(w, phi, s)
        rows.append({"s": s, "error": e, "s_times_error": s * e})
    slope = fit_slope([r["s"] for r in rows], [r["error"] for r in rows])
    return {"rows": rows, "slope": slope}


def fit_slope(xs, errs):
    """Least-squares slope of log(err) against x; None if some error is 0."""
    if any(e <= 0 for e in errs) or len(xs) < 2:
        return None
    return float(np.polyfit(np.asarray(xs, float), np.log(np.asarray(errs, float)), 1)[0])


# ---------------------------------------------------------------------------
# zeta_s: back from a lower-triangular matrix to (w, phi)

def zeta_s(b, s):
    """(weighting of the standard network, slant angles) with m_s(w, phi) = b.

    Minor Delta_{[l-i+1,l],[1,i]}(b) is the weight of the unique family
    alpha_i^(l), so logs of moduli invert calA and phases give the angles.
    """
    b = _mpmat(b)
    n = len(b)
    struct = _calA_structure(n)
    logs, phases = {}, {}
    for l in range(1, n + 1):
        for i in range(1, l + 1):
            sub = mpmath.matrix([[b[r][c] for c in range(i)] for r in range(l - i, l)])
            d = mpmath.det(sub)
            if abs(d) == 0:
                raise ArithmeticError("minor Delta_{[%d,%d],[1,%d]} vanishes" % (l - i + 1, l, i))
            logs[(l, i)] = mpmath.log(abs(d)) / s
            phases[(l, i)] = d / abs(d)
    vals, ang = {}, {}
    for l in range(1, n + 1):
        for i in range(1, l + 1):
            v = logs[(l, i)]
            ph = phases[(l, i)]
            for lab in struct[(l, i)]:
                v -= vals[lab]
                ph /= ang[lab]
            vals[(l, i)] = v
            ang[(l, i)] = ph
    net = standard_network(n)
    weights = [0] * len(net.edges)
    phi = {}
    for lab, e in net.essential.items():
        weights[e] = Fraction(float(vals[lab]))
        if lab[1] < lab[0]:
            phi[e] = complex(ang[lab])
    return Weighting(net, weights), phi


# ---------------------------------------------------------------------------
# Horn data from matrices

def horn_s(A, B, C, s):
    """Six partial-sum arrays for A, B, C, AB, BC, ABC (floats)."""
    n = len(A)

    def run():
        X, Y, Z = _mpmat(A), _mpmat(B), _mpmat(C)
        XY = _mul(X, Y)
        return [v for M in (X, Y, Z, XY, _mul(Y, Z), _mul(XY, Z)) for v in log_sv_sums(M, s)]

    flat = [float(v) for v in adaptive(run)]
    return tuple(tuple(flat[k * n:(k + 1) * n]) for k in range(6))


def horn_s_2x2(A, B, C, s):
    """numpy version for batches of 2x2 matrices: arrays of shape (..., 2, 2)."""
    AB = A @ B
    mats = [A, B, C, AB, B @ C, AB @ C]
    out = []
    for X in mats:
        l1, l12 = _log_sv_2x2(X)
        out.append(np.stack([l1 / s, l12 / s], axis=-1))
    return np.stack(out, axis=-2)


def _log_sv_2x2(X):
    """log sigma_1 and log(sigma_1 sigma_2) of 2x2 matrices, without cancellation."""
    fro2 = np.sum(np.abs(X) ** 2, axis=(-2, -1))
    det = np.abs(X[..., 0, 0] * X[..., 1, 1] - X[..., 0, 1] * X[..., 1, 0])
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4 * det * det, 0.0))
    s1sq = (fro2 + disc) / 2
    return 0.5 * np.log(s1sq), np.log(det)


# ---------------------------------------------------------------------------
# genericity

def family_weights(w, k):
    """Weights of all k-families (any sources, any sinks) of a tropical weighting."""
    from .network import disjoint_families
    import itertools
    net = w.network
    out = []
    for I in itertools.combinations(range(1, net.rank + 1), k):
        for J in itertools.combinations(range(1, net.rank + 1), k):
            for fam in disjoint_families(net, I, J):
                out.append(w.path_weight([e for _, es in fam for e in es]))
    return out


def separated(w, delta):
    """Distinct k-families of every truncation differ in weight by more than delta."""
    from .network import truncate_weighting
    n = w.network.rank
    for l in range(1, n + 1):
        wl = truncate_weighting(w, l) if l < n else w
        for k in range(1, l + 1):
            ws = sorted(v for v in family_weights(wl, k) if v is not NEG_INF)
            if any(b - a <= delta for a, b in zip(ws, ws[1:])):
                return False
    return True


def strictly_gz(p, delta):
    """All GZ slacks strictly above delta."""
    from .trop import gz_slack
    if not p.is_finite():
        return False
    sl = gz_slack(p)
    return sl is None or sl > delta


def genericity_filter(ws, delta):
    """GZ(delta) and separation for one weighting, or for a triple and its products."""
    from .network import concat_all
    if isinstance(ws, Weighting):
        return strictly_gz(gz_trop(ws), delta) and separated(ws, delta)
    ws = list(ws)
    nets = [[w] for w in ws]
    if len(ws) == 3:
        nets += [ws[:2], ws[1:], ws]
    for group in nets:
        w = concat_all(group)
        if not (strictly_gz(gz_trop(w), delta) and separated(w, delta)):
            return False
    return True


def random_generic_weighting(n, rng, delta=0.5, gap=(1.0, 4.0), tries=2000):
    """Standard-network weighting with calA strictly GZ, filtered by genericity_filter."""
    from .multipath import calA_inverse
    from .trop import pattern_from_lambdas
    for _ in range(tries):
        top = [Fraction(rng.randint(-200, 200), 100)]
        for _ in range(n - 1):
            top.append(top[-1] - Fraction(rng.randint(int(gap[0] * 200), int(gap[1] * 200)), 100))
        rows = [top]
        for l in range(n - 1, 0, -1):
            up = rows[0]
            row = []
            for i in range(l):
                lo, hi = up[i + 1], up[i]
                row.append(lo + (hi - lo) * Fraction(rng.randint(15, 85), 100))
            rows.insert(0, row)
        w = calA_inverse(pattern_from_lambdas(rows))
        if genericity_filter(w, delta):
            return w
    raise RuntimeError("no generic weighting found")


# ---------------------------------------------------------------------------
# sampling lower-triangular matrices with given singular values

def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def lower_retraction(A):
    """L lower-triangular with positive diagonal and L = A Q for a unitary Q."""
    q, r = np.linalg.qr(A.conj().T)
    d = np.diag(r)
    ph = d / np.abs(d)
    r = (r.T * ph.conj()).T
    return r.conj().T


def sample_lower(lams, s, rng):
    """Random element of the lower-triangular group with singular values e^{s lam}."""
    n = len(lams)
    A = haar_unitary(n, rng) @ np.diag(np.exp(s * np.asarray(lams, float))) @ haar_unitary(n, rng)
    return lower_retraction(A)


def trial_rng(seed, trial):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


# ---------------------------------------------------------------------------
# distance to the octahedron locus

def _fill_linear(n, choice):
    """Linear forms (over two-face parameters) of every m-value for one max-pattern.

    Returns (forms, constraints): forms maps alpha -> coefficient vector;
    constraints are vectors g with g . x <= 0 forcing the chosen maxima.
    """
    from .horncheck import small_tetrahedra
    from .reconstruct import two_face_points
    pts = two_face_points(n)
    N = len(pts)
    forms = {a: np.eye(N)[k] for k, a in enumerate(pts)}
    forms[(0, 0, 0)] = np.zeros(N)
    cons = []
    tets = sorted(small_tetrahedra(n), key=lambda t: (t.j, -(t.i + t.j + t.k)))
    for t, pick in zip(tets, choice):
        i, j, k = t
        A = forms[(i, j, k + 1)] + forms[(i + 1, j + 1, k)]
        C = forms[(i + 1, j, k)] + forms[(i, j + 1, k + 1)]
        hi, lo = (A, C) if pick == "A" else (C, A)
        cons.append(lo - hi)
        forms[(i, j + 1, k)] = hi - forms[(i + 1, j, k + 1)]
    return forms, cons


def _horn_rows(n, forms):
    """Matrix sending two-face parameters to the flattened 6n Horn tuple."""
    rows = []
    a, ab = forms[(n, 0, 0)], forms[(0, n, 0)]
    for key in ("A", "B", "C", "AB", "BC", "ABC"):
        for l in range(1, n + 1):
            rows.append({
                "A": lambda: forms[(l, 0, 0)],
                "AB": lambda: forms[(0, l, 0)],
                "ABC": lambda: forms[(0, 0, l)],
                "B": lambda: forms[(n - l, l, 0)] - a,
                "C": lambda: forms[(0, n - l, l)] - ab,
                "BC": lambda: forms[(n - l, 0, l)] - a,
            }[key]())
    return np.array(rows)


_PIECES = {}


def octahedron_pieces(n):
    """[(H, G)] per max-pattern: Horn tuple = H x on {G x <= 0}, rhombi included in G."""
    if n not in _PIECES:
        import itertools
        from .horncheck import small_tetrahedra
        from .reconstruct import TWO_FACES, two_face_points
        from .horncheck import face_rhombi
        pts = two_face_points(n)
        N = len(pts)
        base = {a: np.eye(N)[k] for k, a in enumerate(pts)}
        base[(0, 0, 0)] = np.zeros(N)
        rh = []
        for r in face_rhombi(n, 3, TWO_FACES):
            l1, l2, s1, s2 = r.points()
            rh.append(base[l1] + base[l2] - base[s1] - base[s2])
        out = []
        T = len(small_tetrahedra(n))
        for choice in itertools.product("AC", repeat=T):
            forms, cons = _fill_linear(n, choice)
            G = np.array(rh + cons) if (rh or cons) else np.zeros((0, N))
            out.append((_horn_rows(n, forms), G))
        _PIECES[n] = out
    return _PIECES[n]


@contextlib.contextmanager
def _quiet_stdout():
    """Silence the QP solver, which prints from C or through sys.stdout."""
    sys.stdout.flush()
    saved = os.dup(1)
    with open(os.devnull, "w") as null:
        os.dup2(null.fileno(), 1)
        try:
            with contextlib.redirect_stdout(null):
                yield
        finally:
            sys.stdout.flush()
            os.dup2(saved, 1)
            os.close(saved)


def _qp(H, G, t):
    """min |H x - t|^2 subject to G x <= 0 (OSQP with polishing), then an active-set polish."""
    import osqp
    import scipy.sparse as sp
    N = H.shape[1]
    solver = osqp.OSQP()
    with _quiet_stdout():
        solver.setup(sp.csc_matrix(2 * H.T @ H), -2 * H.T @ t, sp.csc_matrix(G),
                     np.full(G.shape[0], -np.inf), np.zeros(G.shape[0]), verbose=False,
                     polishing=True, eps_abs=1e-12, eps_rel=1e-12, max_iter=20000)
        res = solver.solve(raise_error=False)
    if res.x is None or not np.all(np.isfinite(res.x)):
        return None
    x = np.asarray(res.x, float)
    cands = [x] if np.all(G @ x <= 1e-9) else []
    # polish: exact least squares with the nearly active constraints as equalities
    HtH = 2 * H.T @ H
    for thr in (1e-10, 1e-8, 1e-6, 1e-4):
        act = np.where(G @ x >= -thr)[0]
        K = np.block([[HtH, G[act].T], [G[act], np.zeros((len(act), len(act)))]])
        rhs = np.concatenate([2 * H.T @ t, np.zeros(len(act))])
        y = np.linalg.lstsq(K, rhs, rcond=None)[0][:N]
        if np.all(G @ y <= 1e-12):
            cands.append(y)
    if not cands:
        return None
    return min(cands, key=lambda y: np.linalg.norm(H @ y - t))


def horn_tuple_of(x, n):
    """Flattened Horn tuple of octahedron_fill(x) for float two-face data."""
    from .horncheck import octahedron_fill, horn_trop
    m = octahedron_fill(x, n, "j0-top")
    return np.array([float(v) for row in horn_trop(m) for v in row])


def _faces_from_horn(t, n):
    from .horncheck import boundary_from_horn
    from .reconstruct import two_face_points
    rows = [t[k * n:(k + 1) * n] for k in range(6)]
    vals = boundary_from_horn(rows)
    # face-interior points (n >= 3) are not fixed by the tuple; start them at 0
    return {a: vals.get(a, 0.0) for a in two_face_points(n)}, all(
        a in vals for a in two_face_points(n))


def distance_to_octahedron_locus(t, n=None, method="pieces", starts=50, seed=0):
    """Euclidean distance from a 6n Horn tuple to the octahedron-recurrence image.

    method "pieces" solves one convex QP per max-pattern of the fill (exact
    up to solver tolerance); "local" runs a multi-start local search on the
    nonsmooth fill map and is only an upper bound.
    """
    t = np.asarray([float(v) for v in np.ravel(t)], float)
    n = n or len(t) // 6
    best = math.inf
    # the tuple's own two-face values are an exact candidate
    from .reconstruct import two_face_violations
    x0, complete = _faces_from_horn(t, n)
    if complete and not two_face_violations(x0, n):
        x0f = {a: Fraction(v) for a, v in x0.items()}
        x0f[(0, 0, 0)] = 0
        best = float(np.linalg.norm(horn_tuple_of(x0f, n) - t))
    if best == 0:
        return 0.0
    if method == "pieces":
        for H, G in octahedron_pieces(n):
            x = _qp(H, G, t)
            if x is not None:
                best = min(best, float(np.linalg.norm(H @ x - t)))
        return best
    if method == "local":
        return min(best, _local_search(t, n, starts, seed))
    raise ValueError("unknown method %r" % (method,))


def _local_search(t, n, starts, seed):
    from scipy.optimize import minimize
    from .reconstruct import TWO_FACES, two_face_points
    from .horncheck import face_rhombi, tetra_sums, small_tetrahedra
    pts = two_face_points(n)
    idx = {a: k for k, a in enumerate(pts)}
    rh = []
    for r in face_rhombi(n, 3, TWO_FACES):
        v = np.zeros(len(pts))
        l1, l2, s1, s2 = r.points()
        for p, sg in ((l1, 1), (l2, 1), (s1, -1), (s2, -1)):
            if p in idx:
                v[idx[p]] += sg
        rh.append(v)
    R = np.array(rh)
    tets = sorted(small_tetrahedra(n), key=lambda q: (q.j, -(q.i + q.j + q.k)))

    def horn(x, tau=0.0):
        # tau > 0 replaces max by tau * logsumexp(. / tau), a smooth upper bound
        m = {a: x[k] for k, a in enumerate(pts)}
        m[(0, 0, 0)] = 0.0
        for i, j, k in tets:
            A = m[(i, j, k + 1)] + m[(i + 1, j + 1, k)]
            C = m[(i + 1, j, k)] + m[(i, j + 1, k + 1)]
            top = max(A, C) if tau == 0 else tau * np.logaddexp(A / tau, C / tau)
            m[(i, j + 1, k)] = top - m[(i + 1, j, k + 1)]
        a, ab = m[(n, 0, 0)], m[(0, n, 0)]
        out = []
        out += [m[(l, 0, 0)] for l in range(1, n + 1)]
        out += [m[(n - l, l, 0)] - a for l in range(1, n + 1)]
        out += [m[(0, n - l, l)] - ab for l in range(1, n + 1)]
        out += [m[(0, l, 0)] for l in range(1, n + 1)]
        out += [m[(n - l, 0, l)] - a for l in range(1, n + 1)]
        out += [m[(0, 0, l)] for l in range(1, n + 1)]
        return np.array(out)

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n])))
    x0 = _faces_from_horn(t, n)[0]
    base = np.array([float(x0[a]) for a in pts])
    best = math.inf
    cons = [{"type": "ineq", "fun": lambda x: -(R @ x), "jac": lambda x: -R}]
    for k in range(starts):
        x = base + (rng.normal(scale=1.0, size=len(pts)) if k else 0)
        # continuation in the smoothing temperature
        for tau in (1.0, 0.1, 1e-2, 1e-3, 1e-4):
            res = minimize(lambda y: float(np.sum((horn(y, tau) - t) ** 2)), x,
                           method="SLSQP", constraints=cons,
                           options={"maxiter": 300, "ftol": 1e-15})
            x = res.x
        if np.all(R @ x <= 1e-9):
            best = min(best, float(np.linalg.norm(horn(x) - t)))
    return best


def concentration_experiment(lam, mu, nu, s_list, trials, seed=0):
    """Median and quantiles of the distance of horn_s to the octahedron locus, per s."""
    n = len(lam)
    out = []
    for s in s_list:
        ds = []
        for trial in range(trials):
            rng = trial_rng(seed, trial)
            A, B, C = (sample_lower(v, s, rng) for v in (lam, mu, nu))
            if n == 2:
                t = horn_s_2x2(A, B, C, s).ravel()
            else:
                t = np.ravel(horn_s(A.tolist(), B.tolist(), C.tolist(), s))
            ds.append(distance_to_octahedron_locus(t, n))
        ds = np.array(ds)
        out.append({"s": s, "median": float(np.median(ds)), "q10": float(np.quantile(ds, 0.1)),
                    "q90": float(np.quantile(ds, 0.9)), "max": float(ds.max()),
                    "trials": trials})
    return out


# ---------------------------------------------------------------------------
# rank 2 inequalities

def f_trace(g):
    """Tr(g g*) for a 2x2 lower-triangular g with det 1: u^2 + u^-2 + |v|^2."""
    g = np.asarray(g, complex)
    if abs(np.linalg.det(g) - 1) > 1e-9 * max(1.0, np.abs(g).max() ** 2):
        raise ValueError("f_trace needs determinant 1")
    return float(np.sum(np.abs(g) ** 2))


def n2_products(u, v):
    """Batched products of lower-triangular [[u, 0], [v, 1/u]] matrices.

    u: (N, 3) positive, v: (N, 3) complex.  Returns a dict of (N, 2, 2) arrays.
    """
    def mk(k):
        M = np.zeros((u.shape[0], 2, 2), complex)
        M[:, 0, 0] = u[:, k]
        M[:, 1, 0] = v[:, k]
        M[:, 1, 1] = 1 / u[:, k]
        return M
    A, B, C = mk(0), mk(1), mk(2)
    AB = A @ B
    return {"A": A, "B": B, "C": C, "AB": AB, "BC": B @ C, "ABC": AB @ C}


def n2_inequalities(mats, s_list=(1, 5, 10)):
    """Three f-inequalities (relative slack) and the log 16 defect bound."""
    f = {k: np.sum(np.abs(M) ** 2, axis=(1, 2)) for k, M in mats.items()}
    P1 = f["AB"] * f["BC"]
    P2 = f["A"] * f["C"]
    P3 = f["B"] * f["ABC"]
    slacks = []
    for lhs, rhs in ((2 * (P1 + P2), P3), (2 * (P2 + P3), P1), (2 * (P3 + P1), P2)):
        slacks.append((lhs - rhs) / np.maximum(lhs, rhs))
    report = {"min_slack": [float(x.min()) for x in slacks], "bound": []}
    l1 = {k: _log_sv_2x2(M)[0] for k, M in mats.items()}
    for s in s_list:
        x = {k: v / s for k, v in l1.items()}
        al = x["A"] + x["C"]
        be = x["B"] + x["ABC"]
        ga = x["AB"] + x["BC"]
        excess = np.max(np.stack([al - np.maximum(be, ga), be - np.maximum(al, ga),
                                  ga - np.maximum(al, be)]), axis=0)
        report["bound"].append({"s": s, "max_excess": float(excess.max()),
                                "limit": math.log(16) / s})
    return report


def random_n2_triples(N, rng, spread=4.0):
    """u = e^{U(-spread, spread)}, v = e^{U(-spread, spread)} times a random phase."""
    u = np.exp(rng.uniform(-spread, spread, size=(N, 3)))
    v = np.exp(rng.uniform(-spread, spread, size=(N, 3))) * np.exp(
        1j * rng.uniform(0, 2 * math.pi, size=(N, 3)))
    return u, v
