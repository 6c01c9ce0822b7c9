"""Exact rational minors, multi-corner minors and the potentials built from them.

Matrices are lists of rows of Fractions (ints are accepted).  Index sets
are 1-based tuples, as in the combinatorial parts of the package.
"""

from fractions import Fraction
import itertools

from .multipath import simplex_points


class MinorError(ZeroDivisionError):
    """A minor used as a denominator vanished."""


def as_matrix(g):
    return [[Fraction(v) for v in row] for row in g]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    return [[sum((a[i][t] * b[t][j] for t in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def matprod(ms, n=None):
    out = identity(n if n is not None else len(ms[0]))
    for m in ms:
        out = matmul(out, m)
    return out


def det(m):
    """Fraction-free (Bareiss) elimination; exact for integer or rational input."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [list(map(Fraction, row)) for row in m]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return Fraction(0)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def minor(g, I, J):
    """Delta_{I,J}(g), 1-based row set I and column set J (taken in sorted order)."""
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        raise ValueError("|I| = %d but |J| = %d" % (len(I), len(J)))
    if len(I) > min(len(g), len(g[0]) if g else 0):
        raise ValueError("index sets larger than the matrix")
    return det([[g[i - 1][j - 1] for j in J] for i in I])


def op(I, n):
    """The opposite set {n + 1 - a}."""
    return tuple(sorted(n + 1 - a for a in I))


def interval(a, b):
    return tuple(range(a, b + 1))


# ---------------------------------------------------------------------------
# bold g and multi-corner minors

def bold_g(gs):
    """n x (k+1)n block matrix [Id, g1, g1 g2, ..., g1...gk]."""
    n = len(gs[0])
    blocks = [identity(n)]
    for g in gs:
        blocks.append(matmul(blocks[-1], as_matrix(g)))
    return [sum((b[r] for b in blocks), []) for r in range(n)]


def corner_columns(n, alpha):
    """J(alpha): identity columns off [1, sum]^op, then [1, alpha_t] in block t."""
    s = sum(alpha)
    J = [c for c in range(1, n + 1) if c not in op(interval(1, s), n)]
    for t, a in enumerate(alpha, start=1):
        J.extend(c + t * n for c in range(1, a + 1))
    return tuple(J)


def multi_corner_minor(gs, alpha):
    n = len(gs[0])
    _check(gs, alpha)
    return minor(bold_g(gs), interval(1, n), corner_columns(n, alpha))


def _check(gs, alpha):
    n = len(gs[0])
    if len(alpha) != len(gs):
        raise ValueError("alpha needs one entry per factor")
    if any(a < 0 for a in alpha) or sum(alpha) > n:
        raise ValueError("alpha %r outside the simplex" % (alpha,))


def _chains(n, L0, sizes, pinned):
    """Seam chains (J_t, L_t); pinned=True forces J_t = [1, alpha_t]."""
    def rec(t, L, acc):
        if t == len(sizes):
            yield list(acc)
            return
        a = sizes[t]
        rest = sum(sizes[t + 1:])
        Js = [interval(1, a)] if pinned else itertools.combinations(range(1, n + 1), a)
        for J in Js:
            for Ln in itertools.combinations([c for c in range(1, n + 1) if c not in J], rest):
                acc.append((L, tuple(J), Ln))
                yield from rec(t + 1, Ln, acc)
                acc.pop()
    yield from rec(0, L0, [])


def cauchy_binet_expansion(gs, alpha):
    """Sum over L_1..L_{k-1} of prod Delta_{L_{t-1}, J_t u L_t}(g_t), L_0 = [1,sum]^op."""
    n = len(gs[0])
    _check(gs, alpha)
    gs = [as_matrix(g) for g in gs]
    L0 = op(interval(1, sum(alpha)), n)
    total = Fraction(0)
    for chain in _chains(n, L0, list(alpha), True):
        term = Fraction(1)
        for g, (L, J, Ln) in zip(gs, chain):
            term *= minor(g, L, tuple(J) + Ln)
            if term == 0:
                break
        total += term
    return total


def multipath_minor_sum(gs, alpha):
    """Sign-free sum over all L_0 and chains (J_t, L_t) of prod Delta_{L_{t-1}, J_t u L_t}(g_t).

    For correspondence matrices of positive weightings every term is a
    nonnegative sum of path-family weights, one for each multipath.
    """
    n = len(gs[0])
    _check(gs, alpha)
    gs = [as_matrix(g) for g in gs]
    total = Fraction(0)
    for L0 in itertools.combinations(range(1, n + 1), sum(alpha)):
        for chain in _chains(n, L0, list(alpha), False):
            term = Fraction(1)
            for g, (L, J, Ln) in zip(gs, chain):
                term *= minor(g, L, tuple(J) + Ln)
                if term == 0:
                    break
            total += term
    return total


def m_tilde(gs, alpha):
    """Coefficient of x_0^(n - sum) x_1^a_1 ... x_k^a_k in det(x_0 Id + x_1 G_1 + ...).

    Multilinearity in columns: sum over colourings f of the columns with
    |f^-1(t)| = alpha_t of det(column c taken from G_f(c), in place).
    """
    n = len(gs[0])
    _check(gs, alpha)
    bg = bold_g(gs)
    counts = [n - sum(alpha)] + list(alpha)
    total = Fraction(0)
    for f in _colourings(n, counts):
        total += det([[bg[r][c + f[c] * n] for c in range(n)] for r in range(n)])
    return total


def _colourings(n, counts):
    def rec(c, left, acc):
        if c == n:
            yield tuple(acc)
            return
        for t, m in enumerate(left):
            if m:
                left[t] -= 1
                acc.append(t)
                yield from rec(c + 1, left, acc)
                acc.pop()
                left[t] += 1
    yield from rec(0, list(counts), [])


def sorted_block_minor_sum(gs, alpha):
    """Sum of Delta_{[1,n],J}(bold g) over J with alpha_t columns in block t.

    Columns are taken in increasing order, so this differs from m_tilde by
    signs whenever a chosen column leaves its native position.
    """
    n = len(gs[0])
    _check(gs, alpha)
    bg = bold_g(gs)
    counts = [n - sum(alpha)] + list(alpha)
    total = Fraction(0)
    for parts in itertools.product(*[itertools.combinations(range(1, n + 1), c) for c in counts]):
        J = [c + t * n for t, part in enumerate(parts) for c in part]
        total += minor(bg, interval(1, n), J)
    return total


def m_values(gs):
    """{alpha: M_alpha} on the whole simplex."""
    n, k = len(gs[0]), len(gs)
    return {a: multi_corner_minor(gs, a) for a in simplex_points(n, k)}


# ---------------------------------------------------------------------------
# unipotent action

def is_unipotent_upper(u):
    n = len(u)
    return all(u[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))


def inverse(m):
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise MinorError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [v / p for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def u_action(us, gs):
    """(u_0 g_1 u_1^-1, ..., u_{k-1} g_k u_k^-1) for unit upper-triangular u's."""
    if len(us) != len(gs) + 1:
        raise ValueError("need k + 1 unipotent factors")
    for u in us:
        if not is_unipotent_upper(u):
            raise ValueError("u-factors must be unit upper-triangular")
    return [matmul(matmul(as_matrix(us[t]), as_matrix(g)), inverse(us[t + 1]))
            for t, g in enumerate(gs)]


# ---------------------------------------------------------------------------
# octahedron recurrence for minors

def _mval(vals, n, a):
    if any(x < 0 for x in a) or sum(a) > n:
        return Fraction(0)
    return vals[a]


def geometric_octahedron_residual(gs, i, j, k, vals=None):
    """M_{i+1,j,k+1} M_{i,j+1,k} - M_{i,j+1,k+1} M_{i+1,j,k} - M_{i,j,k+1} M_{i+1,j+1,k}."""
    n = len(gs[0])
    if len(gs) != 3:
        raise ValueError("the recurrence needs three factors")
    if vals is None:
        vals = m_values(gs)
    M = lambda a: _mval(vals, n, a)
    return (M((i + 1, j, k + 1)) * M((i, j + 1, k))
            - M((i, j + 1, k + 1)) * M((i + 1, j, k))
            - M((i, j, k + 1)) * M((i + 1, j + 1, k)))


def geometric_fill(values, n, direction="k0-i0"):
    """Solve the minor recurrence from a face pair, like octahedron_fill.

    "k0-i0": known on {alpha_3 = 0} and {alpha_1 = 0}, solve M_{i+1,j,k+1}.
    "j0-top": known on {alpha_2 = 0} and {sum = n}, solve M_{i,j+1,k}.
    """
    from .horncheck import fill_domain, small_tetrahedra
    vals = {a: Fraction(values[a]) for a in fill_domain(n, direction)}
    M = vals.__getitem__
    tets = small_tetrahedra(n)
    if direction == "k0-i0":
        tets.sort(key=lambda t: (t.i + t.k, t.i))
        for i, j, k in tets:
            num = M((i, j + 1, k + 1)) * M((i + 1, j, k)) + M((i, j, k + 1)) * M((i + 1, j + 1, k))
            den = M((i, j + 1, k))
            if den == 0:
                raise MinorError("M%r vanishes" % ((i, j + 1, k),))
            vals[(i + 1, j, k + 1)] = num / den
    elif direction == "j0-top":
        tets.sort(key=lambda t: (t.j, -(t.i + t.j + t.k)))
        for i, j, k in tets:
            num = M((i, j + 1, k + 1)) * M((i + 1, j, k)) + M((i, j, k + 1)) * M((i + 1, j + 1, k))
            den = M((i + 1, j, k + 1))
            if den == 0:
                raise MinorError("M%r vanishes" % ((i + 1, j, k + 1),))
            vals[(i, j + 1, k)] = num / den
    else:
        raise ValueError("unknown direction %r" % (direction,))
    return vals


# ---------------------------------------------------------------------------
# potentials, charts, highest weight

def corner_minor(g, i):
    n = len(g)
    return minor(g, op(interval(1, i), n), interval(1, i))


def phi_bk(g):
    """Sum over i of (Delta_{([1,i+1]-{i})^op,[1,i]} + Delta_{[1,i]^op,[1,i+1]-{i}}) / Delta_{[1,i]^op,[1,i]}."""
    g = as_matrix(g)
    n = len(g)
    total = Fraction(0)
    for i in range(1, n):
        den = corner_minor(g, i)
        if den == 0:
            raise MinorError("corner minor of size %d vanishes" % i)
        skip = tuple(x for x in interval(1, i + 1) if x != i)
        total += (minor(g, op(skip, n), interval(1, i)) + minor(g, op(interval(1, i), n), skip)) / den
    return total


def phi_k(gs):
    """Phi_BK(g_1) + ... + Phi_BK(g_k) - Phi_BK(g_1 ... g_k)."""
    gs = [as_matrix(g) for g in gs]
    return sum((phi_bk(g) for g in gs), Fraction(0)) - phi_bk(matprod(gs))


def phi_k_from_minors(gs):
    """Phi_k as the Laurent polynomial in multi-corner minors on the faces."""
    from .horncheck import phi_k_monomials
    n, k = len(gs[0]), len(gs)
    vals = m_values(gs)
    total = Fraction(0)
    for p1, p2, q1, q2 in phi_k_monomials(n, k):
        den = vals[q1] * vals[q2]
        if den == 0:
            raise MinorError("multi-corner minor vanishes at %r or %r" % (q1, q2))
        total += vals[p1] * vals[p2] / den
    return total


def x_minus(n, m, t):
    """Identity with [[1/t, 0], [1, t]] in rows/columns m, m+1 (1-based)."""
    t = Fraction(t)
    x = identity(n)
    x[m - 1][m - 1] = 1 / t
    x[m][m - 1] = Fraction(1)
    x[m][m] = t
    return x


def theta_gz(lams):
    """Lower-triangular matrix with geometric GZ pattern lams (rows l = 1..n).

    diag(lam_n^(n), ..., lam_1^(n)) times x_{-(j-i)}(t_ij) over i < j in lex
    order, t_ij = lam_{n+1-j}^(n+i-j) / lam_{n+1-j}^(n).
    """
    lams = [tuple(Fraction(v) for v in row) for row in lams]
    n = len(lams)
    if any(v == 0 for row in lams for v in row):
        raise ValueError("geometric GZ entries must be nonzero")
    lam = lambda j, l: lams[l - 1][j - 1]
    b = [[Fraction(0)] * n for _ in range(n)]
    for r in range(n):
        b[r][r] = lam(n - r, n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            t = lam(n + 1 - j, n + i - j) / lam(n + 1 - j, n)
            b = matmul(b, x_minus(n, j - i, t))
    return b


def gz_pattern_of(b):
    """lam_j^(n-i) = Delta_{i,j} / Delta_{i,j-1}, Delta_{i,j} = Delta_{[1,j]^op,[i+1,i+j]}."""
    b = as_matrix(b)
    n = len(b)
    rows = [None] * n
    for i in range(n):
        prev = Fraction(1)
        row = []
        for j in range(1, n - i + 1):
            d = minor(b, op(interval(1, j), n), interval(i + 1, i + j))
            if d == 0:
                raise MinorError("minor Delta_{%d,%d} vanishes" % (i, j))
            row.append(d / prev)
            prev = d
        rows[n - i - 1] = tuple(row)
    return rows


def phi_bk_lambda(lams):
    """Potential in GZ coordinates: sum lam_j^(l-1)/lam_j^(l) + lam_{j+1}^(l+1)/lam_j^(l)."""
    lams = [tuple(Fraction(v) for v in row) for row in lams]
    n = len(lams)
    lam = lambda j, l: lams[l - 1][j - 1]
    total = Fraction(0)
    for l in range(2, n + 1):
        for j in range(1, l):
            total += lam(j, l - 1) / lam(j, l)
    for l in range(1, n):
        for j in range(1, l + 1):
            total += lam(j + 1, l + 1) / lam(j, l)
    return total


def hw(g):
    """(M_n / M_{n-1}, ..., M_2 / M_1, M_1) from the corner minors M_i."""
    g = as_matrix(g)
    n = len(g)
    ms = [Fraction(1)]
    for i in range(1, n + 1):
        v = corner_minor(g, i)
        if v == 0:
            raise MinorError("corner minor M_%d vanishes" % i)
        ms.append(v)
    return tuple(ms[i] / ms[i - 1] for i in range(n, 0, -1))


def w0_bar(n):
    """Antidiagonal matrix with entry (i, n+1-i) = (-1)^(n-i)."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n + 1):
        w[i - 1][n - i] = Fraction((-1) ** (n - i))
    return w


# ---------------------------------------------------------------------------
# random inputs

def random_matrix(n, rng, lo=-9, hi=9):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]


def random_unipotent(n, rng, lo=-9, hi=9):
    u = identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            u[i][j] = Fraction(rng.randint(lo, hi))
    return u


def random_positive_lambdas(n, rng, lo=1, hi=9):
    """Random positive rational geometric GZ data (no interlacing required)."""
    return [tuple(Fraction(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(l))
            for l in range(1, n + 1)]
