"""Conditions on m-functions: traces, rhombi, tetrahedra, octahedra, potentials.

Points of the simplex are alpha = (alpha_1, ..., alpha_k) with sum <= n.
Barycentric coordinates put n - sum(alpha) in front, so f_0 is the
"unused" direction and f_t moves one path into factor t.
"""

from collections import namedtuple
import itertools

from .trop import NEG_INF, tplus, ttimes, interlacing_values
from .multipath import MFunction, simplex_points, barycentric


class FillError(ValueError):
    """Bad input for octahedron_fill; `violations` lists offending rhombi."""

    def __init__(self, msg, violations=()):
        ValueError.__init__(self, msg)
        self.violations = list(violations)


# ---------------------------------------------------------------------------
# boundary data and traces

HORN_KEYS = ("A", "B", "C", "AB", "BC", "ABC")


def horn_trop(m):
    """Six partial-sum arrays (A, B, C, AB, BC, ABC) read off the simplex edges.

    A_l = m_{l00}, AB_l = m_{0l0}, ABC_l = m_{00l},
    B_l = m_{n-l,l,0} - m_{n00}, C_l = m_{0,n-l,l} - m_{0n0},
    BC_l = m_{n-l,0,l} - m_{n00}.
    """
    if m.k != 3:
        raise ValueError("horn data needs k = 3")
    n = m.n
    a, ab = m[(n, 0, 0)], m[(0, n, 0)]
    out = {
        "A": tuple(m[(l, 0, 0)] for l in range(1, n + 1)),
        "AB": tuple(m[(0, l, 0)] for l in range(1, n + 1)),
        "ABC": tuple(m[(0, 0, l)] for l in range(1, n + 1)),
        "B": tuple(_tsub(m[(n - l, l, 0)], a) for l in range(1, n + 1)),
        "C": tuple(_tsub(m[(0, n - l, l)], ab) for l in range(1, n + 1)),
        "BC": tuple(_tsub(m[(n - l, 0, l)], a) for l in range(1, n + 1)),
    }
    return tuple(out[key] for key in HORN_KEYS)


def boundary_from_horn(horn):
    """Inverse of horn_trop: values at the boundary points of the 3-simplex."""
    A, B, C, AB, BC, ABC = [tuple(x) for x in horn]
    n = len(A)
    vals = {(0, 0, 0): 0}
    for l in range(1, n + 1):
        vals[(l, 0, 0)] = A[l - 1]
        vals[(0, l, 0)] = AB[l - 1]
        vals[(0, 0, l)] = ABC[l - 1]
    for l in range(1, n):
        vals[(n - l, l, 0)] = ttimes(B[l - 1], A[n - 1])
        vals[(0, n - l, l)] = ttimes(C[l - 1], AB[n - 1])
        vals[(n - l, 0, l)] = ttimes(BC[l - 1], A[n - 1])
    return vals


def trace_check(lam, mu, nu, rho, sigma, tau):
    """Totals of the six partial-sum arrays satisfy the three trace equalities."""
    tot = [x[-1] if len(x) else 0 for x in (lam, mu, nu, rho, sigma, tau)]
    l, u, v, r, s, t = tot
    return ttimes(l, u) == r and ttimes(u, v) == s and ttimes(r, v) == t


# ---------------------------------------------------------------------------
# rhombi

class RhombusSpec(namedtuple("RhombusSpec", "base a pair")):
    """Unit rhombus y, y-f_a+f_b, y-f_a+f_c, y-2f_a+f_b+f_c (barycentric y)."""

    __slots__ = ()

    def points(self):
        """(long1, long2, short1, short2) as alpha tuples."""
        y = list(self.base)
        b, c = self.pair
        s1, s2, l2 = list(y), list(y), list(y)
        s1[self.a] -= 1
        s1[b] += 1
        s2[self.a] -= 1
        s2[c] += 1
        l2[self.a] -= 2
        l2[b] += 1
        l2[c] += 1
        return tuple(tuple(p[1:]) for p in (y, l2, s1, s2))

    def vertex_set(self):
        return frozenset(self.points())


def plane_rhombi(n, k, support=None):
    """All unit rhombi in the k-simplex of size n, deduplicated.

    With `support` (a set of barycentric indices of size 3) only rhombi
    whose vertices stay inside that face are returned.
    """
    idx = range(k + 1) if support is None else sorted(support)
    seen = set()
    out = []
    for alpha in simplex_points(n, k):
        y = barycentric(alpha, n)
        if support is not None and any(y[t] for t in range(k + 1) if t not in support):
            continue
        for a in idx:
            if y[a] < 2:
                continue
            for b, c in itertools.combinations([t for t in idx if t != a], 2):
                r = RhombusSpec(tuple(y), a, (b, c))
                key = r.vertex_set()
                if key not in seen:
                    seen.add(key)
                    out.append(r)
    return out


def potential_faces(k):
    """Barycentric supports {0, l+1, l+2}, l = 0..k-2, of the faces seen by the potential."""
    return [frozenset((0, l + 1, l + 2)) for l in range(k - 1)]


FACE_SUPPORTS = {
    "j=0": frozenset((0, 1, 3)),
    "top": frozenset((1, 2, 3)),
    "k=0": frozenset((0, 1, 2)),
    "i=0": frozenset((0, 2, 3)),
}


def face_rhombi(n, k, supports=None):
    supports = potential_faces(k) if supports is None else supports
    seen = set()
    out = []
    for s in supports:
        for r in plane_rhombi(n, k, s):
            if r.vertex_set() not in seen:
                seen.add(r.vertex_set())
                out.append(r)
    return out


def rhombus_slack(get, r):
    """short sum - long sum; NEG_INF long side always passes."""
    l1, l2, s1, s2 = r.points()
    long_ = ttimes(get(l1), get(l2))
    short = ttimes(get(s1), get(s2))
    if long_ is NEG_INF:
        return None
    if short is NEG_INF:
        return NEG_INF
    return short - long_


def _violations(get, rhombi):
    bad = []
    for r in rhombi:
        s = rhombus_slack(get, r)
        if s is not None and (s is NEG_INF or s < 0):
            bad.append(r)
    return bad


def rhombus_check(m, scope="all-plane", supports=None):
    """Violated rhombi (short-diagonal sum below long-diagonal sum).

    scope "faces-only" uses the potential faces unless `supports` is given.
    """
    if scope == "all-plane":
        rh = plane_rhombi(m.n, m.k)
    elif scope == "faces-only":
        rh = face_rhombi(m.n, m.k, supports)
    else:
        raise ValueError("unknown scope %r" % (scope,))
    return _violations(m.__getitem__, rh)


# ---------------------------------------------------------------------------
# tetrahedra and octahedra

TetrahedronSpec = namedtuple("TetrahedronSpec", "i j k")


def small_tetrahedra(n):
    return [TetrahedronSpec(i, j, k) for i, j, k in simplex_points(n - 2, 3)] if n >= 2 else []


def tetra_sums(get, t):
    """(A, B, C) opposite-edge sums of a small tetrahedron."""
    i, j, k = t
    A = ttimes(get((i, j, k + 1)), get((i + 1, j + 1, k)))
    B = ttimes(get((i, j + 1, k)), get((i + 1, j, k + 1)))
    C = ttimes(get((i + 1, j, k)), get((i, j + 1, k + 1)))
    return A, B, C


def tetrahedron_check(m):
    """Tetrahedra where the max of A, B, C is attained only once."""
    bad = []
    for t in small_tetrahedra(m.n):
        s = sorted(tetra_sums(m.__getitem__, t))
        if s[2] != s[1]:
            bad.append(t)
    return bad


def octahedron_check(m):
    """Tetrahedra violating B = max(A, C)."""
    bad = []
    for t in small_tetrahedra(m.n):
        A, B, C = tetra_sums(m.__getitem__, t)
        if B != tplus(A, C):
            bad.append(t)
    return bad


def _tsub(a, b):
    if b is NEG_INF:
        raise ArithmeticError("tropical division by -inf")
    if a is NEG_INF:
        return NEG_INF
    return a - b


FILL_DIRECTIONS = {
    # known faces -> (face names, solve for)
    "j0-top": ("j=0", "top"),
    "k0-i0": ("k=0", "i=0"),
}


def fill_domain(n, direction):
    """Points whose values octahedron_fill needs."""
    faces = FILL_DIRECTIONS[direction]
    return [a for a in simplex_points(n, 3)
            if any(not barycentric(a, n)[t] for f in faces
                   for t in range(4) if t not in FACE_SUPPORTS[f])]


def octahedron_fill(values, n, direction="j0-top"):
    """Extend values on a face pair to the whole simplex via B = max(A, C).

    direction "j0-top": known on {alpha_2 = 0} and {sum = n}; each step solves
    m_{i,j+1,k} = max(A, C) - m_{i+1,j,k+1}, by increasing j, then
    decreasing sum.
    direction "k0-i0": known on {alpha_3 = 0} and {alpha_1 = 0}; each step
    solves m_{i+1,j,k+1} = max(A, C) - m_{i,j+1,k}, by increasing i + k.
    """
    if direction not in FILL_DIRECTIONS:
        raise ValueError("direction must be one of %s" % sorted(FILL_DIRECTIONS))
    known = fill_domain(n, direction)
    vals = {}
    for a in known:
        if a not in values:
            raise FillError("missing value at %r" % (a,))
        vals[a] = values[a]
    if vals[(0, 0, 0)] != 0:
        raise FillError("value at the origin must be 0")
    sup = [FACE_SUPPORTS[f] for f in FILL_DIRECTIONS[direction]]
    bad = _violations(vals.__getitem__, face_rhombi(n, 3, sup))
    if bad:
        raise FillError("rhombus inequalities fail on the input faces", bad)

    get = vals.__getitem__
    tets = small_tetrahedra(n)
    if direction == "j0-top":
        tets.sort(key=lambda t: (t.j, -(t.i + t.j + t.k)))
        for t in tets:
            i, j, k = t
            A = ttimes(get((i, j, k + 1)), get((i + 1, j + 1, k)))
            C = ttimes(get((i + 1, j, k)), get((i, j + 1, k + 1)))
            vals[(i, j + 1, k)] = _tsub(tplus(A, C), get((i + 1, j, k + 1)))
    else:
        tets.sort(key=lambda t: (t.i + t.k, t.i))
        for t in tets:
            i, j, k = t
            A = ttimes(get((i, j, k + 1)), get((i + 1, j + 1, k)))
            C = ttimes(get((i + 1, j, k)), get((i, j + 1, k + 1)))
            vals[(i + 1, j, k + 1)] = _tsub(tplus(A, C), get((i, j + 1, k)))
    return MFunction(n, 3, vals)


# ---------------------------------------------------------------------------
# tropical potentials

def phi_k_monomials(n, k):
    """Each monomial as (plus1, plus2, minus1, minus2) alpha tuples.

    On face l the point M^(l)_{i,j} is alpha with alpha_{l+1} = i,
    alpha_{l+2} = j and zeros elsewhere; monomials touching a point
    outside the simplex are dropped.
    """
    def pt(l, i, j):
        if i < 0 or j < 0 or i + j > n:
            return None
        a = [0] * k
        a[l] = i
        a[l + 1] = j
        return tuple(a)

    out = []
    for l in range(k - 1):
        for i in range(-1, n + 2):
            for j in range(-1, n + 2):
                for terms in (((i, j - 1), (i + 1, j), (i, j), (i + 1, j - 1)),
                              ((i, j - 1), (i - 1, j + 1), (i, j), (i - 1, j)),
                              ((i - 1, j + 1), (i + 1, j), (i, j + 1), (i, j))):
                    pts = [pt(l, *ij) for ij in terms]
                    if None not in pts:
                        out.append(tuple(pts))
    return out


def trop_potential_phi_k(m):
    """Max over monomials of m(p1) + m(p2) - m(q1) - m(q2); NEG_INF if none."""
    best = NEG_INF
    for p1, p2, q1, q2 in phi_k_monomials(m.n, m.k):
        vs = [m[p1], m[p2], m[q1], m[q2]]
        if NEG_INF in vs:
            raise ValueError("tropical potential needs finite m-values")
        best = tplus(best, vs[0] + vs[1] - vs[2] - vs[3])
    return best


def trop_potential_bk(p):
    """Max of lambda_j^(l-1) - lambda_j^(l) and lambda_{j+1}^(l+1) - lambda_j^(l)."""
    lam = interlacing_values(p)
    n = p.n
    best = NEG_INF
    for l in range(2, n + 1):
        for j in range(1, l):
            best = tplus(best, lam[l - 2][j - 1] - lam[l - 1][j - 1])
    for l in range(1, n):
        for j in range(1, l + 1):
            best = tplus(best, lam[l][j] - lam[l - 1][j - 1])
    return best
