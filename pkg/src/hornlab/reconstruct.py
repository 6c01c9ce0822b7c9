"""Weight triples from two-face boundary data, and the explicit rank-2 construction.

Two-face data lives on the faces {alpha_2 = 0} and {sum = n} of the
3-simplex.  The triple (a, b, c) has a and b free on the essential edges
of the standard network; c only carries one weight c_l per line, on the
first (source-adjacent) horizontal segment.  That leaves n(n+2)
parameters, one per nontrivial point of the two faces.
"""

from collections import namedtuple
from fractions import Fraction
import itertools

from .trop import NEG_INF, gz_check, is_finite
from .network import (TROPICAL, Weighting, disjoint_families, first_segments,
                      standard_network)
from .multipath import MFunction, calA, check_multi_gz, m_map, simplex_points
from .horncheck import FACE_SUPPORTS, FillError, _violations, face_rhombi, tetra_sums

TWO_FACES = (FACE_SUPPORTS["j=0"], FACE_SUPPORTS["top"])


class ConstructionError(ValueError):
    def __init__(self, msg, problems=()):
        ValueError.__init__(self, msg)
        self.problems = list(problems)


def two_face_points(n):
    """Nontrivial points with alpha_2 = 0 or sum = n, lex order."""
    return [a for a in simplex_points(n, 3) if any(a) and (a[1] == 0 or sum(a) == n)]


def _check_two_face(x, n):
    pts = two_face_points(n)
    missing = [p for p in pts if p not in x]
    if missing:
        raise ValueError("two-face data is missing %r" % (missing[0],))
    if (0, 0, 0) in x and x[(0, 0, 0)] != 0:
        raise ValueError("value at the origin must be 0")
    bad = [p for p in pts if not is_finite(x[p])]
    if bad:
        raise ValueError("two-face data must be finite; %r is -inf" % (bad[0],))
    return pts


# ---------------------------------------------------------------------------
# the triple space W

class WeightTriple(namedtuple("WeightTriple", "a b c")):
    """a, b: essential weights {(l, i): v}; c: per-line weights (c_1..c_n)."""

    __slots__ = ()

    @property
    def n(self):
        return len(self.c)

    def weightings(self):
        n = self.n
        net = standard_network(n)
        out = []
        for vals in (self.a, self.b):
            w = [0] * len(net.edges)
            for lab, v in vals.items():
                w[net.essential[lab]] = v
            out.append(Weighting(net, w, TROPICAL))
        w = [0] * len(net.edges)
        for l, e in first_segments(net).items():
            w[e] = self.c[l - 1]
        out.append(Weighting(net, w, TROPICAL))
        return out


def parameter_edges(n):
    """[(name, factor, edge index)] in the column order used by beta_matrix."""
    net = standard_network(n)
    cols = []
    for f, name in ((0, "a"), (1, "b")):
        for lab in sorted(net.essential):
            cols.append(((name, lab), f, net.essential[lab]))
    fs = first_segments(net)
    for l in range(1, n + 1):
        cols.append((("c", l), 2, fs[l]))
    return cols


def triple_from_vector(n, vec):
    cols = parameter_edges(n)
    a, b, c = {}, {}, [0] * n
    for ((name, lab), _, _), v in zip(cols, vec):
        if name == "a":
            a[lab] = v
        elif name == "b":
            b[lab] = v
        else:
            c[lab - 1] = v
    return WeightTriple(a, b, tuple(c))


def triple_to_vector(t):
    cols = parameter_edges(t.n)
    out = []
    for (name, lab), _, _ in cols:
        out.append(t.a[lab] if name == "a" else t.b[lab] if name == "b" else t.c[lab - 1])
    return out


# ---------------------------------------------------------------------------
# beta multipaths

def beta_pins(n, alpha):
    """(sources, per-factor sinks) pinned for the beta multipath at alpha."""
    i, j, k = alpha
    if j == 0:
        return (tuple(range(n - i - k + 1, n + 1)),
                (tuple(range(1, i + 1)), (), tuple(range(n - k + 1, n + 1))))
    if i + j + k == n:
        return (tuple(range(1, n + 1)),
                (tuple(range(1, i + 1)), tuple(range(1, j + 1)), tuple(range(n - k + 1, n + 1))))
    raise ValueError("%r is not on the two faces" % (alpha,))


def _pinned_families(nets, sources, sinks):
    """All multipaths with pinned labels, as per-factor edge tuples."""
    n = nets[0].rank
    out = []

    def rec(t, L, acc):
        if t == len(nets):
            if not L:
                out.append(tuple(acc))
            return
        J = set(sinks[t])
        for K in itertools.combinations(range(1, n + 1), len(L)):
            if not J <= set(K):
                continue
            for fam in disjoint_families(nets[t], L, K):
                acc.append(tuple(sorted(e for _, es in fam for e in es)))
                rec(t + 1, tuple(x for x in K if x not in J), acc)
                acc.pop()

    rec(0, tuple(sources), [])
    return out


def beta_multipath(n, alpha):
    """Edge sets (one tuple per factor) of the unique pinned multipath at alpha."""
    return _beta_table(n)[tuple(alpha)]


_BETA = {}


def _beta_table(n):
    if n not in _BETA:
        net = standard_network(n)
        tab = {}
        for a in two_face_points(n):
            src, snk = beta_pins(n, a)
            fams = _pinned_families([net, net, net], src, snk)
            if len(fams) != 1:
                raise AssertionError("beta multipath at %r is not unique (%d found)"
                                     % (a, len(fams)))
            tab[a] = fams[0]
        _BETA[n] = tab
    return _BETA[n]


def beta_matrix(n):
    """0/1 matrix: rows = two-face points, columns = parameter_edges(n)."""
    cols = parameter_edges(n)
    tab = _beta_table(n)
    rows = []
    for a in two_face_points(n):
        used = tab[a]
        rows.append([1 if e in used[f] else 0 for _, f, e in cols])
    return rows


def beta_map(t):
    """Weights of the beta multipaths of the triple; {alpha: value}."""
    ws = t.weightings()
    out = {(0, 0, 0): 0}
    for a, fams in _beta_table(t.n).items():
        total = 0
        for f, es in enumerate(fams):
            for e in es:
                total = total + ws[f].weights[e]
        out[a] = total
    return out


def _solve_exact(A, b):
    """Gauss-Jordan over Fractions for a square nonsingular system."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[-1] for row in M]


def _norm(v):
    v = Fraction(v)
    return int(v) if v.denominator == 1 else v


def beta_inverse(x, n=None):
    """The unique triple whose beta_map equals x (finite values)."""
    if n is None:
        n = max(sum(a) for a in x)
    pts = _check_two_face(x, n)
    sol = _solve_exact(beta_matrix(n), [x[p] for p in pts])
    return triple_from_vector(n, [_norm(v) for v in sol])


def two_face_violations(x, n):
    """Rhombi supported on the two faces that x violates."""
    get = dict(x)
    get[(0, 0, 0)] = 0
    return _violations(get.__getitem__, face_rhombi(n, 3, TWO_FACES))


def reconstruct_from_boundary(x, n=None):
    """(triple, m) with m = m_map of the triple; x must lie in the two-face rhombus cone."""
    if n is None:
        n = max(sum(a) for a in x)
    _check_two_face(x, n)
    bad = two_face_violations(x, n)
    if bad:
        raise FillError("two-face data violates rhombus inequalities", bad)
    t = beta_inverse(x, n)
    return t, m_map(t.weightings())


def triple_is_gz(t):
    """Each factor has a GZ calA pattern and every sub-product is multi-GZ."""
    ws = t.weightings()
    if not all(gz_check(calA(w)) for w in ws):
        return False
    return all(check_multi_gz(p) for p in (ws[:2], ws[1:], ws))


def sample_two_face_cone(n, rng, steps=40, spread=3, start=None):
    """Random walk inside the two-face rhombus cone.

    Starts from `start` (default: the m-values of three random weightings,
    which satisfy every rhombus inequality) and proposes integer moves on
    one or two coordinates; moves leaving the cone are rejected.
    """
    pts = two_face_points(n)
    rh = face_rhombi(n, 3, TWO_FACES)
    if start is None:
        from .samples import random_full_weighting
        net = standard_network(n)
        start = m_map([random_full_weighting(net, rng, -6, 6) for _ in range(3)])
    x = {p: start[p] for p in pts}
    x[(0, 0, 0)] = 0
    if _violations(x.__getitem__, rh):
        raise ValueError("start point is outside the cone")
    for _ in range(steps):
        y = dict(x)
        for p in rng.sample(pts, rng.choice((1, 2))):
            y[p] = y[p] + rng.randint(-spread, spread)
        if not _violations(y.__getitem__, rh):
            x = y
    return x


# ---------------------------------------------------------------------------
# rank 2

def _two_line_factor(bottom, slant, top):
    from .samples import two_line_factor
    return two_line_factor(bottom, slant, top)


def n2_conditions(l1, l2, l3, l12, l23):
    """Names of the failing preconditions of n2_construct."""
    l123 = l1 - l2 + l3
    vals = {"l1": l1, "l2": l2, "l3": l3, "l12": l12, "l23": l23, "l123": l123}
    bad = ["%s < 0" % k for k in ("l1", "l2", "l3", "l12", "l23", "l123") if vals[k] < 0]
    for names in (("l1", "l2", "l12"), ("l2", "l3", "l23"),
                  ("l12", "l3", "l123"), ("l1", "l23", "l123")):
        a, b, c = (vals[k] for k in names)
        if not (abs(a - b) <= c <= a + b):
            bad.append("triangle (%s, %s, %s)" % names)
    if l12 + l23 > l1 + l3:
        bad.append("l12 + l23 > l1 + l3")
    return bad


def n2_construct(l1, l2, l3, l12, l23):
    """Three rank-2 weightings realising the given largest tropical singular values.

    The normalisation m_200 = m_020 = m_002 = 0 makes each factor's
    singular values (l, -l); the sixth value is l123 = l1 - l2 + l3.
    """
    bad = n2_conditions(l1, l2, l3, l12, l23)
    if bad:
        raise ConstructionError("rank-2 construction preconditions fail: " + "; ".join(bad), bad)
    x = l12 - l2
    z = l23 - l2
    return [_two_line_factor(-x, l1, x),
            _two_line_factor(-l2, NEG_INF, l2),
            _two_line_factor(l3, z, -l3)]


def _shift(alpha, xs):
    """Change of m_alpha when x_t is added to the sink edges of factor t."""
    return sum(x * sum(alpha[t:]) for t, x in enumerate(xs))


def n2_realize(m):
    """Rank-2 triple with m_map equal to m, for m satisfying rhombi and tetrahedra."""
    if m.n != 2 or m.k != 3:
        raise ValueError("n2_realize needs n = 2, k = 3")
    from .horncheck import rhombus_check, tetrahedron_check
    bad = rhombus_check(m) + tetrahedron_check(m)
    if bad:
        raise ConstructionError("m is outside the rhombus/tetrahedron cone", bad)
    half = Fraction(1, 2)
    xs = [-m[(2, 0, 0)] * half, -(m[(0, 2, 0)] - m[(2, 0, 0)]) * half,
          -(m[(0, 0, 2)] - m[(0, 2, 0)]) * half]
    mm = {a: _norm(m[a] + _shift(a, xs)) for a in m.points()}
    A, B, C = tetra_sums(mm.__getitem__, (0, 0, 0))
    if B >= A:
        x = {a: mm[a] for a in two_face_points(2)}
        ws = beta_inverse(x, 2).weightings()
    else:
        ws = n2_construct(mm[(1, 0, 0)], mm[(1, 1, 0)], mm[(0, 1, 1)],
                          mm[(0, 1, 0)], mm[(1, 0, 1)])
    # undo the normalisation on the last horizontal segments
    out = []
    for w, x in zip(ws, xs):
        net = w.network
        wt = list(w.weights)
        for l in (1, 2):
            sink = net.sinks[l - 1]
            for e, (t, h) in enumerate(net.edges):
                if h == sink:
                    wt[e] = wt[e] if wt[e] is NEG_INF else _norm(wt[e] - x)
        out.append(Weighting(net, wt, TROPICAL))
    return out
