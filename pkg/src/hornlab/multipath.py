"""Multipaths in concatenated networks and the map m.

An alpha-multipath in w_1 o ... o w_k is a tuple of families p_1..p_k;
p_t has alpha_t paths that start at sources of the whole concatenation
and stop at seam t, and no two paths share a vertex.

Work is organised seam by seam.  At seam t the paths still alive occupy
a label set L_t; inside factor t the alive paths form one vertex-disjoint
family from L_{t-1} to K_t, and K_t splits into the paths that stop here
(J_t) and those that go on (L_t).  Factors only share seam vertices, so
the weight of a multipath is the sum of its per-factor family weights.
"""

from functools import lru_cache
import itertools
import os

from .trop import NEG_INF, GZPattern, tprod, to_trop, trop_str
from .network import (TROPICAL, Weighting, disjoint_families, standard_network,
                      standard_weighting, truncate_weighting)

DEFAULT_CAP = 10 ** 7


class EnumerationCapExceeded(RuntimeError):
    pass


def state_cap(cap=None):
    if cap is not None:
        return cap
    env = os.environ.get("HORNLAB_MAX_STATES")
    return int(env) if env else DEFAULT_CAP


class _Counter:
    def __init__(self, cap):
        self.cap = state_cap(cap)
        self.count = 0

    def tick(self, k=1):
        self.count += k
        if self.count > self.cap:
            raise EnumerationCapExceeded(
                "multipath enumeration exceeded %d partial states" % self.cap)


def simplex_points(n, k):
    """Integer points of the simplex: alpha in N^k with sum <= n, lex order."""
    return [a for a in itertools.product(range(n + 1), repeat=k) if sum(a) <= n]


def barycentric(alpha, n):
    return (n - sum(alpha),) + tuple(alpha)


def _subsets(labels, size):
    return itertools.combinations(labels, size)


class FactorTable:
    """All vertex-disjoint families of one tropical weighting, by (I, K)."""

    def __init__(self, w, counter=None):
        self.w = w
        self.n = w.network.rank
        self._fam = {}
        self._best = {}
        self.counter = counter

    def families(self, I, K):
        key = (I, K)
        if key not in self._fam:
            out = []
            for fam in disjoint_families(self.w.network, I, K):
                if self.counter is not None:
                    self.counter.tick()
                wt = tprod(self.w.weights[e] for _, es in fam for e in es)
                out.append((wt, fam))
            self._fam[key] = out
        return self._fam[key]

    def best(self, I, K):
        """Max family weight, or None when no family exists."""
        key = (I, K)
        if key not in self._best:
            fams = self.families(I, K)
            self._best[key] = max((wt for wt, _ in fams), default=None)
        return self._best[key]


def _tables(ws, counter=None):
    n = ws[0].network.rank
    for w in ws:
        if w.network.rank != n:
            raise ValueError("all weightings must share the rank")
        if w.semiring is not TROPICAL:
            raise ValueError("multipaths need tropical weightings")
    return [FactorTable(w, counter) for w in ws]


def _check_alpha(alpha, n, k):
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != k:
        raise ValueError("alpha must have %d entries" % k)
    if any(a < 0 for a in alpha) or sum(alpha) > n:
        raise ValueError("alpha %r is not in the simplex of size %d" % (alpha, n))
    return alpha


def _chain_max(tables, alpha, n, counter, sources=None, sinks=None):
    """Max of sum of best family weights over seam chains; None if no chain.

    sources / sinks optionally pin L_0 and each J_t.
    """
    k = len(alpha)
    labels = tuple(range(1, n + 1))
    rest = [sum(alpha[t:]) for t in range(k + 1)]
    starts = [tuple(sources)] if sources is not None else list(_subsets(labels, rest[0]))
    val = {L: 0 for L in starts}
    for t in range(k):
        nxt = {}
        tab = tables[t]
        for L, acc in val.items():
            for K in _subsets(labels, len(L)):
                b = tab.best(L, K)
                counter.tick()
                if b is None:
                    continue
                tot = acc + b
                if sinks is not None:
                    J = tuple(sinks[t])
                    if not set(J) <= set(K):
                        continue
                    choices = [J]
                else:
                    choices = _subsets(K, alpha[t])
                for J in choices:
                    Ln = tuple(x for x in K if x not in J)
                    if Ln not in nxt or tot > nxt[Ln]:
                        nxt[Ln] = tot
        val = nxt
    return val.get((), None)


def m_alpha(ws, alpha, cap=None):
    """Max weight of an alpha-multipath; NEG_INF when there is none."""
    n = ws[0].network.rank
    alpha = _check_alpha(alpha, n, len(ws))
    if sum(alpha) == 0:
        return 0
    counter = _Counter(cap)
    v = _chain_max(_tables(ws, counter), alpha, n, counter)
    return NEG_INF if v is None else v


class MFunction:
    """Values on the integer points of the k-simplex of size n."""

    def __init__(self, n, k, values):
        self.n = n
        self.k = k
        vals = {}
        for a, v in dict(values).items():
            vals[tuple(int(x) for x in a)] = to_trop(v)
        pts = simplex_points(n, k)
        missing = [a for a in pts if a not in vals]
        extra = [a for a in vals if a not in set(pts)]
        if missing or extra:
            raise ValueError("MFunction domain mismatch: missing %s, extra %s"
                             % (missing[:3], extra[:3]))
        if vals[(0,) * k] != 0:
            raise ValueError("value at the origin must be 0")
        self.values = vals

    def __getitem__(self, alpha):
        return self.values[tuple(alpha)]

    def get(self, alpha, default=None):
        return self.values.get(tuple(alpha), default)

    def points(self):
        return simplex_points(self.n, self.k)

    def __eq__(self, other):
        return (isinstance(other, MFunction) and self.n == other.n and self.k == other.k
                and self.values == other.values)

    def __repr__(self):
        return "MFunction(n=%d, k=%d)" % (self.n, self.k)

    def to_json(self):
        return {"n": self.n, "k": self.k,
                "values": [{"alpha": list(a), "m": _json_val(self.values[a])}
                           for a in self.points()]}

    @classmethod
    def from_json(cls, obj):
        vals = {tuple(e["alpha"]): str(e["m"]) if isinstance(e["m"], float) else e["m"]
                for e in obj["values"]}
        return cls(int(obj["n"]), int(obj["k"]), vals)


def _json_val(v):
    if v is NEG_INF:
        return "-inf"
    if isinstance(v, int):
        return v
    return trop_str(v)


def m_map(ws, cap=None):
    n = ws[0].network.rank
    k = len(ws)
    counter = _Counter(cap)
    tables = _tables(ws, counter)
    vals = {}
    for a in simplex_points(n, k):
        if sum(a) == 0:
            vals[a] = 0
            continue
        v = _chain_max(tables, a, n, counter)
        vals[a] = NEG_INF if v is None else v
    return MFunction(n, k, vals)


def boundary_points(n, k):
    """Points lying on an edge of the simplex (at most two nonzero barycentric coords)."""
    return [a for a in simplex_points(n, k)
            if sum(1 for y in barycentric(a, n) if y) <= 2]


def boundary(m):
    return {a: m[a] for a in boundary_points(m.n, m.k)}


# ---------------------------------------------------------------------------
# explicit enumeration

class Multipath:
    """Families per factor; each path is a tuple of global vertex ids."""

    __slots__ = ("families", "sources", "sinks")

    def __init__(self, families, sources, sinks):
        self.families = families
        self.sources = sources
        self.sinks = sinks

    def key(self):
        return (self.sinks, self.sources, self.families)

    def vertices(self):
        return [v for fam in self.families for p in fam for v in p]

    def __repr__(self):
        return "Multipath(sources=%s, sinks=%s)" % (self.sources, self.sinks)


def factor_vertex_maps(nets):
    """Local vertex id -> global id in the concatenation, per factor."""
    maps = []
    nxt = 0
    prev_sinks = None
    for f, net in enumerate(nets):
        mp = {}
        glue = dict(zip(net.sources, prev_sinks)) if prev_sinks is not None else {}
        for v in range(len(net.vertices)):
            if v in glue:
                mp[v] = glue[v]
            else:
                mp[v] = nxt
                nxt += 1
        maps.append(mp)
        prev_sinks = [mp[s] for s in net.sinks]
    return maps


def enumerate_multipaths(ws, alpha, cap=None, sources=None, sinks=None):
    """Every alpha-multipath with its weight, sorted by (sinks, sources, paths).

    sources / sinks pin the source labels and the per-factor sink labels.
    """
    n = ws[0].network.rank
    k = len(ws)
    alpha = _check_alpha(alpha, n, k)
    counter = _Counter(cap)
    tables = _tables(ws, counter)
    maps = factor_vertex_maps([w.network for w in ws])
    labels = tuple(range(1, n + 1))
    rest = [sum(alpha[t:]) for t in range(k + 1)]
    out = []
    starts = [tuple(sources)] if sources is not None else list(_subsets(labels, rest[0]))

    def rec(t, alive, wt, done, src):
        # alive: (label at seam t, global vertex list) for paths that go on
        counter.tick()
        if t == k:
            out.append((done, wt, src))
            return
        L = tuple(lab for lab, _ in alive)
        by_label = dict(alive)
        net = ws[t].network
        for K in _subsets(labels, len(L)):
            fams = tables[t].families(L, K)
            if not fams:
                continue
            if sinks is not None:
                Js = [tuple(sinks[t])] if set(sinks[t]) <= set(K) else []
            else:
                Js = list(_subsets(K, alpha[t]))
            for fwt, fam in fams:
                ext = []
                for (vs, _), lab in zip(fam, L):
                    end = net.sinks.index(vs[-1]) + 1
                    ext.append((end, by_label[lab] + [maps[t][v] for v in vs[1:]]))
                ext.sort()
                nwt = NEG_INF if (wt is NEG_INF or fwt is NEG_INF) else wt + fwt
                for J in Js:
                    stop = [(e, p) for e, p in ext if e in J]
                    go = [(e, p) for e, p in ext if e not in J]
                    rec(t + 1, go, nwt, done + [stop], src)

    for L0 in starts:
        alive = [(lab, [maps[0][ws[0].network.sources[lab - 1]]]) for lab in L0]
        rec(0, alive, 0, [], L0)
    result = []
    for done, wt, src in out:
        fams = tuple(tuple(tuple(p) for _, p in f) for f in done)
        snk = tuple(tuple(e for e, _ in f) for f in done)
        result.append((Multipath(fams, tuple(src), snk), wt))
    result.sort(key=lambda r: r[0].key())
    return result


def max_multipath(ws, alpha, cap=None):
    """(weight, witness) with the lexicographically smallest sinks among maxima."""
    rows = enumerate_multipaths(ws, alpha, cap)
    if not rows:
        return NEG_INF, None
    best = max(wt for _, wt in rows)
    for mp, wt in rows:
        if wt == best:
            return best, mp


def m_alpha_minor_route(ws, alpha):
    """Same maximum computed from tropical Lindstrom minors of each factor.

    max over L_0, (J_t, L_t) of sum_t minor(w_t; L_{t-1}, J_t u L_t).
    """
    from .network import lindstrom_minor
    n = ws[0].network.rank
    k = len(ws)
    alpha = _check_alpha(alpha, n, k)
    labels = range(1, n + 1)
    best = NEG_INF
    rest = [sum(alpha[t:]) for t in range(k + 1)]

    def rec(t, L, acc):
        nonlocal best
        if t == k:
            if acc > best:
                best = acc
            return
        for K in itertools.combinations(labels, len(L)):
            v = lindstrom_minor(ws[t], L, K)
            if v is NEG_INF:
                # -inf minors cannot raise the max; empty families land here too
                continue
            for J in itertools.combinations(K, alpha[t]):
                rec(t + 1, tuple(x for x in K if x not in J), acc + v)

    for L0 in itertools.combinations(labels, rest[0]):
        rec(0, L0, 0)
    return best if sum(alpha) else 0


# ---------------------------------------------------------------------------
# single networks

def family_maxima(w, cap=None):
    """m_l(w) for l = 1..n (max weight over all l-families)."""
    n = w.network.rank
    counter = _Counter(cap)
    tab = FactorTable(w, counter)
    out = []
    for l in range(1, n + 1):
        v = _chain_max([tab], (l,), n, counter)
        out.append(NEG_INF if v is None else v)
    return out


def tropical_singular_values(w, cap=None):
    ms = family_maxima(w, cap)
    lam = []
    prev = 0
    for l, v in enumerate(ms, start=1):
        if v is NEG_INF:
            raise ValueError("no %d-family of finite weight; pad with -inf edges" % l)
        lam.append(v - prev)
        prev = v
    return tuple(lam)


@lru_cache(maxsize=None)
def alpha_families(n):
    """Edge sets of the unique i-families alpha_i^(l) of the standard network.

    Returns {(i, l): tuple of edge indices}.
    """
    net = standard_network(n)
    out = {}
    for l in range(1, n + 1):
        for i in range(1, l + 1):
            fams = list(disjoint_families(net, range(l - i + 1, l + 1), range(1, i + 1)))
            if len(fams) != 1:
                raise AssertionError("alpha_%d^(%d) is not unique" % (i, l))
            out[(i, l)] = tuple(sorted(e for _, es in fams[0] for e in es))
    return out


def calA(w):
    """Pattern of weights w(alpha_i^(l)) for a weighting of the standard network."""
    n = w.network.rank
    fams = alpha_families(n)
    rows = []
    for l in range(1, n + 1):
        rows.append([0] + [tprod(w.weights[e] for e in fams[(i, l)]) for i in range(1, l + 1)])
    return GZPattern(rows)


@lru_cache(maxsize=None)
def _calA_structure(n):
    net = standard_network(n)
    label_of = {e: lab for lab, e in net.essential.items()}
    fams = alpha_families(n)
    out = {}
    for (i, l), es in fams.items():
        labs = sorted(label_of[e] for e in es if e in label_of)
        if (l, i) not in labs:
            raise AssertionError("alpha_%d^(%d) misses a_%d,%d" % (i, l, l, i))
        others = [x for x in labs if x != (l, i)]
        if any(x >= (l, i) for x in others):
            raise AssertionError("calA is not unitriangular in lex order")
        out[(l, i)] = tuple(others)
    return out


def calA_inverse(p):
    """Essential-edge weighting w with calA(w) = p (other edges 0)."""
    n = p.n
    struct = _calA_structure(n)
    vals = {}
    for l in range(1, n + 1):
        for i in range(1, l + 1):
            v = p.m(i, l)
            for lab in struct[(l, i)]:
                v = v - vals[lab]
            vals[(l, i)] = v
    return standard_weighting(n, vals)


def calA_matrix(n):
    """0/1 matrix of calA in (l, i) lex order on both sides."""
    struct = _calA_structure(n)
    labs = [(l, i) for l in range(1, n + 1) for i in range(1, l + 1)]
    pos = {lab: k for k, lab in enumerate(labs)}
    mat = [[0] * len(labs) for _ in labs]
    for lab in labs:
        mat[pos[lab]][pos[lab]] = 1
        for o in struct[lab]:
            mat[pos[lab]][pos[o]] = 1
    return labs, mat


# ---------------------------------------------------------------------------
# multi-GZ

def multi_gz_failures(ws, cap=None):
    """alphas where no maximal multipath has top sources and bottom sinks."""
    n = ws[0].network.rank
    k = len(ws)
    counter = _Counter(cap)
    tables = _tables(ws, counter)
    bad = []
    for a in simplex_points(n, k):
        s = sum(a)
        if s == 0:
            continue
        full = _chain_max(tables, a, n, counter)
        src = tuple(range(n - s + 1, n + 1))
        snk = [tuple(range(1, x + 1)) for x in a]
        pinned = _chain_max(tables, a, n, counter, sources=src, sinks=snk)
        if full is None:
            continue
        if pinned is None or pinned != full:
            bad.append(a)
    return bad


def check_multi_gz(ws, cap=None):
    return not multi_gz_failures(ws, cap)


def gz_trop(w, cap=None):
    """Tropical GZ map: row l holds m_i of the truncation to labels <= l."""
    n = w.network.rank
    rows = []
    for l in range(1, n + 1):
        wl = truncate_weighting(w, l) if l < n else w
        rows.append([0] + family_maxima(wl, cap))
    return GZPattern(rows)
