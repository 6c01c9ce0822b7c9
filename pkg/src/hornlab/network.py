"""Planar networks, weightings over a semiring, and the correspondence map.

A network is an x-monotone DAG drawn in the strip 1 <= y <= n.  Sources
sit at the minimal x and sinks at the maximal x, both labeled 1..n from
bottom to top.  Vertex ids are small integers local to the network.
"""

from fractions import Fraction
from functools import lru_cache
import itertools

from .trop import NEG_INF, tplus, ttimes, to_trop, trop_str


class Semiring:
    def __init__(self, name, add, mul, zero, one):
        self.name = name
        self.add = add
        self.mul = mul
        self.zero = zero
        self.one = one

    def __repr__(self):
        return "Semiring(%s)" % self.name

    def total(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def product(self, values):
        acc = self.one
        for v in values:
            acc = self.mul(acc, v)
        return acc


def _add(a, b):
    return a + b


def _mul(a, b):
    return a * b


TROPICAL = Semiring("tropical", tplus, ttimes, NEG_INF, 0)
RATIONAL = Semiring("rational", _add, _mul, Fraction(0), Fraction(1))
# complex floats, or mpmath numbers; anything with + and *
COMPLEX = Semiring("complex", _add, _mul, 0, 1)


class NetworkError(ValueError):
    pass


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c):
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))


def segments_cross(p1, p2, q1, q2):
    """True when the closed segments meet somewhere other than a shared endpoint."""
    shared = {p1, p2} & {q1, q2}
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 == o2 == o3 == o4 == 0:
        # collinear: overlap beyond a single shared point is a crossing
        if not (_on_segment(p1, p2, q1) or _on_segment(p1, p2, q2)
                or _on_segment(q1, q2, p1) or _on_segment(q1, q2, p2)):
            return False
        xs = sorted([p1, p2])
        ys = sorted([q1, q2])
        lo, hi = max(xs[0], ys[0]), min(xs[1], ys[1])
        return lo != hi
    if shared:
        return False
    if o1 != o2 and o3 != o4:
        return True
    for o, a, b, c in ((o1, p1, p2, q1), (o2, p1, p2, q2), (o3, q1, q2, p1), (o4, q1, q2, p2)):
        if o == 0 and _on_segment(a, b, c):
            return True
    return False


class PlanarNetwork:
    """Immutable planar network.

    vertices: tuple of (x, y) Fractions indexed by vertex id.
    edges: tuple of (tail, head).
    sources, sinks: vertex ids for labels 1..n.
    essential: dict label -> edge index (standard networks only).
    """

    def __init__(self, rank, vertices, edges, verticals=(), essential=None,
                 sources=None, sinks=None, validate=True):
        self.rank = rank
        self.vertices = tuple((Fraction(x), Fraction(y)) for x, y in vertices)
        self.edges = tuple((int(t), int(h)) for t, h in edges)
        self.verticals = tuple(Fraction(v) for v in verticals)
        self.essential = dict(essential or {})
        if sources is None or sinks is None:
            sources, sinks = self._find_terminals()
        self.sources = tuple(sources)
        self.sinks = tuple(sinks)
        if validate:
            self.validate()
        self._out = [[] for _ in self.vertices]
        for idx, (t, h) in enumerate(self.edges):
            self._out[t].append((h, idx))
        # topological order: x is strictly increasing along edges
        self.order = tuple(sorted(range(len(self.vertices)), key=lambda v: self.vertices[v]))
        self._paths = {}

    def _find_terminals(self):
        n = self.rank
        xs = [v[0] for v in self.vertices]
        lo, hi = min(xs), max(xs)
        src = sorted((i for i, v in enumerate(self.vertices) if v[0] == lo),
                     key=lambda i: self.vertices[i][1])
        snk = sorted((i for i, v in enumerate(self.vertices) if v[0] == hi),
                     key=lambda i: self.vertices[i][1])
        if len(src) != n or len(snk) != n:
            raise NetworkError("expected %d sources and %d sinks, found %d and %d"
                               % (n, n, len(src), len(snk)))
        return src, snk

    def validate(self):
        n = self.rank
        if n < 1:
            raise NetworkError("rank must be positive")
        for i, (x, y) in enumerate(self.vertices):
            if not (1 <= y <= n):
                raise NetworkError("vertex %d has y=%s outside [1, %d]" % (i, y, n))
        if len(set(self.vertices)) != len(self.vertices):
            raise NetworkError("two vertices share a position")
        if len(self.sources) != n or len(self.sinks) != n:
            raise NetworkError("need exactly %d sources and sinks" % n)
        for (t, h) in self.edges:
            if not (0 <= t < len(self.vertices) and 0 <= h < len(self.vertices)):
                raise NetworkError("edge (%d, %d) references a missing vertex" % (t, h))
            if not self.vertices[t][0] < self.vertices[h][0]:
                raise NetworkError("edge (%d, %d) is not left-to-right" % (t, h))
        segs = [(self.vertices[t], self.vertices[h]) for t, h in self.edges]
        for a in range(len(segs)):
            for b in range(a + 1, len(segs)):
                if segments_cross(segs[a][0], segs[a][1], segs[b][0], segs[b][1]):
                    raise NetworkError("edges %d and %d cross" % (a, b))

    @property
    def n(self):
        return self.rank

    def out_edges(self, v):
        return self._out[v]

    def width(self):
        xs = [v[0] for v in self.vertices]
        return max(xs) - min(xs)

    def paths(self, start, stop):
        """All paths start -> stop as (vertex tuple, edge-index tuple); cached."""
        key = (start, stop)
        if key not in self._paths:
            out = []
            target_x = self.vertices[stop][0]

            def walk(v, vs, es):
                if v == stop:
                    out.append((tuple(vs), tuple(es)))
                    return
                for h, idx in self._out[v]:
                    if self.vertices[h][0] <= target_x:
                        vs.append(h)
                        es.append(idx)
                        walk(h, vs, es)
                        vs.pop()
                        es.pop()

            walk(start, [start], [])
            self._paths[key] = tuple(out)
        return self._paths[key]

    def __repr__(self):
        return "PlanarNetwork(rank=%d, %d vertices, %d edges)" % (
            self.rank, len(self.vertices), len(self.edges))


class Weighting:
    """Edge -> semiring value assignment on a fixed network."""

    def __init__(self, network, weights, semiring=TROPICAL):
        weights = tuple(weights)
        if len(weights) != len(network.edges):
            raise ValueError("need one weight per edge (%d), got %d"
                             % (len(network.edges), len(weights)))
        if semiring is TROPICAL:
            weights = tuple(to_trop(w) for w in weights)
        self.network = network
        self.weights = weights
        self.semiring = semiring

    @property
    def n(self):
        return self.network.rank

    def path_weight(self, edge_indices):
        return self.semiring.product(self.weights[e] for e in edge_indices)

    def essential_values(self):
        return {lab: self.weights[e] for lab, e in sorted(self.network.essential.items())}

    def map(self, fn, semiring):
        return Weighting(self.network, [fn(w) for w in self.weights], semiring)

    def __repr__(self):
        return "Weighting(%r, %s)" % (self.network, self.semiring.name)


# ---------------------------------------------------------------------------
# standard network

def _st_slant_x(n, l, i):
    return Fraction(n + 1 - l) + Fraction(3, 2) * (i - 1)


@lru_cache(maxsize=None)
def standard_network(n):
    """The standard network on n lines.

    Slant a_{l,i} (2 <= l <= n, 1 <= i < l) runs from (x, l) down to
    (x + 1/2, l - 1) with x = n + 1 - l + 3(i - 1)/2.  The last horizontal
    segment of line l carries label (l, l).  Other horizontal segments
    are non-essential.
    """
    if n < 1:
        raise NetworkError("rank must be positive")
    sink_x = Fraction(3 * n, 2) if n > 1 else Fraction(1)
    # points on each line
    marks = {l: {Fraction(0), sink_x} for l in range(1, n + 1)}
    slants = []
    for l in range(2, n + 1):
        for i in range(1, l):
            x = _st_slant_x(n, l, i)
            marks[l].add(x)
            marks[l - 1].add(x + Fraction(1, 2))
            slants.append(((l, i), (x, l), (x + Fraction(1, 2), l - 1)))
    verts = []
    index = {}
    for l in range(1, n + 1):
        for x in sorted(marks[l]):
            index[(x, Fraction(l))] = len(verts)
            verts.append((x, Fraction(l)))
    edges = []
    essential = {}
    for l in range(1, n + 1):
        xs = sorted(marks[l])
        for a, b in zip(xs, xs[1:]):
            if b == sink_x:
                essential[(l, l)] = len(edges)
            edges.append((index[(a, Fraction(l))], index[(b, Fraction(l))]))
    for lab, p, q in slants:
        essential[lab] = len(edges)
        edges.append((index[(p[0], Fraction(p[1]))], index[(q[0], Fraction(q[1]))]))
    return PlanarNetwork(n, verts, edges, essential=essential)


def first_segments(net):
    """Edge index of the source-adjacent horizontal segment on each line."""
    out = {}
    for l, s in enumerate(net.sources, start=1):
        for h, idx in net.out_edges(s):
            if net.vertices[h][1] == net.vertices[s][1]:
                out[l] = idx
    return out


def standard_weighting(n, values=None, semiring=TROPICAL, default=None):
    """Weighting of the standard network from {(l, i): value} on essential edges.

    Unlisted edges get `default` (semiring one when None).
    """
    net = standard_network(n)
    fill = semiring.one if default is None else default
    w = [fill] * len(net.edges)
    for lab, v in (values or {}).items():
        if lab not in net.essential:
            raise KeyError("no essential edge %r in the rank-%d standard network" % (lab, n))
        w[net.essential[lab]] = v
    return Weighting(net, w, semiring)


def essential_labels(n):
    return [(l, i) for l in range(1, n + 1) for i in range(1, l + 1)]


def straight_network(n, width=1):
    verts = []
    edges = []
    for l in range(1, n + 1):
        verts.append((0, l))
        verts.append((width, l))
        edges.append((2 * l - 2, 2 * l - 1))
    return PlanarNetwork(n, verts, edges)


# ---------------------------------------------------------------------------
# concatenation and truncation

def concatenate(p1, p2):
    """p1 followed by p2; sinks of p1 are glued to sources of p2."""
    if p1.rank != p2.rank:
        raise NetworkError("rank mismatch: %d vs %d" % (p1.rank, p2.rank))
    x1 = max(v[0] for v in p1.vertices)
    x2 = min(v[0] for v in p2.vertices)
    shift = x1 - x2
    verts = list(p1.vertices)
    remap = {}
    glue = dict(zip(p2.sources, p1.sinks))
    for vid, (x, y) in enumerate(p2.vertices):
        if vid in glue:
            remap[vid] = glue[vid]
        else:
            remap[vid] = len(verts)
            verts.append((x + shift, y))
    edges = list(p1.edges) + [(remap[t], remap[h]) for t, h in p2.edges]
    verticals = list(p1.verticals) + [x1] + [v + shift for v in p2.verticals]
    off = len(p1.edges)
    essential = {}
    # keep factor-qualified labels so essential edges of products stay distinct
    for lab, e in p1.essential.items():
        essential[_qualify(lab, 0)] = e
    depth = len(p1.verticals) + 1
    for lab, e in p2.essential.items():
        essential[_qualify(lab, depth)] = e + off
    net = PlanarNetwork(p1.rank, verts, edges, verticals=verticals, essential=essential,
                        sources=p1.sources, sinks=[remap[s] for s in p2.sinks],
                        validate=False)
    return net


def _qualify(lab, offset):
    """(factor, label); labels already qualified get their factor shifted."""
    if isinstance(lab[1], tuple):
        return (lab[0] + offset, lab[1])
    return (offset, lab)


def concatenate_weightings(w1, w2):
    if w1.semiring is not w2.semiring:
        raise ValueError("weightings use different semirings")
    net = concatenate(w1.network, w2.network)
    return Weighting(net, w1.weights + w2.weights, w1.semiring)


def concat_all(ws):
    out = ws[0]
    for w in ws[1:]:
        out = concatenate_weightings(out, w)
    return out


def truncate(p, l):
    """Drop sources and sinks above label l and the edges touching them.

    Returns (network of rank l, list mapping new edge index -> old index).
    Vertices that no longer lie on a source-to-sink path are pruned.
    """
    if not 1 <= l <= p.rank:
        raise NetworkError("truncation level %d outside [1, %d]" % (l, p.rank))
    dead = set(p.sources[l:]) | set(p.sinks[l:])
    kept = [i for i, (t, h) in enumerate(p.edges) if t not in dead and h not in dead]
    # forward reachability from kept sources, backward from kept sinks
    succ = {}
    pred = {}
    for i in kept:
        t, h = p.edges[i]
        succ.setdefault(t, []).append(h)
        pred.setdefault(h, []).append(t)
    fwd = set(p.sources[:l])
    for v in p.order:
        if v in fwd:
            fwd.update(succ.get(v, ()))
    bwd = set(p.sinks[:l])
    for v in reversed(p.order):
        if v in bwd:
            bwd.update(pred.get(v, ()))
    alive = fwd & bwd
    kept = [i for i in kept if p.edges[i][0] in alive and p.edges[i][1] in alive]
    used = sorted(alive | set(p.sources[:l]) | set(p.sinks[:l]))
    newid = {v: k for k, v in enumerate(used)}
    verts = [p.vertices[v] for v in used]
    edges = [(newid[p.edges[i][0]], newid[p.edges[i][1]]) for i in kept]
    back = {e: k for k, e in enumerate(kept)}
    essential = {lab: back[e] for lab, e in p.essential.items() if e in back}
    net = PlanarNetwork(l, verts, edges, verticals=p.verticals, essential=essential,
                        sources=[newid[s] for s in p.sources[:l]],
                        sinks=[newid[s] for s in p.sinks[:l]], validate=False)
    return net, kept


def truncate_weighting(w, l):
    net, kept = truncate(w.network, l)
    return Weighting(net, [w.weights[i] for i in kept], w.semiring)


def smoothed_graph(p):
    """networkx DiGraph with degree-(1,1) interior vertices contracted.

    Sources and sinks carry their labels as node attributes; useful for
    isomorphism tests between networks drawn differently.
    """
    import networkx as nx
    g = nx.MultiDiGraph()
    term = {}
    for k, s in enumerate(p.sources, start=1):
        term[s] = ("src", k)
    for k, s in enumerate(p.sinks, start=1):
        term[s] = ("snk", k) if s not in term else ("both", k)
    for v in range(len(p.vertices)):
        g.add_node(v, term=term.get(v, ""))
    for t, h in p.edges:
        g.add_edge(t, h)
    changed = True
    while changed:
        changed = False
        for v in list(g.nodes):
            if g.nodes[v]["term"]:
                continue
            if g.in_degree(v) == 1 and g.out_degree(v) == 1:
                (a, _), (_, b) = list(g.in_edges(v))[0], list(g.out_edges(v))[0]
                g.remove_node(v)
                g.add_edge(a, b)
                changed = True
            elif g.in_degree(v) == 0 and g.out_degree(v) == 0:
                g.remove_node(v)
                changed = True
    return g


def isomorphic(p, q):
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match
    return nx.is_isomorphic(smoothed_graph(p), smoothed_graph(q),
                            node_match=categorical_node_match("term", ""))


# ---------------------------------------------------------------------------
# correspondence map and minors

def correspondence_matrix(w):
    """Rows are source labels, columns sink labels."""
    net = w.network
    S = w.semiring
    sink_col = {s: j for j, s in enumerate(net.sinks)}
    n = net.rank
    mat = [[S.zero] * n for _ in range(n)]
    for i, src in enumerate(net.sources):
        acc = {src: S.one}
        for v in net.order:
            if v not in acc:
                continue
            val = acc[v]
            for h, idx in net.out_edges(v):
                contrib = S.mul(val, w.weights[idx])
                acc[h] = S.add(acc[h], contrib) if h in acc else contrib
        for s, j in sink_col.items():
            if s in acc:
                mat[i][j] = acc[s]
    return mat


def disjoint_families(net, I, J):
    """All vertex-disjoint path families from sources I to sinks J (labels).

    Yields tuples of (vertex tuple, edge tuple), one per source in I order.
    """
    I = tuple(I)
    J = tuple(J)
    if len(I) != len(J):
        raise ValueError("|I| != |J|")
    targets = [net.sinks[j - 1] for j in J]

    def rec(k, used, free, acc):
        if k == len(I):
            yield tuple(acc)
            return
        s = net.sources[I[k] - 1]
        for t in list(free):
            for vs, es in net.paths(s, t):
                if used.isdisjoint(vs):
                    acc.append((vs, es))
                    yield from rec(k + 1, used.union(vs), free - {t}, acc)
                    acc.pop()

    yield from rec(0, frozenset(), frozenset(targets), [])


def lindstrom_minor(w, I, J):
    """Semiring sum over vertex-disjoint families I -> J of family weights."""
    S = w.semiring
    total = S.zero
    for fam in disjoint_families(w.network, I, J):
        total = S.add(total, S.product(w.path_weight(es) for _, es in fam))
    return total


def matmul(a, b, semiring):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = semiring.zero
            for k in range(m):
                acc = semiring.add(acc, semiring.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# random networks and JSON

def random_network(n, slants, rng):
    """Random planar network with `slants` elementary slants between adjacent lines.

    Each slant gets its own x-slot so nothing crosses; direction is random.
    """
    marks = {l: {Fraction(0), Fraction(slants + 1)} for l in range(1, n + 1)}
    sl = []
    for j in range(slants):
        if n == 1:
            break
        lo = rng.randrange(1, n)
        x = Fraction(j + 1)
        if rng.random() < 0.5:
            a, b = (x, lo + 1), (x + Fraction(1, 2), lo)
        else:
            a, b = (x, lo), (x + Fraction(1, 2), lo + 1)
        marks[a[1]].add(a[0])
        marks[b[1]].add(b[0])
        sl.append((a, b))
    verts = []
    index = {}
    for l in range(1, n + 1):
        for x in sorted(marks[l]):
            index[(x, l)] = len(verts)
            verts.append((x, l))
    edges = []
    for l in range(1, n + 1):
        xs = sorted(marks[l])
        for a, b in zip(xs, xs[1:]):
            edges.append((index[(a, l)], index[(b, l)]))
    for a, b in sl:
        edges.append((index[a], index[b]))
    return PlanarNetwork(n, verts, edges)


def _num_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def network_to_json(w):
    """JSON object for a tropical (or rational) weighting and its network."""
    net = w.network
    verts = [{"id": i, "x": _num_str(x), "y": _num_str(y)} for i, (x, y) in enumerate(net.vertices)]
    edges = []
    for (t, h), val in zip(net.edges, w.weights):
        edges.append({"tail": t, "head": h, "weight": trop_str(val)})
    return {"rank": net.rank, "vertices": verts, "edges": edges,
            "verticals": [_num_str(v) for v in net.verticals]}


def network_from_json(obj):
    """Parse one network object; returns (Weighting, angles or None).

    Angles, when present, map edge index -> complex number.
    """
    try:
        rank = int(obj["rank"])
        raw_v = obj["vertices"]
        raw_e = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise NetworkError("network object is missing field %s" % exc)
    ids = {}
    verts = []
    for v in raw_v:
        key = v["id"]
        if key in ids:
            raise NetworkError("duplicate vertex id %r" % (key,))
        ids[key] = len(verts)
        verts.append((Fraction(str(v["x"])), Fraction(str(v["y"]))))
    edges = []
    weights = []
    angles = {}
    for k, e in enumerate(raw_e):
        try:
            edges.append((ids[e["tail"]], ids[e["head"]]))
        except KeyError as exc:
            raise NetworkError("edge %d references unknown vertex %s" % (k, exc))
        raw = e.get("weight", 0)
        # decimal literals are read as written, not as their binary float value
        weights.append(to_trop(str(raw) if isinstance(raw, float) else raw))
        if "angle" in e and e["angle"] is not None:
            re, im = e["angle"]
            angles[k] = complex(float(re), float(im))
    net = PlanarNetwork(rank, verts, edges, verticals=obj.get("verticals", ()))
    return Weighting(net, weights, TROPICAL), (angles or None)


def all_index_sets(n, size):
    return [tuple(c) for c in itertools.combinations(range(1, n + 1), size)]
