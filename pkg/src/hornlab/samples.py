"""Worked example and random generators shared by tests and the CLI."""

from fractions import Fraction
import random

from .network import PlanarNetwork, Weighting, TROPICAL, standard_network, standard_weighting
from .trop import NEG_INF


def two_line_factor(bottom, slant, top):
    """Rank-2 factor of width 1 with one slant from line 2 down to line 1.

    `bottom` sits on the part of line 1 left of the slant's landing point,
    `top` on the part of line 2 right of the slant's start.
    """
    verts = [(0, 1), (Fraction(5, 8), 1), (1, 1),
             (0, 2), (Fraction(3, 8), 2), (1, 2)]
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (4, 1)]
    net = PlanarNetwork(2, verts, edges)
    return Weighting(net, [bottom, 0, 0, top, slant], TROPICAL)


def worked_example():
    """Three rank-2 weightings whose m-tetrahedron is (0,3,5,5 / 2,3,4,4,6,7)."""
    return [two_line_factor(2, 1, 1), two_line_factor(1, -1, 1), two_line_factor(1, 2, -1)]


WORKED_EXAMPLE_M = {
    (0, 0, 0): 0, (2, 0, 0): 3, (0, 2, 0): 5, (0, 0, 2): 5,
    (1, 0, 0): 2, (0, 1, 0): 3, (0, 0, 1): 4,
    (1, 1, 0): 4, (1, 0, 1): 6, (0, 1, 1): 7,
}


def make_rng(seed, *stream):
    """Independent stdlib RNG for (seed, stream...) so sub-tasks never share state."""
    key = "hornlab:%d:%s" % (seed, ":".join(str(s) for s in stream))
    return random.Random(key)


def random_full_weighting(net, rng, lo=-9, hi=9, neg_inf_rate=0.0):
    """Integer weights on every edge."""
    w = []
    for _ in net.edges:
        if neg_inf_rate and rng.random() < neg_inf_rate:
            w.append(NEG_INF)
        else:
            w.append(rng.randint(lo, hi))
    return Weighting(net, w, TROPICAL)


def random_essential_weighting(n, rng, lo=-9, hi=9):
    net = standard_network(n)
    vals = {lab: rng.randint(lo, hi) for lab in net.essential}
    return standard_weighting(n, vals)


def random_gz_weighting(n, rng, lo=-9, hi=9, delta=0, tries=100000):
    """Rejection-sample essential weights until calA lands in the GZ cone."""
    from .multipath import calA
    from .trop import gz_check
    for _ in range(tries):
        w = random_essential_weighting(n, rng, lo, hi)
        if gz_check(calA(w), delta):
            return w
    raise RuntimeError("no GZ weighting found in %d tries" % tries)


def random_gz_pattern(n, rng, lo=-9, hi=9):
    """Integer GZ pattern: random top row, each lower row drawn inside the interlacing gaps."""
    from .trop import pattern_from_lambdas
    top = sorted((rng.randint(lo, hi) for _ in range(n)), reverse=True)
    rows = [top]
    for l in range(n - 1, 0, -1):
        up = rows[0]
        rows.insert(0, [rng.randint(up[i + 1], up[i]) for i in range(l)])
    return pattern_from_lambdas(rows)
