"""Max-plus arithmetic and Gelfand-Zeitlin patterns.

Finite tropical values are plain exact numbers (int or Fraction).  The
bottom element is the singleton NEG_INF, which orders below every number
and absorbs tropical multiplication.
"""

from fractions import Fraction
import numbers


class _NegInf:
    __slots__ = ()

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __hash__(self):
        return hash("hornlab.NEG_INF")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    # -inf + x stays -inf; this makes sum() over path weights behave
    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_neg_inf, ())


def _neg_inf():
    return NEG_INF


NEG_INF = object.__new__(_NegInf)


def is_finite(x):
    return x is not NEG_INF


def to_trop(x):
    """Parse a tropical value from a number or string.

    Strings may be "-inf", integers, decimals or "p/q"; floats are taken
    at their exact binary value.
    """
    if x is NEG_INF:
        return x
    if isinstance(x, str):
        s = x.strip()
        if s in ("-inf", "-Infinity", "-infinity"):
            return NEG_INF
        v = Fraction(s)
        return int(v) if v.denominator == 1 else v
    if isinstance(x, bool):
        raise TypeError("booleans are not tropical values")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, float):
        if x == float("-inf"):
            return NEG_INF
        if x != x or x == float("inf"):
            raise ValueError("NaN and +inf are not tropical values")
        v = Fraction(x)
        return int(v) if v.denominator == 1 else v
    if isinstance(x, numbers.Rational):
        return to_trop(Fraction(x.numerator, x.denominator))
    raise TypeError("cannot interpret %r as a tropical value" % (x,))


def trop_str(x):
    """Exact string form used in JSON output."""
    if x is NEG_INF:
        return "-inf"
    return str(x)


def tplus(a, b):
    return a if a >= b else b


def ttimes(a, b):
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


def trop_ops(a, b):
    return tplus(a, b), ttimes(a, b)


def tsum(values):
    """Tropical sum (max) of an iterable; NEG_INF when empty."""
    best = NEG_INF
    for v in values:
        if v > best:
            best = v
    return best


def tprod(values):
    total = 0
    for v in values:
        if v is NEG_INF:
            return NEG_INF
        total = total + v
    return total


class GZPattern:
    """Triangular array m_i^(l), 0 <= i <= l <= n, with m_0^(l) = 0.

    rows[l-1] holds (m_0^(l), ..., m_l^(l)).
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(to_trop(v) for v in r) for r in rows)
        for l, r in enumerate(rows, start=1):
            if len(r) == l:
                r = (0,) + r
            if len(r) != l + 1:
                raise ValueError("row %d must have %d or %d entries" % (l, l, l + 1))
            if r[0] != 0:
                raise ValueError("m_0^(%d) must be 0" % l)
        self.rows = tuple(r if len(r) == l + 1 else (0,) + r
                          for l, r in enumerate(rows, start=1))
        self.n = len(self.rows)

    def m(self, i, l):
        if l == 0 and i == 0:
            return 0
        return self.rows[l - 1][i]

    def __eq__(self, other):
        return isinstance(other, GZPattern) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(",".join(trop_str(v) for v in r) for r in self.rows)
        return "GZPattern(%s)" % body

    def shifted(self, c):
        """Add c to every entry with i >= 1 (m_0 stays 0)."""
        return GZPattern([(0,) + tuple(ttimes(v, c) for v in r[1:]) for r in self.rows])

    def is_finite(self):
        return all(v is not NEG_INF for r in self.rows for v in r)


def interlacing_values(p):
    """lambda_i^(l) = m_i^(l) - m_{i-1}^(l), returned as rows l = 1..n."""
    if not p.is_finite():
        raise ValueError("pattern has a non-finite entry")
    return tuple(tuple(r[i] - r[i - 1] for i in range(1, len(r))) for r in p.rows)


def gz_violations(p, delta=0):
    """List the failing GZ inequalities.

    Each entry is (family, i, l, slack) where family "up" is
    lambda_i^(l+1) - lambda_i^(l) and "down" is lambda_i^(l) - lambda_{i+1}^(l+1).
    A pattern with a -inf entry yields [("non-finite entry", ...)].
    """
    if not p.is_finite():
        bad = [(i, l) for l, r in enumerate(p.rows, start=1)
               for i, v in enumerate(r) if v is NEG_INF]
        return [("non-finite entry", bad[0][0], bad[0][1], NEG_INF)]
    lam = interlacing_values(p)
    out = []
    for l in range(1, p.n):
        for i in range(1, l + 1):
            up = lam[l][i - 1] - lam[l - 1][i - 1]
            down = lam[l - 1][i - 1] - lam[l][i]
            if up < delta:
                out.append(("up", i, l, up))
            if down < delta:
                out.append(("down", i, l, down))
    return out


def gz_check(p, delta=0):
    return not gz_violations(p, delta)


def gz_slack(p):
    """Smallest slack over both inequality families (None when n = 1)."""
    lam = interlacing_values(p)
    best = None
    for l in range(1, p.n):
        for i in range(1, l + 1):
            for v in (lam[l][i - 1] - lam[l - 1][i - 1], lam[l - 1][i - 1] - lam[l][i]):
                if best is None or v < best:
                    best = v
    return best


def pattern_from_lambdas(lams):
    """Inverse of interlacing_values: partial sums of each row."""
    rows = []
    for r in lams:
        acc = [0]
        for v in r:
            acc.append(acc[-1] + v)
        rows.append(acc)
    return GZPattern(rows)
