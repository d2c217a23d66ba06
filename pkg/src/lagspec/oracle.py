"""Independent ground truth from periodic and eventually periodic sequences.

Nothing here touches the graph construction: values come straight from the
height function ``a_0 + [0; a_{-1}, a_{-2}, ...] + [0; a_1, a_2, ...]``.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import log
from typing import Iterator, Sequence

from .contfrac import KContext, Word, apply_word, convergents, periodic_value
from .exact import Surd

MAX_NET_LENGTH = 19


@dataclass(frozen=True)
class PeriodicSequence:
    period: Word

    def __post_init__(self):
        if not self.period:
            raise ValueError("empty period")


@dataclass(frozen=True)
class EventuallyPeriodic:
    """``... left left center right right ...`` with both periods repeated forever."""

    left_period: Word
    center: Word
    right_period: Word

    def __post_init__(self):
        if not self.left_period or not self.right_period:
            raise ValueError("both periods must be nonempty")

    def digit(self, j: int) -> int:
        c = len(self.center)
        if j < 0:
            return self.left_period[j % len(self.left_period)]
        if j < c:
            return self.center[j]
        return self.right_period[(j - c) % len(self.right_period)]


@dataclass(frozen=True)
class ValueEnclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        if isinstance(x, Surd):
            return self.lo <= x and x <= self.hi
        return self.lo <= x <= self.hi

    def __add__(self, other: ValueEnclosure) -> ValueEnclosure:
        return ValueEnclosure(self.lo + other.lo, self.hi + other.hi)


def enclose(x: Surd, digits: int = 50) -> ValueEnclosure:
    lo, hi = x.bounds(digits)
    return ValueEnclosure(lo, hi)


def _rotate(word: Sequence[int], i: int) -> Word:
    i %= len(word)
    return tuple(word[i:]) + tuple(word[:i])


def lagrange_periodic(period: Sequence[int] | PeriodicSequence) -> Surd:
    """L of the periodic sequence: the largest height over one period."""
    if isinstance(period, PeriodicSequence):
        period = period.period
    u = tuple(period)
    if not u:
        raise ValueError("empty period")
    n = len(u)
    back = u[::-1]
    best = None
    for i in range(n):
        right = periodic_value(_rotate(u, i + 1))
        # digits u[i-1], u[i-2], ... read backwards
        left = periodic_value(_rotate(back, n - i))
        h = right + left + u[i]
        if best is None or h > best:
            best = h
    return best


def height_enclosure(a0: int, right: Sequence[int], left: Sequence[int]) -> ValueEnclosure:
    """Enclosure of the height when only finitely many digits on each side are known.

    Any continuation of a tail keeps it between ``p_n/q_n`` and
    ``(p_n + p_{n-1})/(q_n + q_{n-1})``.
    """
    total_lo = Fraction(a0)
    total_hi = Fraction(a0)
    for tail in (right, left):
        c = convergents(tail)
        x = Fraction(c.p_n, c.q_n)
        y = Fraction(c.p_n + c.p_prev, c.q_n + c.q_prev)
        total_lo += min(x, y)
        total_hi += max(x, y)
    return ValueEnclosure(total_lo, total_hi)


def _height_at(seq: EventuallyPeriodic, j: int) -> tuple[Surd, Surd, int]:
    c = len(seq.center)
    L = len(seq.left_period)
    # forward tail a_{j+1}, a_{j+2}, ...
    if j + 1 >= c:
        right = periodic_value(_rotate(seq.right_period, j + 1 - c))
    else:
        prefix = tuple(seq.digit(t) for t in range(j + 1, c))
        right = apply_word(prefix, periodic_value(seq.right_period))
    # backward tail a_{j-1}, a_{j-2}, ...
    back_period = seq.left_period[::-1]
    if j - 1 < 0:
        start = (j - 1) % L  # position inside left_period of a_{j-1}
        left = periodic_value(_rotate(back_period, L - 1 - start))
    else:
        prefix = tuple(seq.digit(t) for t in range(j - 1, -1, -1))
        left = apply_word(prefix, periodic_value(back_period))
    return right, left, seq.digit(j)


def markov_window(seq: EventuallyPeriodic, w: int, precision: int = 40) -> ValueEnclosure:
    """Certified enclosure of M = sup of the height over all shifts of ``seq``.

    Positions within ``w`` of the center are evaluated exactly (their tails are
    quadratic irrationals).  Farther out the height is within ``2**(1-w)`` of
    a height of the pure periodic sequence, whose maximum is its Lagrange value.
    """
    if w < 1:
        raise ValueError("window half-width must be >= 1")
    c = len(seq.center)
    lo = hi = None
    for j in range(-w, c + w):
        right, left, a = _height_at(seq, j)
        e = enclose(right, precision) + enclose(left, precision)
        e = ValueEnclosure(e.lo + a, e.hi + a)
        lo = e.lo if lo is None else max(lo, e.lo)
        hi = e.hi if hi is None else max(hi, e.hi)
    delta = Fraction(1, 2 ** (w - 1))
    for period in (seq.left_period, seq.right_period):
        tail = enclose(lagrange_periodic(period), precision)
        lo = max(lo, tail.lo)
        hi = max(hi, tail.hi + delta)
    return ValueEnclosure(lo, hi)


# -- nets ---------------------------------------------------------------------


def lyndon_words(k: int, maxlen: int) -> Iterator[Word]:
    """Lyndon words over 1..k of length <= maxlen, in lexicographic order (Duval)."""
    w = [0]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < maxlen:
            w.append(w[len(w) - m])
        while w and w[-1] == k:
            w.pop()


def compare_values(x: Surd, y: Surd) -> int:
    """Order two values that may live in different quadratic fields."""
    if not (x.b and y.b) or x.d == y.d:
        return x._cmp(y)
    # distinct fields: irrational values are never equal, refinement terminates
    digits = 20
    while digits <= 640:
        xl, xh = x.bounds(digits)
        yl, yh = y.bounds(digits)
        if xh < yl:
            return -1
        if yh < xl:
            return 1
        digits *= 2
    raise ArithmeticError(f"could not separate {x} and {y}")


def within(x: Surd, y: Surd, r) -> bool:
    """Certified test of ``|x - y| <= r`` for values from possibly different fields."""
    if not (x.b and y.b) or x.d == y.d:
        return abs(x - y) <= r
    digits = 20
    while digits <= 640:
        xl, xh = x.bounds(digits)
        yl, yh = y.bounds(digits)
        if max(xh - yl, yh - xl) <= r:
            return True
        if max(xl - yh, yl - xh) > r:
            return False
        digits *= 2
    raise ArithmeticError(f"could not decide |{x} - {y}| <= {r}")


def sort_values(values) -> list[Surd]:
    return sorted(set(values), key=cmp_to_key(compare_values))


def periodic_net(ctx: KContext | int, maxlen: int) -> list[Surd]:
    """Lagrange values of all periodic words of length <= maxlen, one per rotation class."""
    k = ctx if isinstance(ctx, int) else ctx.k
    if maxlen >= MAX_NET_LENGTH + 1:
        raise ValueError(f"maxlen={maxlen} is too large to enumerate (limit {MAX_NET_LENGTH})")
    if maxlen < 1:
        raise ValueError("maxlen must be >= 1")
    return sort_values(lagrange_periodic(u) for u in lyndon_words(k, maxlen))


def certified_level(k: int, maxlen: int) -> int | None:
    """Largest N with maxlen >= K^(2N+1); the net is then 2^(2-N)-dense in L_K."""
    if maxlen < k:
        return None
    n = int((log(maxlen) / log(k) - 1) // 2)
    while k ** (2 * (n + 1) + 1) <= maxlen:
        n += 1
    while n >= 0 and k ** (2 * n + 1) > maxlen:
        n -= 1
    return n if n >= 0 else None


# -- verification ------------------------------------------------------------


@dataclass
class VerifyReport:
    checked: int
    radius: Fraction
    worst_gap: Fraction = Fraction(0)
    worst_value: Surd | None = None
    violations: list[Surd] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _gap_upper(v: Surd, w: Surd, digits: int) -> Fraction:
    if not (v.b and w.b) or v.d == w.d:
        lo, hi = abs(v - w).bounds(digits)
        return hi
    vl, vh = v.bounds(digits)
    wl, wh = w.bounds(digits)
    return max(vh - wl, wh - vl)


def verify_spectrum(sa, net: Sequence[Surd], digits: int = 40) -> VerifyReport:
    """Check that every net value has a weight of ``sa`` within 1/Q."""
    radius = Fraction(1, sa.q)
    report = VerifyReport(len(net), radius)
    weights = list(sa.weights)
    if not net:
        return report
    anchors = [w.bounds(digits)[0] for w in weights]
    for v in net:
        i = bisect_left(anchors, v.bounds(digits)[0])
        best = None
        for j in (i - 1, i, i + 1):
            if 0 <= j < len(weights):
                gap = _gap_upper(v, weights[j], digits)
                if best is None or gap < best:
                    best = gap
        if best is None or best > radius:
            report.violations.append(v)
        if best is not None and best > report.worst_gap:
            report.worst_gap = best
            report.worst_value = v
    return report
