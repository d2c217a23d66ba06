"""Continued-fraction convergents and cylinder geometry over digits ``1..K``.

Words are plain tuples of ints, e.g. ``(1, 2)`` stands for ``[0; 1, 2, ...]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exact import Surd, mobius_fixed_point

Word = tuple[int, ...]

# Hausdorff-dimension brackets of E_K and the growth constants c1(K), c2(K)
# for |C_{K,Q}|, as published for K = 2, 3, 4.
_TABLE = {
    2: (0.5312, 0.5313, 0.28, 4.98),
    3: (0.7056, 0.7057, 0.23, 14.85),
    4: (0.7889, 0.7890, 0.23, 31.2),
}


class Convergents(NamedTuple):
    p_n: int
    q_n: int
    p_prev: int
    q_prev: int


def convergents(word: Sequence[int]) -> Convergents:
    p, p_prev, q, q_prev = 0, 1, 1, 0
    for b in word:
        p, p_prev = b * p + p_prev, p
        q, q_prev = b * q + q_prev, q
    return Convergents(p, q, p_prev, q_prev)


def value(word: Sequence[int]) -> Fraction:
    """The rational ``[0; word]`` (``0`` for the empty word)."""
    c = convergents(word)
    return Fraction(c.p_n, c.q_n)


@dataclass(frozen=True)
class KContext:
    """Per-alphabet constants.  ``alpha_minus``/``alpha_plus`` bound the Cantor set E_K."""

    k: int
    d: int
    alpha_minus: Surd
    alpha_plus: Surd
    diam_ratio_lower: Fraction
    hd_lower: float | None = None
    hd_upper: float | None = None
    c1: float | None = None
    c2: float | None = None
    width: Surd = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "width", self.alpha_plus - self.alpha_minus)

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        for b in word:
            if not 1 <= b <= self.k:
                raise ValueError(f"digit {b} outside 1..{self.k}")
        return word


def make_context(k: int) -> KContext:
    if k < 2:
        raise ValueError(f"K must be >= 2 (K = 1 is degenerate), got {k}")
    d = k * (k + 4)
    # root in (0, 1) of x^2 + K x - K = 0
    alpha_plus = Surd(Fraction(-k, 2), Fraction(1, 2), d)
    alpha_minus = alpha_plus / k
    hd_lo, hd_hi, c1, c2 = _TABLE.get(k, (None, None, None, None))
    return KContext(
        k=k,
        d=d,
        alpha_minus=alpha_minus,
        alpha_plus=alpha_plus,
        diam_ratio_lower=Fraction(k, (k * (k + 1) + 1) * (k + 2)),
        hd_lower=hd_lo,
        hd_upper=hd_hi,
        c1=c1,
        c2=c2,
    )


def _endpoint(c: Convergents, alpha: Surd) -> Surd:
    return (alpha * c.p_prev + c.p_n) / (alpha * c.q_prev + c.q_n)


def cylinder_interval(word: Sequence[int], ctx: KContext) -> tuple[Surd, Surd]:
    c = convergents(word)
    x = _endpoint(c, ctx.alpha_plus)
    y = _endpoint(c, ctx.alpha_minus)
    return (x, y) if x < y else (y, x)


def diam_denominator(c: Convergents, ctx: KContext) -> Surd:
    """``(q_n + a+ q_{n-1}) (q_n + a- q_{n-1})``; the diameter is ``width`` over this."""
    return (ctx.alpha_plus * c.q_prev + c.q_n) * (ctx.alpha_minus * c.q_prev + c.q_n)


def diam(word: Sequence[int], ctx: KContext) -> Surd:
    return ctx.width / diam_denominator(convergents(word), ctx)


def mid(word: Sequence[int], ctx: KContext) -> Surd:
    c = convergents(word)
    return (_endpoint(c, ctx.alpha_plus) + _endpoint(c, ctx.alpha_minus)) / 2


def word_matrix(word: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Matrix of ``x -> [0; word + x]`` as ``[[p_prev, p_n], [q_prev, q_n]]``."""
    c = convergents(word)
    return (c.p_prev, c.p_n), (c.q_prev, c.q_n)


def periodic_value(word: Sequence[int]) -> Surd:
    """Exact value of the purely periodic continued fraction ``[0; overline(word)]``."""
    if not word:
        raise ValueError("periodic_value needs a nonempty word")
    return mobius_fixed_point(word_matrix(word))


def apply_word(word: Sequence[int], x: Surd) -> Surd:
    """Value of ``[0; word, ...]`` when the digits after ``word`` spell the number ``x``."""
    if not word:
        return x
    c = convergents(word)
    return _endpoint(c, x)
