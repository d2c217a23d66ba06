"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Values are ``a + b*sqrt(d)`` with rational ``a`` and ``b``.  The radicand is
kept squarefree so that equal numbers always have equal representations.
Ordering is decided with integer arithmetic only.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

__all__ = [
    "FieldMismatch",
    "Surd",
    "split_square",
    "surd_sign",
    "surd_cmp",
    "surd_to_decimal",
    "mobius_fixed_point",
]

# resolution (in bits) of the cached integer key used to short-circuit comparisons
_KEY_BITS = 96
_TRIAL_LIMIT = 100_000


class FieldMismatch(ValueError):
    """Two irrational values from different quadratic fields were combined."""


def split_square(n: int) -> tuple[int, int]:
    """Return ``(f, r)`` with ``n == f*f*r`` and ``r`` squarefree."""
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    f, sq, m = 1, 1, n
    p = 2
    while p * p * p <= m and p <= _TRIAL_LIMIT:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            sq *= p
        p += 1 if p == 2 else 2
    s = isqrt(m)
    if s * s == m:
        return f * s, sq
    if p * p * p > m:
        # m has at most two prime factors, both untried, and is not a square
        return f, sq * m
    from sympy import factorint

    for prime, e in factorint(m).items():
        f *= prime ** (e // 2)
        if e % 2:
            sq *= prime
    return f, sq


def _floor_sqrt_times(r: int, d: int) -> int:
    """floor(r * sqrt(d)) for integer r."""
    if r >= 0:
        return isqrt(r * r * d)
    t = isqrt(r * r * d)
    return -t if t * t == r * r * d else -t - 1


class Surd:
    """Immutable element ``a + b*sqrt(d)`` of a real quadratic field.

    ``b == 0`` marks a rational value; rationals mix freely with any field.
    Two irrational operands must share ``d``, otherwise :class:`FieldMismatch`.
    """

    __slots__ = ("a", "b", "d", "_key")

    def __init__(self, a=0, b=0, d: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d <= 0:
            raise ValueError(f"radicand must be positive, got {d}")
        if b and d != 1:
            f, d = split_square(d)
            b *= f
        if d == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> Surd:
        # caller guarantees d squarefree (or b == 0)
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d if b else 1)
        object.__setattr__(self, "_key", None)
        return self

    @classmethod
    def sqrt(cls, n: int) -> Surd:
        return cls(0, 1, n)

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> Surd:
        return Surd._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    # -- coercion -----------------------------------------------------------

    def _common(self, other) -> tuple[Surd, int]:
        if not isinstance(other, Surd):
            if isinstance(other, (int, Fraction)):
                other = Surd._raw(Fraction(other), Fraction(0), 1)
            else:
                return NotImplemented, 0
        if self.b and other.b and self.d != other.d:
            raise FieldMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
        return other, self.d if self.b else other.d

    # -- field operations ---------------------------------------------------

    def __add__(self, other):
        other, d = self._common(other)
        if other is NotImplemented:
            return NotImplemented
        return Surd._raw(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other, d = self._common(other)
        if other is NotImplemented:
            return NotImplemented
        return Surd._raw(self.a - other.a, self.b - other.b, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other, d = self._common(other)
        if other is NotImplemented:
            return NotImplemented
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return Surd._raw(a, b, d)

    __rmul__ = __mul__

    def inverse(self) -> Surd:
        n = self.norm()
        if n == 0:
            # the norm of a nonzero element of a field extension never vanishes
            raise ZeroDivisionError("inverse of zero Surd")
        return Surd._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Surd._raw(self.a / other, self.b / other, self.d)
        if not isinstance(other, Surd):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``; no floating point involved."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs > rhs:
            return sa
        return sb

    def floor_times(self, m: int) -> int:
        """``floor(self * m)`` for a positive integer ``m``, exactly."""
        a, b = self.a, self.b
        den = a.denominator * b.denominator
        p = a.numerator * b.denominator * m
        r = b.numerator * a.denominator * m
        return (p + _floor_sqrt_times(r, self.d)) // den

    def _sort_key(self) -> int:
        k = self._key
        if k is None:
            k = self.floor_times(1 << _KEY_BITS)
            object.__setattr__(self, "_key", k)
        return k

    def _cmp(self, other) -> int:
        if not isinstance(other, Surd):
            other = Surd._raw(Fraction(other), Fraction(0), 1)
        if self.b and other.b and self.d != other.d:
            raise FieldMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
        ka, kb = self._sort_key(), other._sort_key()
        if ka != kb:
            return -1 if ka < kb else 1
        return (self - other).sign()

    def __lt__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, Surd):
            return NotImplemented
        return self.a == other.a and self.b == other.b and (self.b == 0 or self.d == other.d)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- rendering ----------------------------------------------------------

    def to_decimal(self, digits: int) -> str:
        return surd_to_decimal(self, digits)

    def bounds(self, digits: int) -> tuple[Fraction, Fraction]:
        """Rational enclosure ``lo <= self <= hi`` with ``hi - lo <= 10**-digits``."""
        scale = 10**digits
        n = self.floor_times(scale)
        if self.b == 0 and n == self.a * scale:
            return Fraction(n, scale), Fraction(n, scale)
        return Fraction(n, scale), Fraction(n + 1, scale)

    def __float__(self):
        lo, _ = self.bounds(20)
        return float(lo)

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = f"-{root}"
        else:
            tail = f"{self.b}*{root}"
        if self.a == 0:
            return tail
        if tail.startswith("-"):
            return f"{self.a} - {tail[1:]}"
        return f"{self.a} + {tail}"


def surd_sign(x: Surd) -> int:
    return x.sign()


def surd_cmp(x: Surd, y: Surd) -> int:
    """Return -1, 0 or 1 according to the order of the real values."""
    return x._cmp(y)


def surd_to_decimal(x: Surd, digits: int) -> str:
    """Round-to-nearest decimal rendering (halves round up) with ``digits`` places."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10**digits
    n = (x + Fraction(1, 2 * scale)).floor_times(scale)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // scale}.{n % scale:0{digits}d}"


def mobius_fixed_point(m) -> Surd:
    """Fixed point in (0, 1) of ``x -> (a*x + b) / (c*x + d)`` for ``m = [[a, b], [c, d]]``."""
    (a, b), (c, d) = m
    if c == 0:
        if d == a:
            raise ValueError(f"no isolated fixed point for {m}")
        candidates = [Surd(Fraction(b, d - a))]
    else:
        disc = (d - a) ** 2 + 4 * b * c
        if disc < 0:
            raise ValueError(f"no real fixed point for {m}")
        root = Surd(0, Fraction(1, 2 * c), disc) if disc else Surd(0)
        base = Fraction(a - d, 2 * c)
        candidates = [base + root, base - root]
    for x in candidates:
        if 0 < x < 1:
            return x
    raise ValueError(f"no fixed point in (0, 1) for {m}")
