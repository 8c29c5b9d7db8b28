"""Exact rationals, dyadic words and intervals, lower-real approximants.

Rationals are plain :class:`fractions.Fraction` values.  A dyadic word is a
``str`` over ``"0"``/``"1"``; the empty string is the root and labels the
whole unit interval.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, NamedTuple, Sequence, Union

RatLike = Union[Fraction, int, str]


def rat(value: RatLike) -> Fraction:
    """Coerce ``value`` to a Fraction; strings use the ``"p/q"`` form."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(value)


def parse_rat(text: str) -> Fraction:
    if not isinstance(text, str):
        raise TypeError(f"rational must be serialized as a string, got {text!r}")
    return Fraction(text.strip())


def format_rat(q: Fraction) -> str:
    """Canonical ``"p/q"`` string; integers keep their ``/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def pow2(exponent: int) -> Fraction:
    """Exact ``2**exponent`` for any integer exponent."""
    if exponent >= 0:
        return Fraction(1 << exponent)
    return Fraction(1, 1 << -exponent)


def ceil_rat(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def frostman_cap(s: Fraction, depth: int) -> Fraction:
    """``2**-ceil(s*depth)``: the exact stand-in for ``2**(-s*depth)``."""
    return pow2(-ceil_rat(Fraction(s) * depth))


def log2_rat(q: Fraction) -> float:
    """Approximate log2 of a positive rational; exact for powers of two."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    num, den = q.numerator, q.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return float(num.bit_length() - den.bit_length())
    return math.log2(num) - math.log2(den)


def ln_rat(q: Fraction) -> float:
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    return math.log(q.numerator) - math.log(q.denominator)


# -- words -----------------------------------------------------------------

def check_word(word: str) -> str:
    if not isinstance(word, str) or word.strip("01"):
        raise ValueError(f"not a dyadic word: {word!r}")
    return word


def children(word: str) -> tuple[str, str]:
    return word + "0", word + "1"


def prefixes(word: str) -> Iterator[str]:
    """All prefixes of ``word`` from the root down to ``word`` itself."""
    for i in range(len(word) + 1):
        yield word[:i]


def is_prefix(u: str, w: str) -> bool:
    return w.startswith(u)


def words_at_depth(n: int) -> Iterator[str]:
    """Words of length ``n`` in lexicographic (= left-to-right) order."""
    if n == 0:
        yield ""
        return
    for bits in product("01", repeat=n):
        yield "".join(bits)


def words_up_to(n: int) -> Iterator[str]:
    """Breadth-first enumeration of every word of length at most ``n``."""
    for d in range(n + 1):
        yield from words_at_depth(d)


def bfs_index(word: str) -> int:
    """Position of ``word`` in the breadth-first enumeration."""
    return (1 << len(word)) - 1 + (int(word, 2) if word else 0)


class Interval(NamedTuple):
    """Closed rational interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def interior_contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def interiors_meet(self, other: "Interval") -> bool:
        """Whether the open interiors overlap."""
        return self.lo < other.hi and other.lo < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"[{format_rat(self.lo)}, {format_rat(self.hi)}]"


def interval_of_word(word: str) -> Interval:
    """Closed dyadic interval ``[k 2^-n, (k+1) 2^-n]`` labelled by ``word``."""
    check_word(word)
    n = len(word)
    k = int(word, 2) if word else 0
    return Interval(Fraction(k, 1 << n), Fraction(k + 1, 1 << n))


def word_containing(x: Fraction, depth: int) -> str:
    """The depth-``depth`` word whose interval contains ``x`` in ``(lo, hi]``.

    The half-open convention sends a dyadic point to the chain approaching it
    from the left; ``0`` has no left side and goes to the chain ``0^n``.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{x} is outside [0, 1]")
    scaled = x * (1 << depth)
    k = ceil_rat(scaled) - 1
    k = max(k, 0)
    return format(k, f"0{depth}b") if depth else ""


def is_dyadic(x: Fraction) -> bool:
    den = Fraction(x).denominator
    return den & (den - 1) == 0


# -- lower reals -------------------------------------------------------------

class LowerRealApprox:
    """A real known through a nondecreasing sequence of rational lower bounds.

    ``stages`` is either a callable ``t -> rational`` or a finite sequence whose
    last entry repeats forever.
    """

    __slots__ = ("_fn",)

    def __init__(self, stages: Callable[[int], RatLike] | Sequence[RatLike]):
        if callable(stages):
            self._fn = stages
        else:
            values = [rat(v) for v in stages]
            if not values:
                raise ValueError("empty stage sequence")
            last = len(values) - 1
            self._fn = lambda t: values[min(t, last)]

    @classmethod
    def constant(cls, value: RatLike) -> "LowerRealApprox":
        q = rat(value)
        return cls(lambda t: q)

    def value(self, t: int) -> Fraction:
        if t < 0:
            raise ValueError("stage index must be nonnegative")
        return rat(self._fn(t))

    def audit(self, stages: int = 100) -> None:
        """Raise ValueError at the first stage where the sequence decreases."""
        prev = self.value(0)
        for t in range(1, stages):
            cur = self.value(t)
            if cur < prev:
                raise ValueError(
                    f"lower real decreases at stage {t}: {format_rat(prev)} > {format_rat(cur)}"
                )
            prev = cur


def lower_real_value(x: LowerRealApprox, t: int) -> Fraction:
    return x.value(t)
