"""Dyadic Hausdorff content, dimension brackets, Cantor dimension terms, fiber measures.

Logarithms appear only in the reporting functions (``cantor_dim_partial``,
``local_dimension``); their float results are approximate by nature.
Everything that decides a bracket is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dyadic import RatLike, children, format_rat, frostman_cap, log2_rat, rat
from .measures import DyadicMeasure
from .sets import CantorScheme, ClosedSetName


def dyadic_content(A: ClosedSetName, s: RatLike, depth: int, stage: int) -> Fraction:
    """Least ``sum 2^-ceil(s|w|)`` over antichains covering the survivors at ``depth``."""
    s = rat(s)
    if depth < 0:
        raise ValueError("depth must be nonnegative")

    def content(v: str) -> Fraction:
        if A.excludes_word(v, stage):
            return Fraction(0)
        cap = frostman_cap(s, len(v))
        if len(v) == depth:
            return cap
        w0, w1 = children(v)
        below = content(w0)
        if below >= cap:
            return cap
        return min(cap, below + content(w1))

    return content("")


@dataclass(frozen=True)
class DimEstimate:
    lo: Fraction
    hi: Fraction
    depth: int
    stage: int

    def __contains__(self, s) -> bool:
        return self.lo <= rat(s) <= self.hi

    def __str__(self) -> str:
        return f"[{format_rat(self.lo)}, {format_rat(self.hi)}]"


def content_table(A: ClosedSetName, depth: int, stage: int, grid: int) -> list[tuple[Fraction, Fraction]]:
    if grid < 1:
        raise ValueError("grid must be at least 1")
    return [(Fraction(i, grid), dyadic_content(A, Fraction(i, grid), depth, stage)) for i in range(grid + 1)]


def dim_interval(
    A: ClosedSetName,
    depth: int,
    stage: int,
    grid: int,
    lo_threshold: RatLike = Fraction(1, 2),
    hi_threshold: RatLike | None = None,
) -> DimEstimate:
    """Bracket ``[lo, hi]`` for the dimension from contents on the grid ``i/grid``.

    ``lo`` is the largest grid exponent whose content is at least
    ``lo_threshold`` (0 if none).  ``hi`` is the least grid exponent, not
    below ``lo``, at which the content is seen to collapse (1 if none).  By
    default collapse means halving between depth ``depth // 2`` and
    ``depth``: above the dimension the content decays geometrically with
    depth, below it stays put, and the test does not care how large the set
    is.  Passing ``hi_threshold`` replaces it with "content below
    ``hi_threshold``".
    """
    table = content_table(A, depth, stage, grid)
    lo_threshold = rat(lo_threshold)
    lo = max((s for s, c in table if c >= lo_threshold), default=Fraction(0))
    if hi_threshold is None:
        half = dict(content_table(A, depth // 2, stage, grid))
        collapsed = [s for s, c in table if s >= lo and 2 * c <= half[s]]
    else:
        hi_threshold = rat(hi_threshold)
        collapsed = [s for s, c in table if s >= lo and c < hi_threshold]
    hi = min(collapsed, default=Fraction(1))
    return DimEstimate(lo, hi, depth, stage)


# -- Cantor scheme dimension ------------------------------------------------------

def cantor_dim_partial(scheme: CantorScheme, n: int) -> tuple[list[float], list[float]]:
    """Terms ``ln 2 / ln d_i`` for ``i < n`` and their tail minima (approximate).

    The ``i``-th tail minimum is ``min(terms[i:])``; for eventually regular
    schemes the later entries settle on the liminf.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    terms = [1.0 / log2_rat(scheme.ratio(i)) for i in range(n)]
    tails = terms[:]
    for i in range(n - 2, -1, -1):
        tails[i] = min(tails[i], tails[i + 1])
    return terms, tails


# -- fiber measures on Cantor schemes ----------------------------------------------

def is_square(m: int) -> bool:
    return m > 0 and math.isqrt(m) ** 2 == m


def _bits(p: Sequence[int] | str) -> str:
    out = "".join(str(int(b)) for b in p)
    if out.strip("01"):
        raise ValueError(f"not a bit sequence: {p!r}")
    return out


def _need_bits(p: str, depth: int) -> None:
    k = math.isqrt(depth)
    if len(p) < k:
        raise ValueError(f"bit sequence too short: square level {(len(p) + 1) ** 2} needs p({len(p) + 1})")


@dataclass(frozen=True)
class CellMeasure:
    """Mass of each scheme cell ``[a_w, b_w]`` down to ``depth``; omitted cells are 0."""

    scheme: CantorScheme
    depth: int
    mass: dict[str, Fraction] = field(default_factory=dict)

    def __getitem__(self, word: str) -> Fraction:
        return self.mass.get(word, Fraction(0))

    def level_total(self, m: int) -> Fraction:
        return sum((v for w, v in self.mass.items() if len(w) == m), Fraction(0))

    def log2_length(self, level: int) -> float:
        return -sum(log2_rat(self.scheme.ratio(i)) for i in range(level))


def shmerkin_measure(p: Sequence[int] | str, scheme: CantorScheme, depth: int) -> CellMeasure:
    """Materialize the fiber measure over ``p`` down to ``depth``.

    At a square level ``k^2`` (``k >= 1``, counting levels from 1) a cell
    sends all its mass to the child whose new bit equals ``p(k)``, the
    ``k``-th bit of ``p``; at every other level it splits evenly.
    """
    p = _bits(p)
    _need_bits(p, depth)
    mass = {"": Fraction(1)}
    frontier = [""]
    for level in range(1, depth + 1):
        nxt = []
        for w in frontier:
            m = mass[w]
            if is_square(level):
                c = w + p[math.isqrt(level) - 1]
                mass[c] = m
                nxt.append(c)
            else:
                for c in children(w):
                    mass[c] = m / 2
                    nxt.append(c)
        frontier = nxt
    return CellMeasure(scheme, depth, mass)


def shmerkin_mass(p: Sequence[int] | str, word: str) -> Fraction:
    """Closed form: ``2^-(m - floor(sqrt m))`` if ``word`` agrees with ``p`` at squares, else 0."""
    p = _bits(p)
    m = len(word)
    _need_bits(p, m)
    for k in range(1, math.isqrt(m) + 1):
        if word[k * k - 1] != p[k - 1]:
            return Fraction(0)
    return Fraction(1, 1 << (m - math.isqrt(m)))


class ShmerkinMeasure:
    """Lazy fiber measure: masses by the closed form, no tree in memory."""

    def __init__(self, p: Sequence[int] | str, scheme: CantorScheme):
        self.p = _bits(p)
        self.scheme = scheme

    def __getitem__(self, word: str) -> Fraction:
        return shmerkin_mass(self.p, word)

    def log2_length(self, level: int) -> float:
        return -sum(log2_rat(self.scheme.ratio(i)) for i in range(level))


def local_dimension(
    mu: DyadicMeasure | CellMeasure | ShmerkinMeasure,
    chain: str,
    levels: Sequence[int],
) -> list[float]:
    """``log mass(chain[:m]) / log length_m`` at each requested level (approximate).

    Dyadic measures use the dyadic length ``2^-m``; cell measures use the
    scheme's cell length at level ``m``.
    """
    out = []
    for m in levels:
        if m < 1 or m > len(chain):
            raise ValueError(f"level {m} is outside the chain of length {len(chain)}")
        mass = mu[chain[:m]]
        if mass <= 0:
            raise ValueError(f"zero mass on {chain[:m]!r} at level {m}")
        length_log = -float(m) if isinstance(mu, DyadicMeasure) else mu.log2_length(m)
        out.append(log2_rat(mass) / length_log)
    return out


def shmerkin_local_dimension(scheme: CantorScheme, m: int) -> float:
    """Closed-form local dimension at level ``m`` of any chain with positive mass."""
    if m < 1:
        raise ValueError("level must be at least 1")
    num = (m - math.isqrt(m)) * math.log(2)
    den = sum(math.log(scheme.ratio(i).numerator) - math.log(scheme.ratio(i).denominator) for i in range(m))
    return num / den
