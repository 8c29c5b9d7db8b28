"""Dyadic measures, stage-approximated measure names, supports and Frostman audits.

A :class:`DyadicMeasure` is exact: the mass of every open dyadic interval down
to a fixed depth.  A :class:`MeasureName` is the weaker, stage-indexed view in
which only lower bounds on those masses are ever revealed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .dyadic import (
    LowerRealApprox,
    RatLike,
    children,
    format_rat,
    frostman_cap,
    interval_of_word,
    is_dyadic,
    pow2,
    rat,
    word_containing,
    words_at_depth,
    words_up_to,
)
from .flows import TreeFlow, concentrate_flow
from .sets import ClosedOvertName, ClosedSetName, OvertSetName


class AdditivityError(ValueError):
    def __init__(self, word: str, message: str):
        super().__init__(message)
        self.word = word


@dataclass(frozen=True)
class DyadicMeasure:
    """``mass[w]`` is the measure of the open interval of ``w``, for ``|w| <= depth``.

    Grid points carry no mass, so masses add up exactly from children to
    parent.  Omitted words have mass zero.
    """

    depth: int
    mass: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, v in self.mass.items():
            if w.strip("01") or len(w) > self.depth:
                raise ValueError(f"word {w!r} not allowed at depth {self.depth}")
            q = Fraction(v)
            if q < 0:
                raise AdditivityError(w, f"negative mass at {w!r}")
            if q:
                clean[w] = q
        object.__setattr__(self, "mass", clean)

    def __getitem__(self, word: str) -> Fraction:
        if len(word) > self.depth:
            raise KeyError(f"{word!r} is below the stored depth {self.depth}")
        return self.mass.get(word, Fraction(0))

    @property
    def total(self) -> Fraction:
        return self.mass.get("", Fraction(0))

    @classmethod
    def from_leaves(cls, depth: int, leaves: Mapping[str, RatLike]) -> "DyadicMeasure":
        """Build every internal mass by summing the given depth-``depth`` masses."""
        mass = {w: rat(v) for w, v in leaves.items() if rat(v)}
        for w in list(mass):
            if len(w) != depth:
                raise ValueError(f"leaf {w!r} is not at depth {depth}")
        for d in range(depth, 0, -1):
            for w in [w for w in mass if len(w) == d]:
                mass[w[:-1]] = mass.get(w[:-1], Fraction(0)) + mass[w]
        return cls(depth, mass)

    def audit(self) -> None:
        """Raise :class:`AdditivityError` at the first non-additive word."""
        touched = set()
        for w in self.mass:
            if len(w) < self.depth:
                touched.add(w)
            if w:
                touched.add(w[:-1])
        for v in sorted(touched, key=lambda w: (len(w), w)):
            w0, w1 = children(v)
            if self[v] != self[w0] + self[w1]:
                raise AdditivityError(
                    v,
                    f"mass({v!r}) = {format_rat(self[v])} but children sum to "
                    f"{format_rat(self[w0] + self[w1])}",
                )

    def scaled(self, factor: Fraction) -> "DyadicMeasure":
        return DyadicMeasure(self.depth, {w: v * factor for w, v in self.mass.items()})

    def as_name(self) -> "MeasureName":
        """Exact masses as lower bounds at every stage; deeper words get 0.

        The bounds do not depend on the stage, so there is nothing to audit.
        """
        depth, mass = self.depth, self.mass
        zero = Fraction(0)
        return MeasureName(
            lambda w, t: mass.get(w, zero) if len(w) <= depth else zero,
            self.total,
            audit_stages=0,
        )


def lebesgue(depth: int) -> DyadicMeasure:
    return DyadicMeasure(depth, {w: pow2(-len(w)) for w in words_up_to(depth)})


class MeasureName:
    """Monotone stage-indexed lower bounds for the masses of open dyadic intervals.

    ``lower(word, stage)`` must be nondecreasing in ``stage``; ``total_upper``
    bounds the total mass.  Each word's lower-bound sequence is audited for
    monotonicity over the first ``audit_stages`` stages the first time an
    operation looks at it.
    """

    def __init__(
        self,
        lower: Callable[[str, int], RatLike],
        total_upper: RatLike,
        atomic: bool = False,
        audit_stages: int = 100,
    ):
        self._lower = lower
        self.total_upper = rat(total_upper)
        self.atomic = atomic
        self.audit_stages = audit_stages
        self._audited: set[str] = set()

    def lower_real(self, word: str) -> LowerRealApprox:
        return LowerRealApprox(lambda t: self._lower(word, t))

    def lower(self, word: str, stage: int) -> Fraction:
        if word not in self._audited:
            self.lower_real(word).audit(self.audit_stages)
            self._audited.add(word)
        return rat(self._lower(word, stage))


def lebesgue_name() -> MeasureName:
    return MeasureName(lambda w, t: pow2(-len(w)), 1)


# -- flows and measures ------------------------------------------------------------

def flow_to_measure(f: TreeFlow) -> DyadicMeasure:
    return DyadicMeasure(f.depth, dict(f.flow))


def measure_to_flow(mu: DyadicMeasure) -> TreeFlow:
    mu.audit()
    return TreeFlow(mu.depth, dict(mu.mass))


# -- supports ------------------------------------------------------------------------

def support_overt(mu: MeasureName) -> OvertSetName:
    """A word meets the support exactly when its open interval has positive mass."""
    return OvertSetName(lambda w, t: mu.lower(w, t) > 0, "support")


def measure_from_overt(A: OvertSetName, k: int) -> DyadicMeasure:
    """Probability-style measure spread over the words ``A`` certifies by stage ``k``.

    Round ``r = 1..k`` lists the certified level-``r`` words in word order and
    enumerates them round-robin forever; the ``j``-th enumerated word (from 1)
    receives ``2^(-j-r)``, so a list of ``m`` words hands the ``i``-th one
    ``2^-r * 2^(m-i-1) / (2^m - 1)`` and the round adds ``2^-r`` in total.
    Mass accumulated by a level-``(r-1)`` word moves to its first certified
    child.  If some word has no certified child the construction cannot go
    deeper without guessing, and the result is truncated at that word's depth.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    held: dict[str, Fraction] = {"": Fraction(0)}
    resolved_depth = 0
    for r in range(1, k + 1):
        level = [w for w in words_at_depth(r) if A.certifies(w, k)]
        if not level:
            if r == 1:
                raise ValueError("no witness yet: nothing certified at level 1 by this stage")
            break
        m = len(level)
        norm = (1 << m) - 1
        nxt = {w: pow2(-r) * Fraction(1 << (m - i - 1), norm) for i, w in enumerate(level)}
        stuck = False
        for u, c in held.items():
            heir = next((w for w in children(u) if w in nxt), None)
            if heir is None:
                stuck = True
                break
            nxt[heir] += c
        if stuck:
            break
        held = nxt
        resolved_depth = r
    return DyadicMeasure.from_leaves(resolved_depth, held)


def point_from_measure(mu: MeasureName, precision: int, max_stage: int = 1000) -> str:
    """Word of length ``precision`` whose every prefix carries positive mass.

    Level by level, the child whose lower bound turns positive at the earliest
    stage wins, the left child on ties.
    """
    word = ""
    for _ in range(precision):
        for t in range(max_stage + 1):
            pick = next((c for c in children(word) if mu.lower(c, t) > 0), None)
            if pick is not None:
                word = pick
                break
        else:
            raise StageExhausted(f"no positive child of {word!r} up to stage {max_stage}")
    return word


class StageExhausted(RuntimeError):
    pass


def point_measure(x: RatLike | str) -> MeasureName:
    """Dirac mass at ``x``.

    A string argument is read as the binary expansion ``0.w``.  The mass sits
    on the chain of words whose interval contains ``x`` in ``(lo, hi]`` (in
    ``[0, hi)`` for ``x = 0``); for a grid point this is only a convention,
    and the name is flagged ``atomic``.
    """
    if isinstance(x, str):
        x = Fraction(int(x, 2), 1 << len(x)) if x else Fraction(0)
    x = rat(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{x} is outside [0, 1]")
    one, zero = Fraction(1), Fraction(0)
    name = MeasureName(lambda w, t: one if word_containing(x, len(w)) == w else zero, 1, atomic=True)
    name.point = x
    name.on_grid = is_dyadic(x)
    return name


def chain_measure(x: RatLike, depth: int) -> DyadicMeasure:
    """Exact :class:`DyadicMeasure` of the Dirac mass at ``x`` under the chain convention."""
    x = rat(x)
    return DyadicMeasure(depth, {word_containing(x, d): Fraction(1) for d in range(depth + 1)})


# -- concentration -----------------------------------------------------------------------

def concentrate(mu: DyadicMeasure) -> tuple[DyadicMeasure, int]:
    """``(nu, k)`` with ``nu <= mu`` nonzero and ``2^-k``-concentrated.

    ``k`` is the least integer with ``mu.total >= 2^-k``.  A flow below ``mu``
    carrying ``2^-k`` is cut left-first, concentrated, and rescaled by
    ``2^-k``; afterwards every word holds either no mass or at least
    ``2^-k * 2^(-2|w|-1)``.
    """
    mu.audit()
    total = mu.total
    if total <= 0:
        raise ValueError("cannot concentrate the zero measure")
    k = 0
    while total < pow2(-k):
        k += 1
    root = pow2(-k)
    f = {"": root}
    stack = [""]
    while stack:
        v = stack.pop()
        if len(v) == mu.depth:
            continue
        w0, w1 = children(v)
        f0 = min(mu[w0], f[v])
        f1 = f[v] - f0
        for w, val in ((w0, f0), (w1, f1)):
            if val:
                f[w] = val
                stack.append(w)
    g = concentrate_flow(TreeFlow(mu.depth, f))
    return flow_to_measure(g.scaled(root)), k


def concentration_violation(nu: DyadicMeasure, C: Fraction) -> str | None:
    for w, v in sorted(nu.mass.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if v < C * pow2(-2 * len(w) - 2):
            return w
    return None


def concentrated_support(nu: DyadicMeasure, C: RatLike) -> ClosedOvertName:
    """Closed-and-overt name of the support of a ``C``-concentrated measure.

    Concentration means no word holds mass strictly between ``0`` and
    ``C r^2`` (``r`` the half-length), so "mass below ``C r^2``" is the same
    as "mass zero".  Words below the stored depth inherit exclusion from
    their depth-``n`` ancestor and are otherwise left undecided.
    """
    C = rat(C)
    if C <= 0:
        raise ValueError("concentration constant must be positive")
    nu.audit()
    bad = concentration_violation(nu, C)
    if bad is not None:
        raise AdditivityError(bad, f"mass at {bad!r} is positive but below C r^2")
    depth = nu.depth

    def excluded(w: str, t: int) -> bool:
        if len(w) > depth:
            return False
        return nu[w] < C * pow2(-2 * len(w) - 2)

    def certified(w: str, t: int) -> bool:
        return len(w) <= depth and nu[w] > 0

    return ClosedOvertName(
        ClosedSetName(excluded, "concentrated support"),
        OvertSetName(certified, "concentrated support"),
    )


# -- Frostman audit ------------------------------------------------------------------------

def frostman_check(mu: DyadicMeasure, s: RatLike, depth: int | None = None) -> list[str]:
    """Words ``|w| <= depth`` with ``mass(w) > 2^-ceil(s|w|)``.

    An empty list certifies the dyadic ``s``-Frostman bound; any ball of
    radius ``r`` then has mass at most ``2^(1+s) r^s``.
    """
    s = rat(s)
    if not 0 <= s <= 1:
        raise ValueError(f"exponent s = {format_rat(s)} is outside [0, 1]")
    depth = mu.depth if depth is None else min(depth, mu.depth)
    return [
        w
        for w, v in sorted(mu.mass.items(), key=lambda kv: (len(kv[0]), kv[0]))
        if len(w) <= depth and v > frostman_cap(s, len(w))
    ]


def interval_mass(mu: DyadicMeasure, word: str) -> Fraction:
    """Mass of the open interval of ``word``; for display next to its bounds."""
    interval_of_word(word)
    return mu[word]
