"""Stage-indexed names for subsets of [0, 1] and the Cantor scheme builder.

A closed name answers "is the open interval of this word known to miss the
set by stage t?"; an overt name answers "is it known to meet the set?".  Both
are pull-based oracles, monotone in the stage.  Names talk about open dyadic
intervals only, so a set is pinned down up to the countably many dyadic grid
points.  A single point that sits on the grid (``0`` for instance) is carried
by the chain of words whose closed intervals shrink onto it, see
:func:`point_name`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .dyadic import (
    Interval,
    RatLike,
    ceil_rat,
    children,
    format_rat,
    interval_of_word,
    pow2,
    rat,
    word_containing,
    words_at_depth,
    words_up_to,
)

WordTest = Callable[[str, int], bool]

# Names are pure functions of (word, stage), so answers are memoized; the
# memo is dropped wholesale once it grows past this many entries.
MEMO_LIMIT = 1 << 20


class _Memo(dict):
    def remember(self, key, value):
        if len(self) >= MEMO_LIMIT:
            self.clear()
        self[key] = value
        return value


class ClosedSetName:
    """Negative information: words whose open interval misses the set.

    ``test(word, stage)`` is the raw oracle.  :meth:`excludes` closes it under
    extension, so callers never have to check prefixes themselves.
    """

    def __init__(self, test: WordTest, description: str = "closed set", source: dict | None = None):
        self._test = test
        self.description = description
        self.source = source
        self._raw = _Memo()
        self._closed = _Memo()

    def excludes_word(self, word: str, stage: int) -> bool:
        key = (word, stage)
        hit = self._raw.get(key)
        if hit is None:
            hit = self._raw.remember(key, bool(self._test(word, stage)))
        return hit

    def excludes(self, word: str, stage: int) -> bool:
        key = (word, stage)
        hit = self._closed.get(key)
        if hit is None:
            hit = (bool(word) and self.excludes(word[:-1], stage)) or self.excludes_word(word, stage)
            self._closed.remember(key, hit)
        return hit

    def survivors(self, stage: int, depth: int) -> Iterator[str]:
        """Depth-first walk over non-excluded words of length at most ``depth``."""
        stack = [""]
        while stack:
            w = stack.pop()
            if self.excludes_word(w, stage):
                continue
            yield w
            if len(w) < depth:
                stack.extend(reversed(children(w)))

    def minimal_excluded(self, stage: int, depth: int) -> list[str]:
        """Excluded words up to ``depth`` none of whose proper prefixes is excluded."""
        out = []
        stack = [""]
        while stack:
            w = stack.pop()
            if self.excludes_word(w, stage):
                out.append(w)
            elif len(w) < depth:
                stack.extend(reversed(children(w)))
        return out

    def __repr__(self) -> str:
        return f"ClosedSetName({self.description})"


class OvertSetName:
    """Positive information: words whose open interval is known to meet the set."""

    def __init__(self, test: WordTest, description: str = "overt set", source: dict | None = None):
        self._test = test
        self.description = description
        self.source = source
        self._memo = _Memo()

    def certifies(self, word: str, stage: int) -> bool:
        key = (word, stage)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo.remember(key, bool(self._test(word, stage)))
        return hit

    def certified_words(self, stage: int, depth: int) -> list[str]:
        return [w for w in words_up_to(depth) if self.certifies(w, stage)]

    def __repr__(self) -> str:
        return f"OvertSetName({self.description})"


@dataclass(frozen=True)
class ClosedOvertName:
    closed: ClosedSetName
    overt: OvertSetName

    @property
    def description(self) -> str:
        return self.closed.description


NOTHING_CERTIFIED = OvertSetName(lambda w, t: False, "nothing certified")


def audit_consistency(name: ClosedOvertName, depth: int, stage: int) -> list[str]:
    """Words up to ``depth`` both certified and excluded by ``stage``.

    Both parts are monotone in the stage, so checking the last stage covers
    every pair of earlier stages.
    """
    bad = []
    for w in words_up_to(depth):
        if name.overt.certifies(w, stage) and name.closed.excludes(w, stage):
            bad.append(w)
    return bad


# -- elementary names ----------------------------------------------------------

def full_interval_name() -> ClosedOvertName:
    src = {"kind": "interval", "lo": "0/1", "hi": "1/1"}
    return ClosedOvertName(
        ClosedSetName(lambda w, t: False, "[0,1]", src),
        OvertSetName(lambda w, t: True, "[0,1]", src),
    )


def interval_name(lo: RatLike, hi: RatLike) -> ClosedOvertName:
    """Name of the closed interval ``[lo, hi]`` with ``0 <= lo < hi <= 1``."""
    lo, hi = rat(lo), rat(hi)
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"need 0 <= lo < hi <= 1, got [{lo}, {hi}]")
    target = Interval(lo, hi)
    src = {"kind": "interval", "lo": format_rat(lo), "hi": format_rat(hi)}

    def meets(w: str, t: int) -> bool:
        return interval_of_word(w).interiors_meet(target)

    desc = str(target)
    return ClosedOvertName(
        ClosedSetName(lambda w, t: not meets(w, t), desc, src),
        OvertSetName(meets, desc, src),
    )


def point_name(x: RatLike) -> ClosedOvertName:
    """Name of ``{x}`` as the chain of words whose intervals contain ``x``.

    Uses the half-open ``(lo, hi]`` convention of :func:`word_containing`, so
    a grid point is carried by the chain approaching it from the left (from
    the right for ``0``).
    """
    x = rat(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{x} is outside [0, 1]")
    src = {"kind": "point", "x": format_rat(x)}

    def on_chain(w: str, t: int) -> bool:
        return word_containing(x, len(w)) == w

    desc = f"{{{format_rat(x)}}}"
    return ClosedOvertName(
        ClosedSetName(lambda w, t: not on_chain(w, t), desc, src),
        OvertSetName(on_chain, desc, src),
    )


def explicit_name(
    excluded: Iterable[tuple[int, Iterable[str]]] = (),
    certified: Iterable[tuple[int, Iterable[str]]] = (),
) -> ClosedOvertName:
    """Name given by finite lists of (stage, words) announcements."""
    ex: dict[str, int] = {}
    ce: dict[str, int] = {}
    for table, entries in ((ex, excluded), (ce, certified)):
        for stage, words in entries:
            if stage < 0:
                raise ValueError("stages are nonnegative")
            for w in words:
                if w.strip("01"):
                    raise ValueError(f"not a dyadic word: {w!r}")
                table[w] = min(stage, table.get(w, stage))
    src = {
        "kind": "explicit",
        "excluded": _group_by_stage(ex),
        "certified": _group_by_stage(ce),
    }
    return ClosedOvertName(
        ClosedSetName(lambda w, t: ex.get(w, t + 1) <= t, "explicit", src),
        OvertSetName(lambda w, t: ce.get(w, t + 1) <= t, "explicit", src),
    )


def _group_by_stage(table: Mapping[str, int]) -> list:
    by_stage: dict[int, list[str]] = {}
    for w, t in table.items():
        by_stage.setdefault(t, []).append(w)
    return [[t, sorted(ws, key=lambda w: (len(w), w))] for t, ws in sorted(by_stage.items())]


# -- Cantor schemes ------------------------------------------------------------

class CantorScheme:
    """Ratio sequence ``(d_i)`` with every ``d_i >= 2``.

    ``ratios`` is a callable ``level -> rational`` or a finite sequence whose
    last entry repeats forever.  Cell ``w`` is ``[a_w, b_w]``; a ``0`` keeps
    the left ``1/d`` of the parent, a ``1`` keeps the right ``1/d``.
    """

    def __init__(self, ratios: Callable[[int], RatLike] | Sequence[RatLike], label: str | None = None):
        if callable(ratios):
            self._fn = ratios
            self.ratio_list: list[Fraction] | None = None
        else:
            values = [rat(r) for r in ratios]
            if not values:
                raise ValueError("empty ratio list")
            for i, d in enumerate(values):
                if d < 2:
                    raise ValueError(f"ratio d_{i} = {format_rat(d)} is below 2")
            last = len(values) - 1
            self._fn = lambda i: values[min(i, last)]
            self.ratio_list = values
        self.label = label or (
            "d=" + ",".join(format_rat(d) for d in self.ratio_list) if self.ratio_list else "custom"
        )
        self._cells: dict[str, Interval] = {"": Interval(Fraction(0), Fraction(1))}
        self._ratios: dict[int, Fraction] = {}

    def ratio(self, level: int) -> Fraction:
        d = self._ratios.get(level)
        if d is None:
            d = rat(self._fn(level))
            if d < 2:
                raise ValueError(f"ratio d_{level} = {format_rat(d)} is below 2")
            self._ratios[level] = d
        return d

    def cell(self, word: str) -> Interval:
        iv = self._cells.get(word)
        if iv is not None:
            return iv
        parent = self.cell(word[:-1])
        frac = (parent.hi - parent.lo) / self.ratio(len(word) - 1)
        if word[-1] == "0":
            iv = Interval(parent.lo, parent.lo + frac)
        else:
            iv = Interval(parent.hi - frac, parent.hi)
        self._cells[word] = iv
        return iv

    def cell_length(self, level: int) -> Fraction:
        length = Fraction(1)
        for i in range(level):
            length /= self.ratio(i)
        return length

    def meets_level(self, target: Interval, stage: int) -> bool:
        """Whether the open ``target`` meets the union of level-``stage`` cells.

        Cell endpoints persist into every deeper level, so an endpoint strictly
        inside ``target`` settles the question early; otherwise the cell covers
        ``target`` and only its children need a look.
        """
        stack = [""]
        while stack:
            w = stack.pop()
            c = self.cell(w)
            if not c.interiors_meet(target):
                continue
            if len(w) >= stage:
                return True
            if target.interior_contains(c.lo) or target.interior_contains(c.hi):
                return True
            stack.extend(children(w))
        return False

    def left_endpoint_in(self, target: Interval, stage: int) -> bool:
        """Whether some ``a_w`` with ``|w| <= stage`` lies in the open ``target``."""
        stack = [""]
        while stack:
            w = stack.pop()
            c = self.cell(w)
            if c.hi <= target.lo or c.lo >= target.hi:
                continue
            if target.interior_contains(c.lo):
                return True
            if len(w) < stage:
                stack.extend(children(w))
        return False

    def dyadic_aligned_to(self, depth: int) -> bool:
        """Whether every cell at least ``2**-depth`` long is a dyadic interval."""
        level = 0
        while True:
            length = self.cell_length(level)
            if length < pow2(-depth):
                return True
            if length.numerator != 1 or length.denominator & (length.denominator - 1):
                return False
            for w in words_at_depth(level):
                if (self.cell(w).lo / length).denominator != 1:
                    return False
            level += 1

    def __repr__(self) -> str:
        return f"CantorScheme({self.label})"


def cantor_cells(scheme: CantorScheme, n: int) -> list[Interval]:
    """The ``2**n`` level-``n`` cells in word order."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    return [scheme.cell(w) for w in words_at_depth(n)]


def closed_name(scheme: CantorScheme) -> ClosedSetName:
    """Exclude a word at stage t once its open interval misses every level-t cell."""
    src = {"kind": "cantor", "ratios": [format_rat(d) for d in scheme.ratio_list]} if scheme.ratio_list else None
    return ClosedSetName(
        lambda w, t: not scheme.meets_level(interval_of_word(w), t),
        f"cantor({scheme.label})",
        src,
    )


def overt_name(scheme: CantorScheme) -> OvertSetName:
    """Certify a word once a left endpoint ``a_w`` (``|w| <= t``) is inside it.

    Left endpoints belong to the set because ``a_{w0} = a_w``.
    """
    src = {"kind": "cantor", "ratios": [format_rat(d) for d in scheme.ratio_list]} if scheme.ratio_list else None
    return OvertSetName(
        lambda w, t: scheme.left_endpoint_in(interval_of_word(w), t),
        f"cantor({scheme.label})",
        src,
    )


def scheme_name(scheme: CantorScheme) -> ClosedOvertName:
    return ClosedOvertName(closed_name(scheme), overt_name(scheme))


# -- rescaling and the union gadget ---------------------------------------------

def _floor_log2(q: Fraction) -> int:
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if pow2(e) > q:
        e -= 1
    return e


def _grid_words(lo: Fraction, hi: Fraction, depth: int) -> list[str]:
    """Depth-``depth`` words whose open interval meets the open ``(lo, hi)``."""
    if hi <= 0 or lo >= 1 or lo >= hi:
        return []
    if depth == 0:
        return [""]
    scale = 1 << depth
    k0 = max(0, (max(lo, Fraction(0)) * scale).__floor__())
    k1 = min(scale, ceil_rat(min(hi, Fraction(1)) * scale))
    return [format(k, f"0{depth}b") for k in range(k0, k1)]


def rescale_closed(name: ClosedSetName, lo: Fraction, hi: Fraction) -> ClosedSetName:
    """Closed name of ``{lo + x (hi - lo) : x in A}`` restricted to [0, 1].

    A target word is excluded when every source word of a comparable grid that
    meets its preimage is excluded.
    """
    width = hi - lo
    shift = _floor_log2(width) + 2

    def test(w: str, t: int) -> bool:
        iv = interval_of_word(w)
        p = (iv.lo - lo) / width
        q = (iv.hi - lo) / width
        grid = _grid_words(p, q, max(0, len(w) + shift))
        return all(name.excludes(u, t) for u in grid)

    return ClosedSetName(test, f"{name.description} -> [{format_rat(lo)},{format_rat(hi)}]")


def rescale_overt(name: OvertSetName, lo: Fraction, hi: Fraction) -> OvertSetName:
    """Certify a target word once a certified source word maps inside it."""
    width = hi - lo
    shift = _floor_log2(width)

    def test(w: str, t: int) -> bool:
        iv = interval_of_word(w)
        pre = Interval((iv.lo - lo) / width, (iv.hi - lo) / width)
        limit = max(0, len(w) - shift) + 2 + t
        stack = [""]
        while stack:
            u = stack.pop()
            du = interval_of_word(u)
            if not du.interiors_meet(pre):
                continue
            if pre.contains_interval(du):
                if name.certifies(u, t):
                    return True
                continue
            if len(u) < limit:
                stack.extend(children(u))
        return False

    return OvertSetName(test, f"{name.description} -> [{format_rat(lo)},{format_rat(hi)}]")


def rescale(name: ClosedOvertName, target: tuple[RatLike, RatLike]) -> ClosedOvertName:
    """Affine image of the named set in ``target = (a, b)``.

    Targets reaching outside [0, 1] are allowed (the image is clipped), which
    makes ``rescale(rescale(A, (0, 1/2)), (0, 2))`` the inverse round trip.
    """
    lo, hi = rat(target[0]), rat(target[1])
    if not lo < hi:
        raise ValueError(f"degenerate target interval [{lo}, {hi}]")
    return ClosedOvertName(rescale_closed(name.closed, lo, hi), rescale_overt(name.overt, lo, hi))


def block(i: int) -> Interval:
    """The i-th slot ``[2^(-2i-2), 2^(-2i-1)]`` of the union gadget."""
    return Interval(pow2(-2 * i - 2), pow2(-2 * i - 1))


def assemble(names: Sequence[ClosedOvertName] | Callable[[int], ClosedOvertName]) -> ClosedOvertName:
    """Name of ``{0}`` together with each ``A_i`` rescaled into :func:`block` ``i``.

    ``names`` may be a finite sequence or a callable ``i -> name`` for an
    infinite family.  Stage ``t`` consults the first ``t + 1`` names at stage
    ``t``; the chain ``0^n`` carries the point ``0`` and is never excluded.
    """
    if callable(names):
        fetch = names
        count = None
    else:
        names = list(names)
        fetch = names.__getitem__
        count = len(names)
    cache: dict[int, ClosedOvertName] = {}

    def part(i: int) -> ClosedOvertName:
        if i not in cache:
            b = block(i)
            cache[i] = rescale(fetch(i), (b.lo, b.hi))
        return cache[i]

    def consulted(t: int) -> range:
        return range(t + 1 if count is None else min(t + 1, count))

    def excluded(w: str, t: int) -> bool:
        if "1" not in w:
            return False
        iv = interval_of_word(w)
        if (count is None or t + 1 < count) and iv.lo < pow2(-2 * t - 3):
            return False
        for i in consulted(t):
            if iv.interiors_meet(block(i)) and not part(i).closed.excludes(w, t):
                return False
        return True

    def certified(w: str, t: int) -> bool:
        iv = interval_of_word(w)
        return any(iv.interiors_meet(block(i)) and part(i).overt.certifies(w, t) for i in consulted(t))

    return ClosedOvertName(
        ClosedSetName(excluded, "assembled union"),
        OvertSetName(certified, "assembled union"),
    )
