"""Closed-and-overt superset with the same perfect kernel.

Given only negative information about ``A``, :func:`perfect_core` decides for
each dyadic word, in breadth-first order, whether it meets an output set
``B = A ∪ X``.  Words are certified optimistically and watched; when a watched
word later turns out to miss ``A``, an isolated rational point is planted
inside it so the earlier "meets" answer stays true.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .dyadic import Interval, children, format_rat, interval_of_word, words_at_depth
from .sets import ClosedOvertName, ClosedSetName, OvertSetName

# How far below the deepest decided word the search for a fresh sub-interval
# may go before giving up.
SEARCH_SLACK = 24


@dataclass(frozen=True)
class IsolatedPoint:
    """A planted point with the two excluded open intervals flanking it."""

    x: Fraction
    left: Interval
    right: Interval
    host: str
    step: int

    def to_json(self) -> dict:
        return {
            "x": format_rat(self.x),
            "left": [format_rat(self.left.lo), format_rat(self.left.hi)],
            "right": [format_rat(self.right.lo), format_rat(self.right.hi)],
            "host": self.host,
            "step": self.step,
        }


@dataclass
class _State:
    decisions: dict[str, tuple[bool, int]] = field(default_factory=dict)
    excluded: list[Interval] = field(default_factory=list)
    halves: list[tuple[Interval, int]] = field(default_factory=list)
    points: list[IsolatedPoint] = field(default_factory=list)
    monitored: list[str] = field(default_factory=list)
    max_depth: int = -1

    def holds_point(self, iv: Interval) -> bool:
        return any(iv.interior_contains(p.x) for p in self.points)


@dataclass(frozen=True, eq=False)
class PerfectCoreName(ClosedOvertName):
    """Output of :func:`perfect_core`: the name of ``B`` plus its audit trail.

    ``decisions`` maps each decided word to ``(meets B, step)``.
    """

    points: tuple[IsolatedPoint, ...] = ()
    decisions: dict = field(default_factory=dict)
    budget: int = 0


def _knows_empty(A: ClosedSetName, word: str, stage: int, limit: int, memo: dict) -> bool:
    """``A`` excludes ``word``, directly or through a finite cover by descendants."""
    key = word
    if key in memo:
        return memo[key]
    if A.excludes(word, stage):
        result = True
    elif len(word) < limit:
        w0, w1 = children(word)
        result = _knows_empty(A, w0, stage, limit, memo) and _knows_empty(A, w1, stage, limit, memo)
    else:
        result = False
    memo[key] = result
    return result


def _fresh_subinterval(state: _State, host: str) -> str:
    """Largest (then leftmost) word inside ``host`` clear of every exclusion.

    The word must be strictly deeper than anything decided so far, so that
    the halves excluded around the planted point cannot swallow a word that
    was already certified.
    """
    start = max(len(host) + 1, state.max_depth + 1)
    for depth in range(start, start + SEARCH_SLACK):
        for tail in words_at_depth(depth - len(host)):
            cand = interval_of_word(host + tail)
            if all(cand.hi < j.lo or cand.lo > j.hi for j in state.excluded):
                return host + tail
    raise RuntimeError(f"no clear sub-interval of {host!r} within search depth")


def perfect_core(
    A: ClosedSetName,
    stage_budget: int,
    schedule: Callable[[int], int] | None = None,
) -> PerfectCoreName:
    """Run ``stage_budget`` decision steps of the PerfectCore construction.

    Step ``j`` reads ``A`` at stage ``schedule(j)`` (default ``j``), settles
    every watched word that is now known to miss ``A``, then decides the
    ``j``-th word in breadth-first order:

    1. it contains a planted point -> meets ``B``;
    2. it is known to miss ``A`` -> misses ``B``;
    3. otherwise -> meets ``B``, and is watched from now on.

    A watched word refuted later receives a planted point ``x`` a third of
    the way into a fresh dyadic sub-interval ``W``; the open halves of
    ``L = (W.lo, W.lo + 2|W|/3)`` on either side of ``x`` are excluded.
    Points are not grid points, so every word containing one stays certified
    and the chain of such words never ends.
    """
    if stage_budget < 1:
        raise ValueError("stage budget must be at least 1")
    schedule = schedule or (lambda j: j)
    st = _State()

    for step in range(stage_budget):
        stage = schedule(step)
        word = _word_at(step)
        limit = len(word) + 1
        memo: dict = {}

        refuted = [w for w in st.monitored if _knows_empty(A, w, stage, limit, memo)]
        if refuted:
            st.monitored = [w for w in st.monitored if w not in refuted]
            for host in sorted(refuted, key=lambda w: (-len(w), w)):
                hiv = interval_of_word(host)
                if st.holds_point(hiv):
                    continue
                sub = interval_of_word(_fresh_subinterval(st, host))
                third = sub.length / 3
                x = sub.lo + third
                left = Interval(sub.lo, x)
                right = Interval(x, x + third)
                st.points.append(IsolatedPoint(x, left, right, host, step))
                st.excluded.extend((left, right))
                st.halves.extend(((left, step), (right, step)))

        iv = interval_of_word(word)
        if _implicitly_excluded(st, word, iv):
            continue
        st.max_depth = max(st.max_depth, len(word))
        if st.holds_point(iv):
            st.decisions[word] = (True, step)
        elif _knows_empty(A, word, stage, limit, memo):
            st.decisions[word] = (False, step)
            st.excluded.append(iv)
        else:
            st.decisions[word] = (True, step)
            st.monitored.append(word)

    decisions = dict(st.decisions)
    halves = list(st.halves)
    points = list(st.points)

    def excluded(w: str, t: int) -> bool:
        d = decisions.get(w)
        if d is not None:
            return not d[0] and d[1] <= t
        wiv = interval_of_word(w)
        return any(s <= t and h.contains_interval(wiv) for h, s in halves)

    def certified(w: str, t: int) -> bool:
        d = decisions.get(w)
        if d is not None and d[0] and d[1] <= t:
            return True
        wiv = interval_of_word(w)
        return any(p.step <= t and wiv.interior_contains(p.x) for p in points)

    desc = f"perfect core of {A.description}"
    return PerfectCoreName(
        ClosedSetName(excluded, desc),
        OvertSetName(certified, desc),
        tuple(points),
        decisions,
        stage_budget,
    )


def _word_at(index: int) -> str:
    depth = (index + 1).bit_length() - 1
    k = index - ((1 << depth) - 1)
    return format(k, f"0{depth}b") if depth else ""


def _implicitly_excluded(st: _State, word: str, iv: Interval) -> bool:
    for i in range(len(word)):
        d = st.decisions.get(word[:i])
        if d is not None and not d[0]:
            return True
    return any(h.contains_interval(iv) for h, _ in st.halves)


def audit_isolation(result: PerfectCoreName, depth: int) -> list[str]:
    """Problems with the recorded isolation witnesses, checked up to ``depth``.

    Each planted point must sit between its two flanking intervals, every word
    lying inside a flank must be excluded, and no decided-certified word may
    lie inside a flank.
    """
    problems = []
    final = result.budget
    for p in result.points:
        if not (p.left.hi == p.x == p.right.lo and p.left.lo < p.x < p.right.hi):
            problems.append(f"point {format_rat(p.x)} is not flanked by its intervals")
        for d in range(depth + 1):
            for w in words_at_depth(d):
                wiv = interval_of_word(w)
                inside = p.left.contains_interval(wiv) or p.right.contains_interval(wiv)
                if not inside:
                    continue
                if not result.closed.excludes(w, final):
                    problems.append(f"word {w!r} inside a flank of {format_rat(p.x)} is not excluded")
                dec = result.decisions.get(w)
                if dec is not None and dec[0]:
                    problems.append(f"word {w!r} inside a flank of {format_rat(p.x)} was certified")
    return problems

