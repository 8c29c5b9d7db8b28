"""Capacities and flows on depth-truncated binary trees.

Trees are stored sparsely: a mapping from words (length at most ``depth``)
to nonnegative rationals, with every omitted word meaning ``0``.  The root
label is the total amount entering the tree; a flow conserves
``f(v) = f(v0) + f(v1)`` at every internal vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .dyadic import children, format_rat, pow2, words_up_to

GREEDY = "greedy"
PROPORTIONAL = "proportional"


def _clean(depth: int, labels: Mapping[str, object], what: str) -> dict[str, Fraction]:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    out = {}
    for w, v in labels.items():
        if w.strip("01"):
            raise ValueError(f"not a dyadic word: {w!r}")
        if len(w) > depth:
            raise ValueError(f"word {w!r} is deeper than the tree depth {depth}")
        q = Fraction(v)
        if q < 0:
            raise ValueError(f"negative {what} at {w!r}: {format_rat(q)}")
        if q:
            out[w] = q
    return out


@dataclass(frozen=True)
class CapacityTree:
    depth: int
    cap: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cap", _clean(self.depth, self.cap, "capacity"))

    def __getitem__(self, word: str) -> Fraction:
        return self.cap.get(word, Fraction(0))

    @classmethod
    def from_function(cls, depth: int, fn) -> "CapacityTree":
        return cls(depth, {w: fn(w) for w in words_up_to(depth)})


@dataclass(frozen=True)
class TreeFlow:
    depth: int
    flow: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flow", _clean(self.depth, self.flow, "flow"))
        bad = conservation_violation(self)
        if bad is not None:
            raise ValueError(f"flow not conserved at {bad!r}")

    def __getitem__(self, word: str) -> Fraction:
        return self.flow.get(word, Fraction(0))

    @property
    def value(self) -> Fraction:
        return self[""]

    def scaled(self, factor: Fraction) -> "TreeFlow":
        return TreeFlow(self.depth, {w: v * factor for w, v in self.flow.items()})

    def fits_under(self, cap: CapacityTree) -> bool:
        return all(v <= cap[w] for w, v in self.flow.items())


def conservation_violation(f: TreeFlow) -> str | None:
    """First internal word where ``f(v) != f(v0) + f(v1)``, or ``None``."""
    touched = set()
    for w in f.flow:
        if len(w) < f.depth:
            touched.add(w)
        if w:
            touched.add(w[:-1])
    for v in sorted(touched, key=lambda w: (len(w), w)):
        w0, w1 = children(v)
        if f[v] != f[w0] + f[w1]:
            return v
    return None


def uniform_flow(depth: int, total: Fraction = Fraction(1)) -> TreeFlow:
    """``total * 2^-|v|`` on every word: Lebesgue measure on the dyadic tree."""
    return TreeFlow(depth, {w: total * pow2(-len(w)) for w in words_up_to(depth)})


# -- max flow ------------------------------------------------------------------

def _bottleneck(cap: CapacityTree) -> dict[str, Fraction]:
    """``F(v)``: the most that can pass through ``v`` into the leaves below it."""
    F: dict[str, Fraction] = {}

    def visit(v: str) -> Fraction:
        c = cap[v]
        if not c:
            return c
        if len(v) == cap.depth:
            val = c
        else:
            w0, w1 = children(v)
            val = min(c, visit(w0) + visit(w1))
        if val:
            F[v] = val
        return val

    visit("")
    return F


def _split(F: Mapping[str, Fraction], depth: int, root: Fraction, strategy: str) -> dict[str, Fraction]:
    """Push ``root`` down the tree without exceeding ``F`` anywhere."""
    zero = Fraction(0)
    g = {"": root} if root else {}
    stack = [""] if root else []
    while stack:
        v = stack.pop()
        if len(v) == depth:
            continue
        gv = g[v]
        w0, w1 = children(v)
        f0, f1 = F.get(w0, zero), F.get(w1, zero)
        if strategy == GREEDY:
            g0 = min(f0, gv)
        elif strategy == PROPORTIONAL:
            g0 = gv * f0 / (f0 + f1)
        else:
            raise ValueError(f"unknown splitting strategy {strategy!r}")
        g1 = gv - g0
        for w, val in ((w0, g0), (w1, g1)):
            if val:
                g[w] = val
                stack.append(w)
    return g


def truncated_max_flow(cap: CapacityTree, strategy: str = GREEDY) -> tuple[Fraction, TreeFlow]:
    """Maximal root value of a flow below ``cap`` on the truncated tree.

    Leaves act as sinks bounded by their own capacity.  The value comes from
    ``F(v) = min(cap(v), F(v0) + F(v1))``; the witness is pushed down from the
    root either left-first (``"greedy"``) or in proportion to ``F`` of the two
    children (``"proportional"``), which keeps every vertex with ``F > 0``
    in the support.
    """
    F = _bottleneck(cap)
    value = F.get("", Fraction(0))
    return value, TreeFlow(cap.depth, _split(F, cap.depth, value, strategy))


def max_flow_iterate(cap: CapacityTree, iterations: int) -> dict[str, Fraction]:
    """``a_k`` after ``iterations`` rounds of ``a(v) <- min(a(v), a(v0) + a(v1))``.

    Starts from ``a_0 = cap``; leaves never change.  Returns a sparse map.
    """
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    a = dict(cap.cap)
    zero = Fraction(0)
    for _ in range(iterations):
        nxt = {}
        for v, val in a.items():
            if len(v) < cap.depth:
                w0, w1 = children(v)
                val = min(val, a.get(w0, zero) + a.get(w1, zero))
            if val:
                nxt[v] = val
        if nxt == a:
            break
        a = nxt
    return a


# -- nonzero flows ---------------------------------------------------------------

@dataclass(frozen=True)
class Found:
    witness: object


@dataclass(frozen=True)
class Refuted:
    bound: Fraction


def nonzero_flow_search(cap: CapacityTree, k: int) -> Found | Refuted:
    """Look for a flow below ``cap`` carrying exactly ``2^-k`` through the root.

    On success the witness is a :class:`TreeFlow`; otherwise the exact
    truncated max-flow value (below ``2^-k``) is returned as an upper bound.
    """
    if k < 0:
        raise ValueError("precision k must be nonnegative")
    F = _bottleneck(cap)
    value = F.get("", Fraction(0))
    target = pow2(-k)
    if value < target:
        return Refuted(value)
    return Found(TreeFlow(cap.depth, _split(F, cap.depth, target, GREEDY)))


# -- concentration ---------------------------------------------------------------

def concentrate_flow(f: TreeFlow) -> TreeFlow:
    """Concentrated flow ``g`` with ``g(root) = 1/2`` and ``f(root) * g <= f``.

    Every vertex of ``g`` carries either nothing or at least ``2^(-2|v|-1)``.
    Working on ``f / f(root)``, each supported vertex splits by the first
    applicable rule: both children at least ``2^(-2|v|-2)`` -> split with slack
    ``2^(-2|v|-3)`` on both sides; else the left child at least
    ``3 * 2^(-2|v|-3)`` -> everything left; else everything right.
    """
    total = f.value
    if total <= 0:
        raise ValueError("cannot concentrate the zero flow")
    h = {w: v / total for w, v in f.flow.items()}
    zero = Fraction(0)
    g = {"": Fraction(1, 2)}
    stack = [""]
    while stack:
        v = stack.pop()
        if len(v) == f.depth:
            continue
        gv = g[v]
        n = len(v)
        w0, w1 = children(v)
        h0, h1 = h.get(w0, zero), h.get(w1, zero)
        quarter = pow2(-2 * n - 2)
        eighth = pow2(-2 * n - 3)
        if h0 >= quarter and h1 >= quarter:
            g0 = min(h0 - eighth, gv - eighth)
            g1 = gv - g0
        elif h0 >= 3 * eighth:
            g0, g1 = gv, zero
        elif h1 >= 3 * eighth:
            g0, g1 = zero, gv
        else:
            raise ArithmeticError(f"no applicable case at {v!r}; is the input a valid flow?")
        for w, val in ((w0, g0), (w1, g1)):
            if val:
                g[w] = val
                stack.append(w)
    return TreeFlow(f.depth, g)


def is_concentrated(g: TreeFlow) -> bool:
    return all(v >= pow2(-2 * len(w) - 1) for w, v in g.flow.items())


def flow_entries(labels: Mapping[str, Fraction]) -> Iterator[tuple[str, str]]:
    for w in sorted(labels, key=lambda w: (len(w), w)):
        yield w, format_rat(labels[w])
