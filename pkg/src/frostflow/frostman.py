"""Frostman measures from closed sets via capacity trees and tree flows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadic import RatLike, format_rat, frostman_cap, rat
from .flows import PROPORTIONAL, CapacityTree, Found, Refuted, nonzero_flow_search, truncated_max_flow
from .measures import DyadicMeasure, flow_to_measure
from .sets import CantorScheme, ClosedSetName, closed_name


def _check_exponent(s: Fraction) -> Fraction:
    s = rat(s)
    if not 0 <= s <= 1:
        raise ValueError(f"exponent s = {format_rat(s)} is outside [0, 1]")
    return s


@dataclass(frozen=True)
class FrostmanTask:
    set: ClosedSetName
    s: Fraction
    depth: int
    stage: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "s", _check_exponent(self.s))
        for name in ("depth", "stage", "k"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def capacity_tree(A: ClosedSetName, s: RatLike, depth: int, stage: int) -> CapacityTree:
    """``2^-ceil(s|w|)`` on words no prefix of which ``A`` excludes by ``stage``; 0 elsewhere."""
    s = _check_exponent(s)
    return CapacityTree(depth, {w: frostman_cap(s, len(w)) for w in A.survivors(stage, depth)})


def frost(task: FrostmanTask) -> Found | Refuted:
    """Dyadic ``s``-Frostman measure of total ``2^-k`` carried by ``A``, or a content bound.

    ``Found`` wraps a :class:`DyadicMeasure`; ``Refuted`` carries the exact
    truncated max-flow value, which is also the dyadic content at this
    depth and stage.
    """
    cap = capacity_tree(task.set, task.s, task.depth, task.stage)
    result = nonzero_flow_search(cap, task.k)
    if isinstance(result, Refuted):
        return result
    return Found(flow_to_measure(result.witness))


def strict_frost(scheme: CantorScheme, s: RatLike, depth: int) -> DyadicMeasure:
    """Frostman measure positive on every word the scheme does not exclude.

    Only schemes whose cells down to length ``2^-depth`` are dyadic
    intervals are accepted: then exclusion at stage ``depth`` is exact, and
    the proportional split of the max flow reaches every surviving word.
    """
    s = _check_exponent(s)
    if not scheme.dyadic_aligned_to(depth):
        raise ValueError(f"scheme {scheme.label} is not dyadic-aligned down to depth {depth}")
    cap = capacity_tree(closed_name(scheme), s, depth, depth)
    value, flow = truncated_max_flow(cap, PROPORTIONAL)
    if not value:
        raise ValueError("no Frostman measure at this depth")
    return flow_to_measure(flow)
