"""JSON formats for sets, measures, capacity trees and flows.

Rationals are always ``"p/q"`` strings and words are bit strings.  Loaders
raise :class:`FormatError` for anything structurally wrong; invariant
checks (additivity, conservation, monotone stages) raise ``ValueError``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .dimension import CellMeasure
from .dyadic import children, format_rat, parse_rat
from .flows import CapacityTree, TreeFlow
from .measures import DyadicMeasure
from .perfectcore import PerfectCoreName, perfect_core
from .sets import (
    CantorScheme,
    ClosedOvertName,
    assemble,
    explicit_name,
    full_interval_name,
    interval_name,
    point_name,
    rescale,
    scheme_name,
)


class FormatError(ValueError):
    pass


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from exc


def write_json(path: str | Path, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(data))


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _field(doc: dict, key: str, kind: type | tuple = object):
    if not isinstance(doc, dict):
        raise FormatError(f"expected a JSON object, got {type(doc).__name__}")
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise FormatError(f"field {key!r} has the wrong type")
    return val


def _rat(text: Any, where: str) -> Fraction:
    if not isinstance(text, str):
        raise FormatError(f"{where}: rationals must be strings like \"1/3\", got {text!r}")
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{where}: bad rational {text!r}") from exc


def _word(w: Any) -> str:
    if not isinstance(w, str) or w.strip("01"):
        raise FormatError(f"not a dyadic word: {w!r}")
    return w


def _entries(doc: dict, key: str, depth: int) -> dict[str, Fraction]:
    rows = _field(doc, key, list)
    out = {}
    for row in rows:
        if not isinstance(row, list) or len(row) != 2:
            raise FormatError(f"{key}: each entry must be [word, \"p/q\"]")
        w = _word(row[0])
        if len(w) > depth:
            raise FormatError(f"{key}: word {w!r} deeper than depth {depth}")
        if w in out:
            raise FormatError(f"{key}: duplicate word {w!r}")
        out[w] = _rat(row[1], f"{key}[{w!r}]")
    return out


def _rows(labels: dict[str, Fraction]) -> list:
    return [[w, format_rat(labels[w])] for w in sorted(labels, key=lambda w: (len(w), w))]


def _depth(doc: dict) -> int:
    depth = _field(doc, "depth", int)
    if depth < 0:
        raise FormatError("depth must be nonnegative")
    return depth


# -- measures ------------------------------------------------------------------------

def measure_from_json(doc: dict) -> DyadicMeasure:
    """Load a measure; missing internal words are filled in by additivity."""
    depth = _depth(doc)
    mass = _entries(doc, "mass", depth)
    for d in range(depth - 1, -1, -1):
        for w in {u[:d] for u in mass if len(u) == d + 1}:
            if w not in mass:
                w0, w1 = children(w)
                mass[w] = mass.get(w0, Fraction(0)) + mass.get(w1, Fraction(0))
    mu = DyadicMeasure(depth, mass)
    mu.audit()
    if "total" in doc and _rat(doc["total"], "total") != mu.total:
        raise ValueError(f"declared total {doc['total']} differs from mass at the root")
    return mu


def measure_to_json(mu: DyadicMeasure) -> dict:
    return {"depth": mu.depth, "total": format_rat(mu.total), "mass": _rows(mu.mass)}


def cell_measure_to_json(mu: CellMeasure) -> dict:
    return {
        "kind": "cell-measure",
        "depth": mu.depth,
        "ratios": [format_rat(d) for d in (mu.scheme.ratio_list or [])],
        "mass": _rows(mu.mass),
    }


def cell_measure_from_json(doc: dict) -> CellMeasure:
    depth = _depth(doc)
    ratios = [_rat(r, "ratios") for r in _field(doc, "ratios", list)]
    mass = _entries(doc, "mass", depth)
    for w in mass:
        if len(w) < depth and mass[w] != sum((mass.get(c, Fraction(0)) for c in children(w)), Fraction(0)):
            raise ValueError(f"cell masses not additive at {w!r}")
    return CellMeasure(CantorScheme(ratios), depth, mass)


# -- trees ----------------------------------------------------------------------------

def capacity_from_json(doc: dict) -> CapacityTree:
    depth = _depth(doc)
    return CapacityTree(depth, _entries(doc, "entries", depth))


def flow_from_json(doc: dict) -> TreeFlow:
    depth = _depth(doc)
    return TreeFlow(depth, _entries(doc, "entries", depth))


def tree_to_json(depth: int, labels: dict[str, Fraction]) -> dict:
    return {"depth": depth, "entries": _rows(labels)}


# -- sets ------------------------------------------------------------------------------

def _stage_lists(doc: dict, key: str) -> list[tuple[int, list[str]]]:
    rows = doc.get(key, [])
    if not isinstance(rows, list):
        raise FormatError(f"{key} must be a list of [stage, [words]]")
    out = []
    for row in rows:
        if not (isinstance(row, list) and len(row) == 2 and isinstance(row[1], list)):
            raise FormatError(f"{key}: each entry must be [stage, [words]]")
        stage = row[0]
        if isinstance(stage, str) and stage.isdigit():
            stage = int(stage)
        if not isinstance(stage, int) or isinstance(stage, bool) or stage < 0:
            raise FormatError(f"{key}: bad stage {row[0]!r}")
        out.append((stage, [_word(w) for w in row[1]]))
    return out


def scheme_from_json(doc: dict) -> CantorScheme:
    ratios = _field(doc, "ratios", list)
    if not ratios:
        raise FormatError("ratios must be non-empty")
    return CantorScheme([_rat(r, "ratios") for r in ratios])


def set_from_json(doc: dict) -> ClosedOvertName:
    kind = _field(doc, "kind", str)
    if kind == "cantor":
        return scheme_name(scheme_from_json(doc))
    if kind == "explicit":
        return explicit_name(_stage_lists(doc, "excluded"), _stage_lists(doc, "certified"))
    if kind == "interval":
        lo, hi = _rat(_field(doc, "lo"), "lo"), _rat(_field(doc, "hi"), "hi")
        return full_interval_name() if (lo, hi) == (0, 1) else interval_name(lo, hi)
    if kind == "point":
        return point_name(_rat(_field(doc, "x"), "x"))
    if kind == "rescale":
        target = _field(doc, "target", list)
        if len(target) != 2:
            raise FormatError("target must be [\"a\", \"b\"]")
        return rescale(set_from_json(_field(doc, "set", dict)), (_rat(target[0], "target"), _rat(target[1], "target")))
    if kind == "assemble":
        return assemble([set_from_json(d) for d in _field(doc, "sets", list)])
    if kind == "perfect-core":
        budget = _field(doc, "budget", int)
        return perfect_core(set_from_json(_field(doc, "input", dict)).closed, budget)
    raise FormatError(f"unknown set kind {kind!r}")


def perfect_core_to_json(input_doc: dict, result: PerfectCoreName) -> dict:
    """The output is reproducible from its input, so the file records how to rebuild it."""
    decided = sorted(result.decisions.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return {
        "kind": "perfect-core",
        "input": input_doc,
        "budget": result.budget,
        "points": [p.to_json() for p in result.points],
        "certified": [w for w, (meets, _) in decided if meets],
        "excluded": [w for w, (meets, _) in decided if not meets],
    }
