"""JSON forms of every data type; parsing validates through the constructors.

Element, letter, state and label references are by name.  A morphism's
``"monoid"`` may be an inline object or a path (relative to ``base``).
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .models import DFA, Transformation
from .monoid import Monoid, Morphism, as_word
from .slp import SLP, Var
from .solver import Instance, Recognizer
from .tiling import Tile, Tiling, TilingSystem
from .varieties import VarietyReport


class MalformedInput(ValueError):
    code = "malformed_input"


def _need(d: Any, key: str, kind=None):
    if not isinstance(d, dict):
        raise MalformedInput(f"expected an object with key {key!r}")
    if key not in d:
        raise MalformedInput(f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise MalformedInput(f"key {key!r} has the wrong type")
    return v


def _strings(xs, what) -> list:
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise MalformedInput(f"{what} must be a list of strings")
    return xs


def _lookup(names: dict, x, what):
    try:
        return names[x]
    except (KeyError, TypeError):
        raise MalformedInput(f"unknown {what} {x!r}") from None


# -- monoids and morphisms ---------------------------------------------------------


def monoid_to_json(M: Monoid) -> dict:
    e = M.elements
    return {
        "elements": list(e),
        "identity": e[M.identity],
        "table": [[e[x] for x in row] for row in M.table.tolist()],
    }


def monoid_from_json(d, base: Path | None = None) -> Monoid:
    if isinstance(d, str):
        return monoid_from_json(read_json(_resolve(d, base)))
    elements = _strings(_need(d, "elements", list), "elements")
    idx = {x: i for i, x in enumerate(elements)}
    table = _need(d, "table", list)
    if len(table) != len(elements) or any(not isinstance(r, list) or len(r) != len(elements) for r in table):
        raise MalformedInput("table must be square with one row per element")
    rows = [[_lookup(idx, x, "element") for x in r] for r in table]
    return Monoid(elements, rows, identity=_lookup(idx, _need(d, "identity"), "element"))


def _resolve(ref: str, base: Path | None) -> Path:
    p = Path(ref)
    return p if p.is_absolute() or base is None else base / p


def morphism_to_json(h: Morphism) -> dict:
    M = h.target
    return {
        "alphabet": list(h.alphabet),
        "monoid": monoid_to_json(M),
        "images": {a: M.elements[m] for a, m in zip(h.alphabet, h.images)},
    }


def morphism_from_json(d, base: Path | None = None, cache: dict | None = None) -> Morphism:
    alphabet = _strings(_need(d, "alphabet", list), "alphabet")
    ref = _need(d, "monoid")
    if cache is not None and isinstance(ref, str):
        M = cache.get(ref)
        if M is None:
            M = cache[ref] = monoid_from_json(ref, base)
    else:
        M = monoid_from_json(ref, base)
    images = _need(d, "images", dict)
    if set(images) != set(alphabet):
        raise MalformedInput("images must give exactly one element per letter")
    idx = {x: i for i, x in enumerate(M.elements)}
    return Morphism(tuple(alphabet), M, tuple(_lookup(idx, images[a], "element") for a in alphabet))


# -- instances ---------------------------------------------------------------------


def instance_to_json(I: Instance) -> dict:
    return {
        "alphabet": list(I.alphabet),
        "recognizers": [
            {"morphism": morphism_to_json(r.morphism),
             "accepting": [r.monoid.elements[p] for p in sorted(r.accepting)]}
            for r in I.recognizers
        ],
    }


def instance_from_json(d, base: Path | None = None) -> Instance:
    alphabet = _strings(_need(d, "alphabet", list), "alphabet")
    recs = []
    cache: dict = {}
    for r in _need(d, "recognizers", list):
        h = morphism_from_json(_need(r, "morphism", dict), base, cache)
        acc = _strings(_need(r, "accepting", list), "accepting")
        idx = {x: i for i, x in enumerate(h.target.elements)}
        recs.append(Recognizer(h, frozenset(_lookup(idx, p, "element") for p in acc)))
    return Instance(tuple(alphabet), recs)


def word_from_json(w) -> tuple:
    """A word is a list of letters, or a string read one character per letter."""
    if isinstance(w, str):
        return as_word(w)
    return tuple(_strings(w, "word"))


# -- SLPs --------------------------------------------------------------------------


def slp_to_json(S: SLP) -> dict:
    return {
        "alphabet": list(S.alphabet),
        "variables": list(S.variables),
        "rules": {v: [{"v": s.name} if isinstance(s, Var) else {"t": s} for s in S.rules[v]]
                  for v in S.variables},
        "start": S.start,
    }


def slp_from_json(d) -> SLP:
    alphabet = _strings(_need(d, "alphabet", list), "alphabet")
    variables = _strings(_need(d, "variables", list), "variables")
    rules = {}
    for v, rhs in _need(d, "rules", dict).items():
        if not isinstance(rhs, list):
            raise MalformedInput(f"rule for {v!r} must be a list")
        syms = []
        for s in rhs:
            if isinstance(s, dict) and set(s) == {"t"} and isinstance(s["t"], str):
                syms.append(s["t"])
            elif isinstance(s, dict) and set(s) == {"v"} and isinstance(s["v"], str):
                syms.append(Var(s["v"]))
            else:
                raise MalformedInput(f"bad symbol {s!r} in rule for {v!r}")
        rules[v] = syms
    # the serialized order must already be topological
    pos = {v: i for i, v in enumerate(variables)}
    for v, rhs in rules.items():
        for s in rhs:
            if isinstance(s, Var) and s.name in pos and v in pos and pos[s.name] >= pos[v]:
                raise MalformedInput(f"variable order is not topological at {v!r}")
    start = _need(d, "start", str)
    return SLP(alphabet, variables, rules, start)


# -- DFAs and transformations ------------------------------------------------------


def dfa_to_json(D: DFA) -> dict:
    s = D.states
    return {
        "states": list(s),
        "alphabet": list(D.alphabet),
        "initial": s[D.initial],
        "accepting": [s[q] for q in sorted(D.accepting)],
        "delta": {s[q]: {a: s[int(D.delta[q, k])] for k, a in enumerate(D.alphabet)} for q in range(len(s))},
    }


def dfa_from_json(d) -> DFA:
    states = _strings(_need(d, "states", list), "states")
    alphabet = _strings(_need(d, "alphabet", list), "alphabet")
    idx = {x: i for i, x in enumerate(states)}
    delta = _need(d, "delta", dict)
    rows = []
    for q in states:
        row = _need(delta, q, dict)
        rows.append([_lookup(idx, _need(row, a), "state") for a in alphabet])
    acc = [_lookup(idx, q, "state") for q in _strings(_need(d, "accepting", list), "accepting")]
    return DFA(states, alphabet, _lookup(idx, _need(d, "initial"), "state"), acc, rows)


def transformation_to_json(t: Transformation) -> dict:
    return {"n": t.n, "map": list(t.map)}


def transformation_from_json(d) -> Transformation:
    n = _need(d, "n", int)
    m = _need(d, "map", list)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in m):
        raise MalformedInput("map must be a list of integers")
    return Transformation(n, tuple(m))


def membership_to_json(gens: dict, target: Transformation) -> dict:
    return {"generators": {a: transformation_to_json(g) for a, g in gens.items()},
            "target": transformation_to_json(target)}


def membership_from_json(d) -> tuple[dict, Transformation]:
    gens = {a: transformation_from_json(g) for a, g in _need(d, "generators", dict).items()}
    return gens, transformation_from_json(_need(d, "target", dict))


# -- tilings -----------------------------------------------------------------------


def tiling_system_to_json(T: TilingSystem) -> dict:
    return {
        "labels": list(T.labels),
        "tiles": [t._asdict() for t in T.tiles],
        "width": T.width,
        "first": list(T.first),
        "bottom": list(T.bottom),
    }


def tiling_system_from_json(d) -> TilingSystem:
    labels = _strings(_need(d, "labels", list), "labels")
    tiles = []
    for t in _need(d, "tiles", list):
        tiles.append(Tile(*(_need(t, k, str) for k in Tile._fields)))
    width = _need(d, "width", int)
    first = _need(d, "first", list)
    bottom = _need(d, "bottom", list)
    if not all(isinstance(x, int) for x in first + bottom):
        raise MalformedInput("first and bottom must list tile indices")
    return TilingSystem(tuple(labels), tuple(tiles), width, tuple(first), tuple(bottom))


def tiling_to_json(t: Tiling) -> dict:
    return {"grid": [list(r) for r in t.grid]}


def tiling_from_json(d) -> Tiling:
    grid = _need(d, "grid", list)
    if not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in grid):
        raise MalformedInput("grid must be a list of rows of tile indices")
    return Tiling(tuple(tuple(r) for r in grid))


# -- reports -----------------------------------------------------------------------


def variety_report_to_json(M: Monoid, R: VarietyReport) -> dict:
    out: dict = dict(R.flags())
    out["witnesses"] = {k: [M.elements[x] for x in v] for k, v in sorted(R.witnesses.items())}
    return out


def variety_report_from_json(d, M: Monoid) -> VarietyReport:
    idx = {x: i for i, x in enumerate(M.elements)}
    w = {k: tuple(_lookup(idx, x, "element") for x in v) for k, v in d.get("witnesses", {}).items()}
    return VarietyReport(
        is_group=_need(d, "is_group", bool),
        is_aperiodic=_need(d, "is_aperiodic", bool),
        in_DS=_need(d, "in_DS", bool),
        in_DO=_need(d, "in_DO", bool),
        in_DS_char4=d.get("in_DS_char4"),
        witnesses=w,
    )


# -- files -------------------------------------------------------------------------


def read_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj) -> str:
    """Canonical text: two-space indent, keys in insertion order, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
