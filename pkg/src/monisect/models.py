"""DFAs and transformation monoids, as reduction targets and cross-check oracles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .monoid import CapExceeded, Monoid, Morphism
from .solver import DEFAULT_STATE_BUDGET, BudgetExceeded, Instance, co_reachable, right_action, search

DEFAULT_CLOSURE_CAP = 100_000
# a transition monoid is materialized as a full table, so its cap is smaller
DEFAULT_TABLE_CAP = 4096


class ModelError(ValueError):
    code = "invalid_model"


class DFA:
    """Complete DFA; ``delta[q, a]`` is the successor of state ``q`` under letter ``a``."""

    def __init__(self, states: Sequence[str], alphabet: Sequence, initial: int, accepting, delta):
        self.states = tuple(str(s) for s in states)
        self.alphabet = tuple(alphabet)
        n = len(self.states)
        if n == 0:
            raise ModelError("a DFA needs at least one state")
        d = np.array(delta, dtype=np.int32).reshape(n, len(self.alphabet))
        if d.size and (d.min() < 0 or d.max() >= n):
            raise ModelError("transition target out of range")
        d.setflags(write=False)
        self.delta = d
        if not 0 <= initial < n:
            raise ModelError("initial state out of range")
        self.initial = int(initial)
        self.accepting = frozenset(int(q) for q in accepting)
        if any(not 0 <= q < n for q in self.accepting):
            raise ModelError("accepting state out of range")

    def __len__(self):
        return len(self.states)

    def __eq__(self, other):
        if not isinstance(other, DFA):
            return NotImplemented
        return (self.states, self.alphabet, self.initial, self.accepting) == (
            other.states, other.alphabet, other.initial, other.accepting
        ) and np.array_equal(self.delta, other.delta)

    def run(self, word) -> int:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        q = self.initial
        for a in word:
            q = int(self.delta[q, idx[a]])
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting


@dataclass(frozen=True)
class Transformation:
    n: int
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if len(self.map) != self.n or any(not 0 <= x < self.n for x in self.map):
            raise ModelError("transformation images must lie in range(n)")

    @classmethod
    def identity(cls, n: int) -> "Transformation":
        return cls(n, tuple(range(n)))

    def then(self, other: "Transformation") -> "Transformation":
        """Apply ``self`` first, then ``other``."""
        return Transformation(self.n, tuple(other.map[x] for x in self.map))


def monoid_to_dfa(h: Morphism, accepting) -> DFA:
    M = h.target
    acc = [M.index(p) for p in accepting]
    return DFA(M.elements, h.alphabet, M.identity, acc, right_action(h))


def dfa_intersection_nonempty(dfas: Sequence[DFA], budget: int = DEFAULT_STATE_BUDGET):
    """Length-lex least word accepted by every DFA, or None."""
    if not dfas:
        raise ModelError("need at least one DFA")
    alphabet = dfas[0].alphabet
    for D in dfas[1:]:
        if D.alphabet != alphabet:
            raise ModelError("DFAs must share the alphabet (same letter order)")
    if any(not D.accepting for D in dfas):
        return None
    res = search([D.delta for D in dfas], [D.initial for D in dfas],
                 [D.accepting for D in dfas], alphabet, budget)
    return res.witness


def _closure(step: np.ndarray, n: int, cap: int):
    """All compositions of the letter actions on ``n`` points, with BFS tree."""
    found, states, parent, via = kernels.coordinate_bfs(
        [step] * n, np.arange(n, dtype=np.int32), None, None, int(cap), False
    )
    if found == kernels.OVER_BUDGET:
        raise CapExceeded(f"closure exceeds {cap} elements")
    return states, parent, via


def _cayley_table(states: np.ndarray, parent, via, step: np.ndarray) -> np.ndarray:
    """Multiplication table of a closure listed in BFS order (index 0 = identity)."""
    T = len(states)
    key = {row.tobytes(): i for i, row in enumerate(states)}
    nletters = step.shape[1]
    right = np.empty((T, nletters), dtype=np.int64)
    for a in range(nletters):
        moved = step[:, a][states]  # x·a applies x then a
        for x in range(T):
            right[x, a] = key[moved[x].tobytes()]
    table = np.empty((T, T), dtype=np.int32)
    table[:, 0] = np.arange(T)
    for y in range(1, T):
        # x·y = (x·parent(y))·via(y)
        table[:, y] = right[table[:, parent[y]], via[y]]
    return table


def transition_monoid(D: DFA, cap: int = DEFAULT_TABLE_CAP) -> tuple[Monoid, Morphism]:
    states, parent, via = _closure(D.delta, len(D), cap)
    table = _cayley_table(states, parent, via, D.delta)
    names = ["[" + ",".join(D.states[q] for q in row) + "]" for row in states]
    M = Monoid(names, table, identity=0, check=False)
    key = {row.tobytes(): i for i, row in enumerate(states)}
    images = [key[np.ascontiguousarray(D.delta[:, a]).tobytes()] for a in range(len(D.alphabet))]
    return M, Morphism(D.alphabet, M, tuple(images))


def instance_to_transformation(I: Instance) -> tuple[dict, Transformation]:
    """Blockwise right multiplication on the disjoint union of the monoids."""
    for r in I.recognizers:
        if len(r.accepting) != 1:
            raise ModelError("every accepting set must be a singleton")
    offsets = np.cumsum([0] + [len(r.monoid) for r in I.recognizers])
    n = int(offsets[-1])
    gens = {}
    for a_i, a in enumerate(I.alphabet):
        img = np.empty(n, dtype=np.int64)
        for r, off in zip(I.recognizers, offsets):
            img[off:off + len(r.monoid)] = off + r.monoid.table[:, r.morphism.images[a_i]]
        gens[a] = Transformation(n, img)
    target = np.empty(n, dtype=np.int64)
    for r, off in zip(I.recognizers, offsets):
        (p,) = r.accepting
        target[off:off + len(r.monoid)] = off + r.monoid.table[:, p]
    return gens, Transformation(n, target)


def _gen_step(gens: Mapping) -> tuple[list, np.ndarray, int]:
    letters = list(gens)
    if not letters:
        raise ModelError("need at least one generator")
    n = gens[letters[0]].n
    if any(g.n != n for g in gens.values()):
        raise ModelError("generators must share the domain")
    step = np.array([gens[a].map for a in letters], dtype=np.int32).T.copy()
    return letters, step, n


def transformation_closure(gens: Mapping, cap: int = DEFAULT_CLOSURE_CAP) -> list[Transformation]:
    """Every element of the monoid generated by ``gens`` (identity first, BFS order)."""
    _, step, n = _gen_step(gens)
    states, _, _ = _closure(step, n, cap)
    return [Transformation(n, row) for row in states]


def transformation_monoid(gens: Mapping, cap: int = DEFAULT_TABLE_CAP) -> tuple[Monoid, Morphism]:
    letters, step, n = _gen_step(gens)
    states, parent, via = _closure(step, n, cap)
    table = _cayley_table(states, parent, via, step)
    names = ["(" + ",".join(map(str, row)) + ")" for row in states]
    M = Monoid(names, table, identity=0, check=False)
    key = {row.tobytes(): i for i, row in enumerate(states)}
    images = [key[np.ascontiguousarray(step[:, a]).tobytes()] for a in range(len(letters))]
    return M, Morphism(tuple(letters), M, tuple(images))


def transformation_membership(g: Transformation, gens: Mapping, cap: int = DEFAULT_CLOSURE_CAP):
    """Length-lex least generator word composing to ``g``, or None."""
    letters, step, n = _gen_step(gens)
    if g.n != n:
        raise ModelError("target has a different domain")
    accept = [{g.map[y]} for y in range(n)]
    try:
        res = search([step] * n, list(range(n)), accept, letters, cap)
    except BudgetExceeded as exc:
        raise CapExceeded(str(exc)) from None
    return res.witness


__all__ = [
    "DFA", "Transformation", "monoid_to_dfa", "dfa_intersection_nonempty", "transition_monoid",
    "instance_to_transformation", "transformation_closure", "transformation_membership",
    "transformation_monoid", "co_reachable",
]
