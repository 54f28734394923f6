"""Intersection non-emptiness for languages given by recognizing morphisms.

The decider is a breadth-first search over tuples of prefix images; it yields
the length-lexicographically least word in the intersection.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .monoid import Morphism, UnknownLetter, as_word
from .slp import SLP

DEFAULT_STATE_BUDGET = 10**7


class InstanceError(ValueError):
    code = "invalid_instance"


class BudgetExceeded(RuntimeError):
    code = "budget_exceeded"


@dataclass(frozen=True, eq=False)
class Recognizer:
    morphism: Morphism
    accepting: frozenset

    def __post_init__(self):
        M = self.morphism.target
        acc = frozenset(M.index(p) for p in self.accepting)
        object.__setattr__(self, "accepting", acc)

    @property
    def monoid(self):
        return self.morphism.target

    def accepts_element(self, m: int) -> bool:
        return m in self.accepting

    def __eq__(self, other):
        if not isinstance(other, Recognizer):
            return NotImplemented
        return self.morphism == other.morphism and self.accepting == other.accepting

    def __hash__(self):
        return hash((self.morphism, self.accepting))


class Instance:
    """Recognizers ``(h_i, P_i)`` over one shared alphabet."""

    def __init__(self, alphabet: Sequence, recognizers: Sequence[Recognizer | tuple]):
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InstanceError("duplicate letters in alphabet")
        recs = []
        for r in recognizers:
            if not isinstance(r, Recognizer):
                r = Recognizer(*r)
            h = r.morphism
            if set(h.alphabet) != set(self.alphabet):
                raise InstanceError("every morphism must be defined on exactly the shared alphabet")
            if h.alphabet != self.alphabet:
                r = Recognizer(h.restrict(self.alphabet), r.accepting)
            recs.append(r)
        if not recs:
            raise InstanceError("an instance needs at least one recognizer")
        self.recognizers = tuple(recs)

    def __len__(self):
        return len(self.recognizers)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.alphabet == other.alphabet and self.recognizers == other.recognizers

    @property
    def k(self) -> int:
        return len(self.recognizers)

    @property
    def N(self) -> int:
        """Sum of the monoid sizes."""
        return sum(len(r.monoid) for r in self.recognizers)

    @property
    def morphisms(self) -> tuple:
        return tuple(r.morphism for r in self.recognizers)

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def encode(self, word) -> np.ndarray:
        try:
            return np.fromiter((self.letter_index[a] for a in as_word(word)), dtype=np.int32)
        except KeyError as exc:
            raise UnknownLetter(f"letter {exc.args[0]!r} not in alphabet") from None

    def images(self, word) -> tuple:
        enc = self.encode(word)
        return tuple(
            kernels.fold(r.monoid.table, r.morphism.image_array, enc, r.monoid.identity)
            for r in self.recognizers
        )


@dataclass(frozen=True)
class SolveResult:
    witness: tuple | None
    states_explored: int

    @property
    def nonempty(self) -> bool:
        return self.witness is not None


def right_action(h: Morphism) -> np.ndarray:
    """``step[m, a] = m * h(a)``, shape (|M|, |A|)."""
    return np.ascontiguousarray(h.target.table[:, h.image_array], dtype=np.int32)


def co_reachable(step: np.ndarray, targets) -> np.ndarray:
    """States from which some state in ``targets`` is reachable."""
    n = step.shape[0]
    preds = [[] for _ in range(n)]
    for s in range(n):
        for t in set(step[s].tolist()):
            preds[t].append(s)
    live = np.zeros(n, dtype=bool)
    stack = [int(t) for t in targets]
    live[stack] = True
    while stack:
        for s in preds[stack.pop()]:
            if not live[s]:
                live[s] = True
                stack.append(s)
    return live


def search(steps, start, accept_sets, alphabet, budget, prune=True):
    """Shared driver: BFS over coordinate vectors, returns SolveResult."""
    accept = []
    for step, acc in zip(steps, accept_sets):
        mask = np.zeros(step.shape[0], dtype=bool)
        mask[list(acc)] = True
        accept.append(mask)
    live = None
    if prune:
        live = [co_reachable(step, acc) for step, acc in zip(steps, accept_sets)]
        if not all(lv[s] for lv, s in zip(live, start)):
            return SolveResult(None, 0)
    found, states, parent, via = kernels.coordinate_bfs(
        steps, np.asarray(start, dtype=np.int32), accept, live, int(budget), True
    )
    if found == kernels.OVER_BUDGET:
        raise BudgetExceeded(f"search exceeded {budget} states")
    if found == kernels.FOUND_NONE:
        return SolveResult(None, len(states))
    word = tuple(alphabet[a] for a in kernels.trace_word(parent, via, found))
    return SolveResult(word, len(states))


def nonempty_bfs(I: Instance, budget: int = DEFAULT_STATE_BUDGET, prune: bool = True) -> SolveResult:
    steps = [right_action(r.morphism) for r in I.recognizers]
    start = [r.monoid.identity for r in I.recognizers]
    accepts = [r.accepting for r in I.recognizers]
    if any(not a for a in accepts):
        return SolveResult(None, 0)
    return search(steps, start, accepts, I.alphabet, budget, prune)


def member_word(I: Instance, word) -> bool:
    return all(m in r.accepting for m, r in zip(I.images(word), I.recognizers))


def member_slp(I: Instance, S: SLP) -> bool:
    return all(S.eval_morphism(r.morphism) in r.accepting for r in I.recognizers)
