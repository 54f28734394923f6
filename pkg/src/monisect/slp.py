"""Straight-line programs: grammars with one rule per variable, producing one word.

Rules are tuples of symbols; a symbol is either a :class:`Var` or a letter
(any string).  Variables are kept in a topological order, so every
bottom-up computation is a single pass.
"""
from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Iterable, Sequence

from .monoid import Morphism, UnknownLetter, as_word


class SLPError(ValueError):
    code = "invalid_slp"


class CycleError(SLPError):
    code = "slp_cycle"


class UndeclaredSymbol(SLPError):
    code = "slp_undeclared"


class ExpansionLimit(RuntimeError):
    code = "expansion_limit"


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


def _topological_order(variables, rules) -> list[str]:
    declared = set(variables)
    graph = {}
    for v in variables:
        if v not in rules:
            raise UndeclaredSymbol(f"variable {v!r} has no rule")
        deps = []
        for sym in rules[v]:
            if isinstance(sym, Var):
                if sym.name not in declared:
                    raise UndeclaredSymbol(f"rule for {v!r} uses undeclared variable {sym.name!r}")
                deps.append(sym.name)
        graph[v] = deps
    ts = graphlib.TopologicalSorter(graph)
    try:
        # static_order lists dependencies before dependants
        order = list(ts.static_order())
    except graphlib.CycleError as exc:
        raise CycleError(f"rules contain a cycle through {exc.args[1]}") from None
    # keep the declared order when it is already topological (stable output)
    pos = {v: i for i, v in enumerate(variables)}
    if all(pos[s.name] < pos[v] for v in variables for s in rules[v] if isinstance(s, Var)):
        return list(variables)
    return order


class SLP:
    """An acyclic grammar ``(variables, alphabet, rules, start)``."""

    def __init__(self, alphabet: Sequence, variables: Sequence[str], rules: dict, start: str):
        self.alphabet = tuple(alphabet)
        variables = [str(v) for v in variables]
        if len(set(variables)) != len(variables):
            raise SLPError("duplicate variable names")
        if set(rules) - set(variables):
            extra = sorted(set(rules) - set(variables))
            raise UndeclaredSymbol(f"rules for undeclared variables {extra}")
        self.rules = {v: tuple(rules[v]) if v in rules else None for v in variables}
        letters = set(self.alphabet)
        for v, rhs in self.rules.items():
            if rhs is None:
                continue
            for sym in rhs:
                if not isinstance(sym, Var) and sym not in letters:
                    raise UndeclaredSymbol(f"rule for {v!r} uses letter {sym!r} outside the alphabet")
        if start not in self.rules:
            raise UndeclaredSymbol(f"start variable {start!r} is not declared")
        self.variables = tuple(_topological_order(variables, self.rules))
        self.start = start

    def __repr__(self):
        return f"SLP({len(self.variables)} variables, size {self.size})"

    def __eq__(self, other):
        if not isinstance(other, SLP):
            return NotImplemented
        return (self.alphabet, self.variables, self.rules, self.start) == (
            other.alphabet, other.variables, other.rules, other.start)

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rules.values())

    def _bottom_up(self, leaf, combine, unit):
        val = {}
        for v in self.variables:
            acc = unit
            for sym in self.rules[v]:
                acc = combine(acc, val[sym.name] if isinstance(sym, Var) else leaf(sym))
            val[v] = acc
        return val

    def lengths(self) -> dict:
        return self._bottom_up(lambda a: 1, lambda x, y: x + y, 0)

    def expanded_length(self) -> int:
        return self.lengths()[self.start]

    def expand(self, limit: int = 10**6) -> tuple:
        n = self.expanded_length()
        if n > limit:
            raise ExpansionLimit(f"expansion has length {n} > limit {limit}")
        words: dict[str, tuple] = {}
        for v in self.variables:
            parts = []
            for sym in self.rules[v]:
                if isinstance(sym, Var):
                    parts.extend(words[sym.name])
                else:
                    parts.append(sym)
            words[v] = tuple(parts)
        return words[self.start]

    def images(self, h: Morphism) -> dict:
        """Image of every variable under ``h``, one pass, no expansion."""
        M = h.target
        t = M.table.tolist()
        idx = h.letter_index
        img = h.images
        val: dict[str, int] = {}
        for v in self.variables:
            acc = M.identity
            for sym in self.rules[v]:
                if isinstance(sym, Var):
                    acc = t[acc][val[sym.name]]
                else:
                    try:
                        acc = t[acc][img[idx[sym]]]
                    except KeyError:
                        raise UnknownLetter(f"letter {sym!r} not in the morphism's alphabet") from None
            val[v] = acc
        return val

    def eval_morphism(self, h: Morphism) -> int:
        return self.images(h)[self.start]

    def reachable(self) -> set:
        seen = {self.start}
        stack = [self.start]
        while stack:
            for sym in self.rules[stack.pop()]:
                if isinstance(sym, Var) and sym.name not in seen:
                    seen.add(sym.name)
                    stack.append(sym.name)
        return seen

    def cleanup(self) -> "SLP":
        """Drop variables unreachable from the start variable."""
        keep = self.reachable()
        vs = [v for v in self.variables if v in keep]
        return SLP(self.alphabet, vs, {v: self.rules[v] for v in vs}, self.start)


def validate(S: SLP) -> None:
    """Re-check the grammar invariants; raises :class:`SLPError` subclasses."""
    SLP(S.alphabet, S.variables, S.rules, S.start)


def size(S: SLP) -> int:
    return S.size


def expanded_length(S: SLP) -> int:
    return S.expanded_length()


def expand(S: SLP, limit: int = 10**6) -> tuple:
    return S.expand(limit)


def eval_morphism(S: SLP, h: Morphism) -> int:
    return S.eval_morphism(h)


class SLPBuilder:
    """Incrementally grows a shared pool of rules with deterministic fresh names.

    Per-morphism image caches make ``image`` amortized O(1) per new rule.
    """

    def __init__(self, alphabet: Sequence, prefix: str = "X"):
        self.alphabet = tuple(alphabet)
        self._letters = set(self.alphabet)
        self.prefix = prefix
        self.variables: list[str] = []
        self.rules: dict[str, tuple] = {}
        self._caches: dict[int, tuple[Morphism, dict]] = {}
        self._eps: Var | None = None

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rules.values())

    def rule(self, symbols: Iterable) -> Var:
        rhs = tuple(symbols)
        for s in rhs:
            if isinstance(s, Var):
                if s.name not in self.rules:
                    raise UndeclaredSymbol(f"unknown variable {s.name!r}")
            elif s not in self._letters:
                raise UndeclaredSymbol(f"letter {s!r} outside the alphabet")
        name = f"{self.prefix}{len(self.variables)}"
        self.variables.append(name)
        self.rules[name] = rhs
        return Var(name)

    def epsilon(self) -> Var:
        if self._eps is None:
            self._eps = self.rule(())
        return self._eps

    def literal(self, word) -> Var:
        return self.rule(as_word(word))

    def power(self, base: Var, e: int) -> Var:
        """``base`` repeated ``e`` times, via the binary odd/even construction."""
        e = int(e)
        if e < 0:
            raise ValueError("exponent must be non-negative")
        bits = bin(e)[2:] if e else ""
        cur = self.rule(())  # exponent 0
        done = 0
        for bit in bits:
            if done:
                cur = self.rule((cur, cur))
                done *= 2
            if bit == "1":
                cur = self.rule((cur, base))
                done += 1
        return cur

    def image(self, h: Morphism, sym) -> int:
        """Image of a symbol under ``h``; only the variables it depends on are evaluated."""
        if not isinstance(sym, Var):
            return h.image(sym)
        entry = self._caches.get(id(h))
        if entry is None or entry[0] is not h:
            entry = (h, {})
            self._caches[id(h)] = entry
        cache = entry[1]
        if sym.name in cache:
            return cache[sym.name]
        M = h.target
        stack = [sym.name]
        while stack:
            v = stack[-1]
            missing = [s.name for s in self.rules[v] if isinstance(s, Var) and s.name not in cache]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if v in cache:
                continue
            acc = M.identity
            for s in self.rules[v]:
                acc = M.mul(acc, cache[s.name] if isinstance(s, Var) else h.image(s))
            cache[v] = acc
        return cache[sym.name]

    def build(self, start: Var, prune: bool = False) -> SLP:
        S = SLP(self.alphabet, list(self.variables), dict(self.rules), start.name)
        return S.cleanup() if prune else S


def literal(word, alphabet: Sequence | None = None) -> SLP:
    w = as_word(word)
    alphabet = tuple(dict.fromkeys(w)) if alphabet is None else tuple(alphabet)
    return SLP(alphabet, ["X0"], {"X0": w}, "X0")


def epsilon_slp(alphabet: Sequence = ()) -> SLP:
    return SLP(alphabet, ["X0"], {"X0": ()}, "X0")


def _import(builder: SLPBuilder, S: SLP) -> Var:
    rename = {}
    for v in S.variables:
        rhs = [Var(rename[s.name]) if isinstance(s, Var) else s for s in S.rules[v]]
        rename[v] = builder.rule(rhs).name
    return Var(rename[S.start])


def power(S: SLP, e: int) -> SLP:
    b = SLPBuilder(S.alphabet)
    base = _import(b, S)
    return b.build(b.power(base, e))


def concat(*parts, alphabet: Sequence | None = None) -> SLP:
    """Concatenate SLPs and literal words (str or tuple) in order."""
    letters: dict = {}
    for p in parts:
        for a in (p.alphabet if isinstance(p, SLP) else as_word(p)):
            letters.setdefault(a, None)
    alphabet = tuple(letters) if alphabet is None else tuple(alphabet)
    b = SLPBuilder(alphabet)
    top = []
    for p in parts:
        if isinstance(p, SLP):
            top.append(_import(b, p))
        else:
            top.extend(as_word(p))
    return b.build(b.rule(top))
