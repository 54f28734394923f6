"""Seeded generators: a curated monoid library and random test corpora.

All randomness flows from an explicit seed through :class:`random.Random`.
"""
from __future__ import annotations

import random
import string
from functools import lru_cache

from .models import DEFAULT_TABLE_CAP, DFA, Transformation, transformation_monoid, transition_monoid
from .monoid import Monoid, Morphism, b21, cyclic, direct_product, generated_submonoid, symmetric, trivial, u1
from .slp import SLP, Var
from .solver import Instance, Recognizer
from .tiling import Tile, TilingSystem
from .varieties import classify

VARIETY_FILTERS = ("G", "A", "DS", "DO", "notDS")


class GenerationError(RuntimeError):
    code = "generation_failed"


def letters(k: int) -> tuple:
    return tuple(string.ascii_lowercase[:k])


def _tmonoid(*gens) -> Monoid:
    n = len(gens[0])
    return transformation_monoid({f"t{i}": Transformation(n, g) for i, g in enumerate(gens)})[0]


def _nilpotent(k: int) -> Monoid:
    # <x | x^k = 0>: shift right on k+1 points, point k absorbing
    return _tmonoid(tuple(min(i + 1, k) for i in range(k + 1)))


def random_dfa(rng: random.Random, states: int, alphabet) -> DFA:
    alphabet = tuple(alphabet)
    delta = [[rng.randrange(states) for _ in alphabet] for _ in range(states)]
    acc = [q for q in range(states) if rng.random() < 0.5]
    return DFA([f"q{i}" for i in range(states)], alphabet, 0, acc, delta)


@lru_cache(maxsize=None)
def curated_library() -> tuple:
    """Named monoids for the characterization cross-checks (deterministic)."""
    lib = [
        ("trivial", trivial()),
        ("U1", u1()),
        ("B21", b21()),
    ]
    lib += [(f"Z{n}", cyclic(n)) for n in range(2, 7)]
    lib += [
        ("S3", symmetric(3)),
        ("Z2xZ3", direct_product(cyclic(2), cyclic(3))),
        ("Z2xZ2", direct_product(cyclic(2), cyclic(2))),
        ("U1xU1", direct_product(u1(), u1())),
        ("U1xZ2", direct_product(u1(), cyclic(2))),
        ("U1xZ3", direct_product(u1(), cyclic(3))),
        ("B21xU1", direct_product(b21(), u1())),
        ("B21xZ2", direct_product(b21(), cyclic(2))),
        ("S3xU1", direct_product(symmetric(3), u1())),
        ("right-zero-2", _tmonoid((0, 0), (1, 1))),
        ("left-zero-2", Monoid(["1", "l", "r"], [[0, 1, 2], [1, 1, 1], [2, 2, 2]])),
        ("N2", _nilpotent(2)),
        ("N3", _nilpotent(3)),
        ("T2", _tmonoid((1, 0), (0, 0))),
        ("T3", _tmonoid((1, 2, 0), (1, 0, 2), (0, 0, 2))),
        ("A21", _tmonoid((1, 2, 2), (0, 0, 2))),
        ("index2-period2", _tmonoid((1, 2, 3, 2))),
        ("rect-band-2x2", _tmonoid((0, 0, 2, 2), (1, 1, 3, 3), (0, 1, 0, 1), (2, 3, 2, 3))),
        ("Z2-in-S3", generated_submonoid(symmetric(3), [1])[0]),
        ("ab-in-B21", generated_submonoid(b21(), [3])[0]),
        ("a,ab-in-B21", generated_submonoid(b21(), [1, 3])[0]),
    ]
    rng = random.Random(20240101)
    for k in range(10):
        D = random_dfa(rng, 3 + k % 2, letters(2))
        lib.append((f"dfa{k}", transition_monoid(D)[0]))
    return tuple(lib)


def _passes(M: Monoid, flt: str | None) -> bool:
    if flt is None:
        return True
    r = classify(M)
    return {"G": r.is_group, "A": r.is_aperiodic, "DS": r.in_DS, "DO": r.in_DO, "notDS": not r.in_DS}[flt]


def random_monoid(seed: int, states: int = 3, alphabet: int = 2, flt: str | None = None,
                  attempts: int = 500, max_size: int = 64, cap: int = DEFAULT_TABLE_CAP) -> Monoid:
    """Transition monoid of a random DFA, rejection-sampled against a variety filter."""
    if flt is not None and flt not in VARIETY_FILTERS:
        raise ValueError(f"unknown filter {flt!r}")
    rng = random.Random(seed)
    for _ in range(attempts):
        D = random_dfa(rng, states, letters(alphabet))
        M, _ = transition_monoid(D, cap)
        if len(M) <= max_size and _passes(M, flt):
            return M
    raise GenerationError(f"no monoid passing {flt!r} in {attempts} attempts")


def random_morphism(rng: random.Random, alphabet, M: Monoid) -> Morphism:
    return Morphism(tuple(alphabet), M, tuple(rng.randrange(len(M)) for _ in alphabet))


def random_accepting(rng: random.Random, M: Monoid) -> frozenset:
    """A uniformly random non-empty subset."""
    while True:
        s = frozenset(m for m in range(len(M)) if rng.random() < 0.5)
        if s:
            return s


def random_instance(seed: int, k: int = 2, alphabet: int = 2, flt: str | None = None,
                    pool: tuple | None = None, singleton: bool = False) -> Instance:
    """``k`` recognizers over monoids drawn from ``pool`` (default: the library, filtered)."""
    rng = random.Random(seed)
    if pool is None:
        pool = tuple(M for _, M in curated_library() if len(M) <= 12 and _passes(M, flt))
    A = letters(alphabet)
    recs = []
    for _ in range(k):
        M = rng.choice(pool)
        h = random_morphism(rng, A, M)
        acc = frozenset({rng.randrange(len(M))}) if singleton else random_accepting(rng, M)
        recs.append(Recognizer(h, acc))
    return Instance(A, recs)


GROUP_POOL = ("Z2", "Z3", "Z4", "Z5", "Z6", "S3", "Z2xZ3")


def group_by_name(name: str) -> Monoid:
    return dict(curated_library())[name]


def random_group_tuple(seed: int, k: int | None = None, alphabet: int = 3) -> list[Morphism]:
    rng = random.Random(seed)
    k = rng.randint(1, 3) if k is None else k
    A = letters(alphabet)
    return [random_morphism(rng, A, group_by_name(rng.choice(GROUP_POOL))) for _ in range(k)]


def random_word(rng: random.Random, alphabet, length: int) -> tuple:
    alphabet = tuple(alphabet)
    return tuple(rng.choice(alphabet) for _ in range(length))


def random_slp(seed: int, alphabet: int = 2, variables: int = 5, max_rule: int = 3) -> SLP:
    """Each rule mixes letters and earlier variables; the last variable is the start."""
    rng = random.Random(seed)
    A = letters(alphabet)
    names = [f"V{i}" for i in range(variables)]
    rules = {}
    for i, v in enumerate(names):
        rhs = []
        for _ in range(rng.randint(1, max_rule)):
            if i and rng.random() < 0.6:
                rhs.append(Var(names[rng.randrange(i)]))
            else:
                rhs.append(rng.choice(A))
        rules[v] = rhs
    return SLP(A, names, rules, names[-1])


def random_tiling_system(seed: int, n: int = 2, labels: int = 2, tiles: int = 3) -> TilingSystem:
    """Random distinct tiles; first and bottom rows drawn from them."""
    rng = random.Random(seed)
    L = tuple(f"L{i}" for i in range(labels))
    tiles = min(tiles, labels ** 4)
    chosen: list = []
    while len(chosen) < tiles:
        t = Tile(*(rng.choice(L) for _ in range(4)))
        if t not in chosen:
            chosen.append(t)
    f = tuple(rng.randrange(tiles) for _ in range(n))
    b = tuple(rng.randrange(tiles) for _ in range(n))
    return TilingSystem(L, tuple(chosen), n, f, b)
