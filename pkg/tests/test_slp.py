import math
import random

import pytest
from hypothesis import given, strategies as st

from monisect.generate import random_morphism, random_slp
from monisect.monoid import Morphism, b21, cyclic, u1
from monisect.slp import (
    SLP, CycleError, ExpansionLimit, SLPBuilder, UndeclaredSymbol, Var, concat, epsilon_slp,
    eval_morphism, expand, expanded_length, literal, power, size, validate,
)


def ab():
    return SLP("ab", ["X"], {"X": ("a", "b")}, "X")


def test_validate_examples():
    validate(ab())
    with pytest.raises(CycleError):
        SLP("a", ["X", "Y"], {"X": (Var("Y"),), "Y": (Var("X"),)}, "X")
    with pytest.raises(UndeclaredSymbol):
        SLP("a", ["X"], {"X": (Var("Y"),)}, "X")
    with pytest.raises(UndeclaredSymbol):
        SLP("a", ["X"], {"X": ("z",)}, "X")
    with pytest.raises(UndeclaredSymbol):
        SLP("a", ["X"], {"X": ("a",)}, "Q")


def test_out_of_order_declaration_is_sorted():
    S = SLP("a", ["X", "Y"], {"X": (Var("Y"), Var("Y")), "Y": ("a",)}, "X")
    assert S.variables == ("Y", "X")
    assert S.expand() == ("a", "a")


def test_size_examples():
    assert size(ab()) == 2
    S = SLP("a", ["Y", "X"], {"X": (Var("Y"), Var("Y")), "Y": ("a",)}, "X")
    assert size(S) == 3
    assert size(power(ab(), 3)) == 8


def test_expand_examples():
    assert expanded_length(ab()) == 2
    P = power(ab(), 3)
    assert expanded_length(P) == 6
    assert "".join(expand(P)) == "ababab"
    assert expanded_length(power(ab(), 2**20)) == 2**21
    with pytest.raises(ExpansionLimit):
        expand(power(ab(), 2**64), limit=10**6)


def test_eval_examples():
    h = Morphism(("a", "b"), cyclic(2), (1, 1))
    assert eval_morphism(epsilon_slp("ab"), h) == 0
    assert eval_morphism(power(ab(), 3), h) == 0
    B = b21()
    S = SLP("ab", ["X"], {"X": ("a", "b", "a")}, "X")
    assert B.name(eval_morphism(S, Morphism(("a", "b"), B, (1, 2)))) == "a"


def test_power_examples():
    assert expand(power(ab(), 1)) == ("a", "b")
    assert expand(power(ab(), 0)) == ()
    assert size(power(ab(), 3)) <= 2 + 4 * math.floor(math.log2(3)) + 2


def test_concat_examples():
    assert expand(concat(literal("a"), literal("b"))) == ("a", "b")
    assert expand(concat()) == ()
    assert "".join(expand(concat(power(ab(), 2), literal("c")))) == "ababc"
    assert "".join(expand(concat(ab(), "xy"))) == "abxy"


def test_eval_morphism_does_not_expand():
    S = power(ab(), 2**200)
    h = Morphism(("a", "b"), cyclic(3), (1, 1))
    assert eval_morphism(S, h) == (2 * 2**200) % 3


@pytest.mark.parametrize("seed", range(40))
def test_eval_matches_expansion(seed):
    rng = random.Random(seed)
    S = random_slp(seed, alphabet=3, variables=8)
    if S.expanded_length() > 10**4:
        pytest.skip("expansion too long for the oracle")
    w = S.expand()
    for M in (b21(), cyclic(5), u1()):
        h = random_morphism(rng, S.alphabet, M)
        assert S.eval_morphism(h) == h.eval_word(w)


@given(st.integers(0, 300), st.integers(1, 64))
def test_power_matches_repetition(seed, e):
    S = random_slp(seed, alphabet=2, variables=4)
    P = power(S, e)
    assert P.expand() == S.expand() * e
    assert P.size <= S.size + 4 * math.floor(math.log2(e)) + 2


@given(st.integers(0, 300), st.integers(65, 2**70))
def test_power_length_and_size_bound(seed, e):
    S = random_slp(seed, alphabet=2, variables=4)
    P = power(S, e)
    assert P.expanded_length() == e * S.expanded_length()
    assert P.size <= S.size + 4 * math.floor(math.log2(e)) + 2


@given(st.lists(st.lists(st.integers(0, 5), max_size=3), min_size=1, max_size=6))
def test_validate_accepts_exactly_acyclic(rhs_lists):
    names = [f"V{i}" for i in range(len(rhs_lists))]
    rules = {v: tuple(Var(names[x % len(names)]) for x in r) for v, r in zip(names, rhs_lists)}
    # oracle: depth-first cycle search
    graph = {v: {s.name for s in rules[v]} for v in names}
    state = {}

    def cyclic_from(v):
        state[v] = 1
        for u in graph[v]:
            if state.get(u) == 1 or (u not in state and cyclic_from(u)):
                return True
        state[v] = 2
        return False

    has_cycle = any(v not in state and cyclic_from(v) for v in names)
    if has_cycle:
        with pytest.raises(CycleError):
            SLP("a", names, rules, names[0])
    else:
        SLP("a", names, rules, names[0])


def test_builder_names_and_power_trace():
    b = SLPBuilder("ab")
    x = b.literal("ab")
    p = b.power(x, 3)
    S = b.build(p)
    assert S.variables == ("X0", "X1", "X2", "X3", "X4")
    assert S.rules["X4"] == (Var("X3"), Var("X0"))
    assert S.rules["X1"] == ()
    assert S.expand() == tuple("ababab")


def test_builder_image_cache_matches_full_evaluation():
    rng = random.Random(3)
    b = SLPBuilder("abc")
    syms = [b.literal(rng.choice(["a", "bc", "cab"])) for _ in range(5)]
    for _ in range(30):
        syms.append(b.rule(rng.sample(syms, 2) + [rng.choice("abc")]))
    h = random_morphism(rng, "abc", b21())
    S = b.build(syms[-1])
    full = S.images(h)
    for v in syms:
        assert b.image(h, v) == full[v.name]


def test_cleanup_drops_unreachable():
    S = SLP("ab", ["A", "B", "C"], {"A": ("a",), "B": ("b",), "C": (Var("A"),)}, "C")
    assert S.cleanup().variables == ("A", "C")
    assert S.cleanup().expand() == S.expand()
