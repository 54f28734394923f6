import random

import pytest
from hypothesis import given, settings, strategies as st

from monisect.generate import curated_library, random_dfa, random_instance, random_morphism
from monisect.models import (
    DFA, ModelError, Transformation, dfa_intersection_nonempty, instance_to_transformation, monoid_to_dfa,
    transformation_closure, transformation_membership, transformation_monoid, transition_monoid,
)
from monisect.monoid import CapExceeded, Morphism, b21, cyclic, generated_submonoid, isomorphic, trivial, u1
from monisect.solver import member_word, nonempty_bfs
from monisect.varieties import classify

from oracles import words


def brute_closure(gens, n):
    """Set of maps (tuples) generated under composition, by naive saturation."""
    seen = {tuple(range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = tuple(g[x] for x in f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def compose(word, gens, n):
    f = tuple(range(n))
    for a in word:
        f = tuple(gens[a].map[x] for x in f)
    return f


class TestMonoidToDFA:
    def test_u1(self):
        D = monoid_to_dfa(Morphism.from_mapping(u1(), {"a": "0"}), ["0"])
        assert len(D) == 2
        assert [D.accepts("a" * n) for n in range(4)] == [False, True, True, True]

    def test_empty_and_full(self):
        h = Morphism.from_mapping(b21(), {"a": "a", "b": "b"})
        D = monoid_to_dfa(h, [])
        assert not any(D.accepts(w) for w in words("ab", 4))
        D = monoid_to_dfa(h, b21().elements)
        assert all(D.accepts(w) for w in words("ab", 4))

    @pytest.mark.parametrize("seed", range(20))
    def test_language_is_preimage(self, seed):
        rng = random.Random(seed)
        M = rng.choice([M for _, M in curated_library() if len(M) <= 12])
        h = random_morphism(rng, "ab", M)
        P = [M.elements[i] for i in range(len(M)) if rng.random() < 0.5]
        D = monoid_to_dfa(h, P)
        for w in words("ab", 5):
            assert D.accepts(w) == (M.name(h.eval_word(w)) in P)


class TestDFAIntersection:
    def plus(self):
        return DFA(["s", "t"], "a", 0, [1], [[1], [1]])

    def test_examples(self):
        assert dfa_intersection_nonempty([self.plus()]) == ("a",)
        eps = DFA(["s", "dead"], "a", 0, [0], [[1], [1]])
        assert dfa_intersection_nonempty([self.plus(), eps]) is None
        # (aa)+ and (aaa)+ with a non-accepting start
        two = DFA(["0", "1", "2"], "a", 0, [2], [[1], [2], [1]])
        three = DFA(["0", "1", "2", "3"], "a", 0, [3], [[1], [2], [3], [1]])
        assert dfa_intersection_nonempty([two, three]) == tuple("aaaaaa")

    def test_alphabet_mismatch(self):
        with pytest.raises(ModelError):
            dfa_intersection_nonempty([self.plus(), DFA(["s"], "b", 0, [0], [[0]])])

    def test_validation(self):
        with pytest.raises(ModelError):
            DFA(["s"], "a", 0, [0], [[3]])
        with pytest.raises(ModelError):
            DFA(["s"], "a", 2, [0], [[0]])


class TestTransitionMonoid:
    def test_examples(self):
        M, _ = transition_monoid(DFA(["s"], "ab", 0, [0], [[0, 0]]))
        assert len(M) == 1
        M, _ = transition_monoid(DFA(["p", "q"], "a", 0, [0], [[1], [0]]))
        assert isomorphic(M, cyclic(2))
        h = Morphism.from_mapping(b21(), {"a": "a", "b": "b"})
        M, _ = transition_monoid(monoid_to_dfa(h, ["1"]))
        assert isomorphic(M, b21())

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_brute_closure(self, seed):
        rng = random.Random(seed)
        D = random_dfa(rng, rng.randint(2, 4), "ab")
        M, h = transition_monoid(D)
        gens = [tuple(D.delta[:, a].tolist()) for a in range(2)]
        assert len(M) == len(brute_closure(gens, len(D)))
        for w in words("ab", 4):
            # the morphism image acts on states exactly as the word does
            q = D.run(w)
            name = M.name(h.eval_word(w))
            assert name.strip("[]").split(",")[D.initial] == D.states[q]

    @pytest.mark.parametrize("seed", range(30))
    def test_image_submonoid_and_flags(self, seed):
        rng = random.Random(seed)
        M = rng.choice([M for _, M in curated_library() if len(M) <= 12])
        h = random_morphism(rng, "ab", M)
        T, _ = transition_monoid(monoid_to_dfa(h, []))
        S, _ = generated_submonoid(M, h.images)
        assert isomorphic(T, S)
        assert classify(T).flags() == classify(S).flags()

    def test_cap(self):
        D = DFA([str(i) for i in range(5)], "ab", 0, [0], [[(i + 1) % 5, min(i, 1)] for i in range(5)])
        with pytest.raises(CapExceeded):
            transition_monoid(D, cap=10)


class TestTransformations:
    def test_instance_to_transformation_examples(self):
        from monisect.solver import Instance, Recognizer
        U = u1()
        I = Instance("a", [Recognizer(Morphism.from_mapping(U, {"a": "0"}), frozenset({"0"}))])
        gens, target = instance_to_transformation(I)
        z = U.index("0")
        assert gens["a"].map == tuple(U.mul(m, z) for m in range(2))
        assert target.map == (z, z)
        Z = cyclic(2)
        I = Instance("a", [Recognizer(Morphism.from_mapping(Z, {"a": "g"}), frozenset({"1"}))] * 2)
        gens, target = instance_to_transformation(I)
        assert gens["a"].n == 4 and sorted(gens["a"].map) == [0, 1, 2, 3]
        assert target == Transformation.identity(4)
        assert transformation_membership(target, gens) == ()

    def test_non_singleton_rejected(self):
        I = random_instance(0, k=1)
        if len(I.recognizers[0].accepting) == 1:
            I = random_instance(1, k=1)
        with pytest.raises(ModelError):
            instance_to_transformation(I)

    def test_membership_examples(self):
        swap = {"a": Transformation(2, (1, 0))}
        assert transformation_membership(Transformation.identity(2), swap) == ()
        const = {"a": Transformation(2, (0, 0))}
        assert transformation_membership(Transformation(2, (1, 0)), const) is None
        assert transformation_membership(Transformation(2, (0, 0)), const) == ("a",)

    def test_transformation_validation(self):
        with pytest.raises(ModelError):
            Transformation(2, (0, 2))

    @settings(max_examples=40)
    @given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=1, max_size=3),
           st.lists(st.integers(0, 3), min_size=4, max_size=4))
    def test_closure_and_membership_vs_brute(self, maps, g):
        gens = {chr(97 + i): Transformation(4, m) for i, m in enumerate(maps)}
        closure = {t.map for t in transformation_closure(gens)}
        assert closure == brute_closure([tuple(m) for m in maps], 4)
        w = transformation_membership(Transformation(4, g), gens)
        assert (w is not None) == (tuple(g) in closure)
        if w is not None:
            assert compose(w, gens, 4) == tuple(g)

    def test_closure_cap(self):
        gens = {"a": Transformation(5, (1, 2, 3, 4, 0)), "b": Transformation(5, (1, 0, 2, 3, 4))}
        with pytest.raises(CapExceeded):
            transformation_closure(gens, cap=50)

    def test_transformation_monoid_of_symmetric_generators(self):
        gens = {"a": Transformation(3, (1, 2, 0)), "b": Transformation(3, (1, 0, 2))}
        M, _ = transformation_monoid(gens)
        assert len(M) == 6 and classify(M).is_group


@pytest.mark.parametrize("seed", range(60))
def test_dfa_path_preserves_answers(seed):
    I = random_instance(seed, k=random.Random(seed).randint(1, 3), alphabet=2)
    dfas = [monoid_to_dfa(r.morphism, [r.monoid.name(p) for p in r.accepting]) for r in I.recognizers]
    w = dfa_intersection_nonempty(dfas)
    r = nonempty_bfs(I)
    assert w == r.witness
    if w is not None:
        assert all(D.accepts(w) for D in dfas) and member_word(I, w)


@pytest.mark.parametrize("seed", range(60))
def test_transformation_path_preserves_answers(seed):
    I = random_instance(seed, k=random.Random(seed).randint(1, 3), alphabet=2, singleton=True)
    gens, target = instance_to_transformation(I)
    w = transformation_membership(target, gens)
    r = nonempty_bfs(I)
    assert (w is None) == (r.witness is None)
    if w is not None:
        assert member_word(I, w)
        assert compose(w, gens, target.n) == target.map


@pytest.mark.parametrize("flt", ["G", "DO", "DS"])
@pytest.mark.parametrize("seed", range(8))
def test_transformation_monoid_stays_in_variety(flt, seed):
    I = random_instance(seed, k=2, alphabet=2, flt=flt, singleton=True)
    gens, _ = instance_to_transformation(I)
    M, _ = transformation_monoid(gens)
    r = classify(M)
    assert {"G": r.is_group, "DO": r.in_DO, "DS": r.in_DS}[flt]


def test_trivial_dfa_round_trip():
    h = Morphism.from_mapping(trivial(), {"a": trivial().elements[0]})
    D = monoid_to_dfa(h, trivial().elements)
    assert dfa_intersection_nonempty([D]) == ()
