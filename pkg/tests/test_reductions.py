import random

import pytest

from monisect.generate import random_instance, random_tiling_system
from monisect.models import dfa_intersection_nonempty, transformation_membership
from monisect.monoid import b21, cyclic, trivial, u1
from monisect.reductions import (
    DecodeError, Lemma6Spec, ReductionError, Variant, corridor_alphabet_map, corridor_tiling_to_instance,
    decode_witness, encode_tiling_word, instance_to_dfas, instance_to_membership, lemma6_recognizer,
    lemma7_recognizers, normalize_tiling, prepare_corridor, square_instance_size, square_letter,
    square_tiling_to_instance,
)
from monisect.solver import member_word, nonempty_bfs
from monisect.tiling import Tiling, TilingSystem, check_tiling, solve_corridor, solve_square
from monisect.varieties import classify

from oracles import accepted_words, block_product_regex, lemma6_regex, regex_words


def random_spec(rng, variant, alphabet="abcde"):
    sets = {k: set() for k in "BCDEF"}
    allowed = {"LEFT": "BDE", "RIGHT": "CDE", "BLOCK": "BCDEF"}[variant]
    for a in alphabet:
        slot = rng.choice(list(allowed) + ["-"])
        if slot != "-":
            sets[slot].add(a)
    return Lemma6Spec(tuple(alphabet), Variant(variant), **{k: frozenset(v) for k, v in sets.items()})


def name(x):
    return b21().name(x)


# -- building blocks ------------------------------------------------------------------


class TestLemma6:
    def test_left(self):
        h, acc = lemma6_recognizer(Lemma6Spec("bde", "LEFT", B={"b"}, D={"d"}, E={"e"}))
        assert name(acc) == "b"
        assert h.eval_word("ebd") == acc and h.eval_word("bb") != acc

    def test_block(self):
        h, acc = lemma6_recognizer(Lemma6Spec("xyz", "BLOCK", B={"x"}, C={"y"}, D={"z"}))
        assert name(acc) == "ab"
        assert h.eval_word("xyz") == acc and h.eval_word("x") != acc

    def test_right(self):
        h, acc = lemma6_recognizer(Lemma6Spec("cd", "RIGHT", C={"c"}, D={"d"}))
        assert h.eval_word("ddc") == acc and h.eval_word("cd") != acc

    def test_validation(self):
        with pytest.raises(ReductionError):
            Lemma6Spec("ab", "LEFT", B={"a"}, D={"a"})
        with pytest.raises(ReductionError):
            Lemma6Spec("ab", "LEFT", B={"z"})

    def test_outside_letters_map_to_zero(self):
        h, _ = lemma6_recognizer(Lemma6Spec("abz", "BLOCK", B={"a"}, C={"b"}))
        assert name(h.image("z")) == "0"

    @pytest.mark.parametrize("variant", ["LEFT", "RIGHT", "BLOCK"])
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_regex(self, variant, seed):
        rng = random.Random(seed)
        spec = random_spec(rng, variant, "abcde"[: rng.randint(1, 5)])
        h, acc = lemma6_recognizer(spec)
        A = "".join(spec.alphabet)
        pattern = lemma6_regex(variant, spec.B, spec.C, spec.D, spec.E, spec.F)
        assert accepted_words(h, acc, A, 5) == regex_words(pattern, A, 5)


class TestLemma7:
    def test_two_sets(self):
        recs = lemma7_recognizers("xy", [{"x"}, {"y"}])
        assert all(h.eval_word("xy") == acc for h, acc in recs)
        assert not all(h.eval_word("xyx") == acc for h, acc in recs)

    def test_three_sets(self):
        recs = lemma7_recognizers("xyz", [{"x"}, {"y"}, {"z"}])
        assert all(h.eval_word("xyzxyz") == acc for h, acc in recs)
        assert not all(h.eval_word("xzy") == acc for h, acc in recs)
        assert not any(h.eval_word("") == acc for h, acc in recs)

    def test_one_set(self):
        recs = lemma7_recognizers("xy", [{"x"}])
        assert len(recs) == 1
        h, acc = recs[0]
        assert h.eval_word("xxx") == acc and h.eval_word("") != acc and h.eval_word("xy") != acc

    def test_overlap_rejected(self):
        with pytest.raises(ReductionError):
            lemma7_recognizers("xy", [{"x"}, {"x", "y"}])

    @pytest.mark.parametrize("seed", range(15))
    def test_intersection_matches_regex(self, seed):
        rng = random.Random(seed)
        A = "abcde"
        n = rng.randint(1, 4)
        parts = [set() for _ in range(n)]
        for a in A:
            k = rng.randrange(n + 1)
            if k < n:
                parts[k].add(a)
        for p, a in zip(parts, A):
            if not p:
                p.add(a)
        parts = [set(p) - set().union(*parts[:i]) for i, p in enumerate(parts)]
        recs = lemma7_recognizers(A, parts)
        got = set.intersection(*(accepted_words(h, acc, A, 5) for h, acc in recs))
        assert got == regex_words(block_product_regex(parts), A, 5)


# -- monoid reductions -------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(30))
def test_dfa_and_membership_reductions(seed):
    I = random_instance(seed, k=2, alphabet=2)
    r = nonempty_bfs(I)
    assert dfa_intersection_nonempty(instance_to_dfas(I)) == r.witness
    J = random_instance(seed, k=2, alphabet=2, singleton=True)
    gens, target = instance_to_membership(J)
    w = transformation_membership(target, gens)
    assert (w is None) == (not nonempty_bfs(J).nonempty)
    if w is not None:
        assert member_word(J, w)


# -- square tilings ------------------------------------------------------------------------


def single_tile_system():
    return TilingSystem(["x"], [("x", "x", "x", "x")], 1, (0,), (0,))


class TestSquare:
    def test_single_tile(self):
        T = single_tile_system()
        I = square_tiling_to_instance(T)
        r = nonempty_bfs(I)
        assert r.witness == (square_letter(0, 1, 1),)
        assert solve_square(T) is not None

    def test_inconsistent_first_row(self):
        T = TilingSystem(["a", "b"], [("a", "b", "a", "a"), ("a", "a", "a", "a")], 2, (0, 0), (1, 1))
        assert solve_square(T) is None
        assert not nonempty_bfs(square_tiling_to_instance(T)).nonempty

    def test_recognizer_count(self):
        for seed in range(4):
            T = random_tiling_system(seed, n=2, labels=2, tiles=3)
            assert len(square_tiling_to_instance(T).recognizers) == square_instance_size(2, 2) == 56

    def test_rejects_trivial_monoid_and_identity(self):
        T = single_tile_system()
        with pytest.raises(ReductionError):
            square_tiling_to_instance(T, trivial(), trivial().elements[0])
        with pytest.raises(ReductionError):
            square_tiling_to_instance(T, u1(), "1")

    def test_missing_position_fails_to_decode(self):
        T = random_tiling_system(3, n=2, labels=2, tiles=3)
        word = [square_letter(0, 1, 2), square_letter(0, 2, 1), square_letter(0, 2, 2)]
        with pytest.raises(DecodeError):
            decode_witness(T, word)

    @pytest.mark.parametrize("seed", range(40))
    def test_equivalence_and_round_trip(self, seed):
        T = random_tiling_system(seed, n=1 + seed % 2, labels=2, tiles=3)
        I = square_tiling_to_instance(T)
        t = solve_square(T)
        r = nonempty_bfs(I)
        assert (t is not None) == r.nonempty
        if t is not None:
            w = encode_tiling_word(T, t)
            assert member_word(I, w)
            assert decode_witness(T, w) == t
            assert check_tiling(T, decode_witness(T, r.witness)) is None

    @pytest.mark.parametrize("seed", range(15))
    def test_z2_parameterization(self, seed):
        T = random_tiling_system(1000 + seed, n=2, labels=2, tiles=3)
        Z = cyclic(2)
        I = square_tiling_to_instance(T, Z, "g")
        t = solve_square(T)
        r = nonempty_bfs(I)
        assert (t is not None) == r.nonempty
        if t is not None:
            assert member_word(I, encode_tiling_word(T, t))
            assert check_tiling(T, decode_witness(T, r.witness, M=Z, x="g")) is None


# -- corridor tilings ----------------------------------------------------------------------


class TestNormalize:
    def test_unchanged_when_already_normal(self):
        T = TilingSystem(["a", "b"], [("a", "b", "a", "b"), ("b", "a", "b", "a")], 2, (0, 1), (0, 1))
        P = normalize_tiling(T)
        assert P.system == T and not P.framed

    def test_duplicates_tile_with_copy(self):
        T = TilingSystem(["m", "s", "n"], [("m", "m", "s", "n")], 1, (0,), (0,))
        S = normalize_tiling(T).system
        assert "m'" in S.labels
        assert all(t.w != t.e for t in S.tiles)
        assert {(t.w, t.e) for t in S.tiles} == {("m", "m'"), ("m'", "m")}

    @pytest.mark.parametrize("seed", range(50))
    def test_invariant_and_solvability(self, seed):
        T = random_tiling_system(seed, n=1 + seed % 2, labels=2, tiles=3)
        P = normalize_tiling(T)
        S = P.system
        assert all(t.w != t.e and t.s != t.n for t in S.tiles)
        assert (solve_corridor(S) is None) == (solve_corridor(T) is None)


class TestCorridor:
    def test_single_row_tiling(self):
        T = TilingSystem(["a", "b"], [("a", "b", "a", "b"), ("b", "a", "b", "a")], 2, (0, 1), (0, 1))
        I = corridor_tiling_to_instance(T)
        m, t = solve_corridor(T)
        assert m == 1
        w = encode_tiling_word(T, t, kind="corridor")
        assert member_word(I, w)
        assert decode_witness(T, w, kind="corridor") == t

    def test_recognizer_shape(self):
        T = random_tiling_system(5, n=2, labels=2, tiles=2)
        P = prepare_corridor(T)
        I = corridor_tiling_to_instance(T, P)
        n, L = P.system.width, len(P.system.labels)
        assert len(I.recognizers) == 2 * n + L + n * L + n
        for r in I.recognizers:
            assert len(r.monoid) <= 6 and len(r.accepting) == 1
            assert not classify(r.monoid).in_DS  # B21 itself

    def test_disjointness_after_normalization(self):
        T = random_tiling_system(9, n=2, labels=2, tiles=3)
        m = corridor_alphabet_map(prepare_corridor(T).system)
        for mu in m.W:
            assert not m.W[mu] & m.E[mu]
        for key in m.N:
            assert not m.N[key] & m.S[key]

    @pytest.mark.parametrize("seed", range(30))
    def test_equivalence(self, seed):
        T = random_tiling_system(seed, n=1 + seed % 2, labels=2, tiles=2)
        P = prepare_corridor(T)
        I = corridor_tiling_to_instance(T, P)
        found = solve_corridor(T)
        r = nonempty_bfs(I, budget=10**6)
        assert (found is not None) == r.nonempty
        if found is not None:
            _, t = found
            assert member_word(I, encode_tiling_word(T, t, kind="corridor"))
            d = decode_witness(T, r.witness, kind="corridor", prepared=P)
            assert check_tiling(T, d) is None

    def test_encode_rejects_invalid_tiling(self):
        T = TilingSystem(["a", "b"], [("a", "b", "a", "b"), ("b", "a", "b", "a")], 2, (0, 1), (0, 1))
        with pytest.raises(ReductionError):
            encode_tiling_word(T, Tiling(((1, 0),)), kind="corridor")

    def test_decode_rejects_bad_length(self):
        T = TilingSystem(["a", "b"], [("a", "b", "a", "b"), ("b", "a", "b", "a")], 2, (0, 1), (0, 1))
        with pytest.raises(DecodeError):
            decode_witness(T, ["0:0:1"], kind="corridor")
