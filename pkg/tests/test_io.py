import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from monisect import io
from monisect.generate import (
    curated_library, random_dfa, random_instance, random_slp, random_tiling_system,
)
from monisect.models import Transformation, instance_to_transformation, transition_monoid
from monisect.monoid import NotAssociative, b21, u1
from monisect.tiling import Tiling, solve_corridor, solve_square
from monisect.varieties import classify


def through_text(d):
    return json.loads(io.dumps(d))


@pytest.mark.parametrize("name,M", curated_library())
def test_monoid_round_trip(name, M):
    assert io.monoid_from_json(through_text(io.monoid_to_json(M))) == M


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_instance_round_trip(seed, k, alphabet):
    I = random_instance(seed, k=k, alphabet=alphabet)
    assert io.instance_from_json(through_text(io.instance_to_json(I))) == I


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 10))
def test_slp_round_trip(seed, alphabet, variables):
    S = random_slp(seed, alphabet=alphabet, variables=variables)
    T = io.slp_from_json(through_text(io.slp_to_json(S)))
    assert T == S and T.expand() == S.expand()


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_dfa_round_trip(seed, states):
    D = random_dfa(random.Random(seed), states, "ab")
    assert io.dfa_from_json(through_text(io.dfa_to_json(D))) == D


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.integers(1, 5))
def test_tiling_system_round_trip(seed, n, labels, tiles):
    T = random_tiling_system(seed, n=n, labels=labels, tiles=tiles)
    assert io.tiling_system_from_json(through_text(io.tiling_system_to_json(T))) == T
    found = solve_corridor(T)
    if found is not None:
        t = found[1]
        assert io.tiling_from_json(through_text(io.tiling_to_json(t))) == t


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_membership_round_trip(seed):
    I = random_instance(seed, k=2, alphabet=2, singleton=True)
    gens, target = instance_to_transformation(I)
    g2, t2 = io.membership_from_json(through_text(io.membership_to_json(gens, target)))
    assert g2 == gens and t2 == target


@given(st.lists(st.integers(0, 6), min_size=1, max_size=7))
def test_transformation_round_trip(xs):
    n = max(xs) + 1
    t = Transformation(n, tuple(xs) + (0,) * (n - len(xs)) if len(xs) < n else tuple(xs[:n]))
    assert io.transformation_from_json(through_text(io.transformation_to_json(t))) == t


@pytest.mark.parametrize("name,M", curated_library())
def test_variety_report_round_trip(name, M):
    R = classify(M)
    assert io.variety_report_from_json(through_text(io.variety_report_to_json(M, R)), M) == R


def test_transition_monoid_morphism_round_trip():
    M, h = transition_monoid(random_dfa(random.Random(4), 3, "ab"))
    assert io.morphism_from_json(through_text(io.morphism_to_json(h))) == h


def test_words():
    assert io.word_from_json("abc") == ("a", "b", "c")
    assert io.word_from_json(["ab", "c"]) == ("ab", "c")
    with pytest.raises(io.MalformedInput):
        io.word_from_json([1, 2])


def test_monoid_file_reference(tmp_path):
    (tmp_path / "u1.json").write_text(io.dumps(io.monoid_to_json(u1())))
    d = {"alphabet": ["a"], "recognizers": [
        {"morphism": {"alphabet": ["a"], "monoid": "u1.json", "images": {"a": "0"}}, "accepting": ["0"]}]}
    I = io.instance_from_json(d, tmp_path)
    assert I.recognizers[0].monoid == u1()


class TestMalformed:
    def test_missing_keys(self):
        with pytest.raises(io.MalformedInput):
            io.monoid_from_json({"elements": ["1"]})
        with pytest.raises(io.MalformedInput):
            io.instance_from_json({"alphabet": ["a"]})

    def test_unknown_element(self):
        d = io.monoid_to_json(b21())
        d["table"][1][1] = "zz"
        with pytest.raises(io.MalformedInput):
            io.monoid_from_json(d)

    def test_non_associative(self):
        d = {"elements": ["1", "a", "b"], "identity": "1",
             "table": [["1", "a", "b"], ["a", "b", "a"], ["b", "a", "a"]]}
        with pytest.raises(NotAssociative):
            io.monoid_from_json(d)

    def test_slp_cycle_and_order(self):
        d = {"alphabet": ["a"], "variables": ["X", "Y"], "start": "Y",
             "rules": {"X": [{"v": "Y"}], "Y": [{"t": "a"}]}}
        with pytest.raises(io.MalformedInput):
            io.slp_from_json(d)
        d["rules"]["Y"] = [{"v": "X"}]
        with pytest.raises(io.MalformedInput):
            io.slp_from_json(d)

    def test_bad_json_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(io.MalformedInput):
            io.read_json(p)

    def test_tiling_grid_types(self):
        with pytest.raises(io.MalformedInput):
            io.tiling_from_json({"grid": [["x"]]})


def test_dumps_is_canonical():
    d = io.monoid_to_json(b21())
    assert io.dumps(d) == io.dumps(through_text(d))
    assert io.dumps(d).endswith("\n")


def test_square_solution_round_trip():
    for seed in range(20):
        T = random_tiling_system(seed, n=2, labels=2, tiles=3)
        t = solve_square(T)
        if t is not None:
            assert io.tiling_from_json(through_text(io.tiling_to_json(t))) == t
    assert io.tiling_to_json(Tiling(((0, 1),))) == {"grid": [[0, 1]]}
