import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import FOUR, codes, random_code
from frameproof.code import Code, corresponding_set
from frameproof.verifier import (
    FrameproofReport,
    coalition,
    descendant_count,
    descendant_symbols,
    descendants,
    distance,
    is_frameproof,
    mask_distance,
)

PAIR = Code(N=3, q=2, words=((1, 0, 0), (0, 1, 0)))
TERNARY = Code(N=3, q=3, words=((0, 1, 2), (0, 0, 0), (1, 1, 1)))


def test_descendant_symbols():
    assert descendant_symbols(PAIR, [0, 1], 0) == {0, 1}
    assert descendant_symbols(PAIR, [0, 1], 2) == {0}
    with pytest.raises(IndexError):
        descendant_symbols(PAIR, [0, 1], 3)


def test_distance_examples():
    assert distance(TERNARY, 0, [1, 2]) == 1
    assert oracles.set_distance(TERNARY.words, 0, [1, 2]) == 1
    assert distance(TERNARY, 1, [1, 2]) == 0
    assert distance(Code(N=3, q=2, words=((1, 1, 1), (0, 0, 0))), 0, [1]) == 3


def test_distance_rejects_bad_indices():
    with pytest.raises(IndexError):
        distance(PAIR, 5, [0])
    with pytest.raises(IndexError):
        distance(PAIR, 0, [7])
    with pytest.raises(ValueError):
        distance(PAIR, 0, [])


def test_coalition_normalizes():
    assert coalition(Code(N=1, q=4, words=((0,), (1,), (2,), (3,))), [3, 1, 1]) == (1, 3)


def test_descendant_count():
    assert descendant_count(PAIR, [0, 1]) == 4
    assert descendant_count(PAIR, [1]) == 1
    full = Code(N=4, q=2, words=tuple(itertools.product((0, 1), repeat=4)))
    assert descendant_count(full, range(16)) == 16


def test_descendant_count_is_exact_for_wide_products():
    N = 80
    code = Code(N=N, q=3, words=((0,) * N, (1,) * N, (2,) * N))
    assert descendant_count(code, [0, 1, 2]) == 3 ** N


def test_four_word_code_is_2_frameproof(four):
    rep = is_frameproof(four, 2)
    assert rep == FrameproofReport(True, 2, None)
    assert oracles.frameproof_by_descendants(FOUR, 2)


def test_three_word_code_witness():
    code = Code(N=2, q=2, words=((0, 1), (1, 0), (1, 1)))
    rep = is_frameproof(code, 2)
    assert not rep
    assert rep.witness == (2, (0, 1))


def test_single_word_is_frameproof():
    for w in (1, 2, 9):
        assert is_frameproof(Code(N=2, q=3, words=((2, 1),)), w)


def test_report_invariant():
    with pytest.raises(ValueError):
        FrameproofReport(True, 2, (0, (1,)))
    with pytest.raises(ValueError):
        FrameproofReport(False, 2, None)


def test_w_must_be_positive(four):
    with pytest.raises(ValueError):
        is_frameproof(four, 0)


@settings(max_examples=150, deadline=None)
@given(codes(), st.data())
def test_lemma3_distance_equals_set_difference(code, data):
    c = data.draw(st.integers(0, code.n - 1))
    D = data.draw(st.lists(st.integers(0, code.n - 1), min_size=1, unique=True))
    covered = set().union(*(corresponding_set(code.words[j]) for j in D))
    expected = len(corresponding_set(code.words[c]) - covered)
    assert distance(code, c, D) == expected == mask_distance(code, c, D)


@settings(max_examples=150, deadline=None)
@given(codes(), st.data())
def test_distance_monotone_in_coalition(code, data):
    c = data.draw(st.integers(0, code.n - 1))
    D = data.draw(st.lists(st.integers(0, code.n - 1), min_size=1, unique=True))
    extra = data.draw(st.lists(st.integers(0, code.n - 1), unique=True))
    assert distance(code, c, set(D) | set(extra)) <= distance(code, c, D)


@settings(max_examples=200, deadline=None)
@given(codes(), st.integers(1, 4))
def test_verdict_matches_descendant_definition(code, w):
    assert is_frameproof(code, w).is_frameproof == oracles.frameproof_by_descendants(code.words, w)


@settings(max_examples=200, deadline=None)
@given(codes(), st.integers(1, 4))
def test_witness_is_lexicographically_least(code, w):
    rep = is_frameproof(code, w)
    assert rep.witness == oracles.least_witness(code.words, w)
    if rep.witness:
        c, D = rep.witness
        assert c not in D and distance(code, c, D) == 0


@settings(max_examples=100, deadline=None)
@given(codes(), st.integers(1, 4))
def test_frameproof_is_downward_closed_in_w(code, w):
    if is_frameproof(code, w):
        assert all(is_frameproof(code, v) for v in range(1, w))


def test_descendants_materialization():
    assert sorted(descendants(PAIR, [0, 1])) == [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)]


def test_parallel_matches_serial():
    rng = random.Random(11)
    for _ in range(6):
        code = random_code(rng, 6, 12, 2)
        assert is_frameproof(code, 2, workers=3) == is_frameproof(code, 2, workers=1)
