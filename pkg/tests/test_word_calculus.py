"""Characterization tests for wordseq/word_calculus.py.

Covers parsing and validation of words, the worked projection example
with vertices A, B, C, Y, backtrack reduction, concatenation and spelling.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wordseq.checks import rewrite_randomly
from wordseq.spaces import figure2_fixture, interval
from wordseq.word_calculus import (
    Word,
    WordError,
    check_word,
    concat,
    drc,
    from_json,
    is_based,
    is_reduced,
    is_returning,
    parse_word,
    phi,
    reduce,
    reverse,
    spell_word,
    to_json,
    validate_word,
)

FIG2 = figure2_fixture()


def w(level: int, text: str) -> Word:
    return parse_word(level, text)


# --- Parsing and validation ------------------------------------------------


def test_parse_word_with_and_without_slash_spacing():
    assert w(1, "A B C/A") == Word(1, ("A", "B", "C"), "A")
    assert w(1, "A B C / A") == w(1, "A B C/A")


def test_str_puts_spaces_around_slash():
    assert str(Word(1, ("A", "B"), "C")) == "A B / C"


def test_parse_rejects_two_slashes():
    with pytest.raises(WordError):
        w(1, "A / B / C")


def test_parse_rejects_two_tail_letters():
    with pytest.raises(WordError):
        w(1, "A B / C A")


def test_validate_reports_stagnation_and_non_adjacency():
    assert validate_word(FIG2, w(1, "A A")) == ["stagnation at position 1: AA"]
    assert validate_word(FIG2, w(1, "A C")) == ["letters A and C at position 1 are not adjacent"]


def test_validate_reports_unknown_letters_and_bad_tail():
    assert validate_word(FIG2, w(1, "A Q")) == ["letter Q is not a vertex of level 1"]
    assert validate_word(FIG2, w(1, "A / C")) == ["tail C is not adjacent to last letter A"]


def test_check_word_raises():
    with pytest.raises(WordError):
        check_word(FIG2, w(1, "A C"))


def test_based_and_returning():
    assert is_based(FIG2, w(1, "A B"))
    assert not is_based(FIG2, w(1, "B A"))
    assert is_returning(FIG2, w(1, "A B A"))
    assert not is_returning(FIG2, w(1, "A B / A"))


# --- Projection ------------------------------------------------------------


def test_projection_of_worked_example():
    assert str(phi(FIG2, 1, w(2, "D E G H K L N P O M J I"))) == "A B C B"


def test_projection_of_worked_example_ending_inside_an_edge():
    assert str(phi(FIG2, 1, w(2, "D E G H K L N P O M J I G F"))) == "A B C B / A"


def test_drc_is_plain_even_for_slashed_input():
    assert drc(FIG2, 1, w(2, "D E G H / I")) == w(1, "A B")


def test_drc_needs_the_level_above():
    with pytest.raises(WordError):
        drc(FIG2, 1, w(1, "A B"))


def test_phi_on_interval_slashes_towards_next_vertex():
    system = interval(3)
    assert phi(system, 2, w(3, "v0 v1 v2 v3")) == w(2, "v0 v1 / v2")


def test_phi_needs_a_based_word():
    with pytest.raises(WordError):
        phi(FIG2, 1, w(2, "E G"))


# --- Reduction -------------------------------------------------------------


def test_reduce_cancels_backtrack():
    assert str(reduce(w(1, "A B C B"))) == "A B"


def test_reduce_moves_slash_back():
    assert reduce(w(1, "A B / A")) == w(1, "A / B")


def test_reduce_cascades():
    assert reduce(w(1, "A B C B A")) == w(1, "A")
    assert reduce(w(1, "A B C B Y / B")) == w(1, "A B / Y")


def test_is_reduced():
    assert is_reduced(w(1, "A Y B A"))
    assert not is_reduced(w(1, "A B A"))
    assert not is_reduced(w(1, "A B / A"))


# --- Concatenation, reversal, spelling -------------------------------------


def test_concat_splices_at_the_basepoint():
    assert concat(FIG2, w(1, "A B A"), w(1, "A Y / B")) == w(1, "A B A Y / B")


def test_concat_needs_returning_left_factor():
    with pytest.raises(WordError):
        concat(FIG2, w(1, "A B"), w(1, "A Y"))


def test_reverse_rejects_slashed_words():
    assert reverse(w(1, "A B Y A")) == w(1, "A Y B A")
    with pytest.raises(WordError):
        reverse(w(1, "A / B"))


def test_spell_word_compresses_standing_still():
    system = interval(3)
    assert spell_word(system, 3, ["v0", "v0", "v1", "v2"], stop="v3") == w(3, "v0 v1 v2 / v3")


def test_spell_word_errors():
    system = interval(3)
    with pytest.raises(WordError):
        spell_word(system, 3, ["v1", "v2"])
    with pytest.raises(WordError):
        spell_word(system, 3, ["v0", "v2"])
    with pytest.raises(WordError):
        spell_word(system, 3, ["v0", "v1"], stop="v3")


def test_json_shape():
    assert to_json(w(1, "A B / C")) == {"level": 1, "letters": ["A", "B"], "slash_tail": "C"}
    assert from_json(to_json(w(1, "A B / C"))) == w(1, "A B / C")


# --- Properties ------------------------------------------------------------


@st.composite
def fig2_words(draw, level: int = 2):
    graph = FIG2.level(level)
    letters = [graph.basepoint]
    for _ in range(draw(st.integers(0, 14))):
        letters.append(draw(st.sampled_from(sorted(graph.neighbors(letters[-1])))))
    tail = None
    if draw(st.booleans()):
        tail = draw(st.sampled_from(sorted(graph.neighbors(letters[-1]))))
    return Word(level, tuple(letters), tail)


@given(fig2_words(), st.integers(0, 2**32 - 1))
def test_reduction_is_confluent(word, seed):
    normal = reduce(word)
    assert is_reduced(normal)
    assert reduce(normal) == normal
    assert rewrite_randomly(word, np.random.default_rng(seed)) == normal


@given(fig2_words())
def test_projection_respects_reduction(word):
    assert reduce(phi(FIG2, 1, word)) == reduce(phi(FIG2, 1, reduce(word)))
