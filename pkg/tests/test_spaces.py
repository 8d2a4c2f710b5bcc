"""Characterization tests for the builtin spaces in wordseq/spaces.py."""

import pytest

from wordseq.limit_ops import SequenceKind, project_sequence
from wordseq.spaces import (
    HAWAIIAN_BASE,
    LADDER_TOP,
    builtin,
    figure2_fixture,
    hawaiian,
    hawaiian_commutators,
    interval,
    interval_path,
    interval_vertex,
    ladder,
    ladder_arc,
    ladder_spelled_arc,
    petal_length,
    petal_loop,
    petal_word,
)
from wordseq.word_calculus import Word, is_reduced, is_returning


# --- Interval --------------------------------------------------------------


def test_interval_vertex_names_are_zero_padded():
    assert interval_vertex(3, 2, 2) == "v2"
    assert interval_vertex(6, 5, 2) == "v05"


def test_interval_levels_double():
    system = interval(5)
    assert [len(system.level(n).edges) for n in range(1, 6)] == [1, 2, 4, 8, 16]
    assert system.basepoint(5) == "v00"


def test_interval_with_three_way_subdivision():
    system = interval(3, d=3)
    assert len(system.level(3).edges) == 9
    assert interval_path(system, 2, 3) == ["v0", "v1", "v2", "v3"]


def test_interval_needs_two_levels():
    with pytest.raises(ValueError):
        interval(1)


# --- Hawaiian earring ------------------------------------------------------


def test_petal_lengths_halve_per_petal():
    assert [petal_length(3, i) for i in (1, 2, 3)] == [16, 8, 4]


def test_hawaiian_level_has_one_petal_per_index():
    system = hawaiian(3)
    assert len(system.level(3).vertices) == 1 + 15 + 7 + 3
    assert system.level(3).neighbors(HAWAIIAN_BASE) == {"p1_1", "p1_15", "p2_1", "p2_7", "p3_1", "p3_3"}


def test_petal_loop_and_word():
    assert petal_loop(2, 2) == ["o", "p2_1", "p2_2", "p2_3", "o"]
    assert petal_loop(2, 2, forward=False) == ["o", "p2_3", "p2_2", "p2_1", "o"]
    w = petal_word(2, [2, -2])
    assert w == Word(2, ("o", "p2_1", "p2_2", "p2_3", "o", "p2_3", "p2_2", "p2_1", "o"))
    assert not is_reduced(w)


def test_new_petal_folds_onto_the_first():
    system = hawaiian(2)
    w = Word(2, tuple(petal_loop(2, 2)))
    assert str(project_sequence(system, w).word(1)) == "o p1_1 o"


def test_commutator_sequence_words():
    system = hawaiian(4)
    seq = hawaiian_commutators(system)
    assert seq.kind is SequenceKind.REDUCED
    assert seq.word(1) == Word(1, ("o",))
    assert all(is_returning(system, w) and is_reduced(w) for w in seq.words)
    assert len(seq.word(3)) == len(petal_word(3, [1, 2, -1, -2, 1, 3, -1, -3]))


# --- Compactified ladder ---------------------------------------------------


def test_ladder_edge_counts_follow_doubling_rule():
    system = ladder(4)
    counts = [len(system.level(n).edges) for n in range(1, 5)]
    assert counts == [4, 11, 25, 53]
    assert all(b == 2 * a + 3 for a, b in zip(counts, counts[1:]))


def test_ladder_arc_at_level_two():
    assert ladder_arc(3, 2) == ["a", "m2_2", "l2", "j2", "r2", "m2_4", "c"]
    assert ladder_spelled_arc(3, 2) == ["a", "m2_2", "l2", "j2", LADDER_TOP, "j2", "r2", "m2_4", "c"]


def test_ladder_arcs_project_onto_each_other():
    system = ladder(4)
    seq = project_sequence(system, Word(4, tuple(ladder_arc(4, 4))))
    for n in range(1, 5):
        assert seq.word(n) == Word(n, tuple(ladder_arc(4, n)))
        assert LADDER_TOP not in seq.word(n).letters


# --- Builtins --------------------------------------------------------------


def test_builtin_lookup():
    assert builtin("interval", 4).depth == 4
    assert builtin("hawaiian", 3).name == "hawaiian"
    assert builtin("ladder", 3).depth == 3
    assert builtin("fig2", 9) == figure2_fixture()


def test_builtin_unknown_name():
    with pytest.raises(KeyError):
        builtin("torus", 3)


def test_worked_example_vertex_images():
    system = figure2_fixture()
    images = system.composed_images(2, 1)
    assert images["D"] == "A"
    assert images["H"] == images["I"] == "B"
    assert images["N"] == images["O"] == "C"
    assert images["E"] is None
