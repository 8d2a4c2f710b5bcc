"""Characterization tests for wordseq/limit_ops.py.

Most cases use short paths in the subdivided interval, where every
projection can be worked out by hand: the point 3/8 is the walk v0..v3 at
level 4, the point 1 is the walk v0..v8.
"""

import pytest

from wordseq.limit_ops import (
    CoherenceError,
    DepthError,
    EndingRule,
    EndingType,
    SequenceKind,
    WordSequence,
    basepoint_sequence,
    canonicalize,
    cap_prefix_violations,
    check_coherent,
    coherence_violations,
    complete,
    drc_kn,
    dump_sequence,
    ending_type,
    equivalence_onset,
    formally_equivalent,
    level_cap,
    load_sequence,
    phi_prime,
    project,
    project_sequence,
    reduce_sequence,
    sequence_from_json,
    sequence_to_json,
    spell_sequence,
    stabilize,
    stable_initial_match,
)
from wordseq.spaces import hawaiian, hawaiian_commutators, interval, interval_path
from wordseq.word_calculus import Word, parse_word

THREE_EIGHTHS = """\
1: v0 / v1
2: v0 / v1
3: v0 v1 / v2
4: v0 v1 v2 v3
"""


@pytest.fixture
def system():
    return interval(4)


def spelled(system, stop):
    return spell_sequence(system, interval_path(system, system.depth, stop))


def sibling(system, stop):
    path = interval_path(system, system.depth, stop)
    return spell_sequence(system, path[:-1], stop=path[-1])


# --- Construction ----------------------------------------------------------


def test_spelled_sequence_matches_hand_projection(system):
    assert str(spelled(system, 3)) == THREE_EIGHTHS.strip()


def test_load_sequence_line_format(system):
    assert load_sequence(system, THREE_EIGHTHS) == spelled(system, 3)


def test_load_sequence_yaml_document(system):
    seq = load_sequence(system, "---\n1: v0 / v1\n2: v0 / v1\n")
    assert seq.depth == 2
    assert seq.word(2) == parse_word(2, "v0 / v1")


def test_load_sequence_rejects_gaps(system):
    with pytest.raises(CoherenceError, match="without gaps"):
        load_sequence(system, "1: v0 / v1\n3: v0 v1 / v2\n")


def test_incoherent_sequence_names_the_level(system):
    with pytest.raises(CoherenceError) as excinfo:
        load_sequence(system, "1: v0\n2: v0 v1\n")
    assert excinfo.value.level == 1
    assert str(excinfo.value).startswith("LEVEL 1:")


def test_reduced_kind_rejects_unreduced_words(system):
    words = [parse_word(1, "v0 v1 v0"), parse_word(2, "v0 v1 v2 v1 v0")]
    assert "LEVEL 1: 'v0 v1 v0' is not reduced" in coherence_violations(system, words, SequenceKind.REDUCED)


def test_too_many_levels(system):
    words = list(spelled(system, 3).words) + [parse_word(5, "v0")]
    with pytest.raises(CoherenceError):
        check_coherent(system, words, SequenceKind.COHERENT)


def test_project_composes_phi(system):
    assert project(system, 2, parse_word(4, "v0 v1 v2 v3")) == parse_word(2, "v0 / v1")
    with pytest.raises(KeyError):
        project(system, 3, parse_word(2, "v0"))


def test_json_and_text_round_trip(system):
    seq = spelled(system, 3)
    assert sequence_from_json(system, sequence_to_json(seq)) == seq
    assert load_sequence(system, dump_sequence(seq)) == seq


def test_basepoint_sequence(system):
    assert [str(w) for w in basepoint_sequence(system).words] == ["v0"] * 4


# --- Stabilization ---------------------------------------------------------


def test_sequence_of_a_reduced_top_word_is_stable(system):
    seq = reduce_sequence(spelled(system, 3))
    stabilized, verdict = stabilize(seq, 2)
    assert str(verdict) == "Stable(2)"
    assert stabilized.words == seq.words
    assert len(verdict.table) == 5
    assert verdict.table["agrees"].all()


def test_stabilize_window_must_fit(system):
    with pytest.raises(ValueError):
        stabilize(reduce_sequence(spelled(system, 3)), 4)


def test_hawaiian_commutators_are_coherent_but_never_settle():
    earring = hawaiian(5)
    seq = hawaiian_commutators(earring)
    assert coherence_violations(earring, seq.words, SequenceKind.REDUCED) == []
    assert phi_prime(earring, 3, seq.word(4)) == seq.word(3)
    _, verdict = stabilize(seq, 2)
    assert not verdict.stable
    assert str(verdict) == "Unknown(1)"


# --- Completion ------------------------------------------------------------


def test_drc_kn_inserts_the_vertex_a_path_stops_next_to(system):
    # v7 is one step short of v8, which lands on v1 at level 1.
    w = Word(4, tuple(interval_path(system, 4, 7)))
    assert drc_kn(system, 1, 4, w) == parse_word(1, "v0 v1")
    assert project(system, 1, w) == parse_word(1, "v0 / v1")


def test_drc_kn_needs_two_levels_of_gap(system):
    with pytest.raises(DepthError):
        drc_kn(system, 3, 4, Word(4, ("v0",)))


def test_completion_of_a_path_ending_at_a_vertex_is_unchanged():
    system = interval(6)
    seq = spelled(system, 16)
    result = complete(seq)
    assert result.sequence.words == seq.truncate(4).words
    assert result.confirmed_depth == 3
    assert result.coherent_depth == 4
    assert result.trust[0].ending is EndingRule.TOWARD_TAIL
    assert all(t.ending is EndingRule.PLAIN for t in result.trust[1:])
    assert not any(t.anomaly for t in result.trust)


def test_completion_needs_four_levels():
    system = interval(3)
    with pytest.raises(DepthError):
        complete(spelled(system, 2))


# --- Stable initial match --------------------------------------------------


def test_level_cap_keeps_slash_of_the_shorter_word():
    assert level_cap(parse_word(1, "A B C"), parse_word(1, "A B / Y")) == parse_word(1, "A B")
    assert level_cap(parse_word(1, "A B / C"), parse_word(1, "A B C")) == parse_word(1, "A B / C")


def test_stable_initial_match_of_nested_paths(system):
    near, far = spelled(system, 3), spelled(system, 5)
    assert stable_initial_match(near, far) == near
    assert stable_initial_match(far, near) == near


def test_stable_initial_match_needs_equal_depths(system):
    with pytest.raises(DepthError):
        stable_initial_match(spelled(system, 3), spelled(system, 3).truncate(3))


def test_deeper_cap_may_end_in_a_slash_the_shallower_lacks():
    # The excursion o p1_1 o collapses to o at level 1, so the level-1 cap
    # stops at o while the level-2 cap keeps the slash toward p1_1.
    earring = hawaiian(2)
    a = project_sequence(earring, parse_word(2, "o p1_1 o p1_7 p1_6"))
    b = project_sequence(earring, parse_word(2, "o / p1_1"))
    assert a.word(1) == parse_word(1, "o p1_3")
    assert level_cap(a.word(1), b.word(1)) == parse_word(1, "o")
    assert level_cap(a.word(2), b.word(2)) == parse_word(2, "o / p1_1")
    assert cap_prefix_violations(a, b) == []
    match = stable_initial_match(a, b)
    assert [str(w) for w in match.words] == ["o / p1_1", "o / p1_1"]


def test_cap_prefix_violations_flag_incoherent_inputs(system):
    # c sits at v0 on levels 1 and 2 but walks to v2 on level 3.
    a = WordSequence(system, (parse_word(1, "v0 / v1"), parse_word(2, "v0 v1"), parse_word(3, "v0 v1")))
    b = WordSequence(system, (parse_word(1, "v0 / v1"), parse_word(2, "v0 v1"), parse_word(3, "v0 v1 v2")))
    assert cap_prefix_violations(a, b) == []
    c = WordSequence(system, (parse_word(1, "v0"), parse_word(2, "v0"), parse_word(3, "v0 v1 v2")))
    problems = cap_prefix_violations(b, c)
    assert len(problems) == 1
    assert problems[0].startswith("LEVEL 2:")


# --- Formal equivalence ----------------------------------------------------


def test_ending_types(system):
    assert ending_type(spelled(system, 3)) == (EndingType.TERMINATING, 4)
    assert ending_type(sibling(system, 3)) == (EndingType.NON_TERMINATING, None)
    irregular = WordSequence(system, (parse_word(1, "v0"), parse_word(2, "v0 / v1")))
    assert ending_type(irregular) == (EndingType.IRREGULAR, None)


def test_path_and_its_slashed_sibling_are_formally_equivalent(system):
    assert formally_equivalent(spelled(system, 3), sibling(system, 3))
    assert formally_equivalent(spelled(system, 8), sibling(system, 8))
    assert equivalence_onset(spelled(system, 8), sibling(system, 8)) == 1


def test_different_points_are_not_formally_equivalent(system):
    assert not formally_equivalent(spelled(system, 3), sibling(system, 5))


def test_canonicalize_promotes_the_tail(system):
    result = canonicalize(sibling(system, 8), window=2)
    assert result.changed
    assert result.onset == 1
    assert result.sequence == spelled(system, 8)


def test_canonicalize_refuses_a_late_onset(system):
    # Both candidates for the sibling of 3/8 only match from level 3 on.
    result = canonicalize(sibling(system, 3), window=2)
    assert result.undetermined
    assert result.sequence == sibling(system, 3)


def test_canonicalize_leaves_terminating_sequences_alone(system):
    result = canonicalize(spelled(system, 3))
    assert not result.changed
    assert not result.undetermined


def test_walk_stopping_short_of_one_is_reduced_coherent(system):
    # Each level walks v0 up to the vertex before 1 and slashes toward 1.
    words = []
    for n in range(1, system.depth + 1):
        path = interval_path(system, n, 2 ** (n - 1))
        words.append(Word(n, tuple(path[:-1]), path[-1]))
    assert coherence_violations(system, words, SequenceKind.REDUCED) == []
    seq = check_coherent(system, words, SequenceKind.REDUCED)
    assert seq.words == sibling(system, 8).words
    assert ending_type(seq) == (EndingType.NON_TERMINATING, None)
    result = canonicalize(seq)
    assert result.changed
    assert result.sequence == spelled(system, 8)
