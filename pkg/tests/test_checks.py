"""Characterization tests for the invariant suites in wordseq/checks.py."""

import numpy as np

from wordseq.checks import (
    DEFAULT_SAMPLES,
    FREE_GROUP_SAMPLES,
    GROUP_LAW_TRIPLES,
    RHO_PAIRS,
    CheckResult,
    check_completion_reduces_back,
    check_figure2_projections,
    check_four_point,
    check_group_laws,
    check_ladder_completion,
    check_multiplicity,
    check_rho_degeneracy,
    rewrite_randomly,
    run_all,
    scaled,
)
from wordseq.word_calculus import parse_word


def test_check_result_counts_cases():
    result = CheckResult("demo", "none")
    result.expect(True, "fine")
    result.expect(False, "broken")
    assert result.cases == 2
    assert result.failures == ["broken"]
    assert not result.passed


def test_rewrite_randomly_reaches_the_normal_form():
    rng = np.random.default_rng(7)
    for _ in range(5):
        assert rewrite_randomly(parse_word(1, "A B A Y A"), rng) == parse_word(1, "A")
    assert rewrite_randomly(parse_word(1, "A B C B / A"), rng) == parse_word(1, "A / B")


def test_figure2_projections():
    result = check_figure2_projections()
    assert result.passed
    assert result.cases == 2


def test_multiplicity_on_fig2_and_interval():
    fig2, interval_result = check_multiplicity(4)[:2]
    assert fig2.fixture == "fig2" and fig2.passed
    assert interval_result.fixture == "interval" and interval_result.passed


def test_ladder_completion_reaches_the_top_vertex():
    result = check_ladder_completion(6)
    assert result.passed, result.failures


def test_completion_of_terminating_sequences_reduces_back():
    result = check_completion_reduces_back(6)
    assert result.passed, result.failures
    assert result.cases == 3 * 4


def test_run_all_is_deterministic_for_a_seed():
    first = run_all(seed=3, samples=4, depth=3)
    second = run_all(seed=3, samples=4, depth=3)
    assert first == second
    assert first[0].name == "figure2-projections"


def test_scaled_counts_hit_their_targets_at_the_default_size():
    assert scaled(DEFAULT_SAMPLES, FREE_GROUP_SAMPLES) == 500
    assert scaled(DEFAULT_SAMPLES, GROUP_LAW_TRIPLES) == 100
    assert scaled(DEFAULT_SAMPLES, RHO_PAIRS) == 20
    assert scaled(4, FREE_GROUP_SAMPLES) == 10
    assert scaled(4, RHO_PAIRS, floor=4) == 4


# --- Metric and group suites at full size ----------------------------------


def test_rho_degeneracy_at_depth_eight():
    equal, distinct = check_rho_degeneracy(RHO_PAIRS, np.random.default_rng(0), 8)
    assert equal.passed, equal.failures
    assert distinct.passed, distinct.failures
    assert equal.cases == distinct.cases == 20


def test_four_point_at_depth_eight():
    results = check_four_point(10, np.random.default_rng(0), 8, quadruples=50)
    assert [r.fixture for r in results] == ["interval", "hawaiian"]
    for result in results:
        assert result.passed, result.failures


def test_group_laws_on_hawaiian_triples():
    result = check_group_laws(GROUP_LAW_TRIPLES, np.random.default_rng(0), 6, 2)
    assert result.passed, result.failures
    assert result.cases >= 4 * GROUP_LAW_TRIPLES
