"""
Seeded invariant suites behind `wordseq check`.

Each suite returns a CheckResult naming the fixture, how many cases ran and
the messages for the cases that failed. Nothing here prints.
"""

from dataclasses import dataclass, field

import numpy as np

from wordseq.graph_system import InverseSystem
from wordseq.group_ops import (
    act,
    element_from_word,
    equivalence_classes,
    essential_multiplicity,
    identity,
    inverse,
    level_multiply,
    multiply,
)
from wordseq.limit_ops import (
    SequenceKind,
    WordSequence,
    complete,
    coherence_violations,
    phi,
    phi_prime,
    project_sequence,
    reduce_sequence,
    spell_sequence,
    stabilize,
)
from wordseq.metric import (
    assign_weights,
    carryover_violations,
    four_point_check,
    rho,
    sequence_length,
    weight_bound_violations,
)
from wordseq.sampling import (
    random_hawaiian_loop,
    random_hawaiian_point,
    random_returning_word,
    random_word,
)
from wordseq.spaces import (
    LADDER_TOP,
    figure2_fixture,
    hawaiian,
    interval,
    interval_path,
    ladder,
    ladder_arc,
)
from wordseq.word_calculus import Word, parse_word, reduce

DEFAULT_SAMPLES = 200
FREE_GROUP_SAMPLES = 500
WEIGHT_SAMPLES = 100
RHO_PAIRS = 20
GROUP_LAW_TRIPLES = 100
METRIC_DEPTH = 8


def scaled(samples: int, count: int, floor: int = 1) -> int:
    """`count` at DEFAULT_SAMPLES, in proportion otherwise."""
    return max(floor, count * samples // DEFAULT_SAMPLES)


@dataclass
class CheckResult:
    name: str
    fixture: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, message: str) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(message)


def rewrite_randomly(w: Word, rng: np.random.Generator) -> Word:
    """Apply backtrack-cancelling rules at random positions until none applies."""
    letters = list(w.letters)
    tail = w.tail
    while True:
        sites = [i for i in range(len(letters) - 2) if letters[i] == letters[i + 2]]
        if tail is not None and len(letters) >= 2 and letters[-2] == tail:
            sites.append(-1)
        if not sites:
            return Word(w.level, tuple(letters), tail)
        site = sites[int(rng.integers(len(sites)))]
        if site == -1:
            tail = letters.pop()
        else:
            del letters[site + 1 : site + 3]


def fixture_systems(depth: int) -> dict[str, InverseSystem]:
    return {
        "interval": interval(depth, 2),
        "hawaiian": hawaiian(depth),
        "ladder": ladder(depth),
        "fig2": figure2_fixture(),
    }


# --- Suites ----------------------------------------------------------------


def check_figure2_projections() -> CheckResult:
    system = figure2_fixture()
    result = CheckResult("figure2-projections", "fig2")
    for text, expected in (("D E G H K L N P O M J I", "A B C B"), ("D E G H K L N P O M J I G F", "A B C B / A")):
        got = phi(system, 1, parse_word(2, text))
        result.expect(str(got) == expected, f"phi_1({text}) = {got}, expected {expected}")
    return result


def check_reduction_confluence(system: InverseSystem, name: str, samples: int, rng, orders: int = 3) -> CheckResult:
    result = CheckResult("reduction-confluence", name)
    for n in range(1, system.depth + 1):
        for _ in range(samples):
            w = random_word(system, n, 16, rng)
            normal = reduce(w)
            result.expect(reduce(normal) == normal, f"reduce not idempotent on '{w}'")
            for _ in range(orders):
                other = rewrite_randomly(w, rng)
                result.expect(other == normal, f"'{w}' rewrites to '{other}' and '{normal}'")
    return result


def check_phi_compatibility(system: InverseSystem, name: str, samples: int, rng) -> CheckResult:
    result = CheckResult("phi-reduction-compatibility", name)
    for n in range(1, system.depth):
        for _ in range(samples):
            w = random_word(system, n + 1, 16, rng)
            lhs = reduce(phi(system, n, w))
            rhs = reduce(phi(system, n, reduce(w)))
            result.expect(lhs == rhs, f"level {n + 1} word '{w}': {lhs} vs {rhs}")
    return result


def check_free_group_laws(system: InverseSystem, name: str, samples: int, rng) -> CheckResult:
    result = CheckResult("free-group-laws", name)
    for n in range(1, system.depth + 1):
        base = Word(n, (system.basepoint(n),))
        for _ in range(samples):
            a, b, c = (reduce(random_returning_word(system, n, 12, rng)) for _ in range(3))
            left = level_multiply(system, level_multiply(system, a, b), c)
            right = level_multiply(system, a, level_multiply(system, b, c))
            result.expect(left == right, f"level {n}: associativity fails for '{a}', '{b}', '{c}'")
            result.expect(level_multiply(system, a, base) == a, f"level {n}: '{a}' * x != '{a}'")
            inverse_a = Word(n, a.letters[::-1])
            result.expect(level_multiply(system, a, inverse_a) == base, f"level {n}: '{a}' has no inverse")
            if n < system.depth:
                u, v = (reduce(random_returning_word(system, n + 1, 12, rng)) for _ in range(2))
                image = phi_prime(system, n, level_multiply(system, u, v))
                product = level_multiply(system, phi_prime(system, n, u), phi_prime(system, n, v))
                result.expect(image == product, f"level {n + 1}: phi' not multiplicative on '{u}', '{v}'")
    return result


def check_stabilize_round_trip(system: InverseSystem, name: str, samples: int, rng, window: int) -> CheckResult:
    result = CheckResult("stabilize-round-trip", name)
    for _ in range(samples):
        top = random_word(system, system.depth, 24, rng)
        seq = project_sequence(system, top)
        reduced = reduce_sequence(seq)
        errors = coherence_violations(system, reduced.words, SequenceKind.REDUCED)
        result.expect(not errors, f"reduction of '{top}' is not phi'-coherent: {errors[:1]}")
        stabilized, _ = stabilize(reduced, window)
        back = reduce_sequence(stabilized)
        result.expect(back.words == reduced.words, f"stabilize then reduce changed '{top}'")
        again, _ = stabilize(reduce_sequence(stabilized), window)
        result.expect(again.words == stabilized.words, f"stabilized form of '{top}' is not a fixed point")
    return result


def check_weight_bounds(system: InverseSystem, name: str, samples: int, rng) -> CheckResult:
    result = CheckResult("weight-bounds", name)
    for _ in range(samples):
        seq = project_sequence(system, random_word(system, system.depth, 24, rng))
        weighted = assign_weights(seq)
        problems = weight_bound_violations(weighted) + carryover_violations(weighted)
        result.expect(not problems, f"'{seq.top}': {problems[:2]}")
    return result


def check_length_sandwich(system: InverseSystem, name: str, samples: int, rng) -> CheckResult:
    result = CheckResult("length-sandwich", name)
    for _ in range(samples):
        seq = project_sequence(system, random_word(system, system.depth, 24, rng))
        weighted = assign_weights(seq)
        previous = None
        for m in range(1, seq.depth + 1):
            bound = sequence_length(assign_weights(seq.truncate(m)))
            top = weighted.level_weights(m)
            expected_width = top[-2] + top[-1] if len(top) >= 2 else bound.hi
            result.expect(bound.lo <= bound.hi, f"'{seq.top}': lo > hi at depth {m}")
            result.expect(bound.width == expected_width, f"'{seq.top}': width at depth {m} is {bound.width}")
            if previous is not None:
                result.expect(bound.hi < previous.hi, f"'{seq.top}': hi grew at depth {m}")
                result.expect(bound.lo >= previous.lo, f"'{seq.top}': lo shrank at depth {m}")
            previous = bound
    return result


def interval_equivalent_pairs(system: InverseSystem, count: int, rng) -> list[tuple[WordSequence, WordSequence]]:
    """Terminating paths to a level-M vertex paired with their slashed siblings."""
    M = system.depth
    last = system.level(M).subdiv ** (M - 1)
    pairs = []
    for _ in range(count):
        stop = int(rng.integers(1, last + 1))
        path = interval_path(system, M, stop)
        terminating = spell_sequence(system, path)
        sibling = spell_sequence(system, path[:-1], stop=path[-1])
        pairs.append((terminating, sibling))
    return pairs


def check_rho_degeneracy(samples: int, rng, depth: int) -> list[CheckResult]:
    equal = CheckResult("rho-formally-equivalent", "interval")
    system = interval(depth, 2)
    for a, b in interval_equivalent_pairs(system, samples, rng):
        interval_ab = rho(a, b)
        equal.expect(interval_ab.contains_zero(), f"rho('{a.top}', '{b.top}') = {interval_ab}")

    distinct = CheckResult("rho-distinct", "hawaiian")
    earring = hawaiian(depth)
    for _ in range(samples):
        g, h = rng.choice([1, -1, 2, -2, 3, -3], size=2, replace=False).tolist()
        a = random_hawaiian_point(earring, rng, first=int(g))
        b = random_hawaiian_point(earring, rng, first=int(h))
        interval_ab = rho(a, b)
        distinct.expect(interval_ab.lo > 0, f"rho of points starting {g}, {h} is {interval_ab}")
    return [equal, distinct]


def check_four_point(samples: int, rng, depth: int, quadruples: int = 50) -> list[CheckResult]:
    results = []
    system = interval(depth, 2)
    last = 2 ** (depth - 1)
    stops = sorted({int(s) for s in rng.integers(0, last + 1, size=samples)})
    points = [spell_sequence(system, interval_path(system, depth, s)) for s in stops]
    if len(points) >= 4:
        report = four_point_check(points, quadruples=quadruples, rng=rng)
        result = CheckResult("four-point", "interval")
        result.expect(report.within_slack, f"defect {report.max_defect} exceeds slack {report.slack} at {report.worst}")
        results.append(result)

    earring = hawaiian(depth)
    points = [random_hawaiian_point(earring, rng) for _ in range(samples)]
    report = four_point_check(points, quadruples=quadruples, rng=rng)
    result = CheckResult("four-point", "hawaiian")
    result.expect(report.within_slack, f"defect {report.max_defect} exceeds slack {report.slack} at {report.worst}")
    results.append(result)
    return results


def check_ladder_completion(depth: int) -> CheckResult:
    result = CheckResult("ladder-completion", "ladder")
    system = ladder(depth)
    arc = project_sequence(system, Word(depth, tuple(ladder_arc(depth, depth))))
    stabilized, verdict = stabilize(reduce_sequence(arc), 2)
    result.expect(verdict.stable, f"ladder arc is not stable: {verdict}")
    for w in stabilized.words:
        result.expect(LADDER_TOP not in w.letters, f"level {w.level} arc already contains the top vertex")
    completion = complete(stabilized)
    for w, trust in zip(completion.sequence.words, completion.trust):
        if trust.confirmed:
            result.expect(LADDER_TOP in w.letters, f"completed level {w.level} misses the top vertex")
    again = complete(completion.sequence)
    for n in range(1, again.sequence.depth + 1):
        result.expect(
            again.sequence.word(n) == completion.sequence.word(n),
            f"completion is not idempotent at level {n}",
        )
    return result


def check_completion_reduces_back(depth: int) -> CheckResult:
    """Completing a terminating sequence and reducing gives the reduced input."""
    result = CheckResult("completion-reduces-back", "ladder+interval")
    arc = project_sequence(ladder(depth), Word(depth, tuple(ladder_arc(depth, depth))))
    system = interval(depth, 2)
    last = 2 ** (depth - 1)
    cases = [arc] + [spell_sequence(system, interval_path(system, depth, s)) for s in (last // 2, last)]
    for seq in cases:
        completion = complete(seq)
        for w in completion.sequence.words:
            result.expect(
                reduce(w) == reduce(seq.word(w.level)),
                f"level {w.level}: completion reduces to '{reduce(w)}', input to '{reduce(seq.word(w.level))}'",
            )
    return result


def check_group_laws(samples: int, rng, depth: int, window: int) -> CheckResult:
    system = hawaiian(depth)
    result = CheckResult("group-laws", "hawaiian")
    e = identity(system, window=window)
    stable_levels = depth - window

    def same(x: WordSequence, y: WordSequence) -> bool:
        return x.words[:stable_levels] == y.words[:stable_levels]

    for _ in range(samples):
        a, b, c = (element_from_word(system, random_hawaiian_loop(system, rng).top, window) for _ in range(3))
        result.expect(same(multiply(a, e, window).sequence, a.sequence), f"a*e != a for '{a.sequence.top}'")
        result.expect(same(multiply(a, inverse(a, window), window).sequence, e.sequence), f"a*a^-1 != e for '{a.sequence.top}'")
        left = multiply(multiply(a, b, window), c, window)
        right = multiply(a, multiply(b, c, window), window)
        result.expect(same(left.sequence, right.sequence), "associativity fails")

        p = random_hawaiian_point(system, rng)
        gh_p, _ = act(multiply(a, b, window), p, window)
        h_p, _ = act(b, p, window)
        g_h_p, _ = act(a, h_p, window)
        result.expect(same(gh_p, g_h_p), f"action is not compatible for '{p.top}'")
        if a.sequence.words != e.sequence.words:
            moved, _ = act(a, p, window)
            result.expect(moved.words != p.words, f"'{a.sequence.top}' fixes '{p.top}'")
    return result


def check_multiplicity(depth: int) -> list[CheckResult]:
    results = []
    fig2 = figure2_fixture()
    result = CheckResult("multiplicity", "fig2")
    classes = equivalence_classes(fig2, 1, "C", 2)
    result.expect(sum(len(c) for c in classes) == 4, f"|V_2(C)| = {sum(len(c) for c in classes)}")
    result.expect(any({"N", "O"} <= c for c in classes), "N and O are not equivalent")
    result.expect(len(classes) == 2, f"c_2(C) = {len(classes)}")
    results.append(result)

    for name, system in (("interval", interval(depth, 2)), ("hawaiian", hawaiian(depth)), ("ladder", ladder(depth))):
        result = CheckResult("multiplicity", name)
        for n in range(1, min(3, depth)):
            for v in sorted(system.level(n).vertices):
                report = essential_multiplicity(system, n, v, depth)
                result.expect(report.monotone, f"c_k({v}) at level {n} drops: {report.counts}")
                if name == "interval":
                    result.expect(
                        all(c == 1 for _, c in report.counts), f"c_k({v}) at level {n} is {report.counts}"
                    )
        results.append(result)
    return results


def run_all(seed: int = 0, samples: int = DEFAULT_SAMPLES, depth: int = 6, window: int = 2) -> list[CheckResult]:
    """Run every suite with one generator; identical arguments give identical results.

    At the default sample size each suite runs its target count: 500 free
    group samples per level, 100 weighted sequences, 20 rho pairs and 100
    group-law triples. The rho and four-point suites run at depth 8 or deeper.
    """
    rng = np.random.default_rng(seed)
    results = [check_figure2_projections()]
    for name, system in fixture_systems(depth).items():
        results.append(check_reduction_confluence(system, name, samples, rng))
        results.append(check_phi_compatibility(system, name, samples, rng))
        results.append(check_free_group_laws(system, name, scaled(samples, FREE_GROUP_SAMPLES), rng))
        if system.depth > window:
            results.append(check_stabilize_round_trip(system, name, scaled(samples, 50), rng, window))
        results.append(check_weight_bounds(system, name, scaled(samples, WEIGHT_SAMPLES), rng))
        results.append(check_length_sandwich(system, name, scaled(samples, 20), rng))
    if depth >= 6:
        metric_depth = max(depth, METRIC_DEPTH)
        results.extend(check_rho_degeneracy(scaled(samples, RHO_PAIRS, floor=4), rng, metric_depth))
        results.extend(check_four_point(scaled(samples, 10, floor=6), rng, metric_depth))
        results.append(check_ladder_completion(depth))
        results.append(check_completion_reduces_back(depth))
        results.append(check_group_laws(scaled(samples, GROUP_LAW_TRIPLES, floor=4), rng, depth, window))
    results.extend(check_multiplicity(depth))
    return results
