"""
Dynamic word length and the radial pseudo-metric built on it.

Letters of omega_1 weigh 1/2, 1/4, ... and every deeper level splits the
weight of each letter of the level above over the block of letters that
projects onto it, halving as it goes and carrying the remainder over to the
next block. All weights are exact Dyadic numbers.
"""

import itertools
from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

import networkx as nx
import numpy as np

from wordseq.dyadic import ZERO, Dyadic, half_power, midpoint
from wordseq.graph_system import InverseSystem, Original
from wordseq.limit_ops import (
    CoherenceError,
    DepthError,
    WordSequence,
    complete,
    project_sequence,
    stable_initial_match,
)
from wordseq.word_calculus import Word, basepoint_word


@dataclass(frozen=True)
class WeightedSequence:
    sequence: WordSequence
    weights: tuple[tuple[Dyadic, ...], ...]

    def level_weights(self, n: int) -> tuple[Dyadic, ...]:
        return self.weights[n - 1]

    def length(self, n: int) -> Dyadic:
        """|omega_n|, the sum of the level-n weights."""
        return sum(self.weights[n - 1], ZERO)


@dataclass(frozen=True)
class LengthBound:
    lo: Dyadic
    hi: Dyadic

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    def __str__(self):
        return f"[{self.lo}, {self.hi})"


def _blocks(system: InverseSystem, n: int, upper: Word, lower: Word) -> list[int]:
    """Start indices of the blocks of `upper` over the letters of `lower`.

    A block opens at each letter whose f_n image is a vertex different from
    the letter the current block projects to.
    """
    f = system.bonding(n)
    starts: list[int] = []
    current = None
    for i, v in enumerate(upper.letters):
        image = f[v]
        if isinstance(image, Original) and image.vertex != current:
            starts.append(i)
            current = image.vertex
    images = tuple(f[upper.letters[i]].vertex for i in starts)
    if images != lower.letters:
        raise CoherenceError(
            f"LEVEL {n}: letters of '{upper}' project to '{' '.join(images)}', sequence has '{lower}'",
            level=n,
            lower=lower,
            upper=upper,
        )
    return starts


def assign_weights(seq: WordSequence) -> WeightedSequence:
    """Run the recursive halving-with-carryover scheme over every level.

    Raises:
        CoherenceError: if the proper letters of some level are not the DRC
            of the next level's proper letters.
    """
    system = seq.system
    first = seq.word(1)
    levels = [tuple(half_power(i) for i in range(1, len(first.letters) + 1))]
    for n in range(1, seq.depth):
        upper = seq.word(n + 1)
        starts = _blocks(system, n, upper, seq.word(n))
        parent = levels[-1]
        bounds = starts[1:] + [len(upper.letters)]
        weights: list[Dyadic] = []
        carry = ZERO
        for t, (start, end) in enumerate(zip(starts, bounds)):
            a = parent[t]
            block = [a.halve(i) for i in range(1, end - start + 1)]
            block[0] = block[0] + carry
            carry = a.halve(end - start)
            weights.extend(block)
        levels.append(tuple(weights))
    return WeightedSequence(seq, tuple(levels))


def sequence_length(seq: WordSequence | WeightedSequence) -> LengthBound:
    """Two-sided bound on the limit length, read off the deepest level."""
    weighted = seq if isinstance(seq, WeightedSequence) else assign_weights(seq)
    depth = weighted.sequence.depth
    top = weighted.level_weights(depth)
    hi = weighted.length(depth)
    if len(top) < 2:
        return LengthBound(ZERO, hi)
    return LengthBound(hi - top[-2] - top[-1], hi)


# --- Exact weight checks ---------------------------------------------------


def weight_bound_violations(weighted: WeightedSequence) -> list[str]:
    """Check |v_1| = 1/2^n and |v_(i-1)|/2^n <= |v_i| <= (1/2)(3/4)^(n-1)."""
    errors = []
    for n in range(1, weighted.sequence.depth + 1):
        weights = weighted.level_weights(n)
        if not weights:
            continue
        if weights[0] != half_power(n):
            errors.append(f"LEVEL {n}: first weight {weights[0]} is not 1/2^{n}")
        ceiling = Fraction(1, 2) * Fraction(3, 4) ** (n - 1)
        for i in range(1, len(weights)):
            if weights[i] < weights[i - 1].halve(n):
                errors.append(f"LEVEL {n}: weight {weights[i]} at {i + 1} below {weights[i - 1]}/2^{n}")
            if weights[i].as_fraction() > ceiling:
                errors.append(f"LEVEL {n}: weight {weights[i]} at {i + 1} above (1/2)(3/4)^{n - 1}")
    return errors


def carryover_violations(weighted: WeightedSequence) -> list[str]:
    """Check |omega_(n+1)| = |omega_n| - a_last/2^L and strict decrease."""
    errors = []
    seq = weighted.sequence
    for n in range(1, seq.depth):
        upper = seq.word(n + 1)
        starts = _blocks(seq.system, n, upper, seq.word(n))
        last_block = len(upper.letters) - starts[-1]
        residual = weighted.level_weights(n)[-1].halve(last_block)
        if weighted.length(n + 1) != weighted.length(n) - residual:
            errors.append(
                f"LEVEL {n + 1}: length {weighted.length(n + 1)} is not "
                f"{weighted.length(n)} - {residual}"
            )
        if not weighted.length(n + 1) < weighted.length(n):
            errors.append(f"LEVEL {n + 1}: length does not decrease")
    return errors


# --- rho -------------------------------------------------------------------


class Verdict(StrEnum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class RhoInterval:
    lo: Dyadic
    hi: Dyadic

    @property
    def midpoint(self) -> Dyadic:
        return midpoint(self.lo, self.hi)

    @property
    def half_width(self) -> Dyadic:
        return (self.hi - self.lo).halve()

    @property
    def verdict(self) -> Verdict:
        if self.lo > 0:
            return Verdict.DISTINCT
        if self.lo <= 0 <= self.hi:
            return Verdict.EQUAL
        return Verdict.UNDECIDED

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _completed(seq: WordSequence) -> WordSequence:
    if seq.depth < 4:
        raise DepthError(f"rho completes its inputs and needs depth >= 4, got {seq.depth}")
    result = complete(seq)
    return result.sequence.truncate(result.coherent_depth)


def rho(a: WordSequence, b: WordSequence, completed: bool = False) -> RhoInterval:
    """||a|| + ||b|| - 2 ||a cap b|| as an exact interval.

    Inputs are completed first unless `completed` is set. Completed
    sequences are cut to their common coherent depth.
    """
    if not completed:
        a, b = _completed(a), _completed(b)
    depth = min(a.depth, b.depth)
    a, b = a.truncate(depth), b.truncate(depth)
    cap = stable_initial_match(a, b)
    la, lb, lc = sequence_length(a), sequence_length(b), sequence_length(cap)
    return RhoInterval(la.lo + lb.lo - 2 * lc.hi, la.hi + lb.hi - 2 * lc.lo)


@dataclass(frozen=True)
class FourPointReport:
    max_defect: Dyadic
    slack: Dyadic
    worst: tuple[int, int, int, int] | None
    within_slack: bool
    quadruples: int


def four_point_check(
    points: list[WordSequence],
    completed: bool = False,
    quadruples: int | None = None,
    rng: np.random.Generator | None = None,
) -> FourPointReport:
    """Largest four-point defect over quadruples of points.

    The defect of a quadruple is the largest of the three pair sums of rho
    midpoints minus the second largest. Its slack is the sum of the six rho
    half-widths. With `quadruples` set, that many 4-subsets are drawn from
    `rng` instead of trying them all.
    """
    if len(points) < 4:
        raise ValueError(f"four_point_check needs at least 4 points, got {len(points)}")
    if not completed:
        points = [_completed(p) for p in points]
        depth = min(p.depth for p in points)
        points = [p.truncate(depth) for p in points]

    cache: dict[tuple[int, int], RhoInterval] = {}

    def distance(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = rho(points[key[0]], points[key[1]], completed=True)
        return cache[key]

    if quadruples is None:
        subsets = list(itertools.combinations(range(len(points)), 4))
    else:
        rng = rng or np.random.default_rng(0)
        subsets = [tuple(sorted(rng.choice(len(points), size=4, replace=False).tolist())) for _ in range(quadruples)]

    max_defect = ZERO
    worst = None
    worst_slack = ZERO
    within = True
    for quad in subsets:
        i, j, k, m = quad
        sums = sorted(
            [
                distance(i, j).midpoint + distance(k, m).midpoint,
                distance(i, k).midpoint + distance(j, m).midpoint,
                distance(i, m).midpoint + distance(j, k).midpoint,
            ],
            reverse=True,
        )
        defect = sums[0] - sums[1]
        slack = sum((distance(x, y).half_width for x, y in itertools.combinations(quad, 2)), ZERO)
        if defect > slack:
            within = False
        if worst is None or defect > max_defect:
            max_defect, worst, worst_slack = defect, quad, slack
    return FourPointReport(max_defect, worst_slack, worst, within, len(subsets))


# --- Covering tree ---------------------------------------------------------


@dataclass(frozen=True)
class TreeBall:
    graph: nx.DiGraph
    root: Word
    level: int
    partial: bool


def radial_coordinate(system: InverseSystem, w: Word) -> Dyadic:
    """|omega_n| of the sequence a level-n word induces at levels 1..n."""
    return assign_weights(project_sequence(system, w)).length(w.level)


def tree_ball(
    system: InverseSystem,
    n: int,
    max_len: Dyadic | None = None,
    node_budget: int = 100_000,
) -> TreeBall:
    """Breadth-first ball of reduced based plain words at level n.

    Children extend a word by one letter without backtracking. A child is
    kept while its radial coordinate stays within `max_len`; the root is
    always kept. Hitting `node_budget` stops the search and marks the
    result partial.
    """
    graph_n = system.level(n)
    root = basepoint_word(system, n)
    tree = nx.DiGraph()
    tree.add_node(root, coordinate=radial_coordinate(system, root))
    queue = deque([root])
    partial = False
    while queue:
        node = queue.popleft()
        back = node.letters[-2] if len(node.letters) >= 2 else None
        for u in sorted(graph_n.neighbors(node.letters[-1])):
            if u == back:
                continue
            child = Word(n, node.letters + (u,))
            coordinate = radial_coordinate(system, child)
            if max_len is not None and coordinate > max_len:
                continue
            if tree.number_of_nodes() >= node_budget:
                partial = True
                queue.clear()
                break
            tree.add_node(child, coordinate=coordinate)
            tree.add_edge(node, child)
            queue.append(child)
    return TreeBall(tree, root, n, partial)
