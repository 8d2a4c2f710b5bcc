"""
Group structure on stabilized returning sequences and its action on based
ones, plus the per-level free groups and essential multiplicity.
"""

from dataclasses import dataclass

import networkx as nx

from wordseq.graph_system import InverseSystem
from wordseq.limit_ops import (
    CoherenceError,
    CompletionResult,
    DepthError,
    SequenceKind,
    StabilityVerdict,
    WordSequence,
    basepoint_sequence,
    complete,
    project_sequence,
    reduce_sequence,
    stabilize,
)
from wordseq.word_calculus import (
    Word,
    WordError,
    basepoint_word,
    concat,
    is_based,
    is_returning,
    reduce,
    reverse,
)


@dataclass(frozen=True)
class GroupElement:
    sequence: WordSequence
    reduced: WordSequence
    verdict: StabilityVerdict

    @property
    def system(self) -> InverseSystem:
        return self.sequence.system

    @property
    def depth(self) -> int:
        return self.sequence.depth


def _require_returning(seq: WordSequence) -> None:
    for w in seq.words:
        if not is_returning(seq.system, w):
            raise WordError(f"LEVEL {w.level}: '{w}' is not a returning word")


def make_element(seq: WordSequence, window: int = 2) -> GroupElement:
    """Reduce, stabilize and wrap a returning sequence."""
    _require_returning(seq)
    reduced = seq if seq.kind is SequenceKind.REDUCED else reduce_sequence(seq)
    stabilized, verdict = stabilize(reduced, window)
    return GroupElement(stabilized, reduced, verdict)


def element_from_word(system: InverseSystem, w: Word, window: int = 2) -> GroupElement:
    """The element a returning word at level M induces on levels 1..M."""
    return make_element(project_sequence(system, w), window)


def identity(system: InverseSystem, depth: int | None = None, window: int = 2) -> GroupElement:
    return make_element(basepoint_sequence(system, depth), window)


def _check_compatible(a: WordSequence, b: WordSequence) -> None:
    if a.system is not b.system and a.system != b.system:
        raise ValueError("operands live on different systems")
    if a.depth != b.depth:
        raise DepthError(f"operands have depths {a.depth} and {b.depth}")


def _levelwise_concat(a: WordSequence, b: WordSequence) -> WordSequence:
    words = tuple(concat(a.system, x, y) for x, y in zip(a.words, b.words))
    return WordSequence(a.system, words, SequenceKind.COHERENT)


def multiply(a: GroupElement, b: GroupElement, window: int = 2) -> GroupElement:
    """Concatenate level-wise, reduce and restabilize.

    An Unknown verdict is carried on the result rather than raised.
    """
    _check_compatible(a.sequence, b.sequence)
    return make_element(_levelwise_concat(a.sequence, b.sequence), window)


def inverse(a: GroupElement, window: int = 2) -> GroupElement:
    """Reverse every word.

    Raises:
        CoherenceError: if the reversed stabilized words differ from the
            stabilization of the reversed reduced words.
    """
    reversed_reduced = WordSequence(
        a.system, tuple(reverse(w) for w in a.reduced.words), SequenceKind.REDUCED
    )
    result = make_element(reversed_reduced, window)
    expected = tuple(reverse(w) for w in a.sequence.words)
    if result.sequence.words != expected:
        level = next(i for i, (x, y) in enumerate(zip(result.sequence.words, expected), start=1) if x != y)
        raise CoherenceError(f"LEVEL {level}: reversal does not commute with projection", level=level)
    return result


def act(g: GroupElement, p: WordSequence, window: int = 2) -> tuple[WordSequence, StabilityVerdict]:
    """g.p for a based stabilized sequence p."""
    _check_compatible(g.sequence, p)
    for w in p.words:
        if not is_based(p.system, w):
            raise WordError(f"LEVEL {w.level}: '{w}' is not based")
    return stabilize(reduce_sequence(_levelwise_concat(g.sequence, p)), window)


def difference_word(a: GroupElement, b: GroupElement, window: int = 2) -> CompletionResult:
    """Completion of a^-1 * b: the word sequence the arc from a to b spells."""
    return complete(multiply(inverse(a, window), b, window).sequence)


# --- Per-level free groups -------------------------------------------------


def level_multiply(system: InverseSystem, w: Word, u: Word) -> Word:
    return reduce(concat(system, w, u))


def level_inverse(w: Word) -> Word:
    return reverse(w)


def is_trivial(system: InverseSystem, w: Word) -> bool:
    """Word problem in the free group of reduced loops at one level."""
    return reduce(w) == basepoint_word(system, w.level)


# --- Essential multiplicity ------------------------------------------------


@dataclass(frozen=True)
class MultiplicityReport:
    level: int
    vertex: str
    counts: tuple[tuple[int, int], ...]
    monotone: bool
    plateau: int

    def count(self, k: int) -> int:
        return dict(self.counts)[k]


def equivalence_classes(system: InverseSystem, n: int, v: str, k: int) -> list[frozenset[str]]:
    """Classes of V_k(v) under the relation of joining by a walk that spells v.

    A walk between two preimages of v projects to the single letter v
    exactly when it stays among vertices whose composed image is v or lies
    inside an edge, so the classes are the components of that induced
    subgraph, restricted to V_k(v).
    """
    if v not in system.level(n).vertices:
        raise KeyError(f"unknown vertex {v!r} at level {n}")
    if k <= n:
        raise KeyError(f"multiplicity of a level {n} vertex needs k > {n}, got {k}")
    images = system.composed_images(k, n)
    allowed = [u for u, image in images.items() if image is None or image == v]
    subgraph = system.level(k).as_networkx().subgraph(allowed)
    classes = []
    for component in nx.connected_components(subgraph):
        members = frozenset(u for u in component if images[u] == v)
        if members:
            classes.append(members)
    return sorted(classes, key=sorted)


def essential_multiplicity(system: InverseSystem, n: int, v: str, K: int) -> MultiplicityReport:
    """c_k(v) for k = n+1..K, whether it never drops, and its final plateau."""
    if not n < K <= system.depth:
        raise KeyError(f"need {n} < K <= {system.depth}, got K={K}")
    counts = tuple((k, len(equivalence_classes(system, n, v, k))) for k in range(n + 1, K + 1))
    values = [c for _, c in counts]
    monotone = all(x <= y for x, y in zip(values, values[1:]))
    plateau = 1
    while plateau < len(values) and values[-plateau - 1] == values[-1]:
        plateau += 1
    return MultiplicityReport(n, v, counts, monotone, plateau)
