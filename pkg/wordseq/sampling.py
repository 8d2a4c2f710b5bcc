"""
Seeded random words, sequences and group elements for the invariant suites.

All randomness flows through a numpy Generator so a fixed seed reproduces a
whole run.
"""

import networkx as nx
import numpy as np

from wordseq.graph_system import InverseSystem
from wordseq.limit_ops import WordSequence, project_sequence
from wordseq.spaces import petal_length, petal_vertex, petal_word
from wordseq.word_calculus import Word


def _pick(rng: np.random.Generator, options: list[str]) -> str:
    return options[int(rng.integers(len(options)))]


def random_walk(
    system: InverseSystem,
    n: int,
    length: int,
    rng: np.random.Generator,
    start: str | None = None,
) -> list[str]:
    """A non-stagnating walk of `length` letters; backtracks are allowed."""
    graph = system.level(n)
    letters = [start or graph.basepoint]
    while len(letters) < length:
        letters.append(_pick(rng, sorted(graph.neighbors(letters[-1]))))
    return letters


def random_word(
    system: InverseSystem,
    n: int,
    max_length: int,
    rng: np.random.Generator,
    slashed: bool | None = None,
) -> Word:
    """A random based word at level n, slashed with probability 1/2 by default."""
    length = int(rng.integers(1, max_length + 1))
    letters = random_walk(system, n, length, rng)
    if slashed is None:
        slashed = bool(rng.integers(2))
    tail = _pick(rng, sorted(system.level(n).neighbors(letters[-1]))) if slashed else None
    return Word(n, tuple(letters), tail)


def random_returning_word(system: InverseSystem, n: int, max_length: int, rng: np.random.Generator) -> Word:
    """Random walk out, then home along a shortest path."""
    graph = system.level(n)
    out = random_walk(system, n, int(rng.integers(1, max_length + 1)), rng)
    home = nx.shortest_path(graph.as_networkx(), out[-1], graph.basepoint)
    letters = out + home[1:]
    return Word(n, tuple(letters))


def random_free_word(rng: np.random.Generator, generators: int, length: int, first: int | None = None) -> list[int]:
    """Freely reduced word over +-1..+-generators, optionally with a fixed first letter."""
    word: list[int] = [first] if first is not None and length > 0 else []
    while len(word) < length:
        g = int(rng.integers(1, generators + 1)) * (1 if rng.integers(2) else -1)
        if word and word[-1] == -g:
            continue
        word.append(g)
    return word


def random_hawaiian_loop(
    system: InverseSystem,
    rng: np.random.Generator,
    petals: int = 3,
    length: int = 4,
) -> WordSequence:
    """Sequence induced by a random reduced petal loop at the deepest level."""
    free = random_free_word(rng, petals, int(rng.integers(1, length + 1)))
    return project_sequence(system, petal_word(system.depth, free))


def random_hawaiian_point(
    system: InverseSystem,
    rng: np.random.Generator,
    petals: int = 3,
    length: int = 3,
    first: int | None = None,
) -> WordSequence:
    """Sequence induced by a petal loop followed by a partial petal.

    The partial petal stops at a position divisible by 8, so the endpoint
    stays a vertex three levels up and completion changes nothing.
    `first` fixes the first generator.
    """
    n = system.depth
    size = int(rng.integers(0 if first is None else 1, length + 1))
    free = random_free_word(rng, petals, size, first)
    letters = list(petal_word(n, free).letters)
    last = abs(free[-1]) if free else None
    candidates = [i for i in range(1, petals + 1) if i != last] or [1]
    petal = candidates[int(rng.integers(len(candidates)))]
    edges = petal_length(n, petal)
    stop = 8 * int(rng.integers(1, edges // 8))
    forward = bool(rng.integers(2))
    for j in range(1, stop + 1):
        letters.append(petal_vertex(petal, j if forward else edges - j, edges))
    return project_sequence(system, Word(n, tuple(letters)))
