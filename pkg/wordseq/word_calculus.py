import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from wordseq.graph_system import Interior, InverseSystem, Original


"""
Words over the vertex alphabet of one level, and the one-step calculus on
them: Delete-Replace-Compress, the projection phi, reduction of backtracks,
concatenation of a loop with a based word, and spelling of edge walks.

A word is a non-stagnating edge path v_1 ... v_k, optionally followed by a
slash tail `/u` meaning the path stops strictly inside the edge {v_k, u}.
"""

# Accept both "A B C/A" and "A B C / A"
SLASH_RE = re.compile(r"\s*/\s*")


class WordError(ValueError):
    """A word breaks an invariant or a precondition of an operation."""


@dataclass(frozen=True)
class Word:
    level: int
    letters: tuple[str, ...]
    tail: str | None = None

    @property
    def slashed(self) -> bool:
        return self.tail is not None

    @property
    def full_letters(self) -> tuple[str, ...]:
        """Proper letters followed by the slash tail, if any."""
        return self.letters + ((self.tail,) if self.tail is not None else ())

    def is_empty(self) -> bool:
        return not self.letters

    def plain(self) -> "Word":
        return Word(self.level, self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        text = " ".join(self.letters)
        if self.tail is not None:
            text += f" / {self.tail}"
        return text


def word(level: int, letters: Iterable[str], tail: str | None = None) -> Word:
    return Word(level, tuple(letters), tail)


def parse_word(level: int, text: str) -> Word:
    """Parse `A B C / A` (slash spacing optional) into an unchecked Word."""
    parts = SLASH_RE.split(text.strip())
    if len(parts) > 2:
        raise WordError(f"more than one slash in {text!r}")
    letters = tuple(parts[0].split())
    tail = None
    if len(parts) == 2:
        tail_tokens = parts[1].split()
        if len(tail_tokens) != 1:
            raise WordError(f"slash must be followed by exactly one letter in {text!r}")
        tail = tail_tokens[0]
    return Word(level, letters, tail)


def validate_word(system: InverseSystem, w: Word) -> list[str]:
    """Return one message per broken word invariant."""
    errors = []
    try:
        graph = system.level(w.level)
    except KeyError as e:
        return [str(e.args[0])]
    for letter in w.full_letters:
        if letter not in graph.vertices:
            errors.append(f"letter {letter} is not a vertex of level {w.level}")
    if errors:
        return errors
    for i, (u, v) in enumerate(zip(w.letters, w.letters[1:]), start=1):
        if u == v:
            errors.append(f"stagnation at position {i}: {u}{v}")
        elif not graph.has_edge(u, v):
            errors.append(f"letters {u} and {v} at position {i} are not adjacent")
    if w.tail is not None:
        if not w.letters:
            errors.append("slashed word has no proper letters")
        elif not graph.has_edge(w.letters[-1], w.tail):
            errors.append(f"tail {w.tail} is not adjacent to last letter {w.letters[-1]}")
    return errors


def check_word(system: InverseSystem, w: Word) -> Word:
    errors = validate_word(system, w)
    if errors:
        raise WordError(f"invalid word '{w}' at level {w.level}: " + "; ".join(errors))
    return w


def is_based(system: InverseSystem, w: Word) -> bool:
    return bool(w.letters) and w.letters[0] == system.basepoint(w.level)


def is_returning(system: InverseSystem, w: Word) -> bool:
    return not w.slashed and is_based(system, w) and w.letters[-1] == system.basepoint(w.level)


def is_reduced(w: Word) -> bool:
    letters = w.letters
    if any(letters[i] == letters[i + 2] for i in range(len(letters) - 2)):
        return False
    return not (w.tail is not None and len(letters) >= 2 and letters[-2] == w.tail)


def basepoint_word(system: InverseSystem, n: int) -> Word:
    return Word(n, (system.basepoint(n),))


def compress(letters: Iterable[str]) -> tuple[str, ...]:
    """Collapse maximal runs of a repeated letter into one letter."""
    out: list[str] = []
    for letter in letters:
        if not out or out[-1] != letter:
            out.append(letter)
    return tuple(out)


# --- Projection ------------------------------------------------------------


def _drc_letters(system: InverseSystem, n: int, letters: Sequence[str]) -> tuple[str, ...]:
    f = system.bonding(n)
    kept = (img.vertex for img in map(f.__getitem__, letters) if isinstance(img, Original))
    return compress(kept)


def drc(system: InverseSystem, n: int, w: Word) -> Word:
    """Delete interior images, replace the rest by f_n, compress.

    Only the proper letters of `w` take part; the result is always plain
    and may be empty.
    """
    if w.level != n + 1:
        raise WordError(f"drc to level {n} needs a level {n + 1} word, got level {w.level}")
    return Word(n, _drc_letters(system, n, w.letters))


def _far_endpoint(origin: str, point: Interior) -> str:
    a, b = point.edge
    if origin == a:
        return b
    if origin == b:
        return a
    raise WordError(f"interior point {point} does not lie on an edge at {origin}")


def phi(system: InverseSystem, n: int, w: Word) -> Word:
    """Project a based word of level n+1 to level n.

    When the path leaves the last surviving vertex and stops before the
    next one, the result is slashed towards the vertex it was heading for.
    """
    if not is_based(system, w):
        raise WordError(f"phi needs a based word at level {w.level}, got '{w}'")
    result = drc(system, n, w)
    if result.is_empty():
        return result

    f = system.bonding(n)
    full = w.full_letters
    j = max(i for i, v in enumerate(w.letters) if isinstance(f[v], Original))
    if j + 1 >= len(full):
        return result
    following = f[full[j + 1]]
    if not isinstance(following, Interior):
        # two adjacent vertices never both land on vertices of X_n
        raise WordError(f"letters {full[j]} and {full[j + 1]} map to adjacent vertices")
    tail = _far_endpoint(f[full[j]].vertex, following)
    return Word(n, result.letters, tail)


# --- Reduction and concatenation -------------------------------------------


def reduce(w: Word) -> Word:
    """Normal form under `uvu -> u` and `uv/u -> u/v`."""
    stack: list[str] = []
    for letter in w.letters:
        if len(stack) >= 2 and stack[-2] == letter:
            stack.pop()
        else:
            stack.append(letter)
    tail = w.tail
    if tail is not None:
        while len(stack) >= 2 and stack[-2] == tail:
            tail = stack.pop()
    return Word(w.level, tuple(stack), tail)


def concat(system: InverseSystem, w: Word, u: Word) -> Word:
    """Splice a returning word in front of a based word of the same level."""
    if w.level != u.level:
        raise WordError(f"cannot concatenate words of levels {w.level} and {u.level}")
    if not is_returning(system, w):
        raise WordError(f"left factor '{w}' is not a returning word")
    if not is_based(system, u):
        raise WordError(f"right factor '{u}' is not based")
    return Word(w.level, compress(w.letters[:-1] + u.letters), u.tail)


def reverse(w: Word) -> Word:
    if w.slashed:
        raise WordError(f"cannot reverse slashed word '{w}'")
    return Word(w.level, w.letters[::-1])


def spell_word(system: InverseSystem, n: int, walk: Sequence[str], stop: str | None = None) -> Word:
    """Spell the word of an edge walk at level n.

    `walk` may repeat vertices (standing still); `stop`, if given, is the
    far endpoint of the edge the walk ends inside.

    Raises:
        WordError: when the walk does not start at the basepoint or uses a
            pair of non-adjacent vertices.
    """
    graph = system.level(n)
    if not walk or walk[0] != graph.basepoint:
        raise WordError(f"walk must start at basepoint {graph.basepoint} of level {n}")
    letters = compress(walk)
    for u, v in zip(letters, letters[1:]):
        if not graph.has_edge(u, v):
            raise WordError(f"walk steps from {u} to {v} without an edge at level {n}")
    if stop is not None and not graph.has_edge(letters[-1], stop):
        raise WordError(f"walk cannot stop inside {{{letters[-1]},{stop}}}: no such edge at level {n}")
    return Word(n, letters, stop)


def to_json(w: Word) -> dict:
    return {"level": w.level, "letters": list(w.letters), "slash_tail": w.tail}


def from_json(data: dict) -> Word:
    return Word(int(data["level"]), tuple(data["letters"]), data.get("slash_tail"))
