import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import pandas as pd
import yaml

from wordseq.graph_system import InverseSystem
from wordseq.word_calculus import (
    Word,
    WordError,
    basepoint_word,
    compress,
    from_json,
    is_based,
    is_reduced,
    is_returning,
    parse_word,
    phi,
    reduce,
    spell_word,
    to_json,
    validate_word,
)


"""
Operations on depth-truncated word sequences (omega_1, ..., omega_M).

Everything the limit definitions ask for "eventually" is answered from the
levels that exist: stabilization reports a window verdict, completion a
per-level trust report, and formal equivalence looks for an ending pattern
that holds from some level up to M.
"""

# "3: A B C / A"
SEQUENCE_LINE_RE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*$")


class SequenceKind(StrEnum):
    COHERENT = "CoherentW"
    REDUCED = "ReducedR"


class CoherenceError(ValueError):
    def __init__(self, message: str, level: int | None = None, lower: Word | None = None, upper: Word | None = None):
        super().__init__(message)
        self.level = level
        self.lower = lower
        self.upper = upper


class AmbiguousNeighborError(ValueError):
    """drc_kn found two neighbors with different nonempty images."""


class DepthError(ValueError):
    """The sequence is too shallow for the requested operation."""


@dataclass(frozen=True)
class WordSequence:
    system: InverseSystem = field(compare=False, repr=False)
    words: tuple[Word, ...]
    kind: SequenceKind = SequenceKind.COHERENT

    @property
    def depth(self) -> int:
        return len(self.words)

    def word(self, n: int) -> Word:
        if not 1 <= n <= self.depth:
            raise KeyError(f"level {n} outside 1..{self.depth}")
        return self.words[n - 1]

    @property
    def top(self) -> Word:
        return self.words[-1]

    @property
    def returning(self) -> bool:
        return all(is_returning(self.system, w) for w in self.words)

    def truncate(self, depth: int) -> "WordSequence":
        return WordSequence(self.system, self.words[:depth], self.kind)

    def __str__(self):
        return "\n".join(f"{w.level}: {w}" for w in self.words)


def phi_prime(system: InverseSystem, n: int, w: Word) -> Word:
    """The reduced projection phi'_n, defined on reduced based words."""
    return reduce(phi(system, n, w))


def coherence_violations(system: InverseSystem, words: Sequence[Word], kind: SequenceKind) -> list[str]:
    errors = []
    for i, w in enumerate(words, start=1):
        if w.level != i:
            errors.append(f"LEVEL {i}: word is tagged with level {w.level}")
            continue
        errors.extend(f"LEVEL {i}: {e}" for e in validate_word(system, w))
        if not is_based(system, w):
            errors.append(f"LEVEL {i}: '{w}' does not start at {system.basepoint(i)}")
        if kind is SequenceKind.REDUCED and not is_reduced(w):
            errors.append(f"LEVEL {i}: '{w}' is not reduced")
    if errors:
        return errors
    project_one = phi_prime if kind is SequenceKind.REDUCED else phi
    for lower, upper in zip(words, words[1:]):
        image = project_one(system, lower.level, upper)
        if image != lower:
            errors.append(
                f"LEVEL {lower.level}: projection of '{upper}' is '{image}', sequence has '{lower}'"
            )
    return errors


def check_coherent(system: InverseSystem, words: Sequence[Word], kind: SequenceKind) -> WordSequence:
    """Validate a word list as a sequence of the given kind.

    Raises:
        CoherenceError: at the first violating level, with both words.
    """
    if not words:
        raise CoherenceError("a word sequence needs at least one level")
    if len(words) > system.depth:
        raise CoherenceError(f"{len(words)} levels given, system {system.name!r} has {system.depth}")
    errors = coherence_violations(system, words, kind)
    if errors:
        match = re.match(r"LEVEL (\d+):", errors[0])
        level = int(match.group(1)) if match else None
        lower = words[level - 1] if level else None
        upper = words[level] if level and level < len(words) else None
        raise CoherenceError(errors[0], level=level, lower=lower, upper=upper)
    return WordSequence(system, tuple(words), kind)


def project(system: InverseSystem, n: int, w: Word) -> Word:
    """Compose phi from the level of `w` down to level n."""
    if n > w.level:
        raise KeyError(f"cannot project level {w.level} up to level {n}")
    for m in range(w.level - 1, n - 1, -1):
        w = phi(system, m, w)
    return w


def project_sequence(system: InverseSystem, w: Word) -> WordSequence:
    """The coherent sequence a based word induces at levels 1..level(w)."""
    words = [w]
    for m in range(w.level - 1, 0, -1):
        words.append(phi(system, m, words[-1]))
    return WordSequence(system, tuple(reversed(words)), SequenceKind.COHERENT)


def spell_sequence(system: InverseSystem, walk: Sequence[str], stop: str | None = None) -> WordSequence:
    """Spell a walk at the deepest level and project it to every level."""
    return project_sequence(system, spell_word(system, system.depth, walk, stop))


def reduce_sequence(seq: WordSequence) -> WordSequence:
    return WordSequence(seq.system, tuple(reduce(w) for w in seq.words), SequenceKind.REDUCED)


# --- Stabilization ---------------------------------------------------------


@dataclass(frozen=True)
class StabilityVerdict:
    """Stable(window) or Unknown(first unstable level).

    `table` has one row per (level, source) pair with the composed
    projection of the source level's reduced word.
    """

    stable: bool
    window: int
    first_unstable: int | None = None
    table: pd.DataFrame = field(default_factory=pd.DataFrame, compare=False, repr=False)

    def __str__(self):
        if self.stable:
            return f"Stable({self.window})"
        return f"Unknown({self.first_unstable})"


def stabilize(seq: WordSequence, window: int) -> tuple[WordSequence, StabilityVerdict]:
    """Stabilize a reduced sequence from its deepest word.

    The verdict is Stable(window) when, for every level n <= M - window,
    the composed projections of r_k agree for every k in the window.
    """
    system = seq.system
    M = seq.depth
    if not 1 <= window < M:
        raise ValueError(f"window must satisfy 1 <= window < {M}, got {window}")
    stabilized = project_sequence(system, seq.top)

    rows = []
    first_unstable = None
    for n in range(1, M - window + 1):
        expected = stabilized.word(n)
        for k in range(max(M - window, n + 1), M + 1):
            image = project(system, n, seq.word(k))
            agrees = image == expected
            rows.append({"level": n, "source": k, "word": str(image), "agrees": agrees})
            if not agrees and first_unstable is None:
                first_unstable = n
    table = pd.DataFrame(rows, columns=["level", "source", "word", "agrees"])
    verdict = StabilityVerdict(first_unstable is None, window, first_unstable, table)
    return stabilized, verdict


# --- Completion ------------------------------------------------------------


def _drc_kn_trace(system: InverseSystem, n: int, k: int, letters: Sequence[str]) -> tuple[tuple[str, ...], int]:
    """Apply drc^k_n and also return the 1-based index of the last kept letter."""
    if k < n + 2:
        raise DepthError(f"drc^k_n needs k >= n + 2, got n={n}, k={k}")
    images = system.composed_images(k, n)
    graph = system.level(k)
    out = []
    last_kept = 0
    for i, v in enumerate(letters, start=1):
        image = images[v]
        if image is None:
            candidates = {images[u] for u in graph.neighbors(v)} - {None}
            if len(candidates) > 1:
                raise AmbiguousNeighborError(
                    f"letter {v} at level {k} has neighbors with images {sorted(candidates)} at level {n}"
                )
            if not candidates:
                continue
            image = candidates.pop()
        out.append(image)
        last_kept = i
    return compress(out), last_kept


def drc_kn(system: InverseSystem, n: int, k: int, w: Word) -> Word:
    """The modified DRC from level k straight down to level n.

    A letter whose composed image is empty is kept when one of its
    neighbors has a nonempty image, and takes that image.
    """
    if w.level != k:
        raise WordError(f"drc_kn from level {k} got a level {w.level} word")
    letters, _ = _drc_kn_trace(system, n, k, w.letters)
    return Word(n, letters)


class EndingRule(StrEnum):
    PLAIN = "plain"
    TOWARD_LAST = "slash-to-last"
    TOWARD_TAIL = "slash-to-tail"
    ANOMALY = "anomaly"


def _completed_word(system, seq: WordSequence, n: int, k: int) -> tuple[Word, EndingRule]:
    omega_k = seq.word(k)
    omega_n = seq.word(n)
    letters, last_kept = _drc_kn_trace(system, n, k, omega_k.letters)
    if last_kept == len(omega_k.letters):
        return Word(n, letters), EndingRule.PLAIN
    if letters and omega_n.tail is not None:
        if letters[-1] == omega_n.tail:
            return Word(n, letters, omega_n.letters[-1]), EndingRule.TOWARD_LAST
        if letters[-1] == omega_n.letters[-1]:
            return Word(n, letters, omega_n.tail), EndingRule.TOWARD_TAIL
    return Word(n, letters), EndingRule.ANOMALY


@dataclass(frozen=True)
class LevelTrust:
    level: int
    confirmed: bool
    unstable_ending: bool
    anomaly: bool
    coherent: bool
    ending: EndingRule


@dataclass(frozen=True)
class CompletionResult:
    sequence: WordSequence
    trust: tuple[LevelTrust, ...]

    @property
    def confirmed_depth(self) -> int:
        """Number of leading levels that are all confirmed."""
        depth = 0
        for entry in self.trust:
            if not entry.confirmed:
                break
            depth += 1
        return depth

    @property
    def coherent_depth(self) -> int:
        """Number of leading levels whose words form a coherent sequence."""
        depth = 0
        for entry in self.trust:
            depth += 1
            if not entry.coherent:
                break
        return depth


def complete(seq: WordSequence) -> CompletionResult:
    """Insert limiting letters; the result has depth M - 2.

    Level n is computed with k = M. It is confirmed when k = M - 1 gives the
    same word, which needs n <= M - 3.

    Raises:
        DepthError: if the sequence has fewer than four levels.
    """
    system = seq.system
    M = seq.depth
    if M < 4:
        raise DepthError(f"completion needs depth >= 4, got {M}")
    words = []
    entries = []
    for n in range(1, M - 1):
        tau, ending = _completed_word(system, seq, n, M)
        confirmed = False
        unstable = False
        if M - 1 >= n + 2:
            earlier, earlier_ending = _completed_word(system, seq, n, M - 1)
            confirmed = earlier == tau
            unstable = earlier_ending != ending
        words.append(tau)
        entries.append([n, confirmed, unstable, ending is EndingRule.ANOMALY, ending])

    trust = []
    for i, (n, confirmed, unstable, anomaly, ending) in enumerate(entries):
        coherent = True
        if i + 1 < len(words):
            try:
                coherent = phi(system, n, words[i + 1]) == words[i]
            except WordError:
                coherent = False
        trust.append(LevelTrust(n, confirmed, unstable, anomaly, coherent, ending))
    return CompletionResult(WordSequence(system, tuple(words), SequenceKind.COHERENT), tuple(trust))


# --- Stable initial match --------------------------------------------------


def _level_cap(a: Word, b: Word) -> Word:
    full_a, full_b = a.full_letters, b.full_letters
    size = 0
    for x, y in zip(full_a, full_b):
        if x != y:
            break
        size += 1
    prefix = full_a[:size]
    slashed = any(w.slashed and w.full_letters == prefix for w in (a, b))
    if slashed:
        return Word(a.level, prefix[:-1], prefix[-1])
    return Word(a.level, prefix)


def level_cap(a: Word, b: Word) -> Word:
    """Maximal common initial part of two based words at one level."""
    if a.level != b.level:
        raise WordError(f"cannot match words of levels {a.level} and {b.level}")
    return _level_cap(a, b)


def cap_prefix_violations(a: WordSequence, b: WordSequence) -> list[str]:
    """Levels where a deeper cap does not project into the shallower cap.

    A deeper cap may end in a slash the shallower one lacks, so only the
    proper letters of the image are compared.
    """
    if a.depth != b.depth:
        raise DepthError(f"sequences have depths {a.depth} and {b.depth}")
    system = a.system
    caps = [_level_cap(x, y) for x, y in zip(a.words, b.words)]
    errors = []
    for lower, upper in zip(caps, caps[1:]):
        image = phi(system, lower.level, upper).letters
        if lower.full_letters[: len(image)] != image:
            errors.append(f"LEVEL {lower.level}: cap '{upper}' projects to '{' '.join(image)}', outside cap '{lower}'")
    return errors


def stable_initial_match(a: WordSequence, b: WordSequence) -> WordSequence:
    """Project the deepest cap down to every level."""
    if a.depth != b.depth:
        raise DepthError(f"sequences have depths {a.depth} and {b.depth}")
    return project_sequence(a.system, _level_cap(a.top, b.top))


# --- Formal equivalence ----------------------------------------------------


class EndingType(StrEnum):
    TERMINATING = "terminating"
    NON_TERMINATING = "non-terminating"
    IRREGULAR = "irregular"


def ending_type(seq: WordSequence) -> tuple[EndingType, int | None]:
    """Classify by where the slashes stop.

    Terminating means slashed below some level N and plain from N on;
    the onset N is returned with it.
    """
    flags = [w.slashed for w in seq.words]
    if all(flags):
        return EndingType.NON_TERMINATING, None
    onset = flags.index(False) + 1
    if any(flags[onset - 1 :]):
        return EndingType.IRREGULAR, None
    return EndingType.TERMINATING, onset


def _pattern_holds(t: Word, xi: Word) -> bool:
    """xi = t[:-1]/t[-1] or xi = t/u for some u."""
    if xi.tail is None or t.tail is not None:
        return False
    if xi.letters == t.letters[:-1] and xi.tail == t.letters[-1]:
        return True
    return xi.letters == t.letters


def equivalence_onset(terminating: WordSequence, other: WordSequence) -> int | None:
    """Smallest N with the formal-equivalence ending pattern on [N, M]."""
    onset = None
    for n in range(terminating.depth, 0, -1):
        if not _pattern_holds(terminating.word(n), other.word(n)):
            break
        onset = n
    return onset


def formally_equivalent(a: WordSequence, b: WordSequence) -> bool:
    if a.depth != b.depth:
        raise DepthError(f"sequences have depths {a.depth} and {b.depth}")
    if a.words == b.words:
        return True
    type_a, _ = ending_type(a)
    type_b, _ = ending_type(b)
    if {type_a, type_b} != {EndingType.TERMINATING, EndingType.NON_TERMINATING}:
        return False
    terminating, other = (a, b) if type_a is EndingType.TERMINATING else (b, a)
    return equivalence_onset(terminating, other) is not None


@dataclass(frozen=True)
class Canonical:
    sequence: WordSequence
    changed: bool
    undetermined: bool
    onset: int | None = None


def canonicalize(seq: WordSequence, window: int = 2) -> Canonical:
    """Pick the terminating representative of the formal-equivalence class.

    Two candidates are built from the deepest word: one promotes its tail
    to a proper letter, the other drops the tail. A candidate is accepted
    when the ending pattern holds from some level N <= M - window; the
    smaller onset wins. Otherwise the input comes back unchanged with
    `undetermined` set.
    """
    kind, _ = ending_type(seq)
    if kind is EndingType.TERMINATING:
        return Canonical(seq, changed=False, undetermined=False)
    if kind is EndingType.IRREGULAR:
        return Canonical(seq, changed=False, undetermined=True)

    system = seq.system
    top = seq.top
    candidates = [Word(top.level, top.full_letters), Word(top.level, top.letters)]
    best = None
    for candidate in candidates:
        if not is_based(system, candidate) or validate_word(system, candidate):
            continue
        projected = project_sequence(system, candidate)
        if ending_type(projected)[0] is not EndingType.TERMINATING:
            continue
        onset = equivalence_onset(projected, seq)
        if onset is None or onset > seq.depth - window:
            continue
        if best is None or onset < best[1]:
            best = (projected, onset)
    if best is None:
        return Canonical(seq, changed=False, undetermined=True)
    return Canonical(best[0], changed=True, undetermined=False, onset=best[1])


# --- Sequence documents ----------------------------------------------------


def basepoint_sequence(system: InverseSystem, depth: int | None = None) -> WordSequence:
    depth = depth or system.depth
    return WordSequence(
        system, tuple(basepoint_word(system, n) for n in range(1, depth + 1)), SequenceKind.COHERENT
    )


def parse_sequence(text: str) -> list[Word]:
    """Read `n: word` lines, or a YAML mapping of level to word text.

    Raises:
        CoherenceError: if levels are missing.
        WordError: if a line cannot be parsed.
    """
    entries: dict[int, str] = {}
    lines = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if lines and all(SEQUENCE_LINE_RE.match(line) for _, line in lines):
        for lineno, line in lines:
            match = SEQUENCE_LINE_RE.match(line)
            level = int(match.group(1))
            if level in entries:
                raise WordError(f"line {lineno}: level {level} given twice")
            entries[level] = match.group(2)
    else:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise WordError(f"unreadable sequence document: {e}") from None
        if not isinstance(data, dict):
            raise WordError("a sequence document maps levels to words")
        entries = {int(level): str(value) for level, value in data.items()}

    levels = sorted(entries)
    if levels != list(range(1, len(levels) + 1)):
        raise CoherenceError(f"sequence levels must run 1..M without gaps, got {levels}")
    return [parse_word(level, entries[level]) for level in levels]


def load_sequence(system: InverseSystem, text: str, kind: SequenceKind = SequenceKind.COHERENT) -> WordSequence:
    """Parse a sequence document and check it as a sequence of `kind`."""
    return check_coherent(system, parse_sequence(text), kind)


def dump_sequence(seq: WordSequence) -> str:
    return str(seq) + "\n"


def sequence_to_json(seq: WordSequence) -> list[dict]:
    return [to_json(w) for w in seq.words]


def sequence_from_json(system: InverseSystem, data: list[dict], kind: SequenceKind = SequenceKind.COHERENT) -> WordSequence:
    return check_coherent(system, [from_json(item) for item in data], kind)
