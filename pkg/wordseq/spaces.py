"""
Builtin inverse systems: the subdivided interval, the Hawaiian earring, the
compactified ladder and a two-level reconstruction of the worked projection
example with vertices A, B, C, Y.

Every generator goes through `build_system`, so what comes out has passed
the same validation a loaded file does.
"""

from wordseq.graph_system import (
    BondingMap,
    GraphLevel,
    InverseSystem,
    Original,
    SubdividedVertex,
    build_system,
    canonical_edge,
    interior_point,
)
from wordseq.limit_ops import SequenceKind, WordSequence
from wordseq.word_calculus import Word

LADDER_TOP = "b"
LADDER_ENDS = ("a", "c")
HAWAIIAN_BASE = "o"


def _level(index: int, edges: list[tuple[str, str]], subdiv: int, basepoint: str, vertices=()) -> GraphLevel:
    names = set(vertices)
    for u, v in edges:
        names.update((u, v))
    return GraphLevel(index, frozenset(names), frozenset(canonical_edge(u, v) for u, v in edges), subdiv, basepoint)


# --- Interval --------------------------------------------------------------


def interval_vertex(n: int, i: int, d: int) -> str:
    width = len(str(d ** (n - 1)))
    return f"v{i:0{width}d}"


def interval(depth: int, d: int = 2) -> InverseSystem:
    """[0,1] as the limit of paths with d^(n-1) edges, based at 0."""
    if depth < 2 or d < 2:
        raise ValueError(f"interval needs depth >= 2 and d >= 2, got depth={depth}, d={d}")
    levels = []
    for n in range(1, depth + 1):
        count = d ** (n - 1)
        names = [interval_vertex(n, i, d) for i in range(count + 1)]
        levels.append(_level(n, list(zip(names, names[1:])), d, names[0]))
    maps = []
    for n in range(1, depth):
        assignment: dict[str, SubdividedVertex] = {}
        for i in range(d**n + 1):
            q, r = divmod(i, d)
            if r == 0:
                assignment[interval_vertex(n + 1, i, d)] = Original(interval_vertex(n, q, d))
            else:
                u, v = interval_vertex(n, q, d), interval_vertex(n, q + 1, d)
                assignment[interval_vertex(n + 1, i, d)] = interior_point(u, v, r, d)
        maps.append(BondingMap(n + 1, n, assignment))
    return build_system(f"interval-d{d}", levels, maps)


def interval_path(system: InverseSystem, n: int, stop: int) -> list[str]:
    """Vertices v_0 .. v_stop at level n."""
    d = system.level(n).subdiv
    return [interval_vertex(n, i, d) for i in range(stop + 1)]


# --- Hawaiian earring -------------------------------------------------------


def petal_length(n: int, i: int) -> int:
    """Edges on petal i at level n."""
    return 4 * 2 ** (n - i)


def petal_vertex(i: int, j: int, length: int) -> str:
    if j % length == 0:
        return HAWAIIAN_BASE
    return f"p{i}_{j}"


def petal_loop(n: int, i: int, forward: bool = True) -> list[str]:
    """Letters of the loop once around petal i at level n, basepoint at both ends."""
    length = petal_length(n, i)
    loop = [petal_vertex(i, j, length) for j in range(length + 1)]
    return loop if forward else loop[::-1]


def petal_word(n: int, free_word: list[int]) -> Word:
    """Spell a free word in the petal loops at level n; -i runs petal i backwards."""
    letters = [HAWAIIAN_BASE]
    for g in free_word:
        letters.extend(petal_loop(n, abs(g), forward=g > 0)[1:])
    return Word(n, tuple(letters))


def hawaiian_commutators(system: InverseSystem) -> WordSequence:
    """r_n = [l_1, l_2][l_1, l_3] ... [l_1, l_n], reduced at every level.

    The factor with the newest petal dies under phi' because that petal
    folds back and forth, so the sequence is phi'-coherent, while the
    unreduced projections keep growing.
    """
    words = []
    for n in range(1, system.depth + 1):
        free = [g for i in range(2, n + 1) for g in (1, i, -1, -i)]
        words.append(petal_word(n, free))
    return WordSequence(system, tuple(words), SequenceKind.REDUCED)


def hawaiian(depth: int) -> InverseSystem:
    """Level n has n petals at the basepoint; petal n+1 folds onto petal 1."""
    if depth < 2:
        raise ValueError(f"hawaiian needs depth >= 2, got {depth}")
    levels = []
    for n in range(1, depth + 1):
        edges = []
        for i in range(1, n + 1):
            loop = petal_loop(n, i)
            edges.extend(zip(loop, loop[1:]))
        levels.append(_level(n, edges, 2, HAWAIIAN_BASE))
    maps = []
    for n in range(1, depth):
        assignment: dict[str, SubdividedVertex] = {HAWAIIAN_BASE: Original(HAWAIIAN_BASE)}
        for i in range(1, n + 1):
            lower = petal_length(n, i)
            for j in range(1, 2 * lower):
                q, r = divmod(j, 2)
                name = petal_vertex(i, j, 2 * lower)
                if r == 0:
                    assignment[name] = Original(petal_vertex(i, q, lower))
                else:
                    u, v = petal_vertex(i, q, lower), petal_vertex(i, q + 1, lower)
                    assignment[name] = interior_point(u, v, 1, 2)
        first = petal_vertex(1, 1, petal_length(n, 1))
        fold = interior_point(HAWAIIAN_BASE, first, 1, 2)
        new = n + 1
        assignment[petal_vertex(new, 1, 4)] = fold
        assignment[petal_vertex(new, 2, 4)] = Original(first)
        assignment[petal_vertex(new, 3, 4)] = fold
        maps.append(BondingMap(n + 1, n, assignment))
    return build_system("hawaiian", levels, maps)


# --- Compactified ladder ----------------------------------------------------


def _ladder_step(level: GraphLevel, arc: list[str], n: int) -> tuple[GraphLevel, dict, list[str]]:
    """Build level n+1 from level n: subdivide, then split the junction.

    `arc` is the level-n word a ... p J q ... c, with J the junction next
    to the top vertex.
    """
    junction = arc.index(f"j{n}")
    p, q = arc[junction - 1], arc[junction + 1]
    J = arc[junction]
    midpoints: dict[tuple[str, str], str] = {}
    assignment: dict[str, SubdividedVertex] = {}
    for i, (u, v) in enumerate(sorted(level.edges), start=1):
        name = f"m{n + 1}_{i}"
        midpoints[(u, v)] = name
        assignment[name] = interior_point(u, v, 1, 2)

    def mid(u, v):
        return midpoints[canonical_edge(u, v)]

    edges = []
    dropped = {canonical_edge(p, J), canonical_edge(q, J), canonical_edge(J, LADDER_TOP)}
    for u, v in sorted(level.edges):
        if (u, v) in dropped:
            continue
        m = midpoints[(u, v)]
        edges.extend([(u, m), (m, v)])
    for v in level.vertices - {J}:
        assignment[v] = Original(v)

    s, s_prime, t = mid(p, J), mid(q, J), mid(J, LADDER_TOP)
    del assignment[t]
    left, right, joint, rung = f"l{n + 1}", f"r{n + 1}", f"j{n + 1}", f"x{n + 1}"
    assignment[left] = Original(J)
    assignment[right] = Original(J)
    assignment[rung] = Original(J)
    assignment[joint] = interior_point(J, LADDER_TOP, 1, 2)
    edges.extend([(p, s), (q, s_prime)])
    edges.extend([(s, left), (left, joint), (joint, right), (right, s_prime), (joint, LADDER_TOP), (s, rung), (rung, s_prime)])

    new_arc = []
    for u, v in zip(arc[: junction], arc[1 : junction + 1]):
        new_arc.extend([u, mid(u, v)])
    new_arc.extend([left, joint, right])
    for u, v in zip(arc[junction:], arc[junction + 1 :]):
        if u != J:
            new_arc.append(u)
        new_arc.append(mid(u, v))
    new_arc.append(arc[-1])
    return _level(n + 1, edges, 2, LADDER_ENDS[0]), assignment, new_arc


def ladder_levels(depth: int) -> tuple[list[GraphLevel], list[BondingMap], list[list[str]]]:
    first = _level(1, [("a", "c"), ("a", "j1"), ("c", "j1"), ("j1", LADDER_TOP)], 2, "a")
    levels, maps, arcs = [first], [], [["a", "j1", "c"]]
    for n in range(1, depth):
        level, assignment, arc = _ladder_step(levels[-1], arcs[-1], n)
        levels.append(level)
        maps.append(BondingMap(n + 1, n, assignment))
        arcs.append(arc)
    return levels, maps, arcs


def ladder(depth: int) -> InverseSystem:
    """One-point compactified ladder; level n has n rungs and the top vertex."""
    if depth < 2:
        raise ValueError(f"ladder needs depth >= 2, got {depth}")
    levels, maps, _ = ladder_levels(depth)
    return build_system("ladder", levels, maps)


def ladder_arc(depth: int, n: int) -> list[str]:
    """The reduced arc from a to c at level n, which skips the top vertex."""
    _, _, arcs = ladder_levels(depth)
    return arcs[n - 1]


def ladder_spelled_arc(depth: int, n: int) -> list[str]:
    """The arc from a through the top vertex to c, spelled at level n."""
    arc = ladder_arc(depth, n)
    junction = arc.index(f"j{n}")
    return arc[: junction + 1] + [LADDER_TOP] + arc[junction:]


# --- Worked two-level example ----------------------------------------------

FIGURE2_LEVEL1_EDGES = [("A", "B"), ("B", "C"), ("A", "Y"), ("B", "Y")]
FIGURE2_LEVEL2_EDGES = [
    ("D", "E"), ("E", "G"), ("G", "H"), ("H", "K"), ("K", "L"), ("L", "N"),
    ("N", "P"), ("P", "O"), ("O", "M"), ("M", "J"), ("J", "I"), ("I", "G"),
    ("G", "F"), ("F", "D"), ("Q", "S"), ("S", "R"), ("S", "T"), ("T", "I"),
    ("D", "U"), ("U", "V"), ("V", "W"), ("W", "X"), ("X", "Z"), ("Z", "H"),
]
FIGURE2_MAP = {
    "D": "A", "H": "B", "I": "B", "N": "C", "O": "C", "Q": "C", "R": "C", "W": "Y",
    "E": "A-B:1", "G": "A-B:2", "F": "A-B:1",
    "K": "B-C:1", "L": "B-C:2", "P": "B-C:2", "M": "B-C:2", "J": "B-C:1", "S": "B-C:2", "T": "B-C:1",
    "U": "A-Y:1", "V": "A-Y:2", "X": "B-Y:2", "Z": "B-Y:1",
}


def figure2_fixture() -> InverseSystem:
    """Two levels reconstructed around D->A, H,I->B and N,O->C."""
    levels = [
        _level(1, FIGURE2_LEVEL1_EDGES, 3, "A"),
        _level(2, FIGURE2_LEVEL2_EDGES, 2, "D"),
    ]
    assignment: dict[str, SubdividedVertex] = {}
    for vertex, target in FIGURE2_MAP.items():
        if ":" in target:
            edge, index = target.split(":")
            u, v = edge.split("-")
            assignment[vertex] = interior_point(u, v, int(index), 3)
        else:
            assignment[vertex] = Original(target)
    return build_system("figure2", levels, [BondingMap(2, 1, assignment)])


BUILTIN_SPACES = ("interval", "hawaiian", "ladder", "fig2")


def builtin(name: str, depth: int, subdiv: int = 2) -> InverseSystem:
    """Look up a builtin generator by its command-line name."""
    match name:
        case "interval":
            return interval(depth, subdiv)
        case "hawaiian":
            return hawaiian(depth)
        case "ladder":
            return ladder(depth)
        case "fig2" | "figure2":
            return figure2_fixture()
    raise KeyError(f"unknown builtin space {name!r}; choose from {', '.join(BUILTIN_SPACES)}")
