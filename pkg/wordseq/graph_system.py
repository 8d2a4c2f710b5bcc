import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx


"""
Inverse systems of finite graphs X_1 <- X_2 <- ... <- X_N.

Each level carries a subdivision factor d_n; the bonding map f_n sends every
vertex of X_{n+1} to a vertex of the subdivided graph X*_n, either an
original vertex or an interior point of an edge. A system is only handed out
after `validate_system` found nothing to complain about.

Vertex ids are opaque tokens that only need to be unique within their level;
lookups always pass the level along with the id.
"""

# "system <name>", "level <n>", "map <n>" headers
HEADER_RE = re.compile(r"^(system|level|map)\s+(\S+)$")
# "vertices a b c", "edges a-b b-c", "subdiv 2", "basepoint a"
FIELD_RE = re.compile(r"^(vertices|edges|subdiv|basepoint)\b\s*(.*)$")
# "<id> -> <id>" or "<id> -> <u>-<v>:<i>"
MAP_LINE_RE = re.compile(r"^(\S+)\s*->\s*(\S+)$")
INTERIOR_RE = re.compile(r"^([^\s:-]+)-([^\s:-]+):(\d+)$")
VERTEX_ID_RE = re.compile(r"^[A-Za-z0-9_.']+$")


class SystemDefinitionError(ValueError):
    """A system document could not be parsed or failed validation."""

    def __init__(self, message: str, errors: list[str] | None = None, line: int | None = None):
        super().__init__(message)
        self.errors = errors or [message]
        self.line = line


@dataclass(frozen=True)
class Original:
    vertex: str

    def __str__(self):
        return self.vertex


@dataclass(frozen=True)
class Interior:
    """Point number `index` on the canonical edge, counted from edge[0]."""

    edge: tuple[str, str]
    index: int

    def __str__(self):
        return f"{self.edge[0]}-{self.edge[1]}:{self.index}"


SubdividedVertex = Original | Interior


def canonical_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def interior_point(u: str, v: str, index: int, subdiv: int) -> Interior:
    """Interior point `index` steps from u along edge {u,v}, in canonical form."""
    if u < v:
        return Interior((u, v), index)
    return Interior((v, u), subdiv - index)


@dataclass(frozen=True)
class GraphLevel:
    level_index: int
    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]
    subdiv: int
    basepoint: str
    _adjacency: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adjacency: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adjacency.setdefault(u, set()).add(v)
            adjacency.setdefault(v, set()).add(u)
        object.__setattr__(
            self, "_adjacency", {v: frozenset(ns) for v, ns in adjacency.items()}
        )

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self._adjacency[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r} at level {self.level_index}") from None

    def has_edge(self, u: str, v: str) -> bool:
        return canonical_edge(u, v) in self.edges

    def as_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def subdivided_edges(self) -> set[frozenset]:
        """Edge set of X*_n, each edge a frozenset of two subdivided vertices."""
        result = set()
        d = self.subdiv
        for u, v in self.edges:
            chain = [Original(u)] + [Interior((u, v), i) for i in range(1, d)] + [Original(v)]
            for a, b in zip(chain, chain[1:]):
                result.add(frozenset((a, b)))
        return result


@dataclass(frozen=True)
class BondingMap:
    """f_n : V_{n+1} -> X*_n."""

    source: int
    target: int
    assignment: Mapping[str, SubdividedVertex]

    def __getitem__(self, vertex: str) -> SubdividedVertex:
        try:
            return self.assignment[vertex]
        except KeyError:
            raise KeyError(f"unknown vertex {vertex!r} at level {self.source}") from None


@dataclass(frozen=True)
class InverseSystem:
    name: str
    levels: tuple[GraphLevel, ...]
    maps: tuple[BondingMap, ...]
    _composed: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> GraphLevel:
        if not 1 <= n <= self.depth:
            raise KeyError(f"level {n} outside 1..{self.depth} of system {self.name!r}")
        return self.levels[n - 1]

    def basepoint(self, n: int) -> str:
        return self.level(n).basepoint

    def bonding(self, n: int) -> BondingMap:
        """Return f_n, defined on the vertices of level n+1."""
        if not 1 <= n < self.depth:
            raise KeyError(f"no bonding map f_{n} in a system of depth {self.depth}")
        return self.maps[n - 1]

    def image(self, n: int, vertex: str) -> SubdividedVertex:
        return self.bonding(n)[vertex]

    def composed_images(self, k: int, n: int) -> dict[str, str | None]:
        """Image of every level-k vertex under the composite down to level n.

        A vertex maps to a level-n vertex id, or to None when some
        intermediate map sends it into the interior of an edge.
        """
        key = (k, n)
        if key not in self._composed:
            if n > k:
                raise KeyError(f"cannot project level {k} up to level {n}")
            if n == k:
                table = {v: v for v in self.level(k).vertices}
            else:
                lower = self.composed_images(k - 1, n)
                f = self.bonding(k - 1)
                table = {}
                for v in self.level(k).vertices:
                    img = f[v]
                    table[v] = lower[img.vertex] if isinstance(img, Original) else None
            self._composed[key] = table
        return self._composed[key]

    def composed_image(self, k: int, n: int, vertex: str) -> str | None:
        table = self.composed_images(k, n)
        if vertex not in table:
            raise KeyError(f"unknown vertex {vertex!r} at level {k}")
        return table[vertex]


def star_neighbors(system: InverseSystem, n: int, v: str) -> set[str]:
    """All u with {u, v} an edge of X_n."""
    return set(system.level(n).neighbors(v))


# --- Validation ------------------------------------------------------------


def validate_level(level: GraphLevel) -> list[str]:
    n = level.level_index
    errors = []
    if level.subdiv < 2:
        errors.append(f"LEVEL {n}: subdivision factor must be at least 2, got {level.subdiv}")
    if not level.vertices:
        errors.append(f"LEVEL {n}: no vertices")
        return errors
    if level.basepoint not in level.vertices:
        errors.append(f"LEVEL {n}: basepoint {level.basepoint} is not a vertex")
    for u, v in sorted(level.edges):
        if u == v:
            errors.append(f"LEVEL {n}: looping edge at {u}")
        for w in (u, v):
            if w not in level.vertices:
                errors.append(f"LEVEL {n}: edge {{{u},{v}}} uses unknown vertex {w}")
    known = all(u in level.vertices and v in level.vertices for u, v in level.edges)
    if known and not nx.is_connected(level.as_networkx()):
        errors.append(f"LEVEL {n}: graph is not connected")
    return errors


def _check_target(point: SubdividedVertex, lower: GraphLevel) -> str | None:
    if isinstance(point, Original):
        if point.vertex not in lower.vertices:
            return f"image {point} is not a vertex of X_{lower.level_index}"
        return None
    if point.edge not in lower.edges:
        return f"image {point} lies on an edge that X_{lower.level_index} does not have"
    if not 1 <= point.index <= lower.subdiv - 1:
        return f"image {point} has index outside 1..{lower.subdiv - 1}"
    return None


def validate_map(bonding: BondingMap, upper: GraphLevel, lower: GraphLevel) -> list[str]:
    src = upper.level_index
    tgt = lower.level_index
    errors = []
    for v in sorted(upper.vertices):
        if v not in bonding.assignment:
            errors.append(f"LEVEL {src}: vertex {v} has no image under f_{tgt}")
    for v in sorted(bonding.assignment):
        if v not in upper.vertices:
            errors.append(f"LEVEL {src}: f_{tgt} assigns unknown vertex {v}")
            continue
        problem = _check_target(bonding.assignment[v], lower)
        if problem:
            errors.append(f"LEVEL {src}: vertex {v}: {problem}")
    if errors:
        return errors

    star_edges = lower.subdivided_edges()
    covered = set()
    for u, v in sorted(upper.edges):
        pair = frozenset((bonding.assignment[u], bonding.assignment[v]))
        if pair in star_edges:
            covered.add(pair)
        else:
            errors.append(
                f"LEVEL {src}: edge {{{u},{v}}} does not map onto an edge of X*_{tgt}"
                f" (images {bonding.assignment[u]} and {bonding.assignment[v]})"
            )
    for missing in sorted(star_edges - covered, key=lambda e: sorted(map(str, e))):
        a, b = sorted(map(str, missing))
        errors.append(f"LEVEL {src}: edge {{{a},{b}}} of X*_{tgt} is not covered by f_{tgt}")

    if bonding.assignment.get(upper.basepoint) != Original(lower.basepoint):
        errors.append(
            f"LEVEL {src}: basepoint {upper.basepoint} maps to "
            f"{bonding.assignment.get(upper.basepoint)}, expected {lower.basepoint}"
        )
    return errors


def validate_system(system: InverseSystem) -> list[str]:
    """Return one message per violated invariant; empty means valid."""
    errors = []
    if system.depth < 2:
        errors.append(f"LEVEL {system.depth}: a system needs at least two levels")
    for i, level in enumerate(system.levels, start=1):
        if level.level_index != i:
            errors.append(f"LEVEL {level.level_index}: expected level index {i}")
        errors.extend(validate_level(level))
    if len(system.maps) != max(system.depth - 1, 0):
        errors.append(
            f"LEVEL {system.depth}: expected {system.depth - 1} bonding maps, got {len(system.maps)}"
        )
    if errors:
        return errors
    for n, bonding in enumerate(system.maps, start=1):
        if bonding.source != n + 1 or bonding.target != n:
            errors.append(f"LEVEL {n + 1}: map {n} connects levels {bonding.source}->{bonding.target}")
            continue
        errors.extend(validate_map(bonding, system.levels[n], system.levels[n - 1]))
    return errors


def build_system(
    name: str,
    levels: Iterable[GraphLevel],
    maps: Iterable[BondingMap],
) -> InverseSystem:
    """Assemble and validate a system.

    Raises:
        SystemDefinitionError: carrying every `LEVEL n:` violation found.
    """
    system = InverseSystem(name, tuple(levels), tuple(maps))
    errors = validate_system(system)
    if errors:
        raise SystemDefinitionError(f"system {name!r} is invalid: {errors[0]}", errors=errors)
    return system


# --- Text format -----------------------------------------------------------


def _parse_edge(token: str, lineno: int) -> tuple[str, str]:
    parts = token.split("-")
    if len(parts) != 2 or not all(VERTEX_ID_RE.match(p) for p in parts):
        raise SystemDefinitionError(f"line {lineno}: malformed edge {token!r}", line=lineno)
    return parts[0], parts[1]


def _parse_image(token: str, lower: dict, lineno: int) -> SubdividedVertex:
    match = INTERIOR_RE.match(token)
    if match:
        u, v, i = match.group(1), match.group(2), int(match.group(3))
        return interior_point(u, v, i, lower["subdiv"])
    if not VERTEX_ID_RE.match(token):
        raise SystemDefinitionError(f"line {lineno}: malformed image {token!r}", line=lineno)
    return Original(token)


def load_system(text: str) -> InverseSystem:
    """Parse a system-definition document and validate it.

    Raises:
        SystemDefinitionError: with a line number for syntax problems, or
            with the list of `LEVEL n:` violations for invalid systems.
    """
    name = None
    raw_levels: dict[int, dict] = {}
    raw_maps: dict[int, list[tuple[int, str, str]]] = {}
    current_level = None
    current_map = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = HEADER_RE.match(line)
        if header:
            kind, value = header.groups()
            if kind == "system":
                name = value
                continue
            try:
                index = int(value)
            except ValueError:
                raise SystemDefinitionError(
                    f"line {lineno}: {kind} index must be an integer, got {value!r}", line=lineno
                ) from None
            if kind == "level":
                if index in raw_levels:
                    raise SystemDefinitionError(f"line {lineno}: level {index} defined twice", line=lineno)
                raw_levels[index] = {"vertices": [], "edges": [], "subdiv": None, "basepoint": None}
                current_level, current_map = index, None
            else:
                if index in raw_maps:
                    raise SystemDefinitionError(f"line {lineno}: map {index} defined twice", line=lineno)
                raw_maps[index] = []
                current_level, current_map = None, index
            continue

        if current_map is not None:
            entry = MAP_LINE_RE.match(line)
            if not entry:
                raise SystemDefinitionError(f"line {lineno}: expected '<id> -> <image>'", line=lineno)
            raw_maps[current_map].append((lineno, entry.group(1), entry.group(2)))
            continue

        fields = FIELD_RE.match(line)
        if not fields or current_level is None:
            raise SystemDefinitionError(f"line {lineno}: unexpected line {line!r}", line=lineno)
        key, rest = fields.groups()
        spec = raw_levels[current_level]
        tokens = rest.split()
        if key == "vertices":
            for token in tokens:
                if not VERTEX_ID_RE.match(token):
                    raise SystemDefinitionError(f"line {lineno}: malformed vertex id {token!r}", line=lineno)
            spec["vertices"].extend(tokens)
        elif key == "edges":
            spec["edges"].extend((lineno, _parse_edge(t, lineno)) for t in tokens)
        elif key == "subdiv":
            if len(tokens) != 1 or not tokens[0].isdigit():
                raise SystemDefinitionError(f"line {lineno}: subdiv expects one integer", line=lineno)
            spec["subdiv"] = int(tokens[0])
        else:
            if len(tokens) != 1:
                raise SystemDefinitionError(f"line {lineno}: basepoint expects one vertex id", line=lineno)
            spec["basepoint"] = tokens[0]

    if name is None:
        raise SystemDefinitionError("line 1: missing 'system <name>' header", line=1)

    levels = []
    for i, index in enumerate(sorted(raw_levels), start=1):
        spec = raw_levels[index]
        if index != i:
            raise SystemDefinitionError(f"LEVEL {index}: level indices must run 1..N without gaps")
        if spec["subdiv"] is None or spec["basepoint"] is None:
            raise SystemDefinitionError(f"LEVEL {index}: subdiv and basepoint are required")
        edges = set()
        for lineno, (u, v) in spec["edges"]:
            edge = canonical_edge(u, v)
            if edge in edges:
                raise SystemDefinitionError(
                    f"line {lineno}: repeated edge {{{u},{v}}} at level {index}", line=lineno
                )
            edges.add(edge)
        levels.append(
            GraphLevel(index, frozenset(spec["vertices"]), frozenset(edges), spec["subdiv"], spec["basepoint"])
        )

    maps = []
    for n in range(1, len(levels)):
        if n not in raw_maps:
            raise SystemDefinitionError(f"LEVEL {n + 1}: missing 'map {n}' section")
        assignment = {}
        for lineno, source, target in raw_maps[n]:
            if source in assignment:
                raise SystemDefinitionError(f"line {lineno}: vertex {source} mapped twice", line=lineno)
            assignment[source] = _parse_image(target, raw_levels[n], lineno)
        maps.append(BondingMap(n + 1, n, assignment))
    extra = sorted(set(raw_maps) - set(range(1, len(levels))))
    if extra:
        raise SystemDefinitionError(f"LEVEL {extra[0]}: map {extra[0]} has no level {extra[0] + 1} to come from")

    return build_system(name, levels, maps)


def dump_system(system: InverseSystem) -> str:
    """Serialize to the line-oriented format `load_system` reads."""
    lines = [f"system {system.name}"]
    for level in system.levels:
        lines.append(f"level {level.level_index}")
        lines.append("vertices " + " ".join(sorted(level.vertices)))
        lines.append("edges " + " ".join(f"{u}-{v}" for u, v in sorted(level.edges)))
        lines.append(f"subdiv {level.subdiv}")
        lines.append(f"basepoint {level.basepoint}")
    for bonding in system.maps:
        lines.append(f"map {bonding.target}")
        for v in sorted(bonding.assignment):
            lines.append(f"{v} -> {bonding.assignment[v]}")
    return "\n".join(lines) + "\n"


def read_system_file(path: str) -> InverseSystem:
    with open(path, encoding="utf-8") as f:
        return load_system(f.read())
