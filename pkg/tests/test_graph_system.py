"""Characterization tests for wordseq/graph_system.py.

Locks in the system-definition format, the validation messages (always
prefixed `LEVEL n:`), line numbers on parse errors and composed images.
"""

import pytest

from wordseq.graph_system import (
    Interior,
    Original,
    SystemDefinitionError,
    canonical_edge,
    dump_system,
    interior_point,
    load_system,
    read_system_file,
    star_neighbors,
)
from wordseq.spaces import builtin, figure2_fixture, interval

TINY = """\
system tiny
# a single edge, halved once
level 1
vertices a b
edges a-b
subdiv 2
basepoint a
level 2
vertices a m b
edges a-m m-b
subdiv 2
basepoint a
map 1
a -> a
m -> a-b:1
b -> b
"""


def test_load_tiny_system():
    system = load_system(TINY)
    assert system.name == "tiny"
    assert system.depth == 2
    assert system.level(2).vertices == {"a", "m", "b"}
    assert system.image(1, "m") == Interior(("a", "b"), 1)
    assert system.image(1, "b") == Original("b")


def test_dump_then_load_gives_same_system():
    system = figure2_fixture()
    assert load_system(dump_system(system)) == system


@pytest.mark.parametrize("depth", range(2, 9))
@pytest.mark.parametrize("name", ["interval", "hawaiian", "ladder"])
def test_dump_then_load_builtin_spaces(name, depth):
    system = builtin(name, depth)
    loaded = load_system(dump_system(system))
    assert loaded == system
    assert loaded.depth == depth


def test_read_system_file(tmp_path):
    path = tmp_path / "tiny.sys"
    path.write_text(TINY)
    assert read_system_file(str(path)).name == "tiny"


def test_interior_point_is_canonicalized():
    # Point 1 of 3 from B towards A is point 2 from A.
    assert interior_point("B", "A", 1, 3) == Interior(("A", "B"), 2)
    assert canonical_edge("B", "A") == ("A", "B")


def test_star_neighbors():
    system = figure2_fixture()
    assert star_neighbors(system, 1, "B") == {"A", "C", "Y"}


def test_unknown_level_and_vertex_raise_key_error():
    system = load_system(TINY)
    with pytest.raises(KeyError):
        system.level(3)
    with pytest.raises(KeyError):
        system.level(1).neighbors("zz")


# --- Composed images -------------------------------------------------------


def test_composed_images_drop_interior_points():
    system = interval(3)
    images = system.composed_images(3, 1)
    # v0..v4 at level 3; only v0, v2 and v4 survive to level 2, and of those
    # only v0 and v4 are level-1 vertices.
    assert images == {"v0": "v0", "v1": None, "v2": None, "v3": None, "v4": "v1"}


def test_composed_image_unknown_vertex():
    with pytest.raises(KeyError):
        interval(3).composed_image(3, 1, "v9")


# --- Errors ----------------------------------------------------------------


def test_missing_header_reports_line_one():
    with pytest.raises(SystemDefinitionError) as excinfo:
        load_system(TINY.replace("system tiny\n", ""))
    assert excinfo.value.line == 1


def test_malformed_edge_reports_its_line():
    with pytest.raises(SystemDefinitionError) as excinfo:
        load_system(TINY.replace("edges a-m m-b", "edges a-m-b"))
    assert excinfo.value.line == 10
    assert str(excinfo.value).startswith("line 10:")


def test_disconnected_level_is_rejected():
    text = TINY.replace("vertices a b\n", "vertices a b c\n")
    with pytest.raises(SystemDefinitionError) as excinfo:
        load_system(text)
    assert "LEVEL 1: graph is not connected" in excinfo.value.errors


def test_non_simplicial_map_lists_every_violation():
    with pytest.raises(SystemDefinitionError) as excinfo:
        load_system(TINY.replace("m -> a-b:1", "m -> a"))
    errors = excinfo.value.errors
    assert all(e.startswith("LEVEL 2:") for e in errors)
    assert any("edge {a,m} does not map onto an edge of X*_1" in e for e in errors)
    assert any("is not covered by f_1" in e for e in errors)


def test_basepoint_must_map_to_basepoint():
    text = TINY.replace("a -> a\n", "a -> b\n").replace("b -> b\n", "b -> a\n")
    with pytest.raises(SystemDefinitionError) as excinfo:
        load_system(text)
    assert any("basepoint a maps to b" in e for e in excinfo.value.errors)


def test_missing_map_section():
    text = TINY.split("map 1")[0]
    with pytest.raises(SystemDefinitionError, match="missing 'map 1'"):
        load_system(text)


def test_vertex_mapped_twice():
    with pytest.raises(SystemDefinitionError, match="mapped twice"):
        load_system(TINY + "b -> b\n")
