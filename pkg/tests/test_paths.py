import pytest

from traintracks.errors import StructuralError
from traintracks.graph import GraphOfSpaces, free_reduce, inverse, is_positive
from traintracks.paths import (ClosedPath, EdgePath, ZeroPath, format_path, is_reduced,
                               make_path, parse_loop, parse_path, reduce_path)


def test_inverse_and_orientation():
    assert inverse("a") == "A"
    assert inverse("A") == "a"
    assert is_positive("a") and not is_positive("A")
    assert free_reduce("a b B c C A d".split()) == ("d",)


def test_parse_format_round_trip(rose6):
    G, _ = rose6
    for text in ["a", "C e", "a B c D e F", "A A A"]:
        assert format_path(parse_path(G, text)) == text


def test_edge_path_needs_matching_connectors():
    with pytest.raises(StructuralError):
        EdgePath(("a", "b"), ())
    with pytest.raises(StructuralError):
        EdgePath(())


def test_reverse_is_an_involution(rose6):
    G, _ = rose6
    p = parse_path(G, "a B c D")
    assert format_path(p.reverse()) == "d C b A"
    assert p.reverse().reverse() == p


def test_reduce_cancels_backtracks(rose6):
    G, _ = rose6
    assert format_path(reduce_path(G, parse_path(G, "a b B c"))) == "a c"
    assert isinstance(reduce_path(G, parse_path(G, "a b B A")), ZeroPath)
    assert is_reduced(parse_path(G, "a b c"))
    assert not is_reduced(parse_path(G, "a A"))


def test_closed_paths_reduce_cyclically(rose6):
    G, _ = rose6
    loop = parse_loop(G, "a b c A")
    red = reduce_path(G, loop)
    assert isinstance(red, ClosedPath)
    assert red.same_cycle(parse_loop(G, "b c"))


def test_unknown_edge_is_rejected(rose6):
    G, _ = rose6
    with pytest.raises(StructuralError):
        parse_path(G, "a z")


def test_omitted_connector_at_a_shared_point_is_trivial(circle):
    G, _ = circle
    p = parse_path(G, "b {X: x} b")
    assert len(p) == 2 and p.connectors[0].steps == ("x",)
    q = make_path(G, ["b", "b"])
    assert q.connectors[0].is_trivial


def test_connector_loops_cancel_only_when_trivial(circle):
    G, _ = circle
    p = parse_path(G, "b {X: x X} B")
    assert isinstance(reduce_path(G, p), ZeroPath)
    q = parse_path(G, "b {X: x} B")
    assert format_path(reduce_path(G, q)) == format_path(q)


def test_vertex_space_loop_parses_as_zero_path(circle):
    G, _ = circle
    z = parse_loop(G, "{X: x}")
    assert isinstance(z, ZeroPath) and z.residual.steps == ("x",)


def test_rose_graph_shape():
    G = GraphOfSpaces.rose("abc")
    assert G.is_absolute
    assert sorted(G.oriented_edges()) == ["A", "B", "C", "a", "b", "c"]
    assert G.structural_problems() == []
