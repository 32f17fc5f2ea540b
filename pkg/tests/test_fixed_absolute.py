import numpy as np
import pytest

from traintracks.absolute import (EXPONENTIAL, POLYNOMIAL, primitivity_witness,
                                  to_graph_of_spaces, transition_analysis, whitehead_graphs)
from traintracks.errors import DomainError
from traintracks.fixed import (apply_power, build_xstar, classify_conjugacy_class,
                               fixed_subgroup_generators, format_word, subgroup_contains,
                               twisted_lift_fixes)
from traintracks.graph import free_reduce
from traintracks.morphism import GosMorphism
from traintracks.paths import parse_loop
from traintracks.system import validate_system
from traintracks.turns import map_profile

from conftest import SLOW_INP_MAP


def test_rose6_transition_matrix(rose6):
    _, f = rose6
    ta = transition_analysis(f)
    assert ta.column("a") == {"a": 1, "b": 1, "c": 2, "d": 2, "e": 2, "f": 2}
    assert ta.column("b") == {"a": 1}
    assert ta.primitive and ta.witness == 2
    assert set(ta.growth.values()) == {EXPONENTIAL}


def test_primitivity_witness_is_least():
    M = np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
    k = primitivity_witness(M)
    assert k is not None
    assert (np.linalg.matrix_power(M, k) > 0).all()
    assert not (np.linalg.matrix_power(M, k - 1) > 0).all()
    assert primitivity_witness(np.eye(2, dtype=int)) is None


def test_growth_split_and_collapse():
    f = GosMorphism.rose({"a": "a", "b": "bab"})
    ta = transition_analysis(f)
    assert ta.growth == {"a": POLYNOMIAL, "b": EXPONENTIAL}
    H, g = to_graph_of_spaces(f)
    assert sorted(H.top_edges) == ["b"] and sorted(H.spaces["v"].edges) == ["a"]
    assert validate_system(H, g).ok
    prof = map_profile(H, g)
    assert prof.is_train_track and prof.is_expanding


def test_collapse_needs_an_exponential_edge():
    f = GosMorphism.rose({"a": "a", "b": "b"})
    with pytest.raises(DomainError):
        to_graph_of_spaces(f)


def test_rose6_whitehead_graph_is_connected(rose6):
    _, f = rose6
    wg = whitehead_graphs(f)
    assert list(wg) == ["v"]
    assert wg["v"].connected and len(wg["v"].arcs) == 22


def test_whitehead_needs_absolute_map(circle):
    _, f = circle
    with pytest.raises(DomainError):
        whitehead_graphs(f)


def test_rose6_xstar_and_generators(rose6):
    _, f = rose6
    xs = build_xstar(f)
    assert xs.power_used == 1
    assert [s.edge for s in xs.subdivisions] == ["a"]
    assert xs.h_word(("eta3",)) == ("C", "e")
    fs = fixed_subgroup_generators(xs, "v")
    assert sorted(format_word(g) for g in fs.generators) == ["C e", "d F"]
    for g in fs.generators:
        assert apply_power(f, g, 1) == g
    assert fs.contains(("C", "e", "d", "F"))
    assert not fs.contains(("a",))


def test_fixed_point_not_a_vertex(rose6):
    _, f = rose6
    xs = build_xstar(f)
    with pytest.raises(DomainError):
        fixed_subgroup_generators(xs, "a@1")


def test_subgroup_membership():
    gens = [("a", "b"), ("b", "b")]
    assert subgroup_contains(gens, ("a", "b", "b", "b"))
    assert subgroup_contains(gens, ())
    assert not subgroup_contains(gens, ("a",))


def test_interior_subdivision_generators_are_fixed():
    f = GosMorphism.rose(SLOW_INP_MAP)
    xs = build_xstar(f)
    assert xs.power_used == 3 and xs.subdivisions
    for g in fixed_subgroup_generators(xs, "v").generators:
        assert apply_power(f, g, 3) == g


def test_twisted_lift_with_trivial_twist(rose6):
    _, f = rose6
    xs = build_xstar(f)
    assert twisted_lift_fixes(xs, (), ("C", "e"))
    # conjugating by a fixed word still fixes fixed words
    assert twisted_lift_fixes(xs, ("C", "e"), ("C", "e"))
    assert not twisted_lift_fixes(xs, (), ("a",))


@pytest.mark.parametrize("loop, kind, fixed", [
    ("C e", "inp-concatenation", True),
    ("C e d F", "inp-concatenation", True),
    ("a", "not-periodic", False),
    ("b C e", "not-periodic", False),
])
def test_classify_rose6_loops(rose6, loop, kind, fixed):
    G, f = rose6
    cert = classify_conjugacy_class(G, f, parse_loop(G, loop))
    assert (cert.kind, cert.fixed) == (kind, fixed)
    if fixed:
        img = f.reduced_image(parse_loop(G, cert.path))
        assert img.same_cycle(parse_loop(G, cert.path))


def test_classify_circle_loops(circle):
    G, f = circle
    assert classify_conjugacy_class(G, f, parse_loop(G, "b")).kind == "not-periodic"
    cert = classify_conjugacy_class(G, f, parse_loop(G, "{X: x}"))
    assert cert.kind == "vertex-space" and cert.periodic


def test_apply_power_reduces(rose6):
    _, f = rose6
    w = apply_power(f, ("b", "B"), 1)
    assert w == ()
    assert apply_power(f, ("b",), 2) == free_reduce(f.edge_image("a").edges)
