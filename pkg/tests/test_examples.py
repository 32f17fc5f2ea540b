"""Small worked examples on the three sample systems, checked value by value."""

from traintracks.bounds import compute_bounds
from traintracks.graph import trivial
from traintracks.inp import LegalMarker, core_prolongation, legalize, pseudo_inp
from traintracks.paths import format_path, parse_path
from traintracks.turns import image_turn, make_turn, preimage_turns, special_turns
from traintracks.vsets import v_membership

from oracles import RoseOracle
from conftest import ROSE6


def test_rose6_iterates(rose6):
    G, f = rose6
    assert format_path(f.map_path(parse_path(G, "C e"))) == "C A a e"
    assert format_path(f.reduced_image(parse_path(G, "C e"))) == "C e"
    assert f.length("b", 2) == 10 and f.length("a", 2) == 27


def test_rose6_degenerate_images(rose6):
    G, f = rose6
    pt = G.terminus("a")
    assert image_turn(f, make_turn("C", trivial(pt), "e")).degenerate
    assert image_turn(f, make_turn("d", trivial(pt), "F")).degenerate


def test_rose6_preimages_of_a_degenerate_turn(rose6):
    G, f = rose6
    pt = G.terminus("a")
    pre = {(T.incoming, T.outgoing) for T in preimage_turns(G, f, make_turn("A", trivial(pt), "a"))}
    # {B, C, E} x {b, c, e}, with each turn and its reversal identified
    assert pre == {("B", "b"), ("B", "c"), ("B", "e"), ("C", "c"), ("C", "e"), ("E", "e")}
    assert preimage_turns(G, f, make_turn("C", trivial(pt), "e")) == set()


def test_rose6_v_set_matches_the_oracle(rose6):
    G, f = rose6
    assert RoseOracle(ROSE6).v_set(1, 6) == {"Bc", "Be", "Ce", "abF", "abFA", "bD", "bF", "dF"}
    assert v_membership(G, f, 1, parse_path(G, "C e"), 0).overlap == 1


def test_c_b_legalizes_after_one_step(rose6):
    G, f = rose6
    core = core_prolongation(G, f, pseudo_inp(G, f, parse_path(G, "C b")))
    assert isinstance(core, LegalMarker) and core.exponent == 1
    leg = legalize(G, f, parse_path(G, "C b"))
    assert leg.exponent == 1 and leg.ilt_end == 0


def test_circle_turns_and_bounds(circle):
    G, f = circle
    assert format_path(f.map_path(parse_path(G, "b"))) == "b {X: x} b"
    pt = G.terminus("b")
    assert [str(T) for T in preimage_turns(G, f, make_turn("b", trivial(pt), "B"))] == ["(b | {} | B)"]
    assert [str(T) for T in special_turns(G, f, 1)] == ["(B | {X} | B)"]
    b = compute_bounds(G, f)
    assert (b.C, b.C_1, b.t_1, b.t_hat, b.t0) == (0, 0, 1, 1, 0)


def test_fibonacci_profile(fibonacci):
    G, f = fibonacci
    assert special_turns(G, f, 1)
    a_inv = [str(T) for T in special_turns(G, f, 1) if (T.incoming, T.outgoing) == ("A", "B")]
    assert a_inv == ["(A | {} | B)"]
