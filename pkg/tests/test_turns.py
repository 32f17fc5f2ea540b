from oracles import RoseOracle
from traintracks.graph import trivial
from traintracks.morphism import GosMorphism
from traintracks.turns import (degenerate_turns, illegal_turn_closure, image_turn, make_turn,
                               map_profile, preimage_turns, special_turns)

from conftest import ROSE6


def _pairs(turns):
    return {(T.incoming, T.outgoing) for T in turns}


def test_rose6_illegal_turns(rose6):
    G, f = rose6
    cl = illegal_turn_closure(G, f)
    assert cl.t0 == 1
    assert _pairs(cl.nondegenerate) == {("B", "c"), ("B", "e"), ("C", "e"),
                                        ("b", "D"), ("b", "F"), ("d", "F")}
    # the degenerate turns are the other twelve members of the closure
    assert len(cl.illegal) == 6 + len(degenerate_turns(G)) == 18


def test_degeneration_times_match_forward_iteration(rose6):
    G, f = rose6
    cl = illegal_turn_closure(G, f)
    o = RoseOracle(ROSE6)
    for T in cl.nondegenerate:
        assert cl.degeneration_time(T) == o.degeneration_time(T.incoming, T.outgoing)


def test_turn_canonical_form_is_orientation_free(rose6):
    G, _ = rose6
    pt = G.terminus("a")
    T = make_turn("B", trivial(pt), "c")
    assert T == make_turn("C", trivial(pt), "b")
    assert T.reversed().canonical() == T


def test_preimage_image_adjunction(rose6):
    G, f = rose6
    pt = G.terminus("a")
    for a in G.oriented_edges():
        for b in G.oriented_edges():
            T = make_turn(a, trivial(pt), b)
            for S in preimage_turns(G, f, T):
                assert image_turn(f, S) == T


def test_profile_of_rose6(rose6):
    G, f = rose6
    prof = map_profile(G, f)
    assert prof.is_train_track and prof.is_expanding and prof.t_exp == 2


def test_non_train_track_map_is_reported():
    f = GosMorphism.rose({"a": "bA", "b": "ab"})
    prof = map_profile(f.G, f)
    assert not prof.is_train_track
    assert prof.illegal_image_turns


def test_special_turns_grow_with_power(fibonacci):
    G, f = fibonacci
    s1, s2 = special_turns(G, f, 1), special_turns(G, f, 2)
    assert len(s1) == 7
    assert s1 <= s2 | s1


def test_circle_has_no_illegal_turns(circle):
    G, f = circle
    cl = illegal_turn_closure(G, f)
    assert cl.t0 == 0 and cl.nondegenerate == []
