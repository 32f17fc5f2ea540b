import itertools

import pytest

from traintracks.document import parse_document
from traintracks.errors import HypothesisViolation
from traintracks.graph import free_reduce
from traintracks.groupoid import (analyze_vertex_map, connecting_preimage, fold_words,
                                  is_surjective_on_pi1)
from traintracks.morphism import GosMorphism
from traintracks.system import validate_system


def _two_vertex_system(x_image="x x", y_image="y"):
    """A vertex space with a loop x at p and an edge y from p to q."""
    return parse_document({
        "vertex_spaces": {"X": {"vertices": ["p", "q"],
                                "edges": {"x": ["p", "p"], "y": ["p", "q"]}}},
        "top_edges": {"b": [["X", "q"], ["X", "p"]]},
        "morphism": {"vertex_maps": {"X": {"vertices": {"p": "p", "q": "q"},
                                           "edges": {"x": x_image, "y": y_image}}},
                     "edge_maps": {"b": "b {X: x y} b"}}})


def test_connecting_preimage_round_trip():
    doc = _two_vertex_system()
    G, f = doc.G, doc.f
    sp = G.space("X")
    vm = f.vertex_map("X")
    for start in sp.vertices:
        for chi in sp.all_paths(start, 4):
            psi = vm.apply(chi)
            assert connecting_preimage(G, f, "X", psi, chi.start, chi.end) == chi


def test_connecting_preimage_misses_non_images():
    doc = _two_vertex_system()
    G, f = doc.G, doc.f
    sp = G.space("X")
    # x has no preimage under x -> x x
    assert connecting_preimage(G, f, "X", sp.path("p", ["x"]), "p", "p") is None


def test_injectivity_by_folding():
    doc = _two_vertex_system()
    fac = analyze_vertex_map(doc.G, doc.f, "X")
    assert fac.injective and fac.source_betti == fac.folded_betti == 1


def test_collapsing_vertex_map_is_flagged():
    doc = parse_document({
        "vertex_spaces": {"X": {"vertices": ["p"], "edges": {"x": ["p", "p"], "y": ["p", "p"]}}},
        "top_edges": {"b": [["X", "p"], ["X", "p"]]},
        "morphism": {"vertex_maps": {"X": {"edges": {"x": "x", "y": "x"}}},
                     "edge_maps": {"b": "b {X: y} b"}}})
    fac = analyze_vertex_map(doc.G, doc.f, "X")
    assert not fac.injective and fac.folded_betti == 1
    rep = validate_system(doc.G, doc.f)
    assert "injectivity" in rep.problems
    with pytest.raises(HypothesisViolation):
        connecting_preimage(doc.G, doc.f, "X", doc.G.space("X").path("p", ["x"]), "p", "p")


def _brute_force_injective(sp, vm, max_len):
    """No two distinct reduced closed loops at p up to max_len map to the same word."""
    seen = {}
    for lp in sp.all_paths("p", max_len):
        if lp.end != "p":
            continue
        img = free_reduce(vm.apply(lp).steps)
        if img in seen and seen[img] != lp.steps:
            return False
        seen[img] = lp.steps
    return True


@pytest.mark.parametrize("images, expected", [
    ({"x": "x", "y": "y"}, True),
    ({"x": "x y", "y": "y"}, True),
    ({"x": "y", "y": "y"}, False),
    ({"x": "x y X", "y": "x y Y X"}, False),
])
def test_folding_agrees_with_brute_force(images, expected):
    doc = parse_document({
        "vertex_spaces": {"X": {"vertices": ["p"], "edges": {"x": ["p", "p"], "y": ["p", "p"]}}},
        "top_edges": {"b": [["X", "p"], ["X", "p"]]},
        "morphism": {"vertex_maps": {"X": {"edges": images}},
                     "edge_maps": {"b": "b {X: x} b"}}})
    sp = doc.G.space("X")
    fac = analyze_vertex_map(doc.G, doc.f, "X")
    assert fac.injective is expected
    assert _brute_force_injective(sp, doc.f.vertex_map("X"), 6) is expected


def test_folding_never_increases_betti():
    # a wedge of k closed words has rank k before folding
    pool = ["ab", "aB", "aa", "ba", "abA", "bAB", "aba"]
    for k in (1, 2, 3):
        for words in itertools.combinations(pool, k):
            F, _ = fold_words([list(w) for w in words])
            assert F.betti() <= k


def test_surjectivity_on_roses():
    f = GosMorphism.rose({"a": "ab", "b": "a"})
    assert is_surjective_on_pi1(f.G, f)
    # a -> a^2 is not onto
    f = GosMorphism.rose({"a": "aa", "b": "b"})
    assert not is_surjective_on_pi1(f.G, f)


def test_circle_sample_is_not_surjective(circle):
    G, f = circle
    assert validate_system(G, f).ok
    assert not is_surjective_on_pi1(G, f)
