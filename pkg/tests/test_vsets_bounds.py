from fractions import Fraction

import pytest

from traintracks.bounds import compute_bounds
from traintracks.errors import CapacityError, DomainError, HypothesisViolation
from traintracks.morphism import GosMorphism
from traintracks.paths import parse_path
from traintracks.vsets import enumerate_v, max_entry_length, v_membership

from conftest import ROSE6, SLOW_INP_MAP


def _names(entries):
    return sorted(str(e) for e in entries)


def test_rose6_v_of_f(rose6):
    G, f = rose6
    assert _names(enumerate_v(G, f, 1)) == ["B c", "B e", "C e", "a b F", "a b F A",
                                            "b D", "b F", "d F"]
    assert len(enumerate_v(G, f, 2)) == 11


def test_grow_and_search_agree(rose6):
    G, f = rose6
    # every branch of an entry here has at most two edges, so a cap of 3 is exhaustive
    grown = enumerate_v(G, f, 1)
    searched = enumerate_v(G, f, 1, method="search", max_branch=3)
    assert _names(grown) == _names(searched)


def test_membership_of_single_paths(rose6):
    G, f = rose6
    assert v_membership(G, f, 1, parse_path(G, "C e"), 0) is not None
    # a legal turn is never a tip
    assert v_membership(G, f, 1, parse_path(G, "a b"), 0) is None
    entry = v_membership(G, f, 1, parse_path(G, "a b F A"), 1)
    assert entry is not None and entry.overlap >= 1


def test_fibonacci_and_circle_v_sets(fibonacci, circle):
    G, f = fibonacci
    assert _names(enumerate_v(G, f, 1)) == ["A b"]
    G, f = circle
    assert enumerate_v(G, f, 1) == []


def test_power_must_be_positive(rose6):
    G, f = rose6
    with pytest.raises(DomainError):
        enumerate_v(G, f, 0)


def test_entry_cap_is_enforced():
    # a fresh map, since V-sets are memoized per map
    f = GosMorphism.rose(ROSE6)
    with pytest.raises(CapacityError) as err:
        enumerate_v(f.G, f, 2, max_entries=3)
    assert err.value.cap_name == "max_v_entries"


def test_rose6_bounds(rose6):
    G, f = rose6
    b = compute_bounds(G, f)
    assert max_entry_length(enumerate_v(G, f, 1)) == b.C == 4
    assert (b.lambda_min, b.lambda_max, b.t_exp) == (10, 27, 2)
    assert b.C_prime == Fraction(112) and b.C_1 == Fraction(112, 9)
    assert (b.t_1, b.t_hat, b.t0) == (3, 5, 1)


def test_fibonacci_bounds(fibonacci):
    G, f = fibonacci
    b = compute_bounds(G, f)
    assert (b.C, b.lambda_min, b.lambda_max, b.C_1, b.t_1, b.t_hat) == (2, 2, 3, 8, 6, 8)


def test_slow_map_bounds():
    f = GosMorphism.rose(SLOW_INP_MAP)
    b = compute_bounds(f.G, f)
    assert (b.C, b.t_exp, b.C_1, b.t_1, b.t_hat) == (2, 1, 1, 1, 3)


def test_bounds_need_an_expanding_train_track():
    f = GosMorphism.rose({"a": "a", "b": "ba"})
    with pytest.raises(HypothesisViolation):
        compute_bounds(f.G, f)
