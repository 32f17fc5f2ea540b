"""Property-based checks over a pool of expanding rose automorphisms.

The maps come from a fixed pool (so cached per-map data is reused) and the
paths are generated freely.
"""

from functools import lru_cache

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from traintracks.bounds import compute_bounds
from traintracks.graph import inverse, trivial
from traintracks.inp import compute_inps, decay_check
from traintracks.morphism import GosMorphism
from traintracks.paths import ZeroPath, make_path, reduce_path, vertex_prolongation
from traintracks.turns import illegal_turn_closure, image_turn, make_turn, preimage_turns
from traintracks.vsets import enumerate_v, v_membership

from conftest import ROSE6, SLOW_INP_MAP, expanding_roses

POOL = [ROSE6, SLOW_INP_MAP, {"a": "ab", "b": "a"}] + expanding_roses(11, 17)
pool_index = st.integers(min_value=0, max_value=len(POOL) - 1)


@lru_cache(maxsize=None)
def system(i):
    f = GosMorphism.rose(POOL[i])
    return f.G, f


@st.composite
def map_and_word(draw, max_len=12):
    i = draw(pool_index)
    G, f = system(i)
    letters = sorted(G.oriented_edges())
    word = draw(st.lists(st.sampled_from(letters), min_size=1, max_size=max_len))
    return i, word


def _path(G, word):
    return make_path(G, word)


def _word(p):
    return [] if isinstance(p, ZeroPath) else list(p.edges)


@settings(max_examples=300)
@given(map_and_word())
def test_reduction_is_idempotent_and_commutes_with_reversal(data):
    i, word = data
    G, _ = system(i)
    p = _path(G, word)
    r = reduce_path(G, p)
    assert reduce_path(G, r) == r
    rr = reduce_path(G, p.reverse())
    if isinstance(r, ZeroPath):
        assert isinstance(rr, ZeroPath)
    else:
        assert rr == r.reverse()
        assert vertex_prolongation(vertex_prolongation(r)) == vertex_prolongation(r)


@settings(max_examples=200)
@given(map_and_word(max_len=6), st.integers(1, 2), st.integers(1, 2))
def test_image_length_and_composition(data, s, t):
    i, word = data
    G, f = system(i)
    p = _path(G, word)
    assert len(f.map_path(p)) == sum(len(f.edge_image(e)) for e in p.edges)
    once = f.reduced_image(p, t)
    assume(not isinstance(once, ZeroPath))
    lhs = f.reduced_image(once, s)
    assert _word(lhs) == _word(f.reduced_image(p, s + t))


@settings(max_examples=200)
@given(pool_index)
def test_v_sets_are_monotone(i):
    G, f = system(i)
    v1 = {str(v) for v in enumerate_v(G, f, 1)}
    v2 = {str(v) for v in enumerate_v(G, f, 2)}
    assert v1 <= v2


@settings(max_examples=300)
@given(pool_index, st.data())
def test_image_preimage_adjunction(i, data):
    G, f = system(i)
    letters = sorted(G.oriented_edges())
    a = data.draw(st.sampled_from(letters))
    b = data.draw(st.sampled_from(letters))
    pt = G.terminus(a)
    S = make_turn(a, trivial(pt), b)
    T = image_turn(f, S)
    assert S in preimage_turns(G, f, T)
    for R in preimage_turns(G, f, T):
        assert image_turn(f, R) == T


@settings(max_examples=300)
@given(map_and_word())
def test_illegal_turn_count_never_increases(data):
    i, word = data
    G, f = system(i)
    p = reduce_path(G, _path(G, word))
    assume(not isinstance(p, ZeroPath))
    cl = illegal_turn_closure(G, f)
    q = f.reduced_image(p)
    after = 0 if isinstance(q, ZeroPath) else cl.ilt(q)
    assert after <= cl.ilt(p)


@settings(max_examples=60)
@given(map_and_word(max_len=6))
def test_decay_inequality(data):
    i, word = data
    G, f = system(i)
    p = reduce_path(G, _path(G, word))
    assume(not isinstance(p, ZeroPath))
    res = decay_check(G, f, p)
    assert res["lhs"] <= res["rhs"]


@settings(max_examples=200)
@given(pool_index, st.data())
def test_two_legal_branches_cancel_at_most_c(i, data):
    G, f = system(i)
    cl = illegal_turn_closure(G, f)
    letters = sorted(G.oriented_edges())

    def legal_word():
        w = [data.draw(st.sampled_from(letters))]
        for _ in range(data.draw(st.integers(0, 5))):
            nxt = [x for x in letters if x != inverse(w[-1])
                   and cl.is_legal(make_turn(w[-1], trivial(G.terminus(w[-1])), x))]
            if not nxt:
                break
            w.append(data.draw(st.sampled_from(nxt)))
        return w

    u, v = legal_word(), legal_word()
    assume(v[0] != inverse(u[-1]))
    img_u = list(f.map_path(_path(G, u)).edges)
    img_v = list(f.map_path(_path(G, v)).edges)
    k = 0
    while k < min(len(img_u), len(img_v)) and img_v[k] == inverse(img_u[-1 - k]):
        k += 1

    def touched(branch):
        # edges of the branch, counted from the tip, whose images meet the cancellation
        n, covered = 0, 0
        for e in branch:
            if covered >= k:
                break
            covered += len(f.edge_image(e))
            n += 1
        return n

    backtracking = touched(list(reversed([inverse(x) for x in u]))) + touched(v)
    assert backtracking <= compute_bounds(G, f).C


@settings(max_examples=100)
@given(pool_index)
def test_inp_prolongations_lie_in_the_domain_v_set(i):
    G, f = system(i)
    a = compute_inps(G, f)
    for r in a.records:
        assert r.verified
        assert v_membership(G, f, a.power, r.prolongation, r.tip) is not None
