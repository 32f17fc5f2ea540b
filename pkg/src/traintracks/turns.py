"""Turn calculus: image and preimage turns, illegal closure, special turns.

A turn ``(a | chi | b)`` is an edge ``a`` entering a vertex space, a reduced
connecting path ``chi`` in that space and an edge ``b`` leaving it.  Turns are
stored in canonical form: the smaller of the turn and its reversal
``(b^-1 | chi^-1 | a^-1)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .errors import CapacityError, HypothesisViolation
from .graph import GraphOfSpaces, LocalPath, inverse, trivial
from .groupoid import analyze_vertex_map, connecting_preimage
from .morphism import GosMorphism
from .paths import ClosedPath, EdgePath, PartialPath

DEFAULT_MAX_TURNS = 200_000


@dataclass(frozen=True)
class Turn:
    incoming: str
    connector: LocalPath
    outgoing: str

    def key(self):
        c = self.connector
        return (self.incoming, c.steps, self.outgoing, c.space, c.start, c.end)

    def __lt__(self, other: "Turn") -> bool:
        return self.key() < other.key()

    def reversed(self) -> "Turn":
        return Turn(inverse(self.outgoing), self.connector.inverse(), inverse(self.incoming))

    def canonical(self) -> "Turn":
        r = self.reversed()
        return r if r.key() < self.key() else self

    @property
    def degenerate(self) -> bool:
        return self.connector.is_trivial and self.outgoing == inverse(self.incoming)

    def as_path(self) -> EdgePath:
        return EdgePath((self.incoming, self.outgoing), (self.connector,))

    def __str__(self) -> str:
        return "(%s | {%s} | %s)" % (self.incoming, " ".join(self.connector.steps), self.outgoing)


def make_turn(a: str, chi: LocalPath, b: str) -> Turn:
    return Turn(a, chi, b).canonical()


def path_turns(p) -> list[Turn]:
    """Canonical turns used by an edge, partial or closed path (with multiplicity)."""
    if isinstance(p, PartialPath):
        p = p.core
    return [make_turn(a, c, b) for a, c, b in p.turns()]


def image_turn(f: GosMorphism, T: Turn, t: int = 1) -> Turn:
    """Turn formed by the last edge of ``f^t(in)``, the image connector and the
    first edge of ``f^t(out)``."""
    if t == 0:
        return T.canonical()
    a, b = T.incoming, T.outgoing
    return make_turn(f.last_edge(a, t), f.junction_power(a, T.connector, b, t),
                     f.first_edge(b, t))


class _EndIndex:
    def __init__(self, f: GosMorphism):
        self.by_last: dict[str, list[str]] = defaultdict(list)
        self.by_first: dict[str, list[str]] = defaultdict(list)
        for e in f.edges():
            img = f.edge_image(e)
            self.by_last[img.last].append(e)
            self.by_first[img.first].append(e)


def _index(f: GosMorphism) -> _EndIndex:
    idx = f.__dict__.get("_end_index")
    if idx is None:
        idx = f.__dict__.setdefault("_end_index", _EndIndex(f))
    return idx


def preimage_turns(G: GraphOfSpaces, f: GosMorphism, T: Turn) -> set[Turn]:
    """All turns whose image turn equals ``T``."""
    idx = _index(f)
    out: set[Turn] = set()
    for rep in {T, T.reversed()}:
        a, psi, b = rep.incoming, rep.connector, rep.outgoing
        for e in idx.by_last.get(a, ()):
            te = G.terminus(e)
            for e2 in idx.by_first.get(b, ()):
                o2 = G.origin(e2)
                if te[0] != o2[0]:
                    continue
                if f.space_image(te[0]) != psi.space:
                    continue
                target = f.image(e).trail.inverse() + psi + f.image(e2).lead.inverse()
                chi = connecting_preimage(G, f, te[0], target, te[1], o2[1])
                if chi is not None:
                    out.add(make_turn(e, chi, e2))
    return out


def degenerate_turns(G: GraphOfSpaces) -> list[Turn]:
    return sorted({make_turn(e, trivial(G.terminus(e)), inverse(e)) for e in G.oriented_edges()})


@dataclass
class TurnClosure:
    """Illegal turns with their degeneration times; ``t0`` is the maximum."""

    illegal: dict[Turn, int]
    t0: int
    levels: list[list[Turn]] = field(default_factory=list)

    def is_illegal(self, T: Turn) -> bool:
        return T.canonical() in self.illegal

    def is_legal(self, T: Turn) -> bool:
        return T.canonical() not in self.illegal

    def degeneration_time(self, T: Turn) -> Optional[int]:
        return self.illegal.get(T.canonical())

    @cached_property
    def nondegenerate(self) -> list[Turn]:
        return sorted(T for T, k in self.illegal.items() if k > 0)

    def ilt(self, p) -> int:
        """Number of illegal turns used by a path (cyclically for closed paths)."""
        if not isinstance(p, (EdgePath, PartialPath, ClosedPath)):
            return 0
        return sum(1 for T in path_turns(p) if T in self.illegal)

    def is_legal_path(self, p) -> bool:
        return self.ilt(p) == 0


def illegal_turn_closure(G: GraphOfSpaces, f: GosMorphism,
                         max_turns: int = DEFAULT_MAX_TURNS) -> TurnClosure:
    """Breadth-first preimage closure of the degenerate turns."""
    cached = f.__dict__.get("_closure")
    if cached is not None:
        return cached
    level = degenerate_turns(G)
    seen: dict[Turn, int] = {T: 0 for T in level}
    levels = [level]
    k = 0
    while level:
        k += 1
        nxt: set[Turn] = set()
        for T in level:
            for P in preimage_turns(G, f, T):
                if P not in seen:
                    nxt.add(P)
        for P in nxt:
            seen[P] = k
        if len(seen) > max_turns:
            raise CapacityError("max_turns", max_turns, "illegal turn closure")
        level = sorted(nxt)
        if level:
            levels.append(level)
    res = TurnClosure(seen, len(levels) - 1, levels)
    f.__dict__["_closure"] = res
    return res


# ------------------------------------------------------------- special turns

def _edge_turns(f: GosMorphism, e: str, t: int, memo) -> frozenset:
    key = (e, t)
    hit = memo.get(key)
    if hit is not None:
        return hit
    img = f.edge_image(e)
    if t == 1:
        res = frozenset(make_turn(a, c, b) for a, c, b in img.turns())
    else:
        acc = set()
        for x in img.edges:
            acc |= _edge_turns(f, x, t - 1, memo)
        for T in _edge_turns(f, e, 1, memo):
            acc.add(image_turn(f, T, t - 1))
        res = frozenset(acc)
    memo[key] = res
    return res


def edge_image_turns(f: GosMorphism, e: str, t: int) -> frozenset:
    """Turns used by ``f^t(e)`` without materializing the image."""
    memo = f.__dict__.setdefault("_edge_turn_memo", {})
    return _edge_turns(f, e, t, memo)


def tree_space_turns(G: GraphOfSpaces) -> list[Turn]:
    """All turns (including degenerate ones) at inessential vertex spaces."""
    out = set()
    for s, sp in G.spaces.items():
        if sp.essential:
            continue
        ins = G.edges_into(s)
        outs = G.edges_out_of(s)
        for a in ins:
            for b in outs:
                chi = sp.tree_path(G.terminus(a)[1], G.origin(b)[1])
                out.add(make_turn(a, chi, b))
    return sorted(out)


def special_turns(G: GraphOfSpaces, f: GosMorphism, t: int) -> set[Turn]:
    if t < 1:
        raise ValueError("power must be at least 1")
    res: set[Turn] = set()
    for e in f.edges():
        res |= edge_image_turns(f, e, t)
    for T in tree_space_turns(G):
        res |= edge_image_turns(f, T.incoming, t)
        res |= edge_image_turns(f, T.outgoing, t)
        res.add(image_turn(f, T, t))
    return res


def allowed_turns(G: GraphOfSpaces, f: GosMorphism, t: int) -> set[Turn]:
    """Legal turns whose ``f^t``-image turn is ``t``-special."""
    memo = f.__dict__.setdefault("_allowed_memo", {})
    if t in memo:
        return memo[t]
    closure = illegal_turn_closure(G, f)
    level = special_turns(G, f, t)
    for _ in range(t):
        nxt = set()
        for T in level:
            nxt |= preimage_turns(G, f, T)
        level = nxt
    res = {T for T in level if T not in closure.illegal}
    memo[t] = res
    return res


# ----------------------------------------------------------------- profile

@dataclass
class MapProfile:
    is_train_track: bool
    is_expanding: bool
    t_exp: Optional[int]
    illegal_image_turns: list
    closure: TurnClosure = field(repr=False)

    def is_legal(self, T: Turn) -> bool:
        return self.closure.is_legal(T)

    def ilt(self, p) -> int:
        return self.closure.ilt(p)

    def as_dict(self) -> dict:
        return {"is_train_track": self.is_train_track, "is_expanding": self.is_expanding,
                "t_exp": self.t_exp,
                "illegal_image_turns": [[e, str(T)] for e, T in self.illegal_image_turns]}


def expansion_exponent(f: GosMorphism) -> Optional[int]:
    """Least ``t`` with ``|f^t(e)| >= 2`` for every edge, or None if no power expands.

    An edge whose single-edge image chain revisits an edge never grows.
    """
    worst = 0
    for e in f.positive_edges():
        x, t, seen = e, 0, set()
        while True:
            img = f.edge_image(x)
            t += 1
            if len(img) >= 2:
                break
            x = img.first
            key = x if x in f.G.top_edges else inverse(x)
            if key in seen:
                return None
            seen.add(key)
        worst = max(worst, t)
    return worst


def map_profile(G: GraphOfSpaces, f: GosMorphism) -> MapProfile:
    closure = illegal_turn_closure(G, f)
    bad = []
    for e in f.positive_edges():
        for T in path_turns(f.edge_image(e)):
            if T in closure.illegal:
                bad.append((e, T))
    t_exp = expansion_exponent(f)
    return MapProfile(is_train_track=not bad, is_expanding=t_exp is not None,
                      t_exp=t_exp, illegal_image_turns=bad, closure=closure)


def require_expanding_train_track(G: GraphOfSpaces, f: GosMorphism) -> MapProfile:
    prof = map_profile(G, f)
    if not prof.is_train_track:
        raise HypothesisViolation(
            "not a train track map: illegal turn %s in f(%s)" % (prof.illegal_image_turns[0][1],
                                                               prof.illegal_image_turns[0][0]))
    if not prof.is_expanding:
        raise HypothesisViolation("map is not expanding")
    return prof


def check_injective_vertex_maps(G: GraphOfSpaces, f: GosMorphism) -> None:
    for s in sorted(G.spaces):
        if not analyze_vertex_map(G, f, s).injective:
            raise HypothesisViolation(f"vertex map on {s!r} is not injective")
