"""The finite sets V(f^t) of two-branch paths whose images cancel deep.

An entry is an edge path ``eta = gamma1^-1 chi gamma2`` with legal branches
``gamma1``, ``gamma2`` leaving the tip space with distinct first edges, such
that ``f^t`` kills the tip connector and the common prefix of ``f^t(gamma1)``
and ``f^t(gamma2)`` reaches into the images of both last edges.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapacityError, DomainError, StructuralError
from .graph import GraphOfSpaces, LocalPath, inverse
from .morphism import GosMorphism, common_prefix
from .paths import EdgePath, Locus, concat
from .turns import Turn, allowed_turns, illegal_turn_closure, make_turn

DEFAULT_MAX_ENTRIES = 100_000


@dataclass(frozen=True)
class VEntry:
    eta: EdgePath
    branch1: EdgePath
    branch2: EdgePath
    tip_connector: LocalPath
    power: int
    overlap: int = field(compare=False)
    loci: tuple = field(compare=False, default=())

    @property
    def tip_index(self) -> int:
        return len(self.branch1) - 1

    @property
    def tip_turn(self) -> Turn:
        return make_turn(inverse(self.branch1.first), self.tip_connector, self.branch2.first)

    def __str__(self) -> str:
        return str(self.eta)

    def as_dict(self) -> dict:
        return {"eta": str(self.eta), "branch1": str(self.branch1), "branch2": str(self.branch2),
                "tip_connector": " ".join(self.tip_connector.steps), "L": self.overlap,
                "loci": [str(x) for x in self.loci]}


def split_at_tip(eta: EdgePath, tip: int) -> tuple[EdgePath, LocalPath, EdgePath]:
    """``eta = branch1^-1 . chi . branch2`` with ``chi = eta.connectors[tip]``."""
    if not 0 <= tip < len(eta.connectors):
        raise StructuralError(f"tip index {tip} out of range for {eta}")
    return eta.sub(0, tip + 1).reverse(), eta.connectors[tip], eta.sub(tip + 1, len(eta))


def join_branches(b1: EdgePath, chi: LocalPath, b2: EdgePath) -> EdgePath:
    return concat(b1.reverse(), chi, b2)


def canonical_orientation(b1: EdgePath, chi: LocalPath, b2: EdgePath):
    """Pick the orientation of ``b1^-1 chi b2`` with the smaller token sequence."""
    a = join_branches(b1, chi, b2)
    r = a.reverse()
    if r.tokens() < a.tokens():
        return b2, chi.inverse(), b1, r
    return b1, chi, b2, a


def _branch_legal(closure, b: EdgePath) -> bool:
    return all(make_turn(x, c, y) not in closure.illegal for x, c, y in b.turns())


def _pullback(f: GosMorphism, b: EdgePath, t: int, L: int) -> tuple[int, bool, int]:
    """Edge index of ``b`` containing image position ``L``, partial flag, offset."""
    acc = 0
    for i, e in enumerate(b.edges):
        n = f.length(e, t)
        if L <= acc + n:
            return i, L < acc + n, L - acc
        acc += n
    return len(b) - 1, False, f.length(b.last, t)


def branch_membership(G: GraphOfSpaces, f: GosMorphism, t: int, b1: EdgePath,
                      chi: LocalPath, b2: EdgePath) -> Optional[VEntry]:
    if t < 1:
        raise DomainError("power must be at least 1")
    closure = illegal_turn_closure(G, f)
    if b1.first == b2.first:
        return None
    if f.junction_power(inverse(b1.first), chi, b2.first, t).steps:
        return None
    if make_turn(inverse(b1.first), chi, b2.first) not in closure.illegal:
        return None
    if not (_branch_legal(closure, b1) and _branch_legal(closure, b2)):
        return None
    P1 = f.path_length(b1, t) - f.length(b1.last, t)
    P2 = f.path_length(b2, t) - f.length(b2.last, t)
    need = max(P1, P2) + 1
    L = common_prefix(f, b1, b2, t)
    if L < 1 or L < need:
        return None
    c1, c, c2, eta = canonical_orientation(b1, chi, b2)
    loci = []
    for b in (c1, c2):
        i, partial, off = _pullback(f, b, t, L)
        loci.append(Locus(b.edges[i], t, off) if partial else None)
    return VEntry(eta, c1, c2, c, t, L, tuple(loci))


def v_membership(G: GraphOfSpaces, f: GosMorphism, t: int, eta: EdgePath,
                 tip: int) -> Optional[VEntry]:
    """The V(f^t) entry for ``eta`` with the designated tip, or None."""
    b1, chi, b2 = split_at_tip(eta, tip)
    return branch_membership(G, f, t, b1, chi, b2)


def _extensions(allowed_by_in, b: EdgePath):
    for T in allowed_by_in.get(b.last, ()):
        yield EdgePath(b.edges + (T.outgoing,), b.connectors + (T.connector,))


def _allowed_index(G, f, t):
    idx: dict[str, list[Turn]] = defaultdict(list)
    for T in allowed_turns(G, f, t):
        idx[T.incoming].append(T)
        R = T.reversed()
        if R != T:
            idx[R.incoming].append(R)
    for k in idx:
        idx[k].sort()
    return idx


def seed_turns(G: GraphOfSpaces, f: GosMorphism, t: int) -> list[Turn]:
    closure = illegal_turn_closure(G, f)
    return [T for T in closure.nondegenerate if closure.illegal[T] <= t]


def enumerate_v(G: GraphOfSpaces, f: GosMorphism, t: int, method: str = "grow",
                max_entries: int = DEFAULT_MAX_ENTRIES, max_branch: Optional[int] = None) -> list[VEntry]:
    """All of V(f^t), sorted by token sequence.

    ``grow`` starts at the length-two entries and extends one or both branches
    by an allowed turn, keeping members only (every member shrinks to a
    shorter member by dropping terminal edges).  ``search`` tries every pair of
    branches built from allowed turns up to ``max_branch`` edges each.
    """
    if t < 1:
        raise DomainError("power must be at least 1")
    memo = f.__dict__.setdefault("_v_memo", {})
    key = (t, method, max_branch)
    if key in memo:
        return memo[key]
    if method == "grow":
        res = _grow(G, f, t, max_entries)
    elif method == "search":
        if max_branch is None:
            raise DomainError("search needs a branch length bound")
        res = _search(G, f, t, max_branch, max_entries)
    else:
        raise DomainError(f"unknown method {method!r}")
    out = sorted(res, key=lambda v: v.eta.tokens())
    memo[key] = out
    return out


def _grow(G, f, t, max_entries):
    idx = _allowed_index(G, f, t)
    found: dict[tuple, VEntry] = {}
    queue = deque()
    for T in seed_turns(G, f, t):
        b1 = EdgePath((inverse(T.incoming),))
        b2 = EdgePath((T.outgoing,))
        v = branch_membership(G, f, t, b1, T.connector, b2)
        if v is not None and v.eta.tokens() not in found:
            found[v.eta.tokens()] = v
            queue.append((b1, T.connector, b2))
    while queue:
        b1, chi, b2 = queue.popleft()
        ext1 = list(_extensions(idx, b1))
        ext2 = list(_extensions(idx, b2))
        cands = [(x, b2) for x in ext1] + [(b1, y) for y in ext2] + [
            (x, y) for x in ext1 for y in ext2]
        for x, y in cands:
            v = branch_membership(G, f, t, x, chi, y)
            if v is None:
                continue
            k = v.eta.tokens()
            if k in found:
                continue
            found[k] = v
            if len(found) > max_entries:
                raise CapacityError("max_v_entries", max_entries, f"V(f^{t})")
            queue.append((x, chi, y))
    return found.values()


def _legal_branches(idx, start_edges, max_len):
    level = [EdgePath((e,)) for e in start_edges]
    out = list(level)
    for _ in range(max_len - 1):
        level = [x for b in level for x in _extensions(idx, b)]
        out.extend(level)
    return out


def _search(G, f, t, max_branch, max_entries):
    idx = _allowed_index(G, f, t)
    found: dict[tuple, VEntry] = {}
    closure = illegal_turn_closure(G, f)
    for T in closure.nondegenerate:
        bs1 = _legal_branches(idx, [inverse(T.incoming)], max_branch)
        bs2 = _legal_branches(idx, [T.outgoing], max_branch)
        for b1 in bs1:
            for b2 in bs2:
                v = branch_membership(G, f, t, b1, T.connector, b2)
                if v is not None:
                    found.setdefault(v.eta.tokens(), v)
                    if len(found) > max_entries:
                        raise CapacityError("max_v_entries", max_entries, f"V(f^{t})")
    return found.values()


def trim_to_v(G: GraphOfSpaces, f: GosMorphism, t: int, eta: EdgePath, tip: int) -> VEntry:
    """Shrink a truncated entry back into V(f^t) by dropping terminal edges.

    Edges are removed from the branch whose image is longer until the
    membership conditions hold.
    """
    b1, chi, b2 = split_at_tip(eta, tip)
    while True:
        v = branch_membership(G, f, t, b1, chi, b2)
        if v is not None:
            return v
        n1, n2 = f.path_length(b1, t), f.path_length(b2, t)
        drop1 = n1 >= n2
        drop2 = n2 >= n1
        if (drop1 and len(b1) == 1) or (drop2 and len(b2) == 1):
            raise DomainError(f"{eta} does not shrink to an element of V(f^{t})")
        if drop1:
            b1 = b1.sub(0, len(b1) - 1)
        if drop2:
            b2 = b2.sub(0, len(b2) - 1)


def max_entry_length(entries: Iterable[VEntry]) -> int:
    return max((len(v.eta) for v in entries), default=0)
