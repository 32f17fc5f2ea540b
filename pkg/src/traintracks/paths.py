"""Edge paths, partial paths, closed paths, zero paths and their reduction.

An edge path ``e1 chi1 e2 ... chi_{r-1} e_r`` is stored as a tuple of top
edges plus a tuple of ``r - 1`` connecting local paths.  A closed path has as
many connectors as edges, the last one closing the loop back to ``e1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import DomainError, StructuralError
from .graph import GraphOfSpaces, LocalPath, inverse, trivial


@dataclass(frozen=True, order=True)
class EdgePath:
    edges: tuple[str, ...]
    connectors: tuple[LocalPath, ...] = ()

    def __post_init__(self):
        if not self.edges:
            raise StructuralError("an edge path has at least one edge")
        if len(self.connectors) != len(self.edges) - 1:
            raise StructuralError(
                f"edge path with {len(self.edges)} edges needs "
                f"{len(self.edges) - 1} connectors, got {len(self.connectors)}")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def first(self) -> str:
        return self.edges[0]

    @property
    def last(self) -> str:
        return self.edges[-1]

    def reverse(self) -> "EdgePath":
        return EdgePath(tuple(inverse(e) for e in reversed(self.edges)),
                        tuple(c.inverse() for c in reversed(self.connectors)))

    def sub(self, i: int, j: int) -> "EdgePath":
        """Edges ``i .. j-1`` together with the connectors between them."""
        return EdgePath(self.edges[i:j], self.connectors[i:j - 1])

    def tokens(self) -> tuple:
        out = []
        for i, e in enumerate(self.edges):
            if i:
                out.append(connector_token(self.connectors[i - 1]))
            out.append(("E", e))
        return tuple(out)

    def turns(self) -> list[tuple[str, LocalPath, str]]:
        """Raw (non-canonical) turns at the interior junctions."""
        return [(self.edges[i], self.connectors[i], self.edges[i + 1])
                for i in range(len(self.edges) - 1)]

    def __str__(self) -> str:
        return format_path(self)


@dataclass(frozen=True)
class ClosedPath:
    """Cyclic concatenation ``e1 chi1 ... e_q chi_q``; ``chi_q`` closes the loop."""

    edges: tuple[str, ...]
    connectors: tuple[LocalPath, ...]

    def __post_init__(self):
        if not self.edges:
            raise StructuralError("a closed path has at least one edge")
        if len(self.connectors) != len(self.edges):
            raise StructuralError("a closed path needs one connector per edge")

    def __len__(self) -> int:
        return len(self.edges)

    def reverse(self) -> "ClosedPath":
        q = len(self.edges)
        edges = tuple(inverse(e) for e in reversed(self.edges))
        # connector after reversed edge k is the reverse of the connector before
        # the original edge, i.e. original connector index (q - 2 - k) mod q
        conns = tuple(self.connectors[(q - 2 - k) % q].inverse() for k in range(q))
        return ClosedPath(edges, conns)

    def rotate(self, k: int) -> "ClosedPath":
        k %= len(self.edges)
        return ClosedPath(self.edges[k:] + self.edges[:k],
                          self.connectors[k:] + self.connectors[:k])

    def turns(self) -> list[tuple[str, LocalPath, str]]:
        q = len(self.edges)
        return [(self.edges[i], self.connectors[i], self.edges[(i + 1) % q])
                for i in range(q)]

    def tokens(self) -> tuple:
        out = []
        for e, c in zip(self.edges, self.connectors):
            out.append(("E", e))
            out.append(connector_token(c))
        return tuple(out)

    def canonical(self) -> "ClosedPath":
        """Rotation with the smallest token sequence."""
        return min((self.rotate(k) for k in range(len(self.edges))),
                   key=lambda c: c.tokens())

    def same_cycle(self, other: "ClosedPath") -> bool:
        return (len(self) == len(other)
                and self.canonical().tokens() == other.canonical().tokens())

    def as_edge_path(self) -> EdgePath:
        """The path obtained by cutting before ``e1`` (closing connector dropped)."""
        return EdgePath(self.edges, self.connectors[:-1])

    def __str__(self) -> str:
        return format_closed(self)


@dataclass(frozen=True)
class ZeroPath:
    """Result of reducing a path that backtracks completely.

    ``residual`` is the leftover local path inside the vertex space ``space``.
    """

    space: str
    residual: Optional[LocalPath] = None

    def __str__(self) -> str:
        if self.residual is None or self.residual.is_trivial:
            return f"<zero path in {self.space}>"
        return f"<zero path in {self.space}: {self.residual}>"


@dataclass(frozen=True, order=True)
class Locus:
    """Symbolic position inside an edge.

    ``index`` counts image edges: the point sits at the start of the
    ``index``-th edge (0-based) of ``f^power(edge)``, pulled back to ``edge``.
    For INP endpoints it is the fixed point of ``f^power`` located in that
    occurrence.
    """

    edge: str
    power: int
    index: int

    def __str__(self) -> str:
        return f"{self.edge}@f^{self.power}[{self.index}]"


@dataclass(frozen=True)
class PartialPath:
    """A path whose extremal edges may be only partially traversed.

    ``core`` is the canonical vertex-prolongation; the trim flags record that
    the first or last edge is entered or left at an interior point, described
    by the optional loci.
    """

    core: EdgePath
    head_trimmed: bool = False
    tail_trimmed: bool = False
    head_locus: Optional[Locus] = field(default=None, compare=False)
    tail_locus: Optional[Locus] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.core)

    @property
    def is_edge_path(self) -> bool:
        return not (self.head_trimmed or self.tail_trimmed)

    def reverse(self) -> "PartialPath":
        return PartialPath(self.core.reverse(), self.tail_trimmed, self.head_trimmed,
                           self.tail_locus, self.head_locus)

    def __str__(self) -> str:
        s = format_path(self.core)
        return ("(" if self.head_trimmed else "[") + s + (")" if self.tail_trimmed else "]")


AnyPath = Union[EdgePath, PartialPath, ClosedPath]


def connector_token(c: LocalPath) -> tuple:
    return ("C", c.space, c.start, c.end, c.steps)


# --------------------------------------------------------------------- checks

def check_edge_path(G: GraphOfSpaces, p: EdgePath) -> None:
    for e in p.edges:
        if not G.has_edge(e):
            raise StructuralError(f"unknown top edge {e!r}")
    for i, c in enumerate(p.connectors):
        _check_junction(G, p.edges[i], c, p.edges[i + 1])


def check_closed_path(G: GraphOfSpaces, p: ClosedPath) -> None:
    for e in p.edges:
        if not G.has_edge(e):
            raise StructuralError(f"unknown top edge {e!r}")
    q = len(p.edges)
    for i, c in enumerate(p.connectors):
        _check_junction(G, p.edges[i], c, p.edges[(i + 1) % q])


def _check_junction(G, e, c: LocalPath, e2) -> None:
    t = G.terminus(e)
    o = G.origin(e2)
    if (c.space, c.start) != t or (c.space, c.end) != o:
        raise StructuralError(
            f"connector {c} does not join {e!r} (ends at {t}) to {e2!r} (starts at {o})")
    G.space(c.space).path(c.start, c.steps)  # validates the steps


def make_path(G: GraphOfSpaces, edges: Sequence[str],
              connectors: Optional[Sequence[Optional[LocalPath]]] = None) -> EdgePath:
    """Build and validate an edge path; ``None`` connectors are inferred."""
    edges = tuple(edges)
    if connectors is None:
        connectors = [None] * (len(edges) - 1)
    conns = tuple(c if c is not None else infer_connector(G, edges[i], edges[i + 1])
                  for i, c in enumerate(connectors))
    p = EdgePath(edges, conns)
    check_edge_path(G, p)
    return p


def make_closed(G: GraphOfSpaces, edges: Sequence[str],
                connectors: Optional[Sequence[Optional[LocalPath]]] = None) -> ClosedPath:
    edges = tuple(edges)
    q = len(edges)
    if connectors is None:
        connectors = [None] * q
    conns = tuple(c if c is not None else infer_connector(G, edges[i], edges[(i + 1) % q])
                  for i, c in enumerate(connectors))
    p = ClosedPath(edges, conns)
    check_closed_path(G, p)
    return p


def infer_connector(G: GraphOfSpaces, e: str, e2: str) -> LocalPath:
    a, b = G.terminus(e), G.origin(e2)
    if a == b:
        return trivial(a)
    if a[0] != b[0]:
        raise StructuralError(f"{e!r} and {e2!r} do not meet in a common vertex space")
    sp = G.space(a[0])
    if sp.essential:
        raise StructuralError(
            f"connector between {e!r} and {e2!r} lies in essential space {sp.name!r} "
            "and must be written explicitly")
    return sp.tree_path(a[1], b[1])


def concat(p: EdgePath, c: LocalPath, q: EdgePath) -> EdgePath:
    return EdgePath(p.edges + q.edges, p.connectors + (c,) + q.connectors)


# ------------------------------------------------------------------ reduction

def _linear_reduce(G, edges, connectors, start_point):
    """Stack reduction of ``e1 c1 e2 ...``.

    Returns ``(head, out_edges, out_conns, pending)``: ``head`` is the local
    path from ``start_point`` to the origin of the first surviving edge,
    ``pending`` the local path after the last surviving edge (trivial unless
    every edge cancelled, in which case ``head`` holds the whole residue and
    ``pending`` is None).
    """
    head = trivial(start_point)
    out_e: list[str] = []
    out_c: list[LocalPath] = []
    pending: Optional[LocalPath] = None   # connector after out_e[-1]
    for i, e in enumerate(edges):
        c = connectors[i - 1] if i else None
        if out_e:
            pend = pending + c if c is not None else pending
            if pend.is_trivial and out_e[-1] == inverse(e):
                out_e.pop()
                if out_c:
                    pending = out_c.pop()
                else:
                    pending = None
                continue
            out_c.append(pend)
            out_e.append(e)
            pending = trivial(G.terminus(e))
        else:
            if i:
                # everything so far cancelled; ``pending`` is None and head
                # absorbs the connector that follows the cancelled block
                head = head + c
            out_e.append(e)
            pending = trivial(G.terminus(e))
    return head, out_e, out_c, pending


def _reduce_edge_path(G, p: EdgePath):
    head, out_e, out_c, pending = _linear_reduce(
        G, p.edges, p.connectors, G.origin(p.edges[0]))
    if not out_e:
        return ZeroPath(head.space, head)
    return EdgePath(tuple(out_e), tuple(out_c))


def _reduce_closed(G, p: ClosedPath):
    head, out_e, out_c, pending = _linear_reduce(
        G, p.edges, p.connectors[:-1], G.origin(p.edges[0]))
    closing = p.connectors[-1]
    if not out_e:
        loop = head + closing if head.end == closing.start else head
        return ZeroPath(loop.space, loop)
    closing = pending + closing + head
    # cyclic cancellation across the closing connector
    while closing.is_trivial and len(out_e) >= 2 and out_e[-1] == inverse(out_e[0]):
        if len(out_e) == 2:
            loop = out_c[0]
            return ZeroPath(loop.space, loop)
        closing = out_c[-1] + out_c[0]
        out_e = out_e[1:-1]
        out_c = out_c[1:-1]
    return ClosedPath(tuple(out_e), tuple(out_c) + (closing,))


def _reduce_partial(G, p: PartialPath):
    r = _reduce_edge_path(G, p.core)
    if isinstance(r, ZeroPath):
        return r
    keep_head = p.head_trimmed and r.edges[0] == p.core.edges[0] and _prefix_kept(p.core, r)
    keep_tail = p.tail_trimmed and r.edges[-1] == p.core.edges[-1] and _prefix_kept(
        p.core.reverse(), r.reverse())
    if not (keep_head or keep_tail):
        return PartialPath(r)
    return PartialPath(r, keep_head, keep_tail,
                       p.head_locus if keep_head else None,
                       p.tail_locus if keep_tail else None)


def _prefix_kept(orig: EdgePath, red: EdgePath) -> bool:
    return len(orig) >= 1 and len(red) >= 1 and orig.edges[0] == red.edges[0] and (
        len(red) == 1 or len(orig) == 1 or orig.connectors[0] == red.connectors[0]
        or orig.edges[1] == red.edges[1])


def reduce_path(G: GraphOfSpaces, p):
    """Reduced representative of an edge, partial or closed path.

    Edge paths reduce to edge paths, partial paths to partial paths (trim
    flags survive when their extremal edge does), closed paths are cyclically
    reduced.  Complete backtracking yields a :class:`ZeroPath`.
    """
    if isinstance(p, EdgePath):
        return _reduce_edge_path(G, p)
    if isinstance(p, ClosedPath):
        return _reduce_closed(G, p)
    if isinstance(p, PartialPath):
        return _reduce_partial(G, p)
    if isinstance(p, ZeroPath):
        return p
    raise StructuralError(f"cannot reduce {p!r}")


def is_reduced(p) -> bool:
    if isinstance(p, PartialPath):
        p = p.core
    for a, c, b in p.turns():
        if c.is_trivial and b == inverse(a):
            return False
    return True


def vertex_prolongation(p) -> EdgePath:
    if isinstance(p, ZeroPath):
        raise DomainError("a zero path has no vertex-prolongation")
    if isinstance(p, PartialPath):
        return p.core
    if isinstance(p, EdgePath):
        return p
    raise DomainError(f"no vertex-prolongation for {p!r}")


# ---------------------------------------------------------- parse and format

_TOKEN = re.compile(r"\{[^}]*\}|\S+")


def _parse_connector(G: GraphOfSpaces, tok: str, start_pt) -> LocalPath:
    body = tok[1:-1].strip()
    if ":" in body:
        space, _, rest = body.partition(":")
        space = space.strip()
    else:
        space, rest = start_pt[0], body
    if start_pt is not None and space != start_pt[0]:
        raise StructuralError(f"connector {tok} is not in space {start_pt[0]!r}")
    steps = _split_words(rest.split(), G.space(space).has_edge)
    return G.space(space).path(start_pt[1], steps)


def _split_words(words: Iterable[str], known) -> list[str]:
    out = []
    for w in words:
        if known(w):
            out.append(w)
        elif all(known(ch) for ch in w):
            out.extend(w)
        else:
            raise StructuralError(f"unknown name {w!r}")
    return out


def _parse_items(G: GraphOfSpaces, text: str):
    """Split text into edges plus the raw connector token before each later edge."""
    edges: list[str] = []
    conns: list[Optional[str]] = []
    raw: Optional[str] = None
    leading = None
    for tok in _TOKEN.findall(text):
        if tok.startswith("{"):
            if raw is not None:
                raise StructuralError(f"two consecutive connectors near {tok}")
            if not edges:
                leading = tok
            raw = tok
            continue
        for e in _split_words([tok], G.has_edge):
            if edges:
                conns.append(raw)
            raw = None
            edges.append(e)
    if not edges:
        raise StructuralError(f"no top edges in {text!r}")
    return edges, conns, leading, raw


def parse_path(G: GraphOfSpaces, text: str) -> EdgePath:
    """Parse ``"e1 {X: x y} e2 e3"``; trivial or tree connectors may be omitted."""
    edges, conns, leading, trailing = _parse_items(G, text)
    if leading is not None or trailing is not None:
        raise StructuralError("an edge path must start and finish with a top edge")
    cs = []
    for i, raw in enumerate(conns):
        if raw is None:
            cs.append(None)
        else:
            c = _parse_connector(G, raw, G.terminus(edges[i]))
            cs.append(c)
    return make_path(G, edges, cs)


def parse_loop(G: GraphOfSpaces, text: str):
    """Parse a closed path.  A trailing connector closes the loop.

    A lone connector such as ``"{X: x}"`` denotes a loop inside a vertex space
    and is returned as a :class:`ZeroPath` carrying that loop.
    """
    toks = _TOKEN.findall(text)
    if toks and all(t.startswith("{") for t in toks):
        if len(toks) != 1:
            raise StructuralError("a vertex-space loop is a single connector")
        body = toks[0][1:-1]
        space, _, rest = body.partition(":")
        space = space.strip()
        sp = G.space(space)
        steps = _split_words(rest.split(), sp.has_edge)
        start = sp.origin(steps[0]) if steps else sp.vertices[0]
        loop = sp.path(start, steps)
        if loop.end != loop.start:
            raise StructuralError("vertex-space loop is not closed")
        return ZeroPath(space, loop)
    edges, conns, leading, trailing = _parse_items(G, text)
    if leading is not None:
        raise StructuralError("write the closing connector at the end of a loop")
    cs = []
    for i, raw in enumerate(conns):
        cs.append(None if raw is None else _parse_connector(G, raw, G.terminus(edges[i])))
    cs.append(None if trailing is None else _parse_connector(G, trailing, G.terminus(edges[-1])))
    return make_closed(G, edges, cs)


def format_connector(c: LocalPath) -> str:
    return "{%s: %s}" % (c.space, " ".join(c.steps))


def format_path(p: EdgePath, show_trivial: bool = False) -> str:
    out = []
    for i, e in enumerate(p.edges):
        if i:
            c = p.connectors[i - 1]
            if show_trivial or not c.is_trivial:
                out.append(format_connector(c))
        out.append(e)
    return " ".join(out)


def format_closed(p: ClosedPath, show_trivial: bool = False) -> str:
    out = []
    for e, c in zip(p.edges, p.connectors):
        out.append(e)
        if show_trivial or not c.is_trivial:
            out.append(format_connector(c))
    return " ".join(out)


def format_any(p) -> str:
    if isinstance(p, (EdgePath, ClosedPath, PartialPath, ZeroPath)):
        return str(p)
    return repr(p)
