"""Graph-of-spaces morphisms: vertex-space maps plus top-edge images.

The image of a top edge ``e`` is an :class:`EdgeImage` ``(lead, path, trail)``.
``path`` is the edge path of top edges, ``lead`` is a local path from the
image of the initial attaching point of ``e`` to the start of ``path`` and
``trail`` runs from the end of ``path`` to the image of the terminal
attaching point.  For most inputs lead and trail are trivial; they matter when
an edge image starts or ends inside a vertex space (for instance after
collapsing polynomially growing edges into vertex spaces).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .errors import CapacityError, DomainError, StructuralError
from .graph import GraphOfSpaces, LocalPath, Point, VertexSpace, free_reduce, inverse, is_positive, trivial
from .paths import (ClosedPath, EdgePath, ZeroPath, check_edge_path, reduce_path)

DEFAULT_MAX_IMAGE_LENGTH = 2_000_000


@dataclass(frozen=True)
class VertexMap:
    """Graph map ``X_source -> X_target``.

    ``vertex_map`` sends local vertices to local vertices, ``edge_map`` sends
    each positively named local edge to a step sequence in the target.
    """

    source: str
    target: str
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def edge_steps(self, le: str) -> tuple[str, ...]:
        if le in self.edge_map:
            return tuple(self.edge_map[le])
        inv = inverse(le)
        if inv in self.edge_map:
            return tuple(inverse(s) for s in reversed(self.edge_map[inv]))
        raise StructuralError(f"local edge {le!r} of {self.source!r} has no image")

    def apply(self, lp: LocalPath) -> LocalPath:
        if lp.space != self.source:
            raise StructuralError(f"{lp} is not in space {self.source!r}")
        steps: list[str] = []
        for s in lp.steps:
            steps.extend(self.edge_steps(s))
        return LocalPath(self.target, self.vertex_map[lp.start], self.vertex_map[lp.end],
                         free_reduce(steps))

    def point(self, v: str) -> Point:
        return (self.target, self.vertex_map[v])


@dataclass(frozen=True)
class EdgeImage:
    lead: LocalPath
    path: EdgePath
    trail: LocalPath

    def reverse(self) -> "EdgeImage":
        return EdgeImage(self.trail.inverse(), self.path.reverse(), self.lead.inverse())

    def __len__(self) -> int:
        return len(self.path)


def identity_vertex_map(space: VertexSpace) -> VertexMap:
    return VertexMap(space.name, space.name, {v: v for v in space.vertices},
                     {e: (e,) for e in space.edges})


class GosMorphism:
    """Self-map of a graph of spaces.

    ``edge_images`` may be given for positive edges only; images of reversed
    edges are derived, so the involution is respected by construction.
    Values may be :class:`EdgeImage` or plain :class:`EdgePath` (trivial lead
    and trail).
    """

    def __init__(self, G: GraphOfSpaces, vertex_maps: Mapping[str, VertexMap],
                 edge_images: Mapping[str, object], max_image_length: int = DEFAULT_MAX_IMAGE_LENGTH):
        self.G = G
        self.vertex_maps: dict[str, VertexMap] = dict(vertex_maps)
        self.max_image_length = max_image_length
        self._images: dict[str, EdgeImage] = {}
        for e, img in edge_images.items():
            if not G.has_edge(e):
                raise StructuralError(f"edge image given for unknown top edge {e!r}")
            if isinstance(img, EdgePath):
                img = EdgeImage(trivial(G.origin(img.first)), img,
                                trivial(G.terminus(img.last)))
            if not is_positive(e):
                e, img = inverse(e), img.reverse()
            self._images[e] = img
        for e in list(self._images):
            self._images[inverse(e)] = self._images[e].reverse()
        self._lock = threading.Lock()
        self._iter_cache: dict[tuple[str, int], EdgeImage] = {}
        self._len_cache: dict[tuple[str, int], int] = {}
        self._lead_cache: dict[tuple[str, int], LocalPath] = {}
        self._local_cache: dict[tuple[LocalPath, int], LocalPath] = {}
        self._first_cache: dict[tuple[str, int], str] = {}

    # ---------------------------------------------------------- basic data

    @classmethod
    def identity(cls, G: GraphOfSpaces) -> "GosMorphism":
        vm = {s: identity_vertex_map(sp) for s, sp in G.spaces.items()}
        imgs = {e: EdgePath((e,)) for e in G.top_edges}
        return cls(G, vm, imgs)

    @classmethod
    def rose(cls, images: Mapping[str, str], space: str = "v") -> "GosMorphism":
        """Rose map from plain words, e.g. ``{"a": "ab", "b": "a"}``."""
        G = GraphOfSpaces.rose(sorted(images), space)
        vm = {space: VertexMap(space, space, {space: space}, {})}
        imgs = {}
        for e, word in images.items():
            letters = list(word.replace(" ", ""))
            imgs[e] = EdgePath(tuple(letters), tuple(trivial((space, space)) for _ in letters[1:]))
        return cls(G, vm, imgs)

    def edges(self) -> list[str]:
        return self.G.oriented_edges()

    def positive_edges(self) -> list[str]:
        return sorted(self.G.top_edges)

    def image(self, e: str) -> EdgeImage:
        try:
            return self._images[e]
        except KeyError:
            pass
        raise StructuralError(f"top edge {e!r} not in the morphism table")

    def edge_image(self, e: str) -> EdgePath:
        return self.image(e).path

    def vertex_map(self, space: str) -> VertexMap:
        try:
            return self.vertex_maps[space]
        except KeyError:
            raise StructuralError(f"no vertex map for space {space!r}") from None

    def space_image(self, space: str) -> str:
        return self.vertex_map(space).target

    def map_point(self, p: Point) -> Point:
        return self.vertex_map(p[0]).point(p[1])

    def map_local(self, lp: LocalPath) -> LocalPath:
        return self.vertex_map(lp.space).apply(lp)

    def map_local_power(self, lp: LocalPath, t: int) -> LocalPath:
        if t == 0:
            return lp
        key = (lp, t)
        hit = self._local_cache.get(key)
        if hit is None:
            hit = self.map_local(self.map_local_power(lp, t - 1))
            self._local_cache[key] = hit
        return hit

    # --------------------------------------------------------- path images

    def junction(self, a: str, chi: LocalPath, b: str) -> LocalPath:
        """Connector replacing ``chi`` between ``f(a)`` and ``f(b)``."""
        return self.image(a).trail + self.map_local(chi) + self.image(b).lead

    def map_path(self, p: EdgePath) -> EdgePath:
        """Unreduced image ``f(p)``; its length is the sum of the image lengths."""
        edges: list[str] = []
        conns: list[LocalPath] = []
        for i, e in enumerate(p.edges):
            img = self.image(e)
            if i:
                conns.append(self.junction(p.edges[i - 1], p.connectors[i - 1], e))
            edges.extend(img.path.edges)
            conns.extend(img.path.connectors)
            if len(edges) > self.max_image_length:
                raise CapacityError("max_image_length", self.max_image_length,
                                    "while mapping a path")
        return EdgePath(tuple(edges), tuple(conns))

    def map_path_full(self, p: EdgePath) -> EdgeImage:
        """``f(p)`` including the lead and trail local paths."""
        return EdgeImage(self.image(p.first).lead, self.map_path(p), self.image(p.last).trail)

    def map_closed(self, p: ClosedPath) -> ClosedPath:
        q = len(p.edges)
        edges: list[str] = []
        conns: list[LocalPath] = []
        for i, e in enumerate(p.edges):
            img = self.image(e)
            edges.extend(img.path.edges)
            conns.extend(img.path.connectors)
            conns.append(self.junction(e, p.connectors[i], p.edges[(i + 1) % q]))
            if len(edges) > self.max_image_length:
                raise CapacityError("max_image_length", self.max_image_length,
                                    "while mapping a closed path")
        return ClosedPath(tuple(edges), tuple(conns))

    def map_any(self, p):
        if isinstance(p, ClosedPath):
            return self.map_closed(p)
        if isinstance(p, ZeroPath):
            return ZeroPath(self.space_image(p.space),
                            None if p.residual is None else self.map_local(p.residual))
        return self.map_path(p)

    def reduced_image(self, p, t: int = 1):
        """``[f^t(p)]`` computed by iterating reduce after each application."""
        for _ in range(t):
            if isinstance(p, ZeroPath):
                p = self.map_any(p)
                continue
            p = reduce_path(self.G, self.map_any(p))
        return p

    # ------------------------------------------------------ iterated images

    def iterate_image(self, e: str, t: int) -> EdgeImage:
        """``f^t(e)`` with lead and trail; cached per ``(e, t)``."""
        if t < 1:
            raise DomainError("power must be at least 1")
        if not is_positive(e):
            return self.iterate_image(inverse(e), t).reverse()
        key = (e, t)
        hit = self._iter_cache.get(key)
        if hit is not None:
            return hit
        if t == 1:
            res = self.image(e)
        else:
            n = self.length(e, t)
            if n > self.max_image_length:
                raise CapacityError("max_image_length", self.max_image_length,
                                    f"|f^{t}({e})| = {n}")
            prev = self.iterate_image(e, t - 1)
            res = EdgeImage(self.map_local(prev.lead) + self.image(prev.path.first).lead,
                            self.map_path(prev.path),
                            self.image(prev.path.last).trail + self.map_local(prev.trail))
        with self._lock:
            self._iter_cache.setdefault(key, res)
        return self._iter_cache[key]

    def iterate_edge_image(self, e: str, t: int) -> EdgePath:
        return self.iterate_image(e, t).path

    def length(self, e: str, t: int) -> int:
        """``|f^t(e)|`` without materializing the image."""
        if t == 0:
            return 1
        if not is_positive(e):
            e = inverse(e)
        key = (e, t)
        hit = self._len_cache.get(key)
        if hit is None:
            hit = sum(self.length(x, t - 1) for x in self.image(e).path.edges)
            self._len_cache[key] = hit
        return hit

    def path_length(self, p: EdgePath, t: int) -> int:
        return sum(self.length(e, t) for e in p.edges)

    def lead(self, e: str, t: int) -> LocalPath:
        """Lead local path of ``f^t(e)``."""
        if t == 0:
            return trivial(self.G.origin(e))
        key = (e, t)
        hit = self._lead_cache.get(key)
        if hit is None:
            img = self.image(e)
            hit = self.map_local_power(img.lead, t - 1) + self.lead(img.path.first, t - 1)
            self._lead_cache[key] = hit
        return hit

    def trail(self, e: str, t: int) -> LocalPath:
        return self.lead(inverse(e), t).inverse()

    def first_edge(self, e: str, t: int) -> str:
        """First edge of ``f^t(e)``."""
        if t == 0:
            return e
        key = (e, t)
        hit = self._first_cache.get(key)
        if hit is None:
            hit = self.first_edge(self.image(e).path.first, t - 1)
            self._first_cache[key] = hit
        return hit

    def last_edge(self, e: str, t: int) -> str:
        return inverse(self.first_edge(inverse(e), t))

    def junction_power(self, a: str, chi: LocalPath, b: str, t: int) -> LocalPath:
        """Connector replacing ``chi`` between ``f^t(a)`` and ``f^t(b)``."""
        if t == 0:
            return chi
        return self.trail(a, t) + self.map_local_power(chi, t) + self.lead(b, t)

    # --------------------------------------------------------- lazy streams

    def stream(self, p: EdgePath, t: int) -> "ImageStream":
        return ImageStream(self, p, t)

    def edge_at(self, p: EdgePath, t: int, k: int) -> str:
        """The ``k``-th edge (0-based) of ``f^t(p)`` by descent through lengths."""
        level = t
        while True:
            for e in p.edges:
                n = self.length(e, level)
                if k < n:
                    if level == 0:
                        return e
                    p = self.image(e).path
                    level -= 1
                    break
                k -= n
            else:
                raise IndexError("position beyond the image")

    def connector_after(self, p: EdgePath, t: int, k: int) -> Optional[LocalPath]:
        """Connector following edge ``k`` of ``f^t(p)``; None after the last edge."""
        level = t
        while True:
            for i, e in enumerate(p.edges):
                n = self.length(e, level)
                if k < n:
                    if k == n - 1:
                        if i == len(p.edges) - 1:
                            return None
                        return self.junction_power(e, p.connectors[i], p.edges[i + 1], level)
                    p = self.image(e).path
                    level -= 1
                    break
                k -= n
            else:
                raise IndexError("position beyond the image")

    def materialize(self, p: EdgePath, t: int) -> EdgePath:
        for _ in range(t):
            p = self.map_path(p)
        return p


class ImageStream:
    """Lazy token stream of ``f^t(p)`` made of edge units and connectors.

    An edge unit ``(e, k)`` stands for the block ``f^k(e)``; it can either be
    skipped as a whole (``len_k(e)`` edges) or expanded into the next level.
    """

    __slots__ = ("f", "stack")

    def __init__(self, f: GosMorphism, p: EdgePath, t: int):
        self.f = f
        self.stack = [[p, t, 0]]

    def peek(self):
        st = self.stack
        while st:
            p, level, pos = st[-1]
            if pos < 2 * len(p.edges) - 1:
                if pos % 2 == 0:
                    return ("E", p.edges[pos // 2], level)
                i = pos // 2
                return ("C", self.f.junction_power(p.edges[i], p.connectors[i], p.edges[i + 1], level))
            st.pop()
        return None

    def advance(self):
        self.stack[-1][2] += 1

    def expand(self):
        frame = self.stack[-1]
        p, level, pos = frame
        e = p.edges[pos // 2]
        frame[2] += 1
        self.stack.append([self.f.image(e).path, level - 1, 0])


def common_prefix(f: GosMorphism, p1: EdgePath, p2: EdgePath, t: int,
                  limit: Optional[int] = None) -> int:
    """Number of leading edges on which ``f^t(p1)`` and ``f^t(p2)`` agree.

    Connectors between matched edges must agree literally as well; the count
    stops at the first mismatch of either kind.
    """
    s1, s2 = f.stream(p1, t), f.stream(p2, t)
    count = 0
    while True:
        u1, u2 = s1.peek(), s2.peek()
        if u1 is None or u2 is None:
            return count
        if u1[0] == "C" or u2[0] == "C":
            if u1 != u2:
                return count
            s1.advance()
            s2.advance()
            continue
        _, e1, k1 = u1
        _, e2, k2 = u2
        if k1 == k2 and e1 == e2:
            count += f.length(e1, k1)
            s1.advance()
            s2.advance()
            if limit is not None and count >= limit:
                return count
        elif k1 > k2:
            s1.expand()
        elif k2 > k1:
            s2.expand()
        elif k1 > 0:
            s1.expand()
            s2.expand()
        else:
            return count


def iter_edges(f: GosMorphism, p: EdgePath, t: int) -> Iterator[str]:
    """Edges of ``f^t(p)`` one at a time (depth-first, no materialization)."""
    s = f.stream(p, t)
    while True:
        u = s.peek()
        if u is None:
            return
        if u[0] == "C":
            s.advance()
        elif u[2] == 0:
            yield u[1]
            s.advance()
        else:
            s.expand()


def check_image(G: GraphOfSpaces, f: GosMorphism, e: str) -> list[str]:
    """Endpoint-compatibility problems of the image of ``e``."""
    problems = []
    img = f.image(e)
    try:
        check_edge_path(G, img.path)
    except StructuralError as exc:
        return [f"image of {e!r}: {exc}"]
    want_o = f.map_point(G.origin(e))
    want_t = f.map_point(G.terminus(e))
    if (img.lead.space, img.lead.start) != want_o:
        problems.append(f"image of {e!r} starts at {(img.lead.space, img.lead.start)}, "
                        f"expected {want_o}")
    if (img.lead.space, img.lead.end) != G.origin(img.path.first):
        problems.append(f"lead of {e!r} does not reach the first image edge")
    if (img.trail.space, img.trail.start) != G.terminus(img.path.last):
        problems.append(f"trail of {e!r} does not start at the last image edge")
    if (img.trail.space, img.trail.end) != want_t:
        problems.append(f"image of {e!r} ends at {(img.trail.space, img.trail.end)}, "
                        f"expected {want_t}")
    return problems
