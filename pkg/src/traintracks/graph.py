"""Vertex spaces, local paths and the graph-of-spaces container.

Oriented edges (top edges as well as local edges) are plain strings.  A
single-letter name is inverted by swapping its case (``a`` <-> ``A``); any
other name is inverted by toggling the suffix ``^-1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import StructuralError

INVERSE_SUFFIX = "^-1"

Point = tuple  # (space id, local vertex)


def inverse(name: str) -> str:
    if name.endswith(INVERSE_SUFFIX):
        return name[: -len(INVERSE_SUFFIX)]
    if len(name) == 1 and name.isalpha():
        return name.swapcase()
    return name + INVERSE_SUFFIX


def is_positive(name: str) -> bool:
    """True for the orientation that carries the declared name."""
    if name.endswith(INVERSE_SUFFIX):
        return False
    if len(name) == 1 and name.isalpha():
        return name.islower()
    return True


def free_reduce(steps: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for s in steps:
        if out and out[-1] == inverse(s):
            out.pop()
        else:
            out.append(s)
    return tuple(out)


@dataclass(frozen=True, order=True)
class LocalPath:
    """A reduced edge path inside one vertex space.

    The empty step sequence is the trivial path at ``start`` (== ``end``).
    """

    space: str
    start: str
    end: str
    steps: tuple[str, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return not self.steps

    def inverse(self) -> "LocalPath":
        return LocalPath(self.space, self.end, self.start,
                         tuple(inverse(s) for s in reversed(self.steps)))

    def __add__(self, other: "LocalPath") -> "LocalPath":
        if self.space != other.space or self.end != other.start:
            raise StructuralError(
                f"cannot concatenate local paths {self} and {other}")
        return LocalPath(self.space, self.start, other.end,
                         free_reduce(self.steps + other.steps))

    def __str__(self) -> str:
        return "{%s: %s}" % (self.space, " ".join(self.steps))


def trivial(point: Point) -> LocalPath:
    return LocalPath(point[0], point[1], point[1], ())


@dataclass(frozen=True)
class VertexSpace:
    """A finite connected graph realizing one vertex group.

    ``edges`` maps each positively named local edge to ``(origin, terminus)``.
    """

    name: str
    vertices: tuple[str, ...]
    edges: Mapping[str, tuple[str, str]] = field(default_factory=dict, compare=False)

    @cached_property
    def _ends(self) -> dict[str, tuple[str, str]]:
        ends = {}
        for e, (o, t) in self.edges.items():
            ends[e] = (o, t)
            ends[inverse(e)] = (t, o)
        return ends

    @cached_property
    def _star(self) -> dict[str, list[str]]:
        star: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in sorted(self._ends):
            star.setdefault(self._ends[e][0], []).append(e)
        return star

    def oriented_edges(self) -> list[str]:
        return sorted(self._ends)

    def has_edge(self, le: str) -> bool:
        return le in self._ends

    def origin(self, le: str) -> str:
        try:
            return self._ends[le][0]
        except KeyError:
            raise StructuralError(f"no local edge {le!r} in space {self.name!r}") from None

    def terminus(self, le: str) -> str:
        try:
            return self._ends[le][1]
        except KeyError:
            raise StructuralError(f"no local edge {le!r} in space {self.name!r}") from None

    def star(self, v: str) -> list[str]:
        """Oriented local edges leaving ``v``."""
        return self._star.get(v, [])

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def essential(self) -> bool:
        return self.betti >= 1

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1 and not self.edges

    def path(self, start: str, steps: Iterable[str]) -> LocalPath:
        """Build and reduce the local path following ``steps`` from ``start``."""
        steps = tuple(steps)
        v = start
        for s in steps:
            if self.origin(s) != v:
                raise StructuralError(
                    f"local edge {s!r} does not start at {v!r} in space {self.name!r}")
            v = self.terminus(s)
        return LocalPath(self.name, start, v, free_reduce(steps))

    def path_ending(self, end: str, steps: Iterable[str]) -> LocalPath:
        """Same as :meth:`path` but anchored at the terminal vertex."""
        steps = tuple(steps)
        v = end
        for s in reversed(steps):
            if self.terminus(s) != v:
                raise StructuralError(
                    f"local edge {s!r} does not end at {v!r} in space {self.name!r}")
            v = self.origin(s)
        return LocalPath(self.name, v, end, free_reduce(steps))

    def tree_path(self, start: str, end: str) -> LocalPath:
        """The unique reduced path between two vertices of a tree space."""
        if self.essential:
            raise StructuralError(f"space {self.name!r} is not a tree")
        prev: dict[str, str | None] = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in self.star(v):
                w = self.terminus(e)
                if w not in prev:
                    prev[w] = e
                    queue.append(w)
        if end not in prev:
            raise StructuralError(f"{end!r} not reachable from {start!r} in {self.name!r}")
        steps = []
        v = end
        while prev[v] is not None:
            e = prev[v]
            steps.append(e)
            v = self.origin(e)
        return LocalPath(self.name, start, end, tuple(reversed(steps)))

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for e in self.star(v):
                w = self.terminus(e)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def all_paths(self, start: str, max_len: int) -> list[LocalPath]:
        """Every reduced local path from ``start`` with at most ``max_len`` steps."""
        out = [LocalPath(self.name, start, start, ())]
        frontier = [(start, ())]
        for _ in range(max_len):
            nxt = []
            for v, steps in frontier:
                for e in self.star(v):
                    if steps and steps[-1] == inverse(e):
                        continue
                    w = self.terminus(e)
                    s2 = steps + (e,)
                    out.append(LocalPath(self.name, start, w, s2))
                    nxt.append((w, s2))
            frontier = nxt
        return out


def point_space(name: str, vertex: str | None = None) -> VertexSpace:
    return VertexSpace(name, (vertex or name,), {})


class GraphOfSpaces:
    """Finite graph whose vertices are blown up to finite-graph vertex spaces.

    ``top_edges`` maps a positive top-edge name to its two attaching points
    ``((space, vertex), (space, vertex))``.  The involution on oriented top
    edges is the naming convention of :func:`inverse`.
    """

    def __init__(self, spaces: Mapping[str, VertexSpace],
                 top_edges: Mapping[str, tuple[Point, Point]]):
        self.spaces: dict[str, VertexSpace] = dict(spaces)
        self.top_edges: dict[str, tuple[Point, Point]] = {
            e: (tuple(o), tuple(t)) for e, (o, t) in top_edges.items()}
        self._ends: dict[str, tuple[Point, Point]] = {}
        for e, (o, t) in self.top_edges.items():
            self._ends[e] = (o, t)
            self._ends[inverse(e)] = (t, o)

    @classmethod
    def rose(cls, names: Iterable[str], space: str = "v") -> "GraphOfSpaces":
        names = list(names)
        return cls({space: point_space(space)},
                   {n: ((space, space), (space, space)) for n in names})

    def __repr__(self) -> str:
        return (f"GraphOfSpaces(spaces={sorted(self.spaces)}, "
                f"top_edges={sorted(self.top_edges)})")

    def oriented_edges(self) -> list[str]:
        return sorted(self._ends)

    def has_edge(self, e: str) -> bool:
        return e in self._ends

    def origin(self, e: str) -> Point:
        try:
            return self._ends[e][0]
        except KeyError:
            raise StructuralError(f"unknown top edge {e!r}") from None

    def terminus(self, e: str) -> Point:
        try:
            return self._ends[e][1]
        except KeyError:
            raise StructuralError(f"unknown top edge {e!r}") from None

    def space(self, name: str) -> VertexSpace:
        try:
            return self.spaces[name]
        except KeyError:
            raise StructuralError(f"unknown vertex space {name!r}") from None

    def edges_out_of(self, space: str) -> list[str]:
        return [e for e in self.oriented_edges() if self._ends[e][0][0] == space]

    def edges_into(self, space: str) -> list[str]:
        return [e for e in self.oriented_edges() if self._ends[e][1][0] == space]

    @property
    def is_absolute(self) -> bool:
        """All vertex spaces are single points."""
        return all(s.is_point for s in self.spaces.values())

    def connector(self, a: Point, b: Point) -> LocalPath:
        """Trivial connector at ``a == b``; unique tree path in inessential spaces."""
        if a == b:
            return trivial(a)
        if a[0] != b[0]:
            raise StructuralError(f"points {a} and {b} lie in different vertex spaces")
        return self.space(a[0]).tree_path(a[1], b[1])

    def local(self, space: str, start: str, steps: Iterable[str]) -> LocalPath:
        return self.space(space).path(start, steps)

    def structural_problems(self) -> list[str]:
        """Violations of the type invariants, as human-readable strings."""
        problems = []
        seen: dict[str, str] = {}
        for sname, sp in self.spaces.items():
            if sp.name != sname:
                problems.append(f"space key {sname!r} holds space named {sp.name!r}")
            if len(set(sp.vertices)) != len(sp.vertices):
                problems.append(f"space {sname!r}: duplicate local vertex")
            for le, (o, t) in sp.edges.items():
                if not is_positive(le):
                    problems.append(f"space {sname!r}: local edge {le!r} must use a positive name")
                if inverse(le) in sp.edges:
                    problems.append(f"space {sname!r}: local edges {le!r} and {inverse(le)!r} collide")
                for v in (o, t):
                    if v not in sp.vertices:
                        problems.append(
                            f"space {sname!r}: local edge {le!r} attaches to unknown vertex {v!r}")
            if not sp.is_connected():
                problems.append(f"space {sname!r} is not connected")
        for e, ends in self.top_edges.items():
            if not is_positive(e):
                problems.append(f"top edge {e!r} must use a positive name")
            if inverse(e) in self.top_edges:
                problems.append(f"top edges {e!r} and {inverse(e)!r} collide")
            if e in seen:
                problems.append(f"duplicate top edge {e!r}")
            seen[e] = e
            for end, label in zip(ends, ("origin", "terminus")):
                s, v = end
                if s not in self.spaces:
                    problems.append(f"top edge {e!r}: {label} in unknown space {s!r}")
                elif v not in self.spaces[s].vertices:
                    problems.append(
                        f"top edge {e!r}: {label} attaches to unknown vertex {v!r} of {s!r}")
        if not self.spaces:
            problems.append("no vertex spaces")
        elif not problems and not self._underlying_connected():
            problems.append("underlying graph is not connected")
        return problems

    def _underlying_connected(self) -> bool:
        names = sorted(self.spaces)
        adj: dict[str, set[str]] = {n: set() for n in names}
        for o, t in self.top_edges.values():
            adj[o[0]].add(t[0])
            adj[t[0]].add(o[0])
        seen = {names[0]}
        queue = deque(seen)
        while queue:
            s = queue.popleft()
            for w in adj[s]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(names)
