"""Front end for absolute maps: transition matrix, growth, collapsing, Whitehead graphs.

An absolute map is a :class:`GosMorphism` whose vertex spaces are all single
points, i.e. an ordinary self-map of a finite graph.  Polynomially growing
edges are collapsed into vertex spaces by :func:`to_graph_of_spaces`, which
turns such a map into an expanding map of a graph of spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainError
from .graph import GraphOfSpaces, VertexSpace, inverse, is_positive
from .groupoid import total_graph_images
from .morphism import EdgeImage, GosMorphism, VertexMap
from .paths import EdgePath
from .turns import image_turn, path_turns

POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"


@dataclass
class TransitionAnalysis:
    """Transition matrix ``M[e', e]`` = number of times ``f(e)`` crosses ``e'``."""

    edges: list[str]
    matrix: np.ndarray
    primitive: bool
    witness: Optional[int]
    growth: dict[str, str]
    components: list[list[str]]
    growing_components: list[int] = field(default_factory=list)

    def column(self, e: str) -> dict[str, int]:
        j = self.edges.index(e)
        return {x: int(self.matrix[i, j]) for i, x in enumerate(self.edges) if self.matrix[i, j]}

    @property
    def polynomial_edges(self) -> list[str]:
        return [e for e in self.edges if self.growth[e] == POLYNOMIAL]

    @property
    def exponential_edges(self) -> list[str]:
        return [e for e in self.edges if self.growth[e] == EXPONENTIAL]

    def as_dict(self) -> dict:
        return {"edges": list(self.edges), "matrix": self.matrix.tolist(),
                "primitive": self.primitive, "witness": self.witness,
                "growth": dict(self.growth), "components": [list(c) for c in self.components]}


def _positive(x: str) -> str:
    return x if is_positive(x) else inverse(x)


def transition_matrix(f: GosMorphism) -> tuple[list[str], np.ndarray]:
    """Edges of the total graph and the crossing-count matrix of ``f``."""
    _, edges, image = total_graph_images(f.G, f)
    names = sorted(edges)
    pos = {e: i for i, e in enumerate(names)}
    M = np.zeros((len(names), len(names)), dtype=np.int64)
    for e in names:
        for x in image[e]:
            M[pos[_positive(x)], pos[e]] += 1
    return names, M


def primitivity_witness(M: np.ndarray) -> Optional[int]:
    """Least ``k`` with ``M^k`` entrywise positive, searched up to ``(n-1)^2 + 1``."""
    n = M.shape[0]
    if n == 0:
        return None
    B = (M > 0).astype(np.int64)
    P = B.copy()
    for k in range(1, (n - 1) ** 2 + 2):
        if P.all():
            return k
        P = ((P @ B) > 0).astype(np.int64)
    return None


def _reachability(A: np.ndarray) -> np.ndarray:
    """Boolean reflexive-transitive closure of an adjacency matrix."""
    n = A.shape[0]
    R = ((A > 0) | np.eye(n, dtype=bool)).astype(np.int64)
    while True:
        R2 = ((R @ R) > 0).astype(np.int64)
        if (R2 == R).all():
            return R.astype(bool)
        R = R2


def transition_analysis(f: GosMorphism) -> TransitionAnalysis:
    names, M = transition_matrix(f)
    n = len(names)
    # e -> e' whenever f(e) crosses e'
    A = M.T
    ncomp, labels = connected_components(csr_matrix(A > 0), directed=True, connection="strong")
    components = [[names[i] for i in range(n) if labels[i] == c] for c in range(ncomp)]
    growing = []
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        sub = M[np.ix_(idx, idx)]
        if not sub.any():
            continue
        # an irreducible non-negative integer block has spectral radius <= 1
        # exactly when it is a permutation matrix
        is_perm = (sub.sum(axis=0) == 1).all() and (sub.sum(axis=1) == 1).all()
        if not is_perm:
            growing.append(c)
    R = _reachability(A)
    growth = {}
    for i, e in enumerate(names):
        reach = np.flatnonzero(R[i])
        hit = any(labels[j] in growing for j in reach)
        growth[e] = EXPONENTIAL if hit else POLYNOMIAL
    witness = primitivity_witness(M) if ncomp == 1 else None
    order = sorted(range(ncomp), key=lambda c: components[c])
    return TransitionAnalysis(names, M, witness is not None, witness, growth,
                              [components[c] for c in order],
                              sorted(order.index(c) for c in growing))


# ------------------------------------------------------- collapsing

def _require_absolute(G: GraphOfSpaces) -> None:
    if not G.is_absolute:
        raise DomainError("expected an absolute map (every vertex space a single point)")


def to_graph_of_spaces(f: GosMorphism) -> tuple[GraphOfSpaces, GosMorphism]:
    """Collapse the polynomially growing part of an absolute map into vertex spaces.

    Each connected component of the union of all vertices with the
    polynomially growing edges becomes a vertex space named after its
    smallest vertex; the exponentially growing edges become the top edges.
    """
    G = f.G
    _require_absolute(G)
    ta = transition_analysis(f)
    poly = set(ta.polynomial_edges)
    top = [e for e in ta.edges if e not in poly]
    if not top:
        raise DomainError("no exponentially growing edges: the collapsed system would be empty")
    parent = {v: v for v in G.spaces}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in poly:
        a, b = find(G.origin(e)[0]), find(G.terminus(e)[0])
        if a != b:
            parent[max(a, b)] = min(a, b)
    comp = {v: find(v) for v in G.spaces}
    members: dict[str, list[str]] = {}
    for v in sorted(G.spaces):
        members.setdefault(comp[v], []).append(v)
    spaces = {}
    for c, vs in members.items():
        local = {e: (G.origin(e)[0], G.terminus(e)[0]) for e in sorted(poly) if comp[G.origin(e)[0]] == c}
        spaces[c] = VertexSpace(c, tuple(vs), local)
    top_edges = {e: ((comp[G.origin(e)[0]], G.origin(e)[0]),
                     (comp[G.terminus(e)[0]], G.terminus(e)[0])) for e in top}
    H = GraphOfSpaces(spaces, top_edges)

    def vertex_image(v: str) -> str:
        return f.map_point((v, v))[0]

    vmaps = {}
    for c, vs in members.items():
        targets = {comp[vertex_image(v)] for v in vs}
        if len(targets) != 1:
            raise DomainError(f"component {c!r} is not mapped into a single component")
        vm = {v: vertex_image(v) for v in vs}
        em = {e: tuple(f.edge_image(e).edges) for e in spaces[c].edges}
        vmaps[c] = VertexMap(c, targets.pop(), vm, em)

    images = {}
    for e in top:
        word = f.edge_image(e).edges
        start = vertex_image(G.origin(e)[0])
        runs: list[list[str]] = [[]]
        tops: list[str] = []
        for x in word:
            if _positive(x) in poly:
                runs[-1].append(x)
            else:
                tops.append(x)
                runs.append([])
        local_paths = []
        v = start
        for i, run in enumerate(runs):
            if i:
                v = G.terminus(tops[i - 1])[0]
            sp = spaces[comp[v]]
            lp = sp.path(v, run)
            local_paths.append(lp)
        images[e] = EdgeImage(local_paths[0], EdgePath(tuple(tops), tuple(local_paths[1:-1])),
                              local_paths[-1])
    return H, GosMorphism(H, vmaps, images, max_image_length=f.max_image_length)


# ------------------------------------------------------- Whitehead graphs

@dataclass
class WhiteheadGraph:
    vertex: str
    directions: list[str]
    arcs: list[tuple[str, str]]
    connected: bool

    def as_dict(self) -> dict:
        return {"vertex": self.vertex, "directions": list(self.directions),
                "arcs": [list(a) for a in self.arcs], "connected": self.connected}


def whitehead_turns(f: GosMorphism) -> set:
    """Turns of all edge images, closed under taking image turns."""
    seen = set()
    todo = []
    for e in f.positive_edges():
        for T in path_turns(f.edge_image(e)):
            if T not in seen:
                seen.add(T)
                todo.append(T)
    while todo:
        T = image_turn(f, todo.pop())
        if T not in seen:
            seen.add(T)
            todo.append(T)
    return seen


def whitehead_graphs(f: GosMorphism) -> dict[str, WhiteheadGraph]:
    """Per vertex: directions as nodes and the turns taken by iterated images as arcs."""
    G = f.G
    _require_absolute(G)
    turns = whitehead_turns(f)
    out = {}
    for v in sorted(G.spaces):
        dirs = [e for e in G.oriented_edges() if G.origin(e)[0] == v]
        pos = {d: i for i, d in enumerate(dirs)}
        arcs = set()
        for T in turns:
            a, b = inverse(T.incoming), T.outgoing
            if a in pos and b in pos:
                arcs.add(tuple(sorted((a, b))))
        arcs = sorted(arcs)
        if dirs:
            A = np.zeros((len(dirs), len(dirs)), dtype=np.int8)
            for a, b in arcs:
                A[pos[a], pos[b]] = A[pos[b], pos[a]] = 1
            ncomp, _ = connected_components(csr_matrix(A), directed=False)
            connected = ncomp == 1
        else:
            connected = True
        out[v] = WhiteheadGraph(v, dirs, arcs, connected)
    return out
