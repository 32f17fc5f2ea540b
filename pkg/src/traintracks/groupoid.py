"""Vertex-space maps through Stallings folds.

The fold factorization of a vertex map decides injectivity on fundamental
groups by comparing first Betti numbers, and it solves the lifting problem
behind preimage turns: find the unique reduced local path ``chi`` from ``p``
to ``q`` with ``[f(chi)] = psi``.  A second use folds the images of a free
basis of the total graph to decide surjectivity of the whole map.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConsistencyError, HypothesisViolation, StructuralError
from .folding import Folder, reduce_raw
from .graph import GraphOfSpaces, LocalPath, free_reduce, inverse, is_positive
from .morphism import GosMorphism


@dataclass
class ImmersionFactorization:
    source: str
    target: str
    folded_nodes: list[int]
    folded_edges: list[tuple[int, str, int]]
    quotient: dict[str, int]
    immersion: dict[int, str]
    injective: bool
    source_betti: int
    folded_betti: int
    _folder: Folder = field(repr=False, default=None)
    _pieces: dict = field(repr=False, default_factory=dict)


def _factor(G: GraphOfSpaces, f: GosMorphism, v: str) -> ImmersionFactorization:
    sp = G.space(v)
    vm = f.vertex_map(v)
    F = Folder()
    node_of = {x: F.add_node() for x in sp.vertices}
    node_target: dict[int, str] = {node_of[x]: vm.vertex_map[x] for x in sp.vertices}
    pieces: dict[int, tuple[str, int, int]] = {}   # raw edge -> (local edge, index, count)
    tsp = G.space(vm.target)
    for e in sorted(sp.edges):
        o, t = sp.edges[e]
        steps = free_reduce(vm.edge_steps(e))
        if not steps:
            k = F.add_edge(node_of[o], None, node_of[t])
            pieces[k] = (e, 0, 1)
            continue
        prev = node_of[o]
        for i, s in enumerate(steps):
            nxt = node_of[t] if i == len(steps) - 1 else F.add_node()
            if nxt not in node_target:
                node_target[nxt] = tsp.terminus(s)
            k = F.add_edge(prev, s, nxt)
            pieces[k] = (e, i, len(steps))
            prev = nxt
    F.fold()
    nodes = F.nodes()
    imm = {n: node_target[n] for n in nodes}
    for x, n in node_target.items():
        if imm[F.find(x)] != n:
            raise ConsistencyError("folding identified nodes with different images")
    fb = F.betti()
    return ImmersionFactorization(
        source=v, target=vm.target, folded_nodes=nodes, folded_edges=F.folded_edges(),
        quotient={x: F.find(node_of[x]) for x in sp.vertices}, immersion=imm,
        injective=(fb == sp.betti), source_betti=sp.betti, folded_betti=fb,
        _folder=F, _pieces={"pieces": pieces, "node_of": node_of})


def analyze_vertex_map(G: GraphOfSpaces, f: GosMorphism, v: str) -> ImmersionFactorization:
    """Fold factorization of the vertex map on ``X_v``; cached on ``f``."""
    cache = f.__dict__.setdefault("_factor_cache", {})
    hit = cache.get(v)
    if hit is None:
        hit = cache.setdefault(v, _factor(G, f, v))
    return hit


def connecting_preimage(G: GraphOfSpaces, f: GosMorphism, v: str, psi: LocalPath,
                        p: str, q: str) -> Optional[LocalPath]:
    """Unique reduced ``chi`` from ``p`` to ``q`` in ``X_v`` with ``[f(chi)] = psi``."""
    fac = analyze_vertex_map(G, f, v)
    if not fac.injective:
        raise HypothesisViolation(f"vertex map on {v!r} is not injective on fundamental groups")
    if psi.space != fac.target:
        raise StructuralError(f"{psi} is not in the image space {fac.target!r} of {v!r}")
    vm = f.vertex_map(v)
    if vm.vertex_map[p] != psi.start or vm.vertex_map[q] != psi.end:
        return None
    F = fac._folder
    node_of = fac._pieces["node_of"]
    hit = F.read(node_of[p], psi.steps)
    if hit is None:
        return None
    end, raw = hit
    if end != F.find(node_of[q]):
        return None
    raw = F.raw_to(end, raw, node_of[q])
    chi = _raw_to_local(G.space(v), fac._pieces["pieces"], raw, p)
    if vm.apply(chi) != psi:
        raise ConsistencyError(f"lifted path {chi} does not map to {psi}")
    return chi


def _raw_to_local(sp, pieces, raw, start) -> LocalPath:
    steps = []
    for k, d in reduce_raw(raw):
        e, i, n = pieces[k]
        if d == 1 and i == n - 1:
            steps.append(e)
        elif d == -1 and i == 0:
            steps.append(inverse(e))
    return sp.path(start, steps)


# ------------------------------------------------------------ total graph

def _local_name(space: str, le: str) -> str:
    if is_positive(le):
        return f"{space}/{le}"
    return inverse(f"{space}/{inverse(le)}")


def total_graph_images(G: GraphOfSpaces, f: GosMorphism):
    """Total graph of the realization and the induced map on its edges.

    Nodes are ``(space, vertex)`` pairs; edges are positive local edges (named
    ``space/edge``) and top edges.  Returns ``(nodes, edges, image)`` with
    ``edges`` mapping a positive name to ``(origin, terminus)`` and ``image``
    mapping it to a list of oriented total-graph edge names.
    """
    nodes = [(s, x) for s in sorted(G.spaces) for x in G.spaces[s].vertices]
    edges: dict[str, tuple] = {}
    image: dict[str, list[str]] = {}
    for s in sorted(G.spaces):
        sp = G.spaces[s]
        vm = f.vertex_map(s)
        for le, (o, t) in sorted(sp.edges.items()):
            name = f"{s}/{le}"
            edges[name] = ((s, o), (s, t))
            image[name] = [_local_name(vm.target, x) for x in vm.edge_steps(le)]
    for e, (o, t) in sorted(G.top_edges.items()):
        edges[e] = (o, t)
        img = f.image(e)
        word = [_local_name(img.lead.space, x) for x in img.lead.steps]
        for i, x in enumerate(img.path.edges):
            if i:
                c = img.path.connectors[i - 1]
                word += [_local_name(c.space, y) for y in c.steps]
            word.append(x)
        word += [_local_name(img.trail.space, x) for x in img.trail.steps]
        image[e] = word
    return nodes, edges, image


def spanning_basis(nodes, edges, base):
    """Spanning-tree paths from ``base`` and the basis loops at ``base``."""
    adj: dict = {n: [] for n in nodes}
    for name in sorted(edges):
        o, t = edges[name]
        adj[o].append((name, t))
        adj[t].append((inverse(name), o))
    tree_path = {base: []}
    tree_edges = set()
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for name, y in adj[x]:
            if y not in tree_path:
                tree_path[y] = tree_path[x] + [name]
                tree_edges.add(name if is_positive(name) else inverse(name))
                queue.append(y)
    loops = {}
    for name, (o, t) in sorted(edges.items()):
        if name in tree_edges or o not in tree_path or t not in tree_path:
            continue
        back = [inverse(x) for x in reversed(tree_path[t])]
        loops[name] = tree_path[o] + [name] + back
    return tree_path, loops


def image_word(image, word):
    out = []
    for x in word:
        if is_positive(x):
            out += image[x]
        else:
            out += [inverse(y) for y in reversed(image[inverse(x)])]
    return list(free_reduce(out))


def fold_words(words) -> tuple[Folder, int]:
    """Folded wedge of the given closed words at one base node."""
    F = Folder()
    b = F.add_node()
    for word in words:
        prev = b
        for i, x in enumerate(word):
            nxt = b if i == len(word) - 1 else F.add_node()
            if is_positive(x):
                F.add_edge(prev, x, nxt)
            else:
                F.add_edge(nxt, inverse(x), prev)
            prev = nxt
    F.fold()
    return F, b


def is_surjective_on_pi1(G: GraphOfSpaces, f: GosMorphism) -> bool:
    """Does ``f`` induce a surjection on the fundamental group of the total graph?"""
    nodes, edges, image = total_graph_images(G, f)
    base = nodes[0]
    _, loops = spanning_basis(nodes, edges, base)
    F, b = fold_words(image_word(image, loops[k]) for k in sorted(loops))
    # every basis loop at f(base) must be readable as a closed word
    _, target_loops = spanning_basis(nodes, edges, f.map_point(base))
    for name in sorted(target_loops):
        hit = F.read(b, free_reduce(target_loops[name]))
        if hit is None or hit[0] != F.find(b):
            return False
    return True
