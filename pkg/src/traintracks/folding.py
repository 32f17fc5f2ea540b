"""Stallings folding of labelled graphs.

A :class:`Folder` holds a finite graph whose edges carry labels (oriented
edge names of some target graph, or ``None`` for edges that are to be
contracted).  Folding identifies edges with equal labels leaving a common
vertex until the labelling is locally injective.  The folder keeps enough
bookkeeping to pull paths of the folded graph back to the original graph:
every node ``x`` has a path ``sigma(x)`` to the representative of its class
whose label reads trivially.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import inverse

# a path in the unfolded graph: list of (edge id, direction) with direction +1/-1
RawPath = list


@dataclass
class RawEdge:
    u: int
    label: Optional[str]
    w: int


def _inv_raw(path):
    return [(k, -d) for k, d in reversed(path)]


def reduce_raw(path):
    out = []
    for k, d in path:
        if out and out[-1] == (k, -d):
            out.pop()
        else:
            out.append((k, d))
    return out


class Folder:
    def __init__(self):
        self.edges: list[RawEdge] = []
        self.n_nodes = 0
        self.parent: list[int] = []
        self.members: dict[int, list[int]] = {}
        self.sigma: list[list] = []
        self.lost_rank = 0

    def add_node(self) -> int:
        k = self.n_nodes
        self.n_nodes += 1
        self.parent.append(k)
        self.members[k] = [k]
        self.sigma.append([])
        return k

    def add_edge(self, u: int, label: Optional[str], w: int) -> int:
        self.edges.append(RawEdge(u, label, w))
        return len(self.edges) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def _merge(self, a: int, b: int, link) -> bool:
        """Merge the class of ``a`` into that of ``b``.

        ``link`` is a raw path from ``a`` to ``b`` with trivial label.
        Returns False when the two were already identified.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # path from rep(A) to rep(B): sigma(a)^-1 . link . sigma(b)
        bridge = reduce_raw(_inv_raw(self.sigma[a]) + list(link) + self.sigma[b])
        if len(self.members[ra]) > len(self.members[rb]):
            ra, rb = rb, ra
            bridge = _inv_raw(bridge)
        for x in self.members[ra]:
            self.sigma[x] = reduce_raw(self.sigma[x] + bridge)
        self.members[rb].extend(self.members.pop(ra))
        self.parent[ra] = rb
        return True

    def fold(self) -> None:
        """Fold to a locally injective labelled graph."""
        self.alive = list(range(len(self.edges)))
        changed = True
        while changed:
            changed = False
            # contract unlabelled edges
            for k in list(self.alive):
                e = self.edges[k]
                if e.label is None:
                    if not self._merge(e.u, e.w, [(k, 1)]):
                        self.lost_rank += 1
                    self.alive.remove(k)
                    changed = True
            out: dict[tuple[int, str], tuple[int, int]] = {}
            survivors = []
            for k in self.alive:
                e = self.edges[k]
                ends = ((e.u, e.label, e.w, 1), (e.w, inverse(e.label), e.u, -1))
                merged_away = False
                for start, lab, far, d in ends:
                    key = (self.find(start), lab)
                    if key in out:
                        k2, d2 = out[key]
                        e2 = self.edges[k2]
                        far2 = e2.w if d2 == 1 else e2.u
                        near2 = e2.u if d2 == 1 else e2.w
                        # path far -> start -> near2 -> far2 reads lab^-1 lab
                        link = ([(k, -d)] + self.sigma[start] + _inv_raw(self.sigma[near2])
                                + [(k2, d2)])
                        if not self._merge(far, far2, link):
                            self.lost_rank += 1
                        merged_away = True
                        changed = True
                        break
                if merged_away:
                    continue
                for start, lab, far, d in ends:
                    out[(self.find(start), lab)] = (k, d)
                survivors.append(k)
            self.alive = survivors
        self.rep_edge = {}
        for k in self.alive:
            e = self.edges[k]
            self.rep_edge[(self.find(e.u), e.label)] = (k, 1)
            self.rep_edge[(self.find(e.w), inverse(e.label))] = (k, -1)

    # -------------------------------------------------------------- queries

    def nodes(self) -> list[int]:
        return sorted({self.find(x) for x in range(self.n_nodes)})

    def folded_edges(self) -> list[tuple[int, str, int]]:
        return sorted((self.find(self.edges[k].u), self.edges[k].label, self.find(self.edges[k].w))
                      for k in self.alive)

    def betti(self) -> int:
        comps = self._components()
        return len(self.alive) - len(self.nodes()) + comps

    def _components(self) -> int:
        nodes = self.nodes()
        par = {n: n for n in nodes}

        def f(x):
            while par[x] != x:
                x = par[x]
            return x
        for k in self.alive:
            a, b = f(self.find(self.edges[k].u)), f(self.find(self.edges[k].w))
            if a != b:
                par[a] = b
        return len({f(n) for n in nodes})

    def read(self, start: int, labels) -> Optional[tuple[int, list]]:
        """Follow ``labels`` from ``start`` in the folded graph.

        Returns the end node and a raw path from ``start`` realizing the
        reading (label-equivalent up to trivial pieces), or None if the word
        leaves the folded graph.
        """
        node = self.find(start)
        raw = list(self.sigma[start])
        for lab in labels:
            hit = self.rep_edge.get((node, lab))
            if hit is None:
                return None
            k, d = hit
            e = self.edges[k]
            near, far = (e.u, e.w) if d == 1 else (e.w, e.u)
            raw += _inv_raw(self.sigma[near]) + [(k, d)] + self.sigma[far]
            node = self.find(far)
        return node, raw

    def raw_to(self, node_end: int, raw, end: int):
        """Complete ``raw`` (ending at the representative) to the node ``end``."""
        return reduce_raw(raw + _inv_raw(self.sigma[end]))

