"""Fixed subgroups and fixed or periodic conjugacy classes.

For an absolute map the fixed subgroup is read off a small auxiliary graph
``X*``: the edges fixed by ``f^p`` together with one extra edge ``e_eta`` for
every INP ``eta``, glued at the INP endpoints.  The map ``h: X* -> Gamma``
sends ``e_eta`` to ``eta`` and is the identity on the periodic edges, and the
fundamental group of the component of ``X*`` through a fixed vertex maps onto
the fixed subgroup of the induced automorphism.

INP endpoints may lie inside edges.  Such an edge ``e`` is subdivided at the
fixed point, which sits in the occurrence of ``e`` inside ``f^p(e)`` recorded
by the INP analysis; all words are computed in the subdivided graph and the
pieces are merged back at the end.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Optional

from .absolute import POLYNOMIAL, to_graph_of_spaces, transition_analysis
from .errors import ConsistencyError, DomainError
from .graph import GraphOfSpaces, free_reduce, inverse, is_positive, point_space
from .groupoid import fold_words, spanning_basis
from .inp import _key, _locus_index, _rev_locus, compute_inps, legalize
from .morphism import GosMorphism
from .paths import ClosedPath, Locus, ZeroPath, reduce_path

Word = tuple[str, ...]


def _pos(x: str) -> str:
    return x if is_positive(x) else inverse(x)


def invert_word(w) -> Word:
    return tuple(inverse(x) for x in reversed(w))


def format_word(w) -> str:
    return " ".join(w) if w else "1"


# ------------------------------------------------------------------ X*

@dataclass
class Subdivision:
    """An edge cut at fixed points; ``indices`` are occurrences in ``f^power(edge)``."""

    edge: str
    power: int
    indices: tuple[int, ...]
    pieces: tuple[str, ...]
    points: tuple[str, ...]

    def as_dict(self) -> dict:
        return {"edge": self.edge, "power": self.power, "indices": list(self.indices),
                "pieces": list(self.pieces), "points": list(self.points)}


@dataclass
class XStar:
    nodes: list[str]
    edges: dict[str, tuple[str, str]]
    star_map: dict[str, Word]
    h_map: dict[str, Word]
    power_used: int
    subdivisions: list[Subdivision]
    inp_edges: dict[str, str] = field(default_factory=dict)
    graph: Optional[GraphOfSpaces] = field(default=None, repr=False)
    base_map: Optional[GosMorphism] = field(default=None, repr=False)
    _sub_images: dict = field(default_factory=dict, repr=False)
    _piece_of: dict = field(default_factory=dict, repr=False)

    def h_word(self, word) -> Word:
        """``h`` of an X*-edge word, reduced, in the subdivided alphabet."""
        out: list[str] = []
        for x in word:
            if is_positive(x):
                out.extend(self.h_map[x])
            else:
                out.extend(invert_word(self.h_map[inverse(x)]))
        return free_reduce(out)

    def merge(self, word) -> Word:
        """Rewrite a reduced word between original vertices in the original edges."""
        out = []
        i = 0
        word = list(word)
        while i < len(word):
            x = word[i]
            hit = self._piece_of.get(_pos(x))
            if hit is None:
                out.append(x)
                i += 1
                continue
            e, _ = hit
            pieces = next(s.pieces for s in self.subdivisions if s.edge == e)
            run = list(pieces) if is_positive(x) else list(invert_word(pieces))
            if word[i:i + len(run)] != run:
                raise DomainError(f"word enters {e!r} without crossing it completely")
            out.append(e if is_positive(x) else inverse(e))
            i += len(run)
        return tuple(out)

    def as_dict(self) -> dict:
        return {"power_used": self.power_used, "nodes": list(self.nodes),
                "edges": {k: list(v) for k, v in sorted(self.edges.items())},
                "h": {k: format_word(v) for k, v in sorted(self.h_map.items())},
                "star_map": {k: format_word(v) for k, v in sorted(self.star_map.items())},
                "inp_edges": dict(self.inp_edges),
                "subdivisions": [s.as_dict() for s in self.subdivisions]}


def _word(p) -> list[str]:
    """Edge names of an edge path, with connector steps spelled out."""
    out = []
    for i, e in enumerate(p.edges):
        if i:
            out.extend(p.connectors[i - 1].steps)
        out.append(e)
    return out


def _image_word(f: GosMorphism, e: str, t: int) -> list[str]:
    return list(f.iterate_edge_image(e, t).edges)


def _periodic_edges(f: GosMorphism, ta) -> dict[str, int]:
    """Period of every polynomially growing edge; DomainError if one is not periodic."""
    out = {}
    for e in ta.edges:
        if ta.growth[e] != POLYNOMIAL:
            continue
        x = e
        for k in range(1, 2 * len(ta.edges) + 1):
            img = f.edge_image(x).edges
            if len(img) != 1:
                break
            x = img[0]
            if x == e:
                out[e] = k
                break
        if e not in out:
            raise DomainError(
                f"polynomially growing edge {e!r} is not periodic; X* needs periodic edges")
    return out


def _inp_system(f: GosMorphism, ta):
    """The system on which INPs are computed and a translation of its paths."""
    if all(g != POLYNOMIAL for g in ta.growth.values()):
        return f.G, f
    return to_graph_of_spaces(f)


def _gamma_index(f: GosMorphism, top: set, x: Locus, P: int, idx: int) -> int:
    """Position in the word ``f^P(edge)`` of the ``idx``-th top-edge letter."""
    if len(top) == len(f.G.top_edges):
        return idx
    word = _image_word(f, x.edge, P)
    seen = -1
    for i, y in enumerate(word):
        if _pos(y) in top:
            seen += 1
            if seen == idx:
                return i
    raise ConsistencyError(f"occurrence {idx} not found in f^{P}({x.edge})")


def build_xstar(f: GosMorphism) -> XStar:
    """X*, f* and h for an absolute map, at the least power fixing everything."""
    G = f.G
    if not G.is_absolute:
        raise DomainError("build_xstar expects an absolute map")
    ta = transition_analysis(f)
    periodic = _periodic_edges(f, ta)
    top = {e for e in ta.edges if ta.growth[e] != POLYNOMIAL}
    records = []
    H = g = None
    if top:
        H, g = _inp_system(f, ta)
        records = [r for r in compute_inps(H, g, t_star=False).records]
        for r in records:
            if not r.verified:
                raise ConsistencyError(f"INP {r} has an unverified endpoint occurrence")
    p = 1
    for k in periodic.values():
        p = lcm(p, k)
    for r in records:
        p = lcm(p, r.period)
    # interior endpoints, normalised to positive edges, as occurrences at power p
    cuts: dict[str, set[int]] = {}

    def norm(x: Locus) -> tuple[str, int]:
        if not is_positive(x.edge):
            x = _rev_locus(g, x)
        idx = _locus_index(g, x, p)
        return x.edge, _gamma_index(f, top, x, p, idx)

    for r in records:
        for x in (r.head, r.tail):
            if isinstance(x, Locus):
                e, k = norm(x)
                cuts.setdefault(e, set()).add(k)
    subdivisions = []
    piece_of = {}
    for e in sorted(cuts):
        ks = tuple(sorted(cuts[e]))
        word = _image_word(f, e, p)
        for k in ks:
            if word[k] != e:
                raise ConsistencyError(f"occurrence {k} of f^{p}({e}) is {word[k]!r}, not {e!r}")
        pieces = tuple(f"{e}.{i}" for i in range(1, len(ks) + 2))
        points = tuple(f"{e}@{k}" for k in ks)
        subdivisions.append(Subdivision(e, p, ks, pieces, points))
        for i, x in enumerate(pieces):
            piece_of[x] = (e, i)
    sub = {s.edge: s for s in subdivisions}

    def split(x: str) -> list[str]:
        s = sub.get(_pos(x))
        if s is None:
            return [x]
        return list(s.pieces) if is_positive(x) else list(invert_word(s.pieces))

    def rewrite(word) -> list[str]:
        out = []
        for x in word:
            out.extend(split(x))
        return out

    # the subdivided graph and the images of f^p on it
    spaces = dict(G.spaces)
    tops = {}
    for e, (o, t) in G.top_edges.items():
        s = sub.get(e)
        if s is None:
            tops[e] = (o, t)
            continue
        ends = [o] + [(q, q) for q in s.points] + [t]
        for q in s.points:
            spaces[q] = point_space(q)
        for i, x in enumerate(s.pieces):
            tops[x] = (ends[i], ends[i + 1])
    sub_graph = GraphOfSpaces(spaces, tops)
    sub_images: dict[str, Word] = {}
    for e in sorted(G.top_edges):
        img = rewrite(_image_word(f, e, p))
        s = sub.get(e)
        if s is None:
            sub_images[e] = free_reduce(img)
            continue
        # positions of the occurrences of e inside the rewritten image
        m = len(s.pieces)
        starts = []
        acc = 0
        for i, y in enumerate(_image_word(f, e, p)):
            if i in s.indices:
                starts.append(acc)
            acc += len(split(y))
        for i, x in enumerate(s.pieces):
            # f^p(e_1 .. e_{i+1}) = f^p(e)[: occurrence i] e_1 .. e_{i+1}
            upto = img[:starts[i]] + list(s.pieces[:i + 1]) if i < m - 1 else img
            before = img[:starts[i - 1]] + list(s.pieces[:i]) if i else []
            sub_images[x] = free_reduce(list(invert_word(before)) + upto)
    point_image = {}
    for v in G.spaces:
        point_image[v] = f.map_point((v, v))[0]
        for _ in range(p - 1):
            point_image[v] = f.map_point((point_image[v], point_image[v]))[0]
    for s in subdivisions:
        for q in s.points:
            point_image[q] = q

    def apply(word) -> Word:
        out = []
        for x in word:
            out.extend(sub_images[x] if is_positive(x) else invert_word(sub_images[inverse(x)]))
        return free_reduce(out)

    def origin(x):
        return sub_graph.origin(x)[0]

    def terminus(x):
        return sub_graph.terminus(x)[0]

    # X*: fixed vertices, fixed edges, one edge per INP
    nodes = sorted(v for v in sub_graph.spaces if point_image[v] == v)
    edges: dict[str, tuple[str, str]] = {}
    h_map: dict[str, Word] = {}
    for e in sorted(periodic):
        if apply((e,)) == (e,):
            edges[e] = (origin(e), terminus(e))
            h_map[e] = (e,)
    inp_edges = {}
    for n, r in enumerate(records, 1):
        word = _word(r.prolongation)
        body = rewrite(word[1:-1])
        first, last = word[0], word[-1]
        head = split(first)
        tail = split(last)
        if isinstance(r.head, Locus):
            e, k = norm(r.head)
            i = sub[e].indices.index(k)
            head = list(sub[e].pieces[i + 1:]) if is_positive(first) else list(
                invert_word(sub[e].pieces[:i + 1]))
        if isinstance(r.tail, Locus):
            e, k = norm(r.tail)
            i = sub[e].indices.index(k)
            tail = list(sub[e].pieces[:i + 1]) if is_positive(last) else list(
                invert_word(sub[e].pieces[i + 1:]))
        w = tuple(head + body + tail)
        name = f"eta{n}"
        edges[name] = (origin(w[0]), terminus(w[-1]))
        h_map[name] = w
        inp_edges[name] = str(r.prolongation)
    star_map = {}
    for name, w in h_map.items():
        img = apply(w)
        hits = [k for k, v in h_map.items() if v == img]
        rev = [k for k, v in h_map.items() if v == invert_word(img)]
        if hits:
            star_map[name] = (hits[0],)
        elif rev:
            star_map[name] = (inverse(rev[0]),)
        else:
            raise ConsistencyError(f"h f*({name}) = [f^{p} h({name})] fails: image {format_word(img)}")
    xs = XStar(nodes, edges, star_map, h_map, p, subdivisions, inp_edges, sub_graph, f,
               sub_images, piece_of)
    for name in edges:
        if xs.h_word(star_map[name]) != apply(h_map[name]):
            raise ConsistencyError(f"h f* = [f^{p} h] fails on {name}")
    return xs


# ------------------------------------------------------- fixed subgroup

@dataclass
class FixedSubgroup:
    base: str
    power: int
    generators: list[Word]

    @property
    def rank_bound(self) -> int:
        return len(self.generators)

    def contains(self, word) -> bool:
        return subgroup_contains(self.generators, word)

    def as_dict(self) -> dict:
        return {"base": self.base, "power": self.power,
                "generators": [format_word(g) for g in self.generators]}


def subgroup_contains(generators, word) -> bool:
    """Membership in the subgroup generated by closed words, via Stallings folds."""
    word = free_reduce(word)
    if not word:
        return True
    F, b = fold_words([list(g) for g in generators if g])
    hit = F.read(b, word)
    return hit is not None and hit[0] == F.find(b)


def apply_power(f: GosMorphism, word, t: int) -> Word:
    w = tuple(word)
    for _ in range(t):
        out = []
        for x in w:
            out.extend(f.edge_image(x).edges)
        w = free_reduce(out)
    return w


def _component(xs: XStar, P: str):
    adj: dict[str, list[str]] = {v: [] for v in xs.nodes}
    for name, (o, t) in xs.edges.items():
        adj[o].append(t)
        adj[t].append(o)
    seen = {P}
    queue = deque([P])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    edges = {k: v for k, v in xs.edges.items() if v[0] in seen}
    return sorted(seen), edges


def fixed_subgroup_generators(xs: XStar, P: str) -> FixedSubgroup:
    """Generators of the subgroup fixed by the lift of ``f^power_used`` at ``P``.

    Each basis loop of the component of X* through ``P`` is pushed through
    ``h``, reduced, and checked to be fixed.
    """
    if P not in xs.nodes or P not in xs.base_map.G.spaces:
        raise DomainError(f"{P!r} is not a vertex fixed by f^{xs.power_used}")
    nodes, edges = _component(xs, P)
    _, loops = spanning_basis(nodes, edges, P)
    f = xs.base_map
    gens = []
    for name in sorted(loops):
        w = xs.merge(xs.h_word(loops[name]))
        if not w:
            continue
        if apply_power(f, w, xs.power_used) != w:
            raise ConsistencyError(f"generator {format_word(w)} is not fixed")
        if w not in gens:
            gens.append(w)
    return FixedSubgroup(P, xs.power_used, gens)


def twisted_lift_fixes(xs: XStar, w, g) -> bool:
    """Is ``g`` fixed by the lift ``x -> w f^p(x) w^-1`` at the base vertex?"""
    f = xs.base_map
    img = tuple(w) + apply_power(f, g, xs.power_used) + invert_word(w)
    return free_reduce(img) == free_reduce(g)


# ------------------------------------------------- conjugacy classes

VERTEX_SPACE = "vertex-space"
INP_CONCATENATION = "inp-concatenation"
NOT_PERIODIC = "not-periodic"


@dataclass
class FixCertificate:
    kind: str
    periodic: bool
    fixed: bool
    pieces: list[str] = field(default_factory=list)
    shift: Optional[int] = None
    exponent: int = 0
    period: Optional[int] = None
    path: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind, "periodic": self.periodic, "fixed": self.fixed,
                "pieces": list(self.pieces), "shift": self.shift, "exponent": self.exponent,
                "period": self.period, "path": self.path}


def _cyclic_range(p: ClosedPath, a: int, b: int) -> tuple[str, ...]:
    n = len(p.edges)
    length = (b - a) % n + 1
    return tuple(p.edges[(a + i) % n] for i in range(length))


def classify_conjugacy_class(G: GraphOfSpaces, f: GosMorphism, gamma) -> FixCertificate:
    """Decide whether the conjugacy class of a loop is periodic or fixed.

    The loop is cyclically reduced and legalized; the class is periodic exactly
    when the legalized loop is a cyclic concatenation of INPs.
    """
    if isinstance(gamma, ZeroPath):
        return FixCertificate(VERTEX_SPACE, True, True, path=str(gamma))
    p = reduce_path(G, gamma)
    if isinstance(p, ZeroPath):
        return FixCertificate(VERTEX_SPACE, True, True, path=str(p))
    leg = legalize(G, f, p)
    q = leg.path
    if isinstance(q, ZeroPath):
        return FixCertificate(VERTEX_SPACE, True, True, exponent=leg.exponent, path=str(q))
    if any(kind != "inp" for kind, *_ in leg.pieces):
        return FixCertificate(NOT_PERIODIC, False, False, exponent=leg.exponent, path=str(q))
    analysis = compute_inps(G, f, t_star=False)
    pieces = []
    for _, a, b, rec in leg.pieces:
        toks = _cyclic_range(q, a, b)
        forward = toks == rec.prolongation.edges
        pieces.append((_key(rec.prolongation), forward, toks))
    cap = len(pieces)
    for r in analysis.records:
        cap = lcm(cap, r.period * len(pieces))
    cur, period = q, None
    for n in range(1, cap + 1):
        cur = f.reduced_image(cur)
        if isinstance(cur, ClosedPath) and cur.same_cycle(q):
            period = n
            break
    if period is None:
        raise ConsistencyError(f"INP concatenation {q} does not return within {cap} steps")
    shift = None
    if period == 1:
        table = analysis.vplus.fhat_table
        images = []
        for k, fwd, _ in pieces:
            k2, flip = table[k]
            images.append((k2, fwd != flip))
        here = [(k, fwd) for k, fwd, _ in pieces]
        m = len(here)
        for s in range(m):
            if all(images[i] == here[(i + s) % m] for i in range(m)):
                shift = s
                break
        if shift is None:
            raise ConsistencyError(f"fixed loop {q} has no consistent piece shift")
    return FixCertificate(INP_CONCATENATION, True, period == 1,
                          [" ".join(t) for _, _, t in pieces], shift, leg.exponent, period, str(q))
