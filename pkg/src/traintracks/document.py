"""JSON system documents and the rose shorthand.

A full document looks like::

    {"vertex_spaces": {"X": {"vertices": ["p"], "edges": {"x": ["p", "p"]}}},
     "top_edges": {"b": [["X", "p"], ["X", "p"]]},
     "morphism": {"vertex_maps": {"X": {"target": "X", "vertices": {"p": "p"},
                                        "edges": {"x": "x"}}},
                  "edge_maps": {"b": "b {X: x} b"}},
     "options": {"max_image_length": 100000}}

Edge images use the path grammar; a connector written before the first or
after the last edge is the lead or trail of the image.  The shorthand
``{"rose": {"a": "ab", "b": "a"}}`` describes a map of a rose with one point
vertex space, inverses written in upper case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import StructuralError
from .graph import GraphOfSpaces, VertexSpace
from .morphism import EdgeImage, GosMorphism, VertexMap
from .paths import _parse_connector, _parse_items, _split_words, format_connector, make_path

KNOWN_OPTIONS = {"max_image_length", "max_v_entries", "max_legalize_steps"}


class DocumentError(StructuralError):
    """A document problem together with its location in the input."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass
class SystemDocument:
    G: GraphOfSpaces
    f: GosMorphism
    options: dict[str, Any] = field(default_factory=dict)


def _expect(cond: bool, loc: str, msg: str) -> None:
    if not cond:
        raise DocumentError(loc, msg)


def _parse_spaces(data, loc="vertex_spaces") -> dict[str, VertexSpace]:
    _expect(isinstance(data, dict) and data, loc, "expected a non-empty object")
    out = {}
    for name, sp in data.items():
        here = f"{loc}.{name}"
        _expect(isinstance(sp, dict), here, "expected an object")
        verts = sp.get("vertices", [name])
        _expect(isinstance(verts, list) and verts and all(isinstance(v, str) for v in verts),
                f"{here}.vertices", "expected a non-empty list of names")
        edges = {}
        for e, ends in (sp.get("edges") or {}).items():
            _expect(isinstance(ends, list) and len(ends) == 2, f"{here}.edges.{e}",
                    "expected [origin, terminus]")
            for v, which in zip(ends, ("origin", "terminus")):
                _expect(v in verts, f"{here}.edges.{e}.{which}", f"unknown local vertex {v!r}")
            edges[e] = (ends[0], ends[1])
        out[name] = VertexSpace(name, tuple(verts), edges)
    return out


def _parse_point(data, spaces, loc):
    _expect(isinstance(data, list) and len(data) == 2, loc, "expected [space, vertex]")
    s, v = data
    _expect(s in spaces, loc, f"unknown vertex space {s!r}")
    _expect(v in spaces[s].vertices, loc, f"dangling attaching point: {v!r} is not a vertex of {s!r}")
    return (s, v)


def _parse_top_edges(data, spaces, loc="top_edges"):
    _expect(isinstance(data, dict), loc, "expected an object")
    out = {}
    for e, ends in data.items():
        here = f"{loc}.{e}"
        _expect(isinstance(ends, list) and len(ends) == 2, here, "expected [origin, terminus]")
        out[e] = (_parse_point(ends[0], spaces, f"{here}.origin"),
                  _parse_point(ends[1], spaces, f"{here}.terminus"))
    return out


def _parse_vertex_maps(data, G: GraphOfSpaces, loc="morphism.vertex_maps"):
    data = data or {}
    _expect(isinstance(data, dict), loc, "expected an object")
    out = {}
    for s, sp in G.spaces.items():
        here = f"{loc}.{s}"
        raw = data.get(s)
        if raw is None:
            _expect(sp.is_point, here, "missing vertex map")
            out[s] = VertexMap(s, s, {sp.vertices[0]: sp.vertices[0]}, {})
            continue
        target = raw.get("target", s)
        _expect(target in G.spaces, f"{here}.target", f"unknown vertex space {target!r}")
        tsp = G.spaces[target]
        vm = raw.get("vertices")
        if vm is None:
            _expect(len(tsp.vertices) == 1 or target == s, f"{here}.vertices", "missing vertex images")
            vm = {v: (v if target == s else tsp.vertices[0]) for v in sp.vertices}
        for v in sp.vertices:
            _expect(v in vm, f"{here}.vertices", f"no image for local vertex {v!r}")
            _expect(vm[v] in tsp.vertices, f"{here}.vertices.{v}", f"unknown target vertex {vm[v]!r}")
        em = {}
        for e, steps in (raw.get("edges") or {}).items():
            words = steps.split() if isinstance(steps, str) else list(steps)
            try:
                em[e] = tuple(_split_words(words, tsp.has_edge))
            except StructuralError as exc:
                raise DocumentError(f"{here}.edges.{e}", str(exc)) from None
        for e in sp.edges:
            _expect(e in em, f"{here}.edges", f"no image for local edge {e!r}")
        out[s] = VertexMap(s, target, dict(vm), em)
    return out


def parse_edge_image(G: GraphOfSpaces, f_points, e: str, text: str) -> EdgeImage:
    """Parse an edge image; ``f_points`` gives the images of the ends of ``e``."""
    edges, conns, leading, trailing = _parse_items(G, text)
    start, end = f_points
    if leading is not None:
        lead = _parse_connector(G, leading, start)
    else:
        lead = G.connector(start, G.origin(edges[0]))
    cs = [None if raw is None else _parse_connector(G, raw, G.terminus(edges[i]))
          for i, raw in enumerate(conns)]
    path = make_path(G, edges, cs)
    if trailing is not None:
        trail = _parse_connector(G, trailing, G.terminus(edges[-1]))
    else:
        trail = G.connector(G.terminus(edges[-1]), end)
    return EdgeImage(lead, path, trail)


def parse_document(data: dict) -> SystemDocument:
    _expect(isinstance(data, dict), "$", "expected a JSON object")
    options = data.get("options") or {}
    _expect(isinstance(options, dict), "options", "expected an object")
    for k in options:
        _expect(k in KNOWN_OPTIONS, f"options.{k}", "unknown option")
    if "rose" in data:
        images = data["rose"]
        _expect(isinstance(images, dict) and images, "rose", "expected an object of images")
        for x, w in images.items():
            _expect(len(x) == 1 and x.isalpha() and x.islower(), f"rose.{x}",
                    "rose edges are single lowercase letters")
            _expect(isinstance(w, str) and w.strip(), f"rose.{x}", "expected a non-empty word")
            for ch in w.replace(" ", ""):
                _expect(ch.lower() in images, f"rose.{x}", f"unknown letter {ch!r}")
        f = GosMorphism.rose(images)
        return SystemDocument(f.G, f, dict(options))
    spaces = _parse_spaces(data.get("vertex_spaces"))
    tops = _parse_top_edges(data.get("top_edges", {}), spaces)
    G = GraphOfSpaces(spaces, tops)
    mor = data.get("morphism") or {}
    vmaps = _parse_vertex_maps(mor.get("vertex_maps"), G)
    edge_maps = mor.get("edge_maps") or {}
    _expect(isinstance(edge_maps, dict), "morphism.edge_maps", "expected an object")
    images = {}
    for e in G.top_edges:
        here = f"morphism.edge_maps.{e}"
        _expect(e in edge_maps, here, "missing edge image")
        o, t = G.origin(e), G.terminus(e)
        pts = (vmaps[o[0]].point(o[1]), vmaps[t[0]].point(t[1]))
        try:
            images[e] = parse_edge_image(G, pts, e, edge_maps[e])
        except StructuralError as exc:
            raise DocumentError(here, str(exc)) from None
    for e in edge_maps:
        _expect(e in G.top_edges, f"morphism.edge_maps.{e}", "unknown top edge")
    f = GosMorphism(G, vmaps, images)
    if "max_image_length" in options:
        f.max_image_length = int(options["max_image_length"])
    return SystemDocument(G, f, dict(options))


def load_document(text: str) -> SystemDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_document(data)


def rose_document(shorthand: str) -> SystemDocument:
    """Parse ``"a=baccddeeff,b=a"`` style rose shorthand."""
    images = {}
    for item in shorthand.split(","):
        x, sep, w = item.partition("=")
        _expect(bool(sep), "rose", f"expected letter=word, got {item!r}")
        images[x.strip()] = w.strip()
    return parse_document({"rose": images})


def _image_text(img: EdgeImage) -> str:
    parts = []
    if not img.lead.is_trivial:
        parts.append(format_connector(img.lead))
    for i, e in enumerate(img.path.edges):
        if i and not img.path.connectors[i - 1].is_trivial:
            parts.append(format_connector(img.path.connectors[i - 1]))
        parts.append(e)
    if not img.trail.is_trivial:
        parts.append(format_connector(img.trail))
    return " ".join(parts)


def dump_document(G: GraphOfSpaces, f: GosMorphism) -> dict:
    """Serialize a system to the full document schema (deterministic ordering)."""
    spaces = {}
    for s in sorted(G.spaces):
        sp = G.spaces[s]
        spaces[s] = {"vertices": list(sp.vertices),
                     "edges": {e: list(sp.edges[e]) for e in sorted(sp.edges)}}
    tops = {e: [list(o), list(t)] for e, (o, t) in sorted(G.top_edges.items())}
    vmaps = {}
    for s in sorted(G.spaces):
        vm = f.vertex_map(s)
        vmaps[s] = {"target": vm.target,
                    "vertices": {v: vm.vertex_map[v] for v in G.spaces[s].vertices},
                    "edges": {e: " ".join(vm.edge_steps(e)) for e in sorted(G.spaces[s].edges)}}
    edge_maps = {e: _image_text(f.image(e)) for e in sorted(G.top_edges)}
    return {"vertex_spaces": spaces, "top_edges": tops,
            "morphism": {"vertex_maps": vmaps, "edge_maps": edge_maps}}


SAMPLES = ("rose6", "fibonacci", "circle")


def sample_document(name: str) -> SystemDocument:
    """Named sample systems used in the docs, demos and tests.

    ``rose6`` is a six-petal rose automorphism with two fixed INPs,
    ``fibonacci`` is ``a -> ab, b -> a`` and ``circle`` has a circle vertex
    space ``X`` (loop ``x``) and one top edge ``b -> b x b``.
    """
    if name == "rose6":
        return parse_document({"rose": {"a": "baccddeeff", "b": "a", "c": "ac",
                                        "d": "da", "e": "ae", "f": "fa"}})
    if name == "fibonacci":
        return parse_document({"rose": {"a": "ab", "b": "a"}})
    if name == "circle":
        return parse_document({
            "vertex_spaces": {"X": {"vertices": ["p"], "edges": {"x": ["p", "p"]}}},
            "top_edges": {"b": [["X", "p"], ["X", "p"]]},
            "morphism": {"vertex_maps": {"X": {"target": "X", "vertices": {"p": "p"},
                                               "edges": {"x": "x"}}},
                         "edge_maps": {"b": "b {X: x} b"}}})
    raise KeyError(f"unknown sample {name!r}")
