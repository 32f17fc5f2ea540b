"""Whole-system validation of a graph of spaces together with a self-map."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import StructuralError, TrainTrackError
from .graph import GraphOfSpaces
from .groupoid import analyze_vertex_map
from .morphism import GosMorphism, check_image


@dataclass
class ValidationReport:
    """Violations grouped by check; ``ok`` when every list is empty."""

    problems: dict[str, list[str]] = field(default_factory=dict)

    def add(self, check: str, message: str) -> None:
        self.problems.setdefault(check, []).append(message)

    @property
    def ok(self) -> bool:
        return not any(self.problems.values())

    def messages(self) -> list[str]:
        return [f"{k}: {m}" for k in sorted(self.problems) for m in self.problems[k]]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "problems": {k: list(v) for k, v in sorted(self.problems.items())}}


def _check_vertex_map(G: GraphOfSpaces, f: GosMorphism, s: str, report: ValidationReport):
    sp = G.space(s)
    try:
        vm = f.vertex_map(s)
    except TrainTrackError as exc:
        report.add("vertex_maps", str(exc))
        return False
    if vm.target not in G.spaces:
        report.add("vertex_maps", f"space {s!r} maps to unknown space {vm.target!r}")
        return False
    tsp = G.space(vm.target)
    ok = True
    for x in sp.vertices:
        if x not in vm.vertex_map:
            report.add("vertex_maps", f"local vertex {x!r} of {s!r} has no image")
            ok = False
        elif vm.vertex_map[x] not in tsp.vertices:
            report.add("vertex_maps", f"local vertex {x!r} of {s!r} maps outside {vm.target!r}")
            ok = False
    if not ok:
        return False
    for le, (o, t) in sorted(sp.edges.items()):
        try:
            steps = vm.edge_steps(le)
            lp = tsp.path(vm.vertex_map[o], steps)
        except StructuralError as exc:
            report.add("vertex_maps", f"local edge {le!r} of {s!r}: {exc}")
            ok = False
            continue
        if lp.end != vm.vertex_map[t]:
            report.add("vertex_maps",
                       f"image of local edge {le!r} of {s!r} ends at {lp.end!r}, "
                       f"expected {vm.vertex_map[t]!r}")
            ok = False
    return ok


def validate_system(G: GraphOfSpaces, f: GosMorphism) -> ValidationReport:
    """Check every structural invariant plus the standing hypotheses on vertex maps.

    Violations are collected, never raised, and neither input is modified.
    """
    report = ValidationReport()
    for msg in G.structural_problems():
        report.add("graph", msg)
    if not report.ok:
        return report
    maps_ok = all([_check_vertex_map(G, f, s, report) for s in sorted(G.spaces)])
    for e in sorted(G.top_edges):
        try:
            for msg in check_image(G, f, e):
                report.add("edge_images", msg)
        except TrainTrackError as exc:
            report.add("edge_images", str(exc))
    if not maps_ok:
        return report
    essential = sorted(s for s, sp in G.spaces.items() if sp.essential)
    targets = [f.space_image(s) for s in essential]
    if sorted(targets) != essential:
        report.add("essential_spaces",
                   "vertex spaces with non-trivial fundamental group are not permuted: "
                   + ", ".join(f"{s}->{t}" for s, t in zip(essential, targets)))
    for s in sorted(G.spaces):
        fac = analyze_vertex_map(G, f, s)
        if not fac.injective:
            report.add("injectivity",
                       f"vertex map on {s!r} drops rank {fac.source_betti} -> {fac.folded_betti}")
    return report
