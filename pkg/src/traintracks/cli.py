"""Command line front end.

Every subcommand reads one system (a JSON document, ``-`` for stdin, or a
``--rose`` shorthand) and prints a report as JSON or as indented text.

Exit codes: 0 success, 1 parse or validation failure, 2 the map violates a
standing hypothesis (not a train track map, not expanding, non-injective
vertex map), 3 a resource cap was exceeded, 4 an internal consistency check
failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .absolute import to_graph_of_spaces, transition_analysis, whitehead_graphs
from .bounds import compute_bounds
from .document import DocumentError, SystemDocument, dump_document, load_document, rose_document
from .errors import CapacityError, ConsistencyError, DomainError, HypothesisViolation, StructuralError
from .fixed import build_xstar, classify_conjugacy_class, fixed_subgroup_generators
from .groupoid import is_surjective_on_pi1
from .inp import compute_inps, decay_check, legalize
from .paths import parse_loop, parse_path
from .system import validate_system
from .turns import illegal_turn_closure, map_profile, special_turns
from .vsets import enumerate_v

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


class ValidationFailed(Exception):
    def __init__(self, report: dict):
        self.report = report
        super().__init__("system failed validation")


# ---------------------------------------------------------------- helpers

def _load(args) -> SystemDocument:
    if args.rose:
        doc = rose_document(args.rose)
    elif args.system is None:
        raise DocumentError("arguments", "give a system file, '-' for stdin, or --rose")
    elif args.system == "-":
        doc = load_document(sys.stdin.read())
    else:
        try:
            with open(args.system, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DocumentError(args.system, exc.strerror or str(exc)) from None
        doc = load_document(text)
    cap = args.max_image_length or doc.options.get("max_image_length")
    if cap:
        doc.f.max_image_length = int(cap)
    return doc


def _checked(doc: SystemDocument) -> SystemDocument:
    rep = validate_system(doc.G, doc.f)
    if not rep.ok:
        raise ValidationFailed(rep.as_dict())
    return doc


def _turn_list(turns) -> list[str]:
    return [str(T) for T in sorted(turns)]


def _closure_dict(cl) -> dict:
    return {"t0": cl.t0, "illegal": [{"turn": str(T), "time": cl.illegal[T]}
                                     for T in cl.nondegenerate]}


def _fixed_report(doc: SystemDocument, vertex: Optional[str]) -> dict:
    xs = build_xstar(doc.f)
    vertices = [vertex] if vertex else [v for v in xs.nodes if v in doc.G.spaces]
    out = {"xstar": xs.as_dict(), "fixed_subgroups": {}}
    for v in vertices:
        out["fixed_subgroups"][v] = fixed_subgroup_generators(xs, v).as_dict()
    return out


# --------------------------------------------------------------- commands

def cmd_validate(doc, args):
    rep = validate_system(doc.G, doc.f).as_dict()
    if not rep["ok"]:
        raise ValidationFailed(rep)
    return rep


def cmd_profile(doc, args):
    _checked(doc)
    prof = map_profile(doc.G, doc.f).as_dict()
    prof["is_surjective_on_pi1"] = is_surjective_on_pi1(doc.G, doc.f)
    return prof


def cmd_turns(doc, args):
    _checked(doc)
    if args.kind == "illegal":
        return _closure_dict(illegal_turn_closure(doc.G, doc.f))
    return {"power": args.power, "special": _turn_list(special_turns(doc.G, doc.f, args.power))}


def cmd_vset(doc, args):
    _checked(doc)
    entries = enumerate_v(doc.G, doc.f, args.power,
                          max_entries=args.max_v_entries or doc.options.get("max_v_entries", 100_000))
    return {"power": args.power, "size": len(entries), "entries": [v.as_dict() for v in entries]}


def cmd_bounds(doc, args):
    _checked(doc)
    return compute_bounds(doc.G, doc.f).as_dict()


def cmd_inp(doc, args):
    _checked(doc)
    a = compute_inps(doc.G, doc.f)
    out = a.as_dict()
    out["V_plus"] = a.vplus.as_dict()
    return out


def cmd_legalize(doc, args):
    _checked(doc)
    gamma = parse_path(doc.G, args.path)
    res = legalize(doc.G, doc.f, gamma, cap=args.max_legalize_steps).as_dict()
    res["decay"] = decay_check(doc.G, doc.f, gamma)
    return res


def cmd_classify(doc, args):
    _checked(doc)
    return classify_conjugacy_class(doc.G, doc.f, parse_loop(doc.G, args.loop)).as_dict()


def cmd_fixed(doc, args):
    _checked(doc)
    return _fixed_report(doc, args.vertex)


def cmd_growth(doc, args):
    _checked(doc)
    return transition_analysis(doc.f).as_dict()


def cmd_whitehead(doc, args):
    _checked(doc)
    graphs = whitehead_graphs(doc.f)
    return {"connected": all(w.connected for w in graphs.values()),
            "vertices": {v: w.as_dict() for v, w in graphs.items()}}


def cmd_gos_build(doc, args):
    _checked(doc)
    H, g = to_graph_of_spaces(doc.f)
    return dump_document(H, g)


def cmd_report(doc, args):
    out = {"validation": validate_system(doc.G, doc.f).as_dict()}
    if not out["validation"]["ok"]:
        raise ValidationFailed(out["validation"])
    out["profile"] = cmd_profile(doc, args)
    out["illegal_turns"] = _closure_dict(illegal_turn_closure(doc.G, doc.f))
    out["bounds"] = compute_bounds(doc.G, doc.f).as_dict()
    a = compute_inps(doc.G, doc.f)
    out["inps"] = a.as_dict()
    if doc.G.is_absolute:
        ta = transition_analysis(doc.f)
        out["growth"] = ta.as_dict()
        out["primitive"] = ta.primitive
        wg = whitehead_graphs(doc.f)
        out["whitehead_connected"] = all(w.connected for w in wg.values())
        out["fixed"] = _fixed_report(doc, None)
    return out


COMMANDS = {
    "validate": cmd_validate, "profile": cmd_profile, "turns": cmd_turns, "vset": cmd_vset,
    "bounds": cmd_bounds, "inp": cmd_inp, "legalize": cmd_legalize, "classify": cmd_classify,
    "fixed": cmd_fixed, "growth": cmd_growth, "whitehead": cmd_whitehead,
    "gos-build": cmd_gos_build, "report": cmd_report,
}


# ---------------------------------------------------------------- output

def _nested(v) -> bool:
    if isinstance(v, dict):
        return bool(v)
    return isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v)


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if _nested(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if _nested(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(value, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(value, indent=2, sort_keys=True)
    return "\n".join(_text(value))


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", nargs="?", help="system document (JSON), or - for stdin")
    common.add_argument("--rose", help="rose shorthand such as 'a=ab,b=a'")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-image-length", type=int, default=None,
                        help="cap on the length of materialized edge images")

    parser = argparse.ArgumentParser(prog="traintracks",
                                     description="Train track maps on graphs of spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the system document")
    sub.add_parser("profile", parents=[common], help="train track and expansion profile")
    p = sub.add_parser("turns", parents=[common], help="illegal or special turns")
    p.add_argument("kind", choices=("illegal", "special"))
    p.add_argument("--power", type=int, default=1)
    p = sub.add_parser("vset", parents=[common], help="enumerate V(f^t)")
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--max-v-entries", type=int, default=None)
    sub.add_parser("bounds", parents=[common], help="cancellation and iteration constants")
    sub.add_parser("inp", parents=[common], help="indivisible Nielsen paths")
    p = sub.add_parser("legalize", parents=[common], help="iterate a path until pseudo-legal")
    p.add_argument("--path", required=True)
    p.add_argument("--max-legalize-steps", type=int, default=None)
    p = sub.add_parser("classify", parents=[common], help="periodic or fixed conjugacy class")
    p.add_argument("--loop", required=True)
    p = sub.add_parser("fixed", parents=[common], help="fixed subgroup generators")
    p.add_argument("--vertex", default=None)
    sub.add_parser("growth", parents=[common], help="transition matrix and edge growth")
    sub.add_parser("whitehead", parents=[common], help="Whitehead graphs at the vertices")
    sub.add_parser("gos-build", parents=[common],
                   help="collapse polynomially growing edges into vertex spaces")
    sub.add_parser("report", parents=[common], help="full pipeline report")
    return parser


def run_command(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    for name in ("max_v_entries", "max_legalize_steps"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        doc = _load(args)
        result = COMMANDS[args.command](doc, args)
    except ValidationFailed as exc:
        print(render({"error": "validation", "report": exc.report}, args.format), file=out)
        return EXIT_INPUT
    except (StructuralError, DomainError) as exc:
        loc = getattr(exc, "location", None)
        msg = {"error": "input", "message": str(exc)}
        if loc:
            msg["location"] = loc
        print(render(msg, args.format), file=err)
        return EXIT_INPUT
    except HypothesisViolation as exc:
        print(render({"error": "hypothesis", "message": str(exc)}, args.format), file=err)
        return EXIT_HYPOTHESIS
    except CapacityError as exc:
        print(render({"error": "capacity", "cap": exc.cap_name, "limit": exc.limit,
                      "message": str(exc)}, args.format), file=err)
        return EXIT_CAP
    except ConsistencyError as exc:
        print(render({"error": "internal", "message": str(exc)}, args.format), file=err)
        return EXIT_INTERNAL
    print(render(result, args.format), file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
