import io
import json

import pytest

from traintracks.cli import run_command
from traintracks.document import (SAMPLES, DocumentError, dump_document, load_document,
                                  parse_document, rose_document, sample_document)
from traintracks.system import validate_system

ROSE6_ARG = "a=baccddeeff,b=a,c=ac,d=da,e=ae,f=fa"


def _run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run_command(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", SAMPLES)
def test_samples_round_trip_through_json(name):
    doc = sample_document(name)
    assert validate_system(doc.G, doc.f).ok
    text = json.dumps(dump_document(doc.G, doc.f))
    again = load_document(text)
    assert dump_document(again.G, again.f) == dump_document(doc.G, doc.f)


def test_rose_shorthand_matches_full_form():
    a = rose_document("a=ab,b=a")
    b = parse_document({"rose": {"a": "ab", "b": "a"}})
    assert dump_document(a.G, a.f) == dump_document(b.G, b.f)


@pytest.mark.parametrize("data, location", [
    ({"vertex_spaces": {"X": {"vertices": ["p"]}},
      "top_edges": {"b": [["X", "q"], ["X", "p"]]}}, "top_edges.b.origin"),
    ({"vertex_spaces": {"X": {"vertices": ["p"]}},
      "top_edges": {"b": [["X", "p"], ["Y", "p"]]}}, "top_edges.b.terminus"),
    ({"rose": {"a": "ab"}}, "rose.a"),
    ({"rose": {"a": "a"}, "options": {"speed": 1}}, "options.speed"),
    ({"vertex_spaces": {"X": {"vertices": ["p"]}},
      "top_edges": {"b": [["X", "p"], ["X", "p"]]},
      "morphism": {"edge_maps": {}}}, "morphism.edge_maps.b"),
])
def test_document_errors_carry_a_location(data, location):
    with pytest.raises(DocumentError) as err:
        parse_document(data)
    assert err.value.location == location


def test_json_syntax_errors_report_line_and_column():
    with pytest.raises(DocumentError) as err:
        load_document('{\n  "rose": ')
    assert err.value.location.startswith("line 2")


def test_cli_report_is_byte_stable():
    runs = [_run("report", "--rose", ROSE6_ARG)[1] for _ in range(2)]
    assert runs[0] == runs[1]
    rep = json.loads(runs[0])
    for key in ("C", "t_exp", "lambda_min", "lambda_max", "C_prime", "C_1", "t_1", "t_hat", "t0"):
        assert key in rep["bounds"]
    assert rep["primitive"] and rep["whitehead_connected"]
    assert {"C e", "d F"} <= set(rep["fixed"]["fixed_subgroups"]["v"]["generators"])


def test_cli_reads_stdin(monkeypatch):
    doc = sample_document("circle")
    code, out, _ = _run("inp", "-", stdin=json.dumps(dump_document(doc.G, doc.f)),
                        monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["inps"] == []


def test_cli_exit_codes(monkeypatch):
    assert _run("validate", "--rose", ROSE6_ARG)[0] == 0
    bad = json.dumps({"vertex_spaces": {"X": {"vertices": ["p"]}},
                      "top_edges": {"b": [["X", "q"], ["X", "p"]]}})
    code, _, err = _run("validate", "-", stdin=bad, monkeypatch=monkeypatch)
    assert code == 1 and json.loads(err)["location"] == "top_edges.b.origin"
    assert _run("inp", "--rose", "a=a,b=b")[0] == 2
    assert _run("inp", "--rose", "a=bA,b=ab")[0] == 2
    assert _run("vset", "--rose", "a=ab,b=a", "--power", "3", "--max-v-entries", "2")[0] == 3
    assert _run("bounds")[0] == 1


def test_cli_text_format():
    code, out, _ = _run("growth", "--rose", "a=ab,b=a", "--format", "text")
    assert code == 0
    assert "edges: [a, b]" in out and "primitive: yes" in out


def test_cli_subcommands_on_rose6():
    code, out, _ = _run("classify", "--rose", ROSE6_ARG, "--loop", "C e")
    assert code == 0 and json.loads(out)["fixed"]
    code, out, _ = _run("legalize", "--rose", ROSE6_ARG, "--path", "a")
    assert code == 0 and json.loads(out)["t"] == 0
    code, out, _ = _run("turns", "illegal", "--rose", ROSE6_ARG)
    assert json.loads(out)["t0"] == 1 and len(json.loads(out)["illegal"]) == 6
    code, out, _ = _run("fixed", "--rose", ROSE6_ARG, "--vertex", "v")
    assert sorted(json.loads(out)["fixed_subgroups"]["v"]["generators"]) == ["C e", "d F"]


def test_cli_gos_build_output_is_a_valid_document():
    code, out, _ = _run("gos-build", "--rose", "a=a,b=bab")
    assert code == 0
    doc = load_document(out)
    assert validate_system(doc.G, doc.f).ok
    assert sorted(doc.G.top_edges) == ["b"]
