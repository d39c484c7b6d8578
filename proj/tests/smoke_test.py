"""Python smoke tests: the native module end to end, plus CLI JSON outputs
validated against the published schema."""

import json
import os
import subprocess

import jsonschema
import pytest

import rpnkit

FIXTURES = os.environ.get("RPNKIT_FIXTURES", os.path.join(os.path.dirname(__file__), "fixtures"))
CLI = os.environ.get("RPNKIT_CLI")
SCHEMA_PATH = os.environ.get(
    "RPNKIT_SCHEMA",
    os.path.join(os.path.dirname(__file__), "..", "schema", "cli-output.schema.json"),
)


def load(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return rpnkit.parse(fh.read())


def test_parse_and_validate():
    doc = load("workers.rpn")
    assert len(doc.places) == 8
    assert "t_beg" in doc.transitions
    assert doc.states[0] == "sIni"
    assert rpnkit.validate(doc) == []


def test_fire_script():
    doc = load("workers.rpn")
    final = rpnkit.fire(doc, "sIni", "(r, t_beg as v) (v, t_tau1)")
    assert final["empty"] is False
    assert final["nodes"][0]["marking"] == {"p_fin": 1}


def test_order():
    doc = load("embed.rpn")
    assert rpnkit.leq(doc, "s", "sprime")["answer"] is True
    assert rpnkit.leq(doc, "s", "sprime", rooted=True)["answer"] is False


def test_decision_quadruple():
    doc = load("workers.rpn")
    assert rpnkit.decide(doc, "terminate", "sIni")["answer"] is False
    assert rpnkit.decide(doc, "bounded", "sIni")["answer"] is True
    assert rpnkit.decide(doc, "finite", "sIni")["answer"] is False
    assert rpnkit.decide(doc, "cut", "sIni")["answer"] is False
    assert rpnkit.decide(doc, "cover", "sIni", target="tFin")["answer"] is True


def test_cut_witness_replays():
    doc = load("chains.rpn")
    verdict = rpnkit.decide(doc, "cut", "s2", witness=True)
    assert verdict["answer"] is True
    script = " ".join(
        "({}, {}{})".format(e["vertex"], e["transition"], " as " + e["as"] if "as" in e else "")
        for e in verdict["witness"]["events"]
    )
    final = rpnkit.fire(doc, "s2", script)
    assert final["empty"] is True


def test_abstract_graph():
    doc = load("workers.rpn")
    graph = rpnkit.abstract_graph(doc, "sIni")
    assert len(graph["vertices"]) == 4
    assert len(graph["edges"]) == 7
    dot = rpnkit.abstract_graph(doc, "sIni", dot=True)
    assert dot.startswith("digraph")


def test_returning():
    doc = load("workers.rpn")
    witnesses = rpnkit.returning(doc)
    assert set(witnesses) == {"t_beg", "t_a2", "t_b2"}


def test_language_sample():
    doc = load("abc.rpn")
    result = rpnkit.sample(doc, 3, state="sIni", target="tF")
    assert result["cap_exceeded"] is False
    assert set(result["words"]) == {"", "a", "aa", "aaa", "ab", "aab", "abc"}
    member = rpnkit.member(doc, "aabc", state="sIni", target="tF")
    assert member["verdict"] == "yes"


def test_build_round_trips():
    doc = load("rooted_example.rpn")
    text = rpnkit.build(doc, "rooted", state="s0")
    again = rpnkit.parse(text)
    assert rpnkit.print_document(again) == text


def test_parse_error_has_location():
    with pytest.raises(rpnkit.RpnError):
        rpnkit.parse("net { places p; elem t { in p; } }")


@pytest.mark.skipif(CLI is None, reason="RPNKIT_CLI not set")
def test_cli_json_matches_schema():
    with open(SCHEMA_PATH) as fh:
        schema = json.load(fh)
    workers = os.path.join(FIXTURES, "workers.rpn")
    embedDoc = os.path.join(FIXTURES, "embed.rpn")
    abc = os.path.join(FIXTURES, "abc.rpn")
    commands = [
        ["check", "cut", workers, "--state", "sIni", "--json"],
        ["check", "cut", workers, "--state", "sBeg", "--witness", "--json"],
        ["check", "cover", workers, "--state", "sIni", "--target", "tFin", "--json"],
        ["check", "terminate", workers, "--state", "sIni", "--json"],
        ["check", "terminate", workers, "--state", "sIni", "--json", "--timing"],
        ["check", "bounded", workers, "--state", "sIni", "--json"],
        ["check", "finite", workers, "--state", "sIni", "--json"],
        ["graph", workers, "--state", "sIni", "--json"],
        ["order", embedDoc, "s", "sprime", "--json"],
        ["sim", workers, "--state", "sIni", "--fire", "(r, t_beg as v) (v, t_tau1)", "--json"],
        ["oracle", "explore", workers, "--state", "sTree", "--json"],
        ["oracle", "member", abc, "--state", "sIni", "--target", "tF", "--word", "ab", "--json"],
        ["oracle", "sample", abc, "--state", "sIni", "--target", "tF", "--max-len", "2", "--json"],
    ]
    for cmd in commands:
        out = subprocess.run([CLI] + cmd, capture_output=True, text=True)
        assert out.returncode == 0, (cmd, out.stderr)
        payload = json.loads(out.stdout)
        jsonschema.validate(payload, schema)


@pytest.mark.skipif(CLI is None, reason="RPNKIT_CLI not set")
def test_cli_error_handling():
    out = subprocess.run([CLI, "check", "cut", "/nonexistent.rpn"], capture_output=True, text=True)
    assert out.returncode == 2
    assert "error" in out.stderr
