import io
import json
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from dimerfuk import catalog
from dimerfuk.cli import main

from conftest import FIXTURES

DOT_LINE = re.compile(r'^  ("[^"]*")( -> ("[^"]*") \[label="[^"]*"\])?;$')


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def parse_dot(text):
    lines = text.splitlines()
    assert re.fullmatch(r'digraph "[^"]*" \{', lines[0]) and lines[-1] == "}"
    nodes, edges = [], []
    for line in lines[1:-1]:
        m = DOT_LINE.match(line)
        assert m, line
        if m.group(2):
            edges.append((m.group(1), m.group(3)))
        else:
            nodes.append(m.group(1))
    return nodes, edges


def test_report_g0_skips_fukaya():
    code, out = run("report", "g0")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert rep["schema"] == 1
    assert rep["fukaya_note"] == "no internal matchings; Fukaya comparison skipped"
    assert rep["directed"] == []


def test_report_p2_compares():
    code, out = run("report", "p2")
    rep = json.loads(out)
    assert code == 0
    assert len(rep["directed"]) == 3
    assert all(d["fukaya"]["comparison"]["passed"] for d in rep["directed"])


def test_report_single_matching_and_bound():
    code, out = run("report", "p2", "--matching", "1", "--relation-bound", "7", "--max-rewrite-steps", "50")
    rep = json.loads(out)
    assert code == 0
    assert [d["matching"] for d in rep["directed"]] == [1]
    assert rep["ainf"]["checks"][0]["bound"] == 7
    assert run("report", "p2", "--matching", "0")[0] == 2


def test_report_exit_codes(tmp_path, capsys):
    assert run("report", str(tmp_path / "missing.dimer"))[0] == 2
    bad = tmp_path / "bad.dimer"
    bad.write_text("dimer v1\nedge e1 b1\n")
    assert run("report", str(bad))[0] == 2
    assert "line 2" in capsys.readouterr().err
    assert run("report", str(FIXTURES / "bad-digon.dimer"))[0] == 1
    assert run("report", str(FIXTURES / "theta-sphere.dimer"))[0] == 1


def test_timings_are_opt_in():
    _, out = run("report", "g0")
    assert "timings" not in json.loads(out)
    _, out = run("report", "g0", "--timings")
    assert set(json.loads(out)["timings"]) >= {"validate", "ainf"}


@pytest.mark.parametrize("name", catalog.names())
def test_report_matches_golden(name):
    _, out = run("report", name)
    assert out == (FIXTURES / "golden" / f"{name}.report.json").read_text()


def test_render_quiver_dot():
    code, out = run("render", "g0", "quiver-dot")
    nodes, edges = parse_dot(out)
    assert code == 0 and len(nodes) == 1 and len(edges) == 3
    assert all(s == t for s, t in edges)
    nodes, edges = parse_dot(run("render", "p2", "quiver-dot")[1])
    assert len(nodes) == 3 and len(edges) == 9


def test_render_svgs(tmp_path):
    for target in ("model-svg", "surface-svg"):
        code, out = run("render", "p2", target)
        assert code == 0
        assert ET.fromstring(out).tag.endswith("svg")
    code, _ = run("render", "f0", "surface-svg", "-o", str(tmp_path / "s.svg"))
    assert code == 0
    ET.parse(tmp_path / "s.svg")


def test_render_model_svg_needs_positions(capsys):
    assert run("render", "g0", "model-svg")[0] == 2
    assert "pos" in capsys.readouterr().err


def test_catalog_listing():
    code, out = run("catalog")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == catalog.names()
    code, out = run("catalog", "--json")
    rows = json.loads(out)
    assert {r["name"]: (r["stats"]["black"], r["stats"]["edges"], r["stats"]["faces"]) for r in rows}["f0"] == (2, 8, 4)
    assert all(r["drift"] == {} for r in rows)


def test_catalog_drift_detected(monkeypatch):
    monkeypatch.setitem(catalog._EXPECTED, "g0", (1, 1, 3, 1, 4, 0))
    code, out = run("catalog")
    assert code == 1 and "DRIFT" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dimerfuk", "catalog"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("g0")
