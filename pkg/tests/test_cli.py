"""Command-line behaviour: outputs, JSON schemas and exit statuses."""
from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from torusear.cli import main
from torusear.spectra import Spectrum, circulant_spectrum, torus_spectrum


def run(argv, stdin: str | None = None):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdout, sys.stderr, sys.stdin
    sys.stdout, sys.stderr = out, err
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        status = main(argv)
    finally:
        sys.stdout, sys.stderr, sys.stdin = old
    return status, out.getvalue(), err.getvalue()


def test_spectrum_torus():
    status, out, _ = run(["spectrum", "--torus", "3,3"])
    assert status == 0
    data = json.loads(out)
    assert [(e["value_decimal"], e["mult"]) for e in data["entries"]] == [("0", 1), ("3", 4), ("6", 4)]
    assert Spectrum.from_dict(data) == torus_spectrum((3, 3))


def test_spectrum_circulant_sums_to_twice_edges():
    status, out, _ = run(["spectrum", "--circulant", "5:1,2"])
    assert status == 0
    s = Spectrum.from_json(out)
    assert s.total_count == 5 and s.trace() == 20


def test_spectrum_graph_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 4, "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [0, 3, 1]]}))
    status, out, _ = run(["spectrum", "--graph", str(path)])
    assert status == 0
    data = json.loads(out)
    assert [(e["value_decimal"], e["mult"]) for e in data["entries"]] == [("0", 1), ("2", 2), ("4", 1)]


@pytest.mark.parametrize("argv", [
    ["spectrum", "--torus", "1,3"],
    ["spectrum", "--torus", "a"],
    ["spectrum"],
    ["spectrum", "--circulant", "6:3"],
    ["spectrum", "--torus", "3", "--precision", "20"],
    ["spectrum", "--graph", "/nonexistent/file.json"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(argv):
    status, _, err = run(argv)
    assert status == 2
    assert err


def test_hear_round_trip():
    spectrum_json = torus_spectrum((2, 4, 4)).to_json()
    status, out, _ = run(["hear"], stdin=spectrum_json)
    assert status == 0
    assert json.loads(out) == {"shape": [2, 4, 4]}


def test_hear_from_file_table(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(torus_spectrum((3, 5)).to_json())
    status, out, _ = run(["hear", str(path), "--format", "table"])
    assert status == 0 and out.strip() == "C3 x C5"


def test_hear_rejects_circulant():
    status, out, _ = run(["hear"], stdin=circulant_spectrum(20, (2, 3, 4, 7)).to_json())
    assert status == 1
    data = json.loads(out)
    assert data["error"] == "not_a_torus_spectrum"
    assert data["partial"] == []


def test_hear_one_vertex_and_malformed():
    status, out, _ = run(["hear"], stdin='{"entries":[{"value_decimal":"0","mult":1}]}')
    assert status == 1 and json.loads(out)["error"] == "not_a_torus_spectrum"
    status, _, _ = run(["hear"], stdin="{")
    assert status == 2


def test_isospectral():
    status, out, _ = run(["isospectral", "--torus", "2,8", "--torus", "4,4"])
    assert (status, out.strip()) == (1, "false")
    status, out, _ = run(["isospectral", "--torus", "3,2", "--torus", "2,3"])
    assert (status, out.strip()) == (0, "true")
    status, out, _ = run(["isospectral", "--circulant", "20:2,3,4,7", "--circulant", "20:3,6,7,8"])
    assert (status, out.strip()) == (0, "true")
    status, _, _ = run(["isospectral", "--torus", "3"])
    assert status == 2


def test_theta():
    status, out, _ = run(["theta", "--torus", "3,3", "--at", "0"])
    assert status == 0
    data = json.loads(out)
    assert data["values"] == [{"t": 0.0, "theta": "9.0"}]
    assert [e["mult"] for e in data["entries"]] == [1, 4, 4]


def test_precision_controls_digits(monkeypatch):
    _, out, _ = run(["spectrum", "--torus", "5", "--precision", "200"])
    digits = len(json.loads(out)["entries"][1]["value_decimal"].replace(".", ""))
    assert digits > 40
    monkeypatch.setenv("TORUSEAR_PRECISION", "200")
    _, out_env, _ = run(["spectrum", "--torus", "5"])
    assert out_env == out
    monkeypatch.setenv("TORUSEAR_PRECISION", "abc")
    assert run(["spectrum", "--torus", "5"])[0] == 2


def test_verify_counterexample():
    status, out, _ = run(["verify-counterexample"])
    assert status == 0
    data = json.loads(out)
    assert data["charpoly_equal"] and not data["isomorphic"]
    assert data["charpoly"] == data["charpoly_b"]


def test_search_small_and_deterministic():
    status, out, _ = run(["search", "--n", "5..9"])
    assert status == 0
    status2, out2, _ = run(["search", "--n", "5..9", "--workers", "2"])
    assert out == out2 and status2 == 0
    status, out, _ = run(["search", "--n", "5..9", "--format", "table"])
    assert "no cospectral non-isomorphic pairs" in out
    assert run(["search", "--n", "3..30"])[0] == 2
    assert run(["search", "--n", "x"])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torusear", "isospectral", "--torus", "4", "--torus", "2,2"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout.strip() == "false"
