import json
import math
import subprocess
import sys

import pytest

from pardelaunay import cli
from pardelaunay.analysis import bound_h
from pardelaunay.geometry import ShapeSpec

SQ = ["--aspect", "1", "--angle", "1.5707963267948966"]


def run(*args, stdin=""):
    return subprocess.run([sys.executable, "-m", "pardelaunay.cli", *args], input=stdin,
                          capture_output=True, text=True, check=False)


def test_bound_example():
    p = run("bound", *SQ)
    assert p.returncode == 0
    first, rest = p.stdout.split("\n", 1)
    assert first == "2.6131259297527532"
    d = json.loads(rest)
    assert d["bound"] == pytest.approx(math.sqrt(4 + 2 * math.sqrt(2)), abs=1e-15)
    assert set(d["candidates"]) >= {"f23_star", "f14_star", "global"}


def test_two_point_ratio_is_one():
    p = run("ratio", *SQ, stdin="0,0\n3,1\n")
    assert p.returncode == 0
    assert json.loads(p.stdout)["max_ratio"] == 1.0


def test_pipeline_reaches_bound():
    shape = ["--aspect", "2", "--angle", "1.0"]
    pts = run("worst-case", *shape, "--n", "200", "--epsilon", "1e-6")
    assert pts.returncode == 0
    g = run("build", *shape, stdin=pts.stdout)
    assert g.returncode == 0
    r = run("ratio", "--summary", stdin=g.stdout)
    assert r.returncode == 0
    ratio = json.loads(r.stdout)["max_ratio"]
    h = bound_h(ShapeSpec(2, 1.0))
    assert 0.99 * h <= ratio <= h + 1e-9


def test_outputs_are_deterministic(tmp_path):
    args = ["worst-case", "--aspect", "3", "--angle", "0.8", "--n", "40", "--seed", "5"]
    assert run(*args).stdout == run(*args).stdout
    pts = run(*args, "--format", "csv").stdout
    assert pts.startswith("x,y\n")
    a = run("build", "--aspect", "3", "--angle", "0.8", stdin=pts).stdout
    b = run("build", "--aspect", "3", "--angle", "0.8", stdin=pts).stdout
    assert a == b and a
    va = run("verify-lemmas", *SQ, "--instances", "3", "--n-max", "12").stdout
    vb = run("verify-lemmas", *SQ, "--instances", "3", "--n-max", "12").stdout
    assert va == vb


@pytest.mark.parametrize("args,stdin,code", [
    (["bound"], "", 1),
    (["nonsense"], "", 1),
    (["bound", "--aspect", "0.5", "--angle", "1"], "", 1),
    (["worst-case", *SQ, "--n", "5"], "", 1),
    (["build", *SQ], "0,0\n1,x\n", 2),
    (["build", *SQ, "--input", "/nonexistent/file.csv"], "", 2),
    (["ratio", *SQ], "", 2),
    (["build", *SQ], "0,0\n0,1\n", 3),
    (["oracle-check", *SQ, "--instances", "2", "--n-max", "4", "--min-agreement", "101"], "", 4),
])
def test_exit_codes(args, stdin, code):
    p = run(*args, stdin=stdin)
    assert p.returncode == code, p.stderr
    if code:
        assert p.stderr


def test_verify_lemmas_campaign_in_process(tmp_path, capsys):
    out = tmp_path / "rows.jsonl"
    code = cli.main(["verify-lemmas", "--aspect", "2", "--angle", "1.0", "--instances", "5",
                     "--n-max", "15", "--output", str(out)])
    assert code == 0
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    assert rows and all(r["holds"] for r in rows)
    assert "0 violations" in capsys.readouterr().err


def test_verify_lemmas_on_graph_file(tmp_path):
    pts = run("worst-case", "--aspect", "2", "--angle", "1.0", "--n", "12", "--epsilon", "1e-4").stdout
    g = tmp_path / "g.json"
    g.write_text(run("build", "--aspect", "2", "--angle", "1.0", stdin=pts).stdout)
    p = run("verify-lemmas", "--input", str(g))
    assert p.returncode == 0, p.stderr
    assert p.stdout.strip()


def test_shape_flags_must_match_graph(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(run("build", *SQ, stdin="0,0\n1,0.5\n0.3,2\n").stdout)
    assert run("ratio", "--input", str(g), "--aspect", "2", "--angle", "1").returncode == 1


def test_export_svg(tmp_path):
    out = tmp_path / "g.svg"
    p = run("export-svg", *SQ, "--pair", "0", "2", "--witnesses", "--output", str(out),
            stdin="0,0\n1,0.5\n0.3,2\n2,1.4\n")
    assert p.returncode == 0, p.stderr
    svg = out.read_text()
    assert svg.startswith("<?xml") and 'id="segment-ab"' in svg and 'id="witnesses"' in svg
    assert svg.count("<circle") == 4
    assert run("export-svg", *SQ, "--pair", "0", "9", stdin="0,0\n1,0.5\n").returncode == 1
