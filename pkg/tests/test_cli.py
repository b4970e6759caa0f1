import json
import subprocess
import sys

import pytest

from arccurve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ARCCURVE_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def test_surface_info(capsys):
    code, out, _ = run(capsys, "surface-info", "-g", "0", "-n", "4")
    info = json.loads(out)
    assert code == 0
    assert info["min_maximal_simplex_dimension"] == 4 and info["max_simplex_dimension"] == 5
    assert info["special_case"] == "Sphere04"


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest-s03")
    assert code == 0 and json.loads(out)["f_vector"] == [6, 9, 4]


def test_usage_errors(capsys):
    code, _, err = run(capsys, "no-such-command")
    assert code == 2 and json.loads(err)["error"] == "UsageError"
    code, _, err = run(capsys, "surface-info", "-j", "0")
    assert code == 2
    code, _, err = run(capsys, "flip-ball", "-g", "0", "-n", "2", "--no-cache")
    assert code == 2 and json.loads(err)["error"] == "UnsupportedSurface"


def test_intersect_command(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(json.dumps({"kind": "curve", "coords": [1, 0, 1]}))
    b.write_text(json.dumps({"kind": "curve", "coords": [0, 1, 1], "surface": [1, 1]}))
    code, out, _ = run(capsys, "intersect", "--class-a", str(a), "--class-b", str(b), "-r", "1")
    assert code == 0 and json.loads(out) == {"intersection": 1, "method": "linked pairs"}
    b.write_text(json.dumps({"kind": "curve", "coords": [1, 0, 0], "surface": [1, 1]}))
    code, _, err = run(capsys, "intersect", "--class-a", str(a), "--class-b", str(b))
    assert code == 2 and json.loads(err)["error"] == "InvalidCoordinates"


def test_ball_pipeline(capsys, cache, tmp_path):
    ball = tmp_path / "ball.json"
    code, _, _ = run(capsys, "build-ball", "-g", "0", "-n", "4", "-r", "3", "-W", "8", "-o", str(ball))
    assert code == 0 and ball.exists()
    data = json.loads(ball.read_text())
    assert set(data) >= {"vertices", "edges", "bounds", "complete"}
    code, out, _ = run(capsys, "classify", "--ball", str(ball), "--vertex", "0")
    rep = json.loads(out)
    assert code == 0 and rep["topological"] == "InterPunctureArc"
    code, out, _ = run(capsys, "maxsimplices", "--ball", str(ball))
    assert code == 0 and json.loads(out)["count"] > 0
    code, out, _ = run(capsys, "export", "--ball", str(ball), "--format", "dot")
    assert code == 0 and out.startswith("graph")
    code, _, err = run(capsys, "automorphisms", "--ball", str(ball))
    assert code == 1 and json.loads(err)["error"] == "IncompleteBall"


def test_automorphisms_command(capsys, cache):
    code, out, _ = run(capsys, "automorphisms", "-g", "0", "-n", "3", "-r", "3", "--kind", "A")
    assert code == 0 and json.loads(out)["order"] == 6


def test_cache_hit_and_corruption(capsys, cache):
    args = ("flip-ball", "-g", "1", "-n", "1", "-r", "2")
    code, first, _ = run(capsys, *args)
    files = [p for p in cache.iterdir() if p.suffix == ".json"]
    assert code == 0 and len(files) == 1
    code, second, _ = run(capsys, *args)
    assert second == first
    record = json.loads(files[0].read_text())
    record["payload"] = record["payload"].replace('"radius": 2', '"radius": 7')
    files[0].write_text(json.dumps(record))
    code, third, _ = run(capsys, *args)
    assert third == first
    assert json.loads(files[0].read_text())["payload"] == first


def test_rewrite_command(capsys, tmp_path):
    from arccurve.complex import build_ball
    from arccurve.quasi import Path, random_ac_path
    from arccurve.surface import Surface
    import random

    b = build_ball(Surface(0, 5), "AC", 2, 8)
    walk = random_ac_path(b, 4, random.Random(1))
    src = tmp_path / "path.json"
    src.write_text(json.dumps(Path([b.vertices[i] for i in walk], b.surface).to_json()))
    code, out, _ = run(capsys, "rewrite-path", "--input", str(src))
    rep = json.loads(out)
    assert code == 0 and rep["input_length"] == 4 and rep["output_length"] <= 8


def test_verify_report_independent_of_workers(capsys, tmp_path):
    outs = []
    for jobs in ("1", "4"):
        target = tmp_path / f"rep{jobs}.json"
        code, _, _ = run(capsys, "verify-inequalities", "-g", "0", "-n", "4", "-r", "4", "-W", "10",
                         "--samples", "30", "--seed", "5", "-j", jobs, "-o", str(target))
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "arccurve.cli", "surface-info", "-g", "1", "-n", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["special_case"] == "Farey11"
