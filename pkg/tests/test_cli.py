"""The kplanar command line."""
import csv
import io
import json

import pytest

from kplanar import fixtures
from kplanar.cli import experiment_report, run_cli
from kplanar.gen import GenConfig, gen_random_kplane
from kplanar.io import parse_drawing, serialize_drawing


@pytest.fixture
def drawing(tmp_path):
    def write(name, gd=None):
        p = tmp_path / f"{name}.json"
        p.write_bytes(serialize_drawing(gd if gd is not None else fixtures.ALL[name]()))
        return str(p)

    return write


def test_ingest_and_check(drawing, tmp_path):
    out = tmp_path / "f3.comb.json"
    assert run_cli(["ingest", "--in", drawing("F3"), "--out", str(out)]) == 0
    net, st = parse_drawing(out.read_bytes())
    assert st is not None
    rep = tmp_path / "rep.json"
    assert run_cli(["check", "--in", str(out), "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["total_crossings"] == 4
    assert run_cli(["check", "--simple", "--in", str(out)]) == 1


@pytest.mark.parametrize("algo", ["general", "4planar"])
def test_simplify(drawing, tmp_path, algo):
    out, rep, trace = (tmp_path / x for x in ("out.json", "rep.json", "trace.json"))
    code = run_cli(
        ["simplify", "--algo", algo, "--in", drawing("F4"), "--out", str(out), "--report", str(rep), "--trace", str(trace)]
    )
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["after"]["simple"] and report["valid"]
    assert report["before"]["max_crossings"] == 4
    assert json.loads(trace.read_text())
    assert run_cli(["check", "--simple", "--in", str(out)]) == 0


def test_simplify_4planar_refuses_five_plane(drawing, capsys):
    gd = gen_random_kplane(GenConfig(30, 60, 6, seed=5))
    path = drawing("dense", gd)
    # this drawing has an edge with 6 crossings
    assert run_cli(["simplify", "--algo", "4planar", "--in", path]) == 1
    assert "needs a 4-plane drawing" in capsys.readouterr().err


def test_simplify_k_too_small(drawing):
    assert run_cli(["simplify", "--algo", "general", "-k", "1", "--in", drawing("F3")]) == 1


def test_usage_errors(tmp_path):
    assert run_cli([]) == 2
    assert run_cli(["simplify", "--in", "x.json"]) == 2
    assert run_cli(["check", "--in", str(tmp_path / "missing.json")]) == 2
    assert run_cli(["gen", "--n", "3", "--m", "10", "--k", "1"]) == 2


def test_bad_file_is_validation_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{}")
    assert run_cli(["check", "--in", str(p)]) == 1


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run_cli(["gen", "--n", "20", "--m", "25", "--k", "2", "--seed", "9", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_render(drawing, tmp_path):
    out = tmp_path / "f1.svg"
    assert run_cli(["render", "--svg", "--in", drawing("F1"), "--out", str(out)]) == 0
    assert out.read_text().count('class="crossing"') == 2


def test_bench_csv(drawing, tmp_path):
    for name in ("F1", "F3", "F4"):
        drawing(name)
    out = tmp_path / "bench.csv"
    assert run_cli(["bench", "--dir", str(tmp_path), "--k", "4", "--no-timing", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["input"] for r in rows] == ["F1.json", "F3.json", "F4.json"]
    assert all(r["seconds_algo1"] == "" and r["error"] == "" for r in rows)
    assert rows[2]["max_x_algo2"] == "3"
    again = experiment_report(sorted(tmp_path.glob("F*.json")), 4, timing=False)
    assert again == out.read_bytes()
