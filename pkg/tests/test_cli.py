import json
import subprocess
import sys

import pytest

from harmonic_barcode.barcode import barcode_from_json
from harmonic_barcode.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_text(capsys):
    code, out, _ = run(capsys, "compute", fixture_path("triangle.txt"))
    assert code == 0
    assert out.splitlines() == ["0 [1,3] 0 3", "0 [2,4] 1 4", "0 [3,7] 2 inf", "1 [6,6] 5 6"]


def test_compute_with_representatives(capsys):
    _, out, _ = run(capsys, "compute", fixture_path("triangle.txt"), "--with-representatives")
    assert out.splitlines()[-1] == "1 [6,6] 5 6 rep:{0-1:-1,1-2:-1,0-2:1}"


def test_degree_filter(capsys):
    _, out, _ = run(capsys, "compute", fixture_path("triangle.txt"), "--degree", "1")
    assert out == "1 [6,6] 5 6\n"


def test_json_is_stable_and_round_trips(capsys):
    _, a, _ = run(capsys, "compute", fixture_path("two_cycles.txt"), "--format", "json")
    _, b, _ = run(capsys, "compute", fixture_path("two_cycles.txt"), "--format", "json")
    assert a == b
    bc = barcode_from_json(a)
    assert bc.intervals(1) == [(9, 12), (10, 13), (12, 13)]


def test_empty_file(capsys):
    code, out, _ = run(capsys, "compute", fixture_path("empty.txt"))
    assert code == 0 and out == ""


def test_parse_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 0 1\n")
    code, _, err = run(capsys, "compute", bad)
    assert code == 1 and "line 2" in err
    code, _, _ = run(capsys, "compute", tmp_path / "missing.txt")
    assert code == 1


def test_compute_verify_flag(capsys):
    code, _, err = run(capsys, "compute", fixture_path("triangle.txt"), "--verify")
    assert code == 0 and json.loads(err)["status"] == "PASS"


def test_ordinary(capsys):
    _, out, _ = run(capsys, "ordinary", fixture_path("triangle.txt"), "--degree", "0")
    assert [line.split()[1] for line in out.splitlines()] == ["[1,7]", "[2,3]", "[3,4]"]


def test_compare_triangle(capsys):
    code, out, _ = run(capsys, "compare", fixture_path("triangle.txt"))
    assert code == 0
    assert "harmonic: [1,3] [2,4] [3,7]" in out
    assert "ordinary: [1,7] [2,3] [3,4]" in out
    assert out.rstrip().endswith("endpoints: agree")


def test_compare_single_vertex(capsys):
    code, out, _ = run(capsys, "compare", fixture_path("single_vertex.txt"), "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["degrees"]["0"]["harmonic"] == doc["degrees"]["0"]["ordinary"] == [[1, 1]]


def test_compare_two_cycles_keeps_boundary_bar(capsys):
    _, out, _ = run(capsys, "compare", fixture_path("two_cycles.txt"), "--format", "json")
    doc = json.loads(out)["degrees"]["1"]
    assert [12, 13] in doc["harmonic"]
    assert [12, 12] in doc["ordinary"]


def test_compare_mismatch_exit_2(capsys, monkeypatch):
    from harmonic_barcode import cli
    from harmonic_barcode.barcode import Barcode

    monkeypatch.setattr(cli, "compute_ordinary_barcode", lambda F: Barcode(F.m, []))
    code, out, _ = run(capsys, "compare", fixture_path("triangle.txt"))
    assert code == 2 and "MISMATCH" in out


def test_invariant_violation_exit_2(capsys, monkeypatch):
    from harmonic_barcode import cli
    from harmonic_barcode.engine import InvariantViolation

    def broken(F):
        raise InvariantViolation("boom")

    monkeypatch.setattr(cli, "compute_harmonic_barcode", broken)
    code, _, err = run(capsys, "compute", fixture_path("triangle.txt"))
    assert code == 2 and "boom" in err


def test_verify_fixtures(capsys):
    files = [fixture_path(n) for n in ("triangle.txt", "two_cycles.txt", "tetra_shell.txt")]
    code, out, _ = run(capsys, "verify", *files)
    assert code == 0 and json.loads(out)["status"] == "PASS"


def test_verify_fault_injected_barcode(capsys, tmp_path):
    _, out, _ = run(capsys, "compute", fixture_path("triangle.txt"), "--format", "json")
    doc = json.loads(out)
    doc["bars"][1]["representative"] = {}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", fixture_path("triangle.txt"), "--barcode", path)
    assert code == 3 and json.loads(out)["status"] == "FAIL"


def test_verify_good_barcode_file(capsys, tmp_path):
    _, out, _ = run(capsys, "compute", fixture_path("triangle.txt"), "--format", "json")
    path = tmp_path / "good.json"
    path.write_text(out)
    code, _, _ = run(capsys, "verify", fixture_path("triangle.txt"), "--barcode", path)
    assert code == 0


def test_verify_random(capsys):
    code, out, _ = run(capsys, "verify", "--seed", 4, "--count", 3, "--max-m", 40)
    doc = json.loads(out)
    assert code == 0 and doc["checked"] == 3


def test_fuzz(capsys, monkeypatch):
    monkeypatch.setenv("HCB_THREADS", "2")
    code, out, _ = run(capsys, "fuzz", "--seed", 0, "--count", 4)
    assert code == 0 and out.splitlines()[-1] == "4/4 passed"


def test_bottleneck_text_diagrams(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("0 0 3\n0 1 inf\n1 0 1/2\n")
    b.write_text("0 0 4\n0 2 inf\n")
    code, out, _ = run(capsys, "bottleneck", a, b)
    assert code == 0 and out.splitlines() == ["0 1", "1 1/4"]


def test_bottleneck_barcode_json(capsys, tmp_path):
    _, out, _ = run(capsys, "compute", fixture_path("triangle.txt"), "--format", "json")
    path = tmp_path / "t.json"
    path.write_text(out)
    code, out, _ = run(capsys, "bottleneck", path, path, "--format", "json")
    assert code == 0 and set(json.loads(out).values()) == {"0"}


def test_stability(capsys, tmp_path):
    f, g = tmp_path / "f.txt", tmp_path / "g.txt"
    f.write_text("".join(f"{v} {v}\n" for v in range(8)))
    g.write_text("".join(f"{v} {v}/2\n" for v in range(8)))
    code, out, _ = run(capsys, "stability", fixture_path("octahedron_loop.txt"), f, g)
    doc = json.loads(out)
    assert code == 0 and doc["bound_holds"] is True and doc["sup_norm"] == "7/2"


def test_parallel_files_keep_order(capsys, monkeypatch):
    monkeypatch.setenv("HCB_THREADS", "2")
    files = [fixture_path("triangle.txt"), fixture_path("single_vertex.txt")]
    _, out, _ = run(capsys, "compute", *files)
    headers = [line for line in out.splitlines() if line.startswith("#")]
    assert headers == [f"# {p}" for p in files]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "harmonic_barcode", "compute",
                          str(fixture_path("triangle.txt")), "--degree", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1 [6,6] 5 6\n"


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
