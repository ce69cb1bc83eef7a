import json

import pytest

from foxpalette.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_color_json(capsys):
    code, out, _ = run(capsys, "color", "6_2", "-p", "11", "--min-image", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["determinant"] == 11 and rep["rank"] == 2
    assert rep["nontrivial_count"] == 110 and rep["min_image"] == 6
    assert len(rep["image_classes"]) == 1


def test_color_not_colorable(capsys):
    code, out, _ = run(capsys, "color", "trefoil", "-p", "11")
    assert code == 0 and "not 11-colorable" in out
    code, _, _ = run(capsys, "color", "trefoil", "-p", "11", "--expect-colorable")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ("color", "6_2", "-p", "4"),
    ("color", "no_such_file.pd", "-p", "11"),
    ("verify", "-p", "9"),
    ("palette", "-p", "11", "--set", "1,x"),
])
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 2 and "error" in json.loads(out)


def test_bad_pd(tmp_path, capsys):
    f = tmp_path / "bad.pd"
    f.write_text("X[1,2,1,2]")
    assert main(["color", str(f), "-p", "3"]) == 2


def test_palette_set(capsys):
    code, out, _ = run(capsys, "palette", "-p", "11", "--set", "{0,4,6,7,8}", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["connected"] and len(rep["edges"]) == 4


def test_palette_family(capsys):
    code, out, _ = run(capsys, "palette", "-p", "11", "--family", "A", "0", "1", "--json")
    assert code == 0 and len(json.loads(out)["set"]) == 5


def test_reduce_a_with_trace_and_figures(tmp_path, capsys):
    tr = tmp_path / "t.json"
    code, out, _ = run(capsys, "reduce", "6_2", "--target", "A", "--trace", str(tr),
                       "--figures", str(tmp_path / "fig"), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["final_image"] == [1, 4, 6, 7, 8] and rep["trace_verified"]
    assert json.loads(tr.read_text())["moves"]
    assert all((tmp_path / "fig" / n).stat().st_size > 0 for n in ("reduction.png", "final_palette.png"))


def test_reduce_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("FOXPALETTE_BUDGET", "5")
    code, out, _ = run(capsys, "reduce", "6_2", "--json")
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "budget-exhausted" and rep["budget"] == 5
    monkeypatch.setenv("FOXPALETTE_BUDGET", "-3")
    assert main(["reduce", "6_2"]) == 2


def test_reduce_uncolorable(capsys):
    assert main(["reduce", "trefoil"]) == 1


def test_verify_small_prime(capsys):
    code, out, _ = run(capsys, "verify", "-p", "5", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass" and rep["schema"] == 1


def test_verify_workers_identical(capsys):
    _, a, _ = run(capsys, "verify", "-p", "7", "--json")
    _, b, _ = run(capsys, "verify", "-p", "7", "--json", "--workers", "2")
    assert a == b
