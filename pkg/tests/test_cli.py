import json

from shimquot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_group_json(capsys):
    code, out, _ = run(capsys, "group", "6", "5")
    data = json.loads(out)
    assert code == 0 and data["elements"] == [1, 2, 3, 5, 6, 10, 15, 30]
    assert len(data["subgroups"]) == 16
    assert data["subgroups"][0]["key"] == "6.5.1"


def test_group_table(capsys):
    code, out, _ = run(capsys, "--table", "group", "6", "1")
    assert code == 0
    assert "6.1.2-3" in out and "w_2,w_3" in out


def test_points_and_certify(capsys):
    code, out, _ = run(capsys, "points", "35.1.5")
    assert code == 0 and json.loads(out)["points"] == ["(-1,-1)", "(3/4,-25/32)", "inf"]
    code, out, _ = run(capsys, "points", "26.1.13", "--certify")
    assert json.loads(out)["status"] == "complete_certified"
    code, out, _ = run(capsys, "--table", "points", "93.1.93", "--certify")
    assert "search_only" in out and "inf+" in out


def test_local_and_cm(capsys):
    code, out, _ = run(capsys, "local", "87.1.3")
    assert code == 0 and json.loads(out)["everywhere_locally_solvable"] is True
    code, out, _ = run(capsys, "--table", "local", "38.1.1")
    assert "everywhere locally solvable: False" in out
    code, out, _ = run(capsys, "cm", "35.1.5")
    assert json.loads(out)["mode"] == "fiber"
    code, out, _ = run(capsys, "--table", "cm", "38.1.19")
    assert "inf: cm d=-1" in out


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "6.29.6")
    assert code == 0 and json.loads(out)["diff"] == []


def test_verify_all_parallel(capsys):
    code, out, _ = run(capsys, "verify-all", "--jobs", "2")
    data = json.loads(out)
    assert code == 0 and data["mismatches"] == [] and len(data["statuses"]) == 424


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "local", "26.1.999")
    assert code == 2 and "26.1.999" in err
    code, _, err = run(capsys, "local", "26.1.1")
    assert code == 2 and "no model" in err
    code, _, err = run(capsys, "group", "7", "1")
    assert code == 2


def test_backend(capsys):
    code, out, _ = run(capsys, "backend")
    assert code == 0 and out.strip() in ("cython", "python")
