import json

import pytest

from cyclosched.cli import main

from conftest import WORKED_JSON


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.json"
    path.write_text(json.dumps(WORKED_JSON))
    return str(path)


def write(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_optimize(worked_file, capsys):
    assert main(["optimize", "-i", worked_file]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["best_L"] == 5 and doc["f"]["num"] == 19461 and doc["f"]["den"] == 83600
    assert doc["method"] == "bnb" and doc["steps"] == 8


def test_optimize_oracle_and_check(worked_file, capsys):
    assert main(["optimize", "-i", worked_file, "--oracle"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "oracle" and doc["steps"] == 25 and len(doc["table"]) == 5
    assert main(["optimize", "-i", worked_file, "--check"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["check"] == {"agree": True, "oracle_steps": 25, "bnb_steps": 8}


def test_table(worked_file, capsys):
    assert main(["table", "-i", worked_file]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == ["L", "5", "4", "3", "2", "1"]
    assert lines[1].split("\t")[1:] == ["0.233", "0.298", "0.430", "0.459", "0.800"]
    assert main(["table", "-i", worked_file, "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["L"] for r in rows] == [5, 4, 3, 2, 1]


def test_decimal_overhead(tmp_path, capsys):
    doc = dict(WORKED_JSON, overhead="0.2")
    assert main(["optimize", "-i", write(tmp_path, doc)]) == 0
    assert json.loads(capsys.readouterr().out)["best_L"] == 5


def test_schedule_and_simulate_roundtrip(worked_file, tmp_path, capsys):
    out = str(tmp_path / "sched.json")
    assert main(["schedule", "-i", worked_file, "-o", out]) == 0
    sched = json.loads(open(out).read())
    assert sched["L"] == 5 and sched["Tc"] == 60
    assert main(["simulate", "-i", out]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["L"] == 5 and rep["Tc"] == 60
    # simulate also accepts a task set directly
    assert main(["simulate", "-i", worked_file, "--base-period", "4"]) == 0


def test_tampered_schedule_fails_verification(worked_file, tmp_path, capsys):
    out = str(tmp_path / "sched.json")
    main(["schedule", "-i", worked_file, "-o", out])
    doc = json.loads(open(out).read())
    doc["cycle_order"][1]["start"] = {"num": 0, "den": 1}
    assert main(["simulate", "-i", write(tmp_path, doc, "bad.json")]) == 3
    rep = json.loads(capsys.readouterr().out)
    assert not rep["passed"] and not rep["conditions"][3]["passed"]


def test_gantt(worked_file, capsys):
    assert main(["schedule", "-i", worked_file, "--gantt"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 13 and all(l.endswith("|0123.|") for l in lines[1:])


@pytest.mark.parametrize("doc", [
    {"tasks": [{"wcet": 0, "period": 5}]},
    {"tasks": []},
    {"tasks": [{"wcet": 6, "period": 5}]},
    {"tasks": [{"wcet": 3, "period": 4}, {"wcet": 3, "period": 4}]},
    {"tasks": [{"wcet": 1, "period": 5}], "colour": "red"},
    '{"tasks": [',
])
def test_invalid_input(tmp_path, doc, capsys):
    assert main(["optimize", "-i", write(tmp_path, doc)]) == 2
    assert "invalid input" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["table", "-i", "/nonexistent/tasks.json"]) == 2


def test_infeasible(tmp_path, capsys):
    doc = {"tasks": [{"wcet": 1, "period": 1}], "overhead": 1}
    assert main(["optimize", "-i", write(tmp_path, doc)]) == 1
    assert "infeasible" in capsys.readouterr().err
    doc = {"tasks": [{"wcet": 2, "period": 5}, {"wcet": 5, "period": 9}], "overhead": "0.2"}
    assert main(["schedule", "-i", write(tmp_path, doc), "--base-period", "5"]) == 1


def test_bench(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("CYCLOSCHED_SEED", raising=False)
    csv_path = str(tmp_path / "runs.csv")
    args = ["bench", "--kind", "prime", "--M", "4", "--runs", "5", "--seed", "11"]
    assert main(args + ["--csv", csv_path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["runs"] == 5 and doc["seed"] == 11 and "records" not in doc
    assert doc["metadata"]["start_index"] == 2
    assert doc["coprime_pair_fraction"]["num"] == doc["coprime_pair_fraction"]["den"]
    assert len(open(csv_path).read().splitlines()) == 6

    monkeypatch.setenv("CYCLOSCHED_SEED", "99")
    assert main(args + ["--records"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 99 and len(doc["records"]) == 5


def test_bench_range_too_small(capsys):
    assert main(["bench", "--M", "8", "--period-min", "5", "--period-max", "9"]) == 2
