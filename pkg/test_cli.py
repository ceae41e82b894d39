import json

import pytest

from etsched.cli import GenSpec, format_table, generate_document, main
from etsched.errors import BadSpec

NESTED = {"budget": "80/9", "jobs": [{"id": 1, "r": 0, "d": 4, "p": 2}, {"id": 2, "r": 1, "d": 2, "p": 2}]}
TWO_UNIT = {"budget": 1, "jobs": [{"id": 1, "r": 0, "d": 2, "p": 1}, {"id": 2, "r": 0, "d": 2, "p": 1}]}


def write_json(tmp_path, name, doc) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_preemptive(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write_json(tmp_path, "nested.json", NESTED))
    assert code == 0
    doc = json.loads(out)
    assert doc["objective"] == 2
    assert doc["energy"] == "80/9"
    assert doc["schedule"]["completed"] == [1, 2]


def test_budget_override(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", write_json(tmp_path, "nested.json", NESTED), "--budget", "8")
    assert code == 0
    assert json.loads(out)["objective"] == 1


def test_minenergy_ignores_budget(tmp_path, capsys):
    path = write_json(tmp_path, "nested.json", dict(NESTED, budget=0))
    code, out, _ = run(capsys, "solve", path, "--mode", "minenergy")
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == "minenergy"
    assert (doc["objective"], doc["energy"]) == (2, "80/9")


def test_nonpreemptive_rejects_unequal_work(tmp_path, capsys):
    code, out, err = run(capsys, "solve", write_json(tmp_path, "nested.json", dict(NESTED, jobs=[
        {"id": 1, "r": 0, "d": 4, "p": 2}, {"id": 2, "r": 1, "d": 2, "p": 1}])), "--mode", "nonpreemptive")
    assert code == 2
    assert out == ""
    assert "equal work" in err


def test_solve_table_and_output_file(tmp_path, capsys):
    target = tmp_path / "result.txt"
    code, out, _ = run(capsys, "solve", write_json(tmp_path, "nested.json", NESTED),
                       "--format", "table", "-o", str(target))
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert "objective" in text
    assert "80/9" in text


def test_dump_table(tmp_path, capsys):
    csv_path = tmp_path / "memo.csv"
    code, _, _ = run(capsys, "solve", write_json(tmp_path, "two.json", TWO_UNIT), "--dump-table", str(csv_path))
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "k,s,t,u,value"
    assert len(lines) > 1


def test_malformed_instance(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "solve", str(path))
    assert code == 2
    assert err.startswith("error:") or "\nerror:" in err


def test_oracle(tmp_path, capsys):
    code, out, _ = run(capsys, "oracle", write_json(tmp_path, "two.json", dict(TWO_UNIT, budget="1/4")))
    assert code == 0
    doc = json.loads(out)
    assert doc["objective"] == 1
    assert doc["best_subset"] == [1]
    assert doc["energy"] == "1/4"


def test_gen_is_deterministic(capsys):
    first = run(capsys, "gen", "--n", "5", "--seed", "11")
    second = run(capsys, "gen", "--n", "5", "--seed", "11")
    assert first[:2] == second[:2]
    doc = json.loads(first[1])
    assert [job["id"] for job in doc["jobs"]] == [1, 2, 3, 4, 5]


def test_gen_equal_work(capsys):
    code, out, _ = run(capsys, "gen", "--n", "6", "--max-work", "5", "--equal-work", "--seed", "3")
    assert code == 0
    assert len({job["p"] for job in json.loads(out)["jobs"]}) == 1


def test_gen_rejects_empty_instance(capsys):
    code, _, _ = run(capsys, "gen", "--n", "0")
    assert code == 2


def test_gen_spec_checks():
    with pytest.raises(BadSpec):
        generate_document(GenSpec(n=2, max_time=0, max_work=1))
    doc = generate_document(GenSpec(n=3, max_time=4, max_work=2, max_weight=3, seed=5))
    assert all(0 <= job["r"] < job["d"] <= 4 for job in doc["jobs"])


def _schedule(*segments, completed=None):
    doc = {"segments": [{"job": j, "start": s, "end": e, "speed": v} for j, s, e, v in segments]}
    if completed is not None:
        doc["completed"] = completed
    return doc


def test_check_valid_and_over_budget(tmp_path, capsys):
    inst = write_json(tmp_path, "two.json", dict(TWO_UNIT, budget=2))
    sched = write_json(tmp_path, "s.json", _schedule((1, 0, 1, 1), (2, 1, 2, 1)))
    code, out, _ = run(capsys, "check", inst, sched)
    assert code == 0
    assert json.loads(out) == {"ok": True, "energy": 2, "violations": []}

    code, out, _ = run(capsys, "check", inst, sched, "--budget", "1")
    assert code == 2
    assert "energy exceeds budget" in json.loads(out)["violations"][0]["message"]


def test_check_overlap(tmp_path, capsys):
    inst = write_json(tmp_path, "two.json", dict(TWO_UNIT, budget=2))
    sched = write_json(tmp_path, "s.json", _schedule((1, 0, 1, 1), (2, "1/2", "3/2", 1)))
    code, out, _ = run(capsys, "check", inst, sched, "--format", "table")
    assert code == 2
    assert "overlap" in out


def test_compare_agrees(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write_json(tmp_path, "two.json", dict(TWO_UNIT, budget=2)))
    assert code == 0
    doc = json.loads(out)
    assert doc["disagreements"] == []
    assert {row["solver"]: row["objective"] for row in doc["rows"]} == {
        "preemptive-dp": 2, "preemptive-oracle": 2, "nonpreemptive-dp": 2, "nonpreemptive-oracle": 2,
    }


def test_compare_zero_budget_and_unequal_work(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", write_json(tmp_path, "nested.json", NESTED), "--budget", "0")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [row["objective"] for row in rows[:2]] == [0, 0]
    assert all(row["note"] == "unequal work" for row in rows[2:])


def test_points_in_instance_coordinates(tmp_path, capsys):
    path = write_json(tmp_path, "shifted.json", {"jobs": [{"id": 1, "r": 5, "d": 7, "p": 1},
                                                          {"id": 2, "r": 7, "d": 8, "p": 1}]})
    code, out, _ = run(capsys, "points", path, "--kind", "theta")
    assert code == 0
    assert json.loads(out) == [5, 6, "13/2", 7, "15/2", 8]

    code, out, _ = run(capsys, "points", path, "--kind", "gamma", "--s", "5")
    assert code == 0
    assert json.loads(out) == [6, "13/2", 7, 8]

    code, _, _ = run(capsys, "points", path, "--kind", "gamma", "--s", "1/3")
    assert code == 2


def test_reduce_knapsack(tmp_path, capsys):
    path = write_json(tmp_path, "kp.json", {"C": 3, "items": [{"v": 3, "c": 2}, {"v": 4, "c": 3}]})
    code, out, _ = run(capsys, "reduce-knapsack", path, "--alpha", "3")
    assert code == 0
    assert json.loads(out) == {"alpha": 3, "budget": 3, "jobs": [
        {"id": 1, "r": 0, "d": 2, "p": 1, "w": 3}, {"id": 2, "r": 2, "d": 5, "p": 1, "w": 4}]}


def test_reduce_empty_knapsack_writes_nothing(tmp_path, capsys):
    path = write_json(tmp_path, "kp.json", {"C": 7, "items": []})
    target = tmp_path / "reduced.json"
    code, out, err = run(capsys, "reduce-knapsack", path, "-o", str(target))
    assert code == 2
    assert out == ""
    assert "no items" in err
    assert not target.exists()


def test_malformed_phi_cap_is_an_input_error(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ETSCHED_PHI_CAP", "abc")
    code, out, err = run(capsys, "solve", write_json(tmp_path, "two.json", TWO_UNIT))
    assert code == 2
    assert out == ""
    assert "ETSCHED_PHI_CAP" in err


def test_sweep(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", write_json(tmp_path, "two.json", TWO_UNIT), "--budgets", "0,1/4,2")
    assert code == 0
    assert json.loads(out) == [
        {"budget": 0, "objective": 0, "energy": 0},
        {"budget": "1/4", "objective": 1, "energy": "1/4"},
        {"budget": 2, "objective": 2, "energy": 2},
    ]


def test_version(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert "etsched" in capsys.readouterr().out


def test_format_table():
    assert format_table(["a", "bb"], [[1, None], ["xyz", 2]]).splitlines() == [
        "a    bb", "---  --", "1    -", "xyz  2",
    ]
