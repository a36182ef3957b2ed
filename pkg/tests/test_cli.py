"""End-to-end runs of the command-line harness."""

import csv
import io
import json

import numpy as np
import pytest

import msca.verify
from msca import __version__
from msca.cli import main
from msca.instances import allocation_to_dict, dumps_instance, random_monotone_msca


@pytest.fixture
def star(tmp_path):
    path = tmp_path / "star.json"
    assert main(["gen", "star", "--out", str(path)]) == 0
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["gen", "hypergraph-mc", "--n", "8", "--seed", "5", "--out", str(a)])
    main(["gen", "hypergraph-mc", "--n", "8", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "gen", "msca", "--n", "4")
    assert code == 0
    assert json.loads(out)["type"] == "msca"


def test_solve_reports_objective_and_provenance(star, tmp_path, capsys):
    alloc = tmp_path / "x.json"
    code, out, _ = run(capsys, "solve", star, "--out", alloc)
    assert code == 0
    row = json.loads(out)
    assert row["objective"] == pytest.approx(2.0)
    assert row["method"] == "lp"
    assert {"seed", "instance_hash", "version"} <= set(row)
    assert row["version"] == __version__
    x = json.loads(alloc.read_text())
    assert x["instance_hash"] == row["instance_hash"]


def test_solve_csv_and_lp_dump(star, tmp_path, capsys):
    dump = tmp_path / "lp.txt"
    code, out, _ = run(capsys, "solve", star, "--format", "csv", "--dump-lp", dump)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["objective"]) == pytest.approx(2.0)
    assert dump.read_text().startswith("# lp-tableau v1")


def test_solve_subgradient(star, capsys):
    code, out, _ = run(capsys, "solve", star, "--method", "subgradient", "--iters", "3000")
    assert code == 0
    assert json.loads(out)["objective"] <= 2.02


def test_round_summary_uses_exact_reference(star, tmp_path, capsys):
    alloc, costs = tmp_path / "x.json", tmp_path / "costs.csv"
    run(capsys, "solve", star, "--out", alloc)
    code, out, _ = run(capsys, "round", star, alloc, "--algorithm", "ckr", "--trials", "200", "--out", costs)
    assert code == 0
    summary = json.loads(out)
    assert summary["ratio_basis"] == "exact"
    assert summary["reference"] == pytest.approx(2.0)
    assert summary["min"] >= 2.0 - 1e-9
    rows = list(csv.DictReader(costs.open()))
    assert list(rows[0]) == ["trial", "seed", "cost"]
    assert len(rows) == 200
    assert [int(r["seed"]) for r in rows[:3]] == [0, 1, 2]


def test_round_is_reproducible(star, tmp_path, capsys):
    alloc = tmp_path / "x.json"
    run(capsys, "solve", star, "--out", alloc)
    outs = [run(capsys, "round", star, alloc, "--algorithm", "kt", "--trials", "50", "--seed", "9",
                "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    payload = json.loads(outs[0])
    assert payload["summary"]["seed"] == 9
    assert len(payload["trials"]) == 50


def test_round_with_supplied_reference_and_trace(star, tmp_path, capsys):
    alloc, trace = tmp_path / "x.json", tmp_path / "trace.jsonl"
    run(capsys, "solve", star, "--out", alloc)
    code, _, err = run(capsys, "round", star, alloc, "--algorithm", "kt", "--trials", "5",
                       "--opt-frac", "2.0", "--trace", trace)
    assert code == 0
    assert json.loads(err)["ratio_basis"] == "supplied"
    lines = [json.loads(line) for line in trace.read_text().splitlines()]
    assert {rec["trial"] for rec in lines} == set(range(5))


def test_exact_with_allocation(star, tmp_path, capsys):
    alloc = tmp_path / "x.json"
    run(capsys, "solve", star, "--out", alloc)
    code, out, _ = run(capsys, "exact", star, "--allocation", alloc)
    assert code == 0
    rep = json.loads(out)
    assert rep["opt"] == pytest.approx(2.0)
    assert rep["opt_frac"] == pytest.approx(2.0)
    assert rep["sandwich_ok"] is True


def test_gap_instance_and_candidate(tmp_path, capsys):
    inst, alloc = tmp_path / "gap.json", tmp_path / "x.json"
    assert main(["gen", "gap", "--k", "5", "--delta", "3", "--out", str(inst),
                 "--allocation-out", str(alloc)]) == 0
    code, out, _ = run(capsys, "exact", inst, "--allocation", alloc)
    assert code == 0
    assert json.loads(out)["opt"] == pytest.approx(6.0)


# --- exit codes ----------------------------------------------------------------


def test_missing_file_is_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "solve", tmp_path / "nope.json")
    assert code == 2
    assert "error" in err


def test_inapplicable_algorithm_is_usage_error(tmp_path, capsys):
    path = tmp_path / "m.json"
    inst = random_monotone_msca(4, 2, 0)
    path.write_text(dumps_instance(inst))
    alloc = tmp_path / "x.json"
    alloc.write_text(json.dumps(allocation_to_dict(inst.uniform_allocation(), inst)))
    code, _, err = run(capsys, "round", path, alloc, "--algorithm", "ckr", "--trials", "3")
    assert code == 2
    assert "does not apply" in err
    code, _, _ = run(capsys, "solve", path, "--dump-lp", tmp_path / "lp.txt")
    assert code == 2


def test_infeasible_allocation_exit_code(star, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(allocation_to_dict(np.full((4, 3), 0.5))))
    code, _, err = run(capsys, "round", star, bad, "--algorithm", "kt", "--trials", "3")
    assert code == 3
    assert "infeasible" in err


def test_too_large_exit_code(tmp_path, capsys):
    path = tmp_path / "big.json"
    main(["gen", "msca", "--n", "16", "--k", "4", "--out", str(path)])
    code, _, err = run(capsys, "exact", path)
    assert code == 4
    assert "too large" in err


def test_bad_trials_and_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["round", "a", "b", "--algorithm", "kt", "--trials", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_reports_each_check(monkeypatch, capsys):
    monkeypatch.setitem(msca.verify.SUITES, "lemmas", ["interval-sizes", "half-spread"])
    code, out, err = run(capsys, "verify", "lemmas", "-v")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["check"] for r in records] == ["interval-sizes", "half-spread"]
    assert all(r["passed"] for r in records)
    assert err.count("PASS") == 2


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setitem(msca.verify.SUITES, "gap", ["gap-example"])
    code, out, _ = run(capsys, "verify", "gap")
    assert code == 1
    assert json.loads(out)["passed"] is False
