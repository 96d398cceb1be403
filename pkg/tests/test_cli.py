"""Command-line behavior: output bytes, exit codes, checkpoints, workers.

Most cases drive main(argv) in process and capture stdout; one subprocess
case checks the installed entry point end to end.  Exit codes under test:
0 exists / success, 3 not-exists / failed verification, 2 usage, 4 state.
"""
import json
import subprocess
import sys

import pytest

from mstiff.cli import main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# exists


def test_exists_4_23_text(capsys):
    code, out, _ = run(capsys, "exists", "--m", "4", "--d", "23")
    assert code == 0
    assert out.splitlines()[0] == \
        "Exists: a 4-stiff configuration on S^22 (d = 23)"
    assert "section polynomial roots: 5, 45" in out
    assert "+-1/sqrt(5)" in out and "+-1/sqrt(45)" in out
    assert "weights: 11/184, 81/184" in out


def test_exists_4_23_json(capsys):
    code, out, _ = run(
        capsys, "exists", "--m", "4", "--d", "23", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "m": 4,
        "d": 23,
        "verdict": "exists",
        "roots": ["5", "45"],
        "lambdas": ["11/184", "81/184"],
        "witness": None,
    }


def test_exists_5_26_json(capsys):
    code, out, _ = run(
        capsys, "exists", "--m", "5", "--d", "26", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["roots"] == ["4", "16"]
    assert payload["lambdas"] == ["5/273", "64/273", "45/91"]


def test_exists_degree_one(capsys):
    code, out, _ = run(
        capsys, "exists", "--m", "1", "--d", "9", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "exists"
    assert payload["roots"] == []
    assert payload["lambdas"] == ["1"]


def test_exists_circle(capsys):
    code, out, _ = run(capsys, "exists", "--m", "6", "--d", "2")
    assert code == 0
    assert "regular 12-gon" in out
    assert "1/6" in out


def test_exists_not_exists_coefficient(capsys):
    code, out, _ = run(
        capsys, "exists", "--m", "6", "--d", "5", "--format", "json"
    )
    assert code == 3
    payload = json.loads(out)
    assert payload["verdict"] == "not_exists"
    w = payload["witness"]
    assert w["type"] == "coefficient"
    assert w["index"] == 3
    assert w["value"] == "429/5"


def test_exists_not_exists_text_exit(capsys):
    code, out, _ = run(capsys, "exists", "--m", "4", "--d", "10")
    assert code == 3
    assert out.startswith("NotExists: no 4-stiff configuration on S^9")
    assert "witness:" in out


# ---------------------------------------------------------------------------
# usage and state errors


def test_usage_exit_codes(capsys):
    assert run(capsys, "exists", "--m", "0", "--d", "5")[0] == 2
    assert run(capsys, "exists", "--m", "4", "--d", "1")[0] == 2
    assert run(capsys, "exists", "--m", "4", "--d", "23",
               "--precision", "10")[0] == 2
    assert run(capsys, "classify")[0] == 2
    assert run(capsys, "classify", "--dim", "5", "--deg", "4")[0] == 2
    assert run(capsys, "pell", "--D", "4", "--M", "9")[0] == 2
    assert run(capsys, "pell", "--D", "6", "--M", "0")[0] == 2
    assert run(capsys, "verify", "no-such-claim")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "exists", "--m", "4", "--d", "23",
               "--format", "csv")[0] == 2


def test_unknown_theorem_lists_tags(capsys):
    code, _, err = run(capsys, "verify", "no-such-claim")
    assert code == 2
    assert "odd-dim-valuation" in err


# ---------------------------------------------------------------------------
# tables


def test_tables_limit_10_only_circle(capsys):
    code, out, _ = run(capsys, "tables", "--which", "m4", "--limit", "10")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2  # header plus the d = 2 row
    assert lines[1].startswith("2 ")


def test_tables_csv_crlf(capsys):
    code, out, _ = run(
        capsys, "tables", "--which", "m5", "--limit", "30",
        "--format", "csv"
    )
    assert code == 0
    assert out.startswith(
        "d,zero1,zero2,zero3,lambda1,lambda2,lambda3\r\n"
    )
    assert "26,1/2,1/4,0,5/273,64/273,45/91\r\n" in out


def test_tables_scientific_limit(capsys):
    code, out, _ = run(
        capsys, "tables", "--which", "m4", "--limit", "1e8",
        "--format", "json"
    )
    assert code == 0
    assert [r["d"] for r in json.loads(out)][-1] == 23049599


# ---------------------------------------------------------------------------
# classify


def test_classify_dim_2_sentinel(capsys):
    code, out, _ = run(capsys, "classify", "--dim", "2")
    assert code == 0
    assert "every degree is admissible" in out

    code, out, _ = run(capsys, "classify", "--dim", "2", "--format", "json")
    payload = json.loads(out)
    assert payload["all_degrees"] is True
    assert payload["degrees"] == "all"


def test_classify_dim_26_json(capsys):
    code, out, _ = run(capsys, "classify", "--dim", "26", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["degrees"] == [1, 2, 3, 5]
    assert payload["complete"] is True
    parities = {b["parity"]: b for b in payload["branches"]}
    assert parities["odd"]["existing"] == [5]
    assert parities["even"]["existing"] == []


def test_classify_dim_max_m_filters_display(capsys):
    code, out, _ = run(capsys, "classify", "--dim", "26", "--max-m", "3")
    assert code == 0
    assert "admissible degrees 1, 2, 3" in out.splitlines()[0]


def test_classify_deg_low_sentinel(capsys):
    code, out, _ = run(capsys, "classify", "--deg", "2")
    assert code == 0
    assert "every dimension d >= 2 is admissible" in out


def test_classify_deg_4_stream(capsys):
    code, out, _ = run(
        capsys, "classify", "--deg", "4", "--max-d", "3000",
        "--format", "json"
    )
    assert code == 0
    lines = out.splitlines()
    summary = json.loads(lines[-1])
    assert summary["admissible"] == [2, 23, 241, 2399]
    assert summary["complete"] is True
    row241 = json.loads(lines[2])
    assert row241["lambdas"] == ["125/2651", "2401/5302"]


def test_classify_deg_sweep_json_lines(capsys):
    code, out, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "20",
        "--format", "json"
    )
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    summary = lines[-1]
    cells = lines[:-1]
    assert [c["d"] for c in cells] == list(range(3, 21))
    assert all(c["verdict"] == "not_exists" for c in cells)
    assert summary["admissible"] == []
    assert summary["complete_below_max_d"] is True
    assert summary["budget"] is None
    # stdout stays timestamp-free; checkpoints are the only dated artifact
    assert "ts" not in summary


def test_classify_deg_sweep_budget(capsys):
    code, out, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "30",
        "--budget", "4", "--format", "json"
    )
    assert code == 0
    summary = json.loads(out.splitlines()[-1])
    assert summary["cells_examined"] == 4
    assert summary["budget_exhausted"] is True
    assert summary["complete_below_max_d"] is False


def test_classify_deg_sweep_text(capsys):
    code, out, _ = run(capsys, "classify", "--deg", "7", "--max-d", "12")
    assert code == 0
    assert "degree 7 sweep over 3 <= d <= 12" in out
    assert "no admissible dimensions" in out


# ---------------------------------------------------------------------------
# checkpoints


def test_checkpoint_resume_and_replay(tmp_path, capsys):
    ck = tmp_path / "sweep.jsonl"
    code, first, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "15",
        "--checkpoint", str(ck), "--format", "json"
    )
    assert code == 0
    assert len(ck.read_text().splitlines()) == 13
    for line in ck.read_text().splitlines():
        record = json.loads(line)
        assert record["kind"] == "classify-deg"
        assert record["cell"][0] == 6
        assert set(record) == {
            "kind", "cell", "verdict", "digest", "ts", "version"
        }

    # a resumed wider run replays all 13 cells and appends only new ones
    code, second, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "18",
        "--checkpoint", str(ck), "--format", "json"
    )
    assert code == 0
    summary = json.loads(second.splitlines()[-1])
    assert summary["cells_replayed"] == 13
    assert summary["cells_examined"] == 3
    assert len(ck.read_text().splitlines()) == 16

    # replayed cell records are byte-identical to a fresh computation
    code, fresh, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "18",
        "--format", "json"
    )
    assert fresh.splitlines()[:-1] == second.splitlines()[:-1]


def test_checkpoint_corruption_is_a_state_error(tmp_path, capsys):
    ck = tmp_path / "sweep.jsonl"
    run(capsys, "classify", "--deg", "6", "--max-d", "10",
        "--checkpoint", str(ck), "--format", "json")

    lines = ck.read_text().splitlines()
    tampered = lines[2].replace("not_exists", "exists")
    ck.write_text("\n".join(lines[:2] + [tampered] + lines[3:]) + "\n")
    code, _, err = run(
        capsys, "classify", "--deg", "6", "--max-d", "10",
        "--checkpoint", str(ck), "--format", "json"
    )
    assert code == 4
    assert "digest mismatch" in err

    ck.write_text("not json at all\n")
    code, _, err = run(
        capsys, "classify", "--deg", "6", "--max-d", "10",
        "--checkpoint", str(ck), "--format", "json"
    )
    assert code == 4
    assert "invalid JSON" in err


def test_checkpoint_wrong_sweep_rejected(tmp_path, capsys):
    ck = tmp_path / "sweep.jsonl"
    run(capsys, "classify", "--deg", "6", "--max-d", "10",
        "--checkpoint", str(ck), "--format", "json")
    code, _, err = run(
        capsys, "classify", "--deg", "7", "--max-d", "10",
        "--checkpoint", str(ck), "--format", "json"
    )
    assert code == 4
    assert "different sweep" in err


def test_checkpoint_rejected_outside_sweeps(capsys, tmp_path):
    ck = tmp_path / "x.jsonl"
    code, _, err = run(
        capsys, "classify", "--dim", "5", "--checkpoint", str(ck)
    )
    assert code == 2


# ---------------------------------------------------------------------------
# workers


def test_worker_count_does_not_change_bytes(capsys):
    code, serial, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "25",
        "--format", "json"
    )
    assert code == 0
    code, parallel, _ = run(
        capsys, "classify", "--deg", "6", "--max-d", "25",
        "--workers", "2", "--format", "json"
    )
    assert code == 0
    assert serial == parallel


# ---------------------------------------------------------------------------
# pell


def test_pell_unit_and_single_class(capsys):
    code, out, _ = run(capsys, "pell", "--D", "6", "--M", "9")
    assert code == 0
    assert "fundamental unit of Z[sqrt(6)]: 5+2*sqrt(6) (norm 1)" in out
    assert "solutions of x^2 - 6*y^2 = 9: 1 class" in out
    assert "class 3: orbit 3, 15+6*sqrt(6)" in out


def test_pell_negative_norm_unit(capsys):
    code, out, _ = run(capsys, "pell", "--D", "2", "--M", "1")
    assert code == 0
    assert "1+sqrt(2) (norm -1)" in out
    assert "norm-1 orbit generator: 3+2*sqrt(2)" in out
    assert "orbit 1, 3+2*sqrt(2), 17+12*sqrt(2)" in out


def test_pell_three_classes_json(capsys):
    code, out, _ = run(
        capsys, "pell", "--D", "10", "--M", "9", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["fundamental_unit"]["str"] == "3+sqrt(10)"
    assert payload["fundamental_unit"]["norm"] == -1
    assert [c["str"] for c in payload["classes"]] == [
        "3", "7-2*sqrt(10)", "7+2*sqrt(10)"
    ]


def test_pell_no_solutions(capsys):
    code, out, _ = run(capsys, "pell", "--D", "3", "--M", "5")
    assert code == 0
    assert "solutions of x^2 - 3*y^2 = 5: none" in out


# ---------------------------------------------------------------------------
# newton


def test_newton_section_polynomial(capsys):
    code, out, _ = run(capsys, "newton", "--m", "6", "--d", "6", "--p", "2")
    assert code == 0
    assert "vertices: (0, 0), (1, 0), (2, 1), (4, 4)" in out
    assert "slopes: 1, 3/2" in out
    assert "non-integer slope 3/2" in out


def test_newton_explicit_polynomial(capsys):
    # x^2 - 1, written leading coefficient first
    code, out, _ = run(capsys, "newton", "1,0,-1", "--p", "2")
    assert code == 0
    assert "all slopes are integers" in out


def test_newton_json(capsys):
    code, out, _ = run(
        capsys, "newton", "--m", "6", "--d", "6", "--p", "2",
        "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["vertices"] == [[0, 0], [1, 0], [2, 1], [4, 4]]
    assert payload["slopes"] == ["1", "3/2"]
    assert payload["all_slopes_integer"] is False
    assert payload["fractional_slopes"] == ["3/2"]


def test_newton_usage(capsys):
    assert run(capsys, "newton", "--p", "2")[0] == 2
    assert run(capsys, "newton", "--m", "6", "--p", "4")[0] == 2
    assert run(capsys, "newton", "1,0,-1", "--m", "6", "--d", "6")[0] == 2
    assert run(capsys, "newton", "0,1")[0] == 2


# ---------------------------------------------------------------------------
# bounds


def test_bounds_odd_dimension(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "9")
    assert code == 0
    assert "n >= 23 (odd-dim-valuation, conservative)" in out
    assert "n >= 27 (odd-dim-valuation, conservative)" in out


def test_bounds_circle(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "2")
    assert code == 0
    assert out.count("no finite threshold") == 2


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "4", "--format", "json")
    payload = json.loads(out)
    by_parity = {b["parity"]: b for b in payload["bounds"]}
    assert by_parity["even"]["threshold"] == 6
    assert by_parity["odd"]["threshold"] == 3


# ---------------------------------------------------------------------------
# verify


def test_verify_alias_passes(capsys):
    code, out, _ = run(capsys, "verify", "thm-4.4")
    assert code == 0
    assert "theorem check dim4-even-deg (alias thm-4.4): PASSED" in out


def test_verify_json(capsys):
    code, out, _ = run(
        capsys, "verify", "dim6-even-deg", "--limit", "10",
        "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["checks"]


# ---------------------------------------------------------------------------
# entry point


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "mstiff", "exists", "--m", "5", "--d", "124",
         "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["roots"] == ["16", "208/3"]
    assert payload["lambdas"] == ["41/3255", "2197/9765", "1025/1953"]


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
