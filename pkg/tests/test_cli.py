import csv
import io
import json
import subprocess
import sys

import pytest

from heislw.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_verify_group(capsys):
    code, out = run(["verify-group", "--n", "1", "--q", "5"], capsys)
    assert code == 0
    rec = jsonl(out)[0]
    assert rec["order"] == 125 and rec["associative"] and rec["ok"]


def test_subgroups_count(capsys):
    code, out = run(["subgroups", "count", "--n", "1", "--p", "3"], capsys)
    rec = jsonl(out)[0]
    assert code == 0
    assert (rec["formula"], rec["enumerated"], rec["match"]) == (19, 19, True)
    assert rec["formula_kp"] == 18 and rec["match_kp"] is False


def test_subgroups_enumerate(capsys):
    code, out = run(["subgroups", "enumerate", "--n", "1", "--q", "3"], capsys)
    summary = [r for r in jsonl(out) if r["check"] == "subgroups-enumerate"][0]
    assert code == 0 and summary["total"] == 19 and summary["homogeneous"] == 11
    assert summary["by_order"] == {"1": 1, "3": 13, "9": 4, "27": 1}


def test_region_scan_csv(capsys):
    code, out = run(["region-scan", "--q-list", "3,5,7,11", "--grid", "0.1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4 * 11 * 11
    assert list(rows[0]) == ["u1", "u2", "q", "ratio", "class", "ratio_A", "ratio_B"]
    for r in rows:
        if r["class"] == "boundary":
            assert abs(float(r["ratio"]) - 1.0) <= 1e-12


def test_lw_and_sets(capsys):
    code, out = run(["lw-check", "--n", "2", "--q", "3", "--k", "1", "--samples", "50"], capsys)
    assert code == 0 and jsonl(out)[0]["all_finite"]
    code, out = run(["set-lw", "--q-list", "3,5", "--samples", "40"], capsys)
    assert code == 0
    code, out = run(["incidence", "--q-list", "3,5", "--samples", "40"], capsys)
    assert code == 0


def test_extremize(capsys):
    code, out = run(["extremize", "--q", "3", "--method", "exhaustive"], capsys)
    rec = jsonl(out)[0]
    assert code == 0 and rec["value"] == 1.0 and rec["witness_ref"] == {"E_mask": 1, "F_mask": 73}
    code, out = run(["extremize", "--q", "3", "--exponents", "3/2,3/2", "--restarts", "2"], capsys)
    assert code == 0 and jsonl(out)[0]["value"] >= 1.0


def test_violation_exit_code(capsys):
    # the second Chen bound fails for tiny sets (see README); the report carries the witness
    code, out = run(["chen", "--q", "3", "--samples", "20"], capsys)
    recs = jsonl(out)
    summary = [r for r in recs if r.get("check") == "summary"][0]
    assert code == (1 if summary["violations"] else 0)
    assert all("K" in r["violation"] for r in recs if "violation" in r)


@pytest.mark.parametrize("args", [["verify-group", "--q", "4"], ["verify-group", "--bogus"],
                                  ["region-scan", "--grid", "0.3"], ["nope"]])
def test_usage_errors(args, capsys):
    assert main(args) == 2


def test_threads_do_not_change_output(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ["set-lw", "--q-list", "3,5,7", "--samples", "30", "--seed", "4"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heislw", "subgroups", "count", "--p", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert jsonl(proc.stdout)[0]["enumerated"] == 39
