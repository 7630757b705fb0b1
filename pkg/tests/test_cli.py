from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from hyperell.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--out", "json")
    return code, json.loads(out)


def test_verify_lemmas_exits_zero(capsys):
    code, out, _ = run(capsys, "verify", "lemmas", "--field", "3", "--g", "1")
    assert code == 0 and "FAIL" not in out


def test_even_field_is_a_usage_error(capsys):
    code, _, err = run(capsys, "density", "--field", "4", "--g", "1")
    assert code == 2 and "odd" in err
    code, _, _ = run(capsys, "density", "--field", "6", "--g", "1")
    assert code == 2


def test_window_violation_is_a_usage_error(capsys):
    code, _, err = run(capsys, "paircorr", "--g", "3", "--N", "20")
    assert code == 2 and "window" in err.lower() or "admissible" in err


def test_budget_refusal(capsys):
    code, _, err = run(capsys, "density", "--g", "3", "--N", "2", "--budget", "100")
    assert code == 2 and "budget" in err


def test_missing_cache_exits_one(capsys, tmp_path):
    code, _, _ = run(capsys, "cache", "info", "--g", "2", "--cache-dir", str(tmp_path))
    assert code == 1


def test_json_document_shape(capsys):
    code, doc = run_json(capsys, "density", "--g", "2", "--N", "2")
    assert code == 0
    assert set(doc) == {"command", "config", "result", "metadata"}
    parts = {p["name"]: p for p in doc["result"]["theorem"]["parts"]}
    assert parts["c_term"]["exact"] == "1/24"


@pytest.mark.parametrize("cmd", [["density", "--N", "4"], ["paircorr", "--N", "2"], ["nonvanishing"], ["simplezeros"],
                                 ["ratios"]])
def test_output_independent_of_threads(capsys, cmd):
    _, a = run_json(capsys, *cmd, "--g", "3", "--threads", "1")
    _, b = run_json(capsys, *cmd, "--g", "3", "--threads", "8")
    a.pop("metadata"), b.pop("metadata")
    a["config"].pop("threads", None), b["config"].pop("threads", None)
    assert a == b


def test_csv_schema(capsys):
    code, out, _ = run(capsys, "paircorr", "--g", "4", "--N", "2", "--out", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["term_name", "exact_rational", "decimal"]
    assert all(len(r) == 3 for r in rows)
    names = [r[0] for r in rows]
    assert any("c1" in n for n in names) and any("c4" in n for n in names)


def test_cache_build_is_idempotent(capsys, tmp_path):
    args = ["cache", "build", "--g", "2", "--Nmax", "4", "--cache-dir", str(tmp_path)]
    code, first = run_json(capsys, *args)
    assert code == 0 and first["result"]["status"] == "written"
    path = first["result"]["path"]
    before = open(path, "rb").read()
    code, second = run_json(capsys, *args)
    assert code == 0 and second["result"]["status"] == "already present"
    assert open(path, "rb").read() == before
    code, _, _ = run(capsys, "cache", "verify", "--g", "2", "--Nmax", "4", "--cache-dir", str(tmp_path))
    assert code == 0


def test_corrupt_cache_exits_one(capsys, tmp_path):
    code, doc = run_json(capsys, "cache", "build", "--g", "1", "--Nmax", "2", "--cache-dir", str(tmp_path))
    path = doc["result"]["path"]
    obj = json.loads(open(path).read())
    obj["S1"][0] = str(int(obj["S1"][0]) + 1)
    open(path, "w").write(json.dumps(obj))
    code, _, err = run(capsys, "cache", "info", "--g", "1", "--Nmax", "2", "--cache-dir", str(tmp_path))
    assert code == 1 and err


def test_genus_zero_density(capsys):
    code, doc = run_json(capsys, "density", "--g", "0", "--N", "2")
    assert code == 0


def test_console_script_version():
    out = subprocess.run([sys.executable, "-m", "hyperell", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "0.1.0" in out.stdout
