import csv
import io
import json
import math

import pytest

from wrtkit import cli
from wrtkit.cyclo import cyclo_eq
from wrtkit.mtc import mtc_su2


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mtc_table_su2_level_one(capsys):
    code, out, _ = run(capsys, "mtc-table", "--family", "su2", "-k", "1")
    assert code == 0
    d = json.loads(out)
    assert d["labels"] == [0, 1]
    S = [[complex(float(a), float(b)) for a, b in row] for row in d["S"]]
    r = 2 ** -0.5
    assert all(abs(S[i][j] - w) < 1e-15 for (i, j), w in
               {(0, 0): r, (0, 1): r, (1, 0): r, (1, 1): -r}.items())


def test_mtc_table_round_trip(capsys):
    _, out, _ = run(capsys, "mtc-table", "-k", "3")
    back = cli.parse_mtc_table(json.loads(out))
    m = mtc_su2(3)
    assert all(cyclo_eq(a, b) for a, b in zip(back["qdims"], m.qdims))
    assert all(cyclo_eq(a, b) for ra, rb in zip(back["s_unnorm"], m.s_unnorm) for a, b in zip(ra, rb))
    assert all(cyclo_eq(a, b) for a, b in zip(back["t_diag"], m.t_diag))
    assert cyclo_eq(back["kappa_unnorm"], m.kappa_unnorm)


def test_mtc_table_odd_u1_is_input_error(capsys):
    code, _, err = run(capsys, "mtc-table", "--family", "u1", "-k", "3")
    assert code == 2 and "even" in err


def test_mtc_table_csv(capsys):
    code, out, _ = run(capsys, "mtc-table", "--family", "su2", "-k", "2", "--format", "csv")
    rows = [r for r in csv.DictReader(io.StringIO(out)) if r["quantity"] == "S"]
    assert code == 0 and len(rows) == 9


@pytest.mark.parametrize("spec,want", [("s3", 0.5), ("s1xs2", 1.0)])
def test_rt_canonical(capsys, spec, want):
    code, out, _ = run(capsys, "rt", spec, "-k", "2")
    d = json.loads(out)
    assert code == 0 and abs(float(d["value"][0]) - want) < 1e-15


def test_rt_poincare_presentations_agree(capsys):
    _, a, _ = run(capsys, "rt", "poincare", "-k", "2")
    _, b, _ = run(capsys, "rt", "poincare-star", "-k", "2")
    za, zb = (complex(*map(float, json.loads(x)["value"])) for x in (a, b))
    assert abs(za - zb) < 1e-9


@pytest.mark.parametrize("argv", [["rt", "lens:0,1", "-k", "2"], ["rt", "nowhere", "-k", "2"],
                                  ["rt", "s3", "-k", "2", "--precision", "10"],
                                  ["rt", "@/does/not/exist.json", "-k", "2"]])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("WRT_PRECISION", "12")
    assert run(capsys, "rt", "s3", "-k", "2")[0] == 2
    code, out, _ = run(capsys, "rt", "s3", "-k", "2", "--precision", "20")
    assert code == 0 and json.loads(out)["precision"] == 20


def test_sweep_and_spectrum(capsys, tmp_path):
    f = tmp_path / "l31.csv"
    code, _, _ = run(capsys, "sweep", "lens:3,1", "--k", "20..276", "--fast", "-o", str(f))
    assert code == 0
    assert len(f.read_text().splitlines()) == 258  # header + 257 levels
    code, out, _ = run(capsys, "spectrum", str(f), "--lens", "3")
    peaks = json.loads(out)["peaks"]
    assert code == 0 and 1 <= len(peaks) <= 2


def test_sweep_deterministic(capsys):
    a = run(capsys, "sweep", "lens:5,2", "--k", "10..40", "--precision", "20")[1]
    b = run(capsys, "sweep", "lens:5,2", "--k", "10..40", "--precision", "20", "--threads", "2")[1]
    assert a == b


def test_borel_synthetic(capsys):
    code, out, _ = run(capsys, "borel", "--synthetic", "factorial", "--cs", "0,1")
    d = json.loads(out)
    assert code == 0 and abs(d["poles"][0]["loc"][0] - 1) < 1e-6
    assert d["matches"][0]["matched"]


def test_borel_series_file(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"coeffs": [str((-1) ** n * math.factorial(n)) for n in range(16)]}))
    code, out, _ = run(capsys, "borel", str(f))
    assert code == 0 and abs(json.loads(out)["poles"][0]["loc"][0] + 1) < 1e-6
    assert run(capsys, "borel")[0] == 2


def test_abelian_matrix_input(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"matrix": [[2, 1], [1, 2]]}))
    code, out, _ = run(capsys, "abelian", f"@{f}", "-k", "4")
    d = json.loads(out)
    assert code == 0 and d["torsion_orders"] == [3]
    assert abs(float(d["ratio"][0]) - 2) < 1e-20
    f.write_text(json.dumps({"matrix": [[2, 1], [0, 2]]}))
    assert run(capsys, "abelian", f"@{f}", "-k", "4")[0] == 2
    assert run(capsys, "abelian", "s3", "-k", "3")[0] == 2


@pytest.mark.parametrize("suite", ["verlinde", "kirby", "canonical"])
def test_check_passes(capsys, suite):
    code, out, _ = run(capsys, "check", suite)
    assert code == 0 and "[PASS]" in out


def test_check_modular_range(capsys, tmp_path):
    j = tmp_path / "r.json"
    code, out, _ = run(capsys, "check", "modular", "-k", "1..16", "--json", str(j))
    assert code == 0 and out.count("\n") >= 18
    assert json.loads(j.read_text())["modular"]["passed"]


def test_check_failure_exit_code(capsys):
    code, out, _ = run(capsys, "check", "torsion")
    assert code == 1 and "[FAIL]" in out
