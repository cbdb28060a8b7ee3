import json
import subprocess
import sys

import pytest

from polysieve.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pm(capsys):
    assert run(["pm", "--m", "5", "--n", "-1"], capsys)[:2] == (0, "2\n")


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pm", "--m", "5"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["density", "--m", "5", "--a", "1,x", "--p", "5", "--n", "1"])
    assert exc.value.code == 1


def test_domain_error_exit_1(capsys):
    code, _, err = run(["pm", "--m", "2", "--n", "3"], capsys)
    assert code == 1 and "polygon order" in err


def test_factor(capsys):
    assert run(["factor", "--n", "-360"], capsys)[1] == "-360 = -2^3 * 3^2 * 5\n"


def test_represent(capsys):
    code, out, _ = run(["represent", "--m", "5", "--a", "1,1,1,1", "--n", "0:2"], capsys)
    assert code == 0 and out.splitlines() == ["n,count", "0,1", "1,4", "2,10"]


def test_density_csv_is_exact(capsys):
    code, out, _ = run(["density", "--m", "11", "--a", "1,1,2,4", "--p", "5,7", "--n", "0:3", "--oracle"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,a,d,p,H,r,density,oracle,oracle_k"
    for line in lines[1:]:
        cols = line.split(",")
        assert "/" in cols[6] and cols[6] == cols[7]


def test_sieve_bound_json(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, _, _ = run(["sieve-bound", "--m", "5", "--a", "1,1,1,1", "--n", "1", "--z", "7", "--out", str(out_file)], capsys)
    data = json.loads(out_file.read_text())
    assert code == 0
    assert {"sumDz", "sumPrime", "sumMT", "Cbeta", "mainTerm", "cuspTerm", "Sexact", "Slower"} <= set(data)
    assert data["Sexact"] == 4
    assert set(data["sumDz"]) == {"num", "den"}
    assert "log10" in data["mainTerm"] and data["Slower"]["sign"] == -1


def test_sieve_bound_from_h(capsys):
    code, out, _ = run(["sieve-bound", "--m", "11", "--a", "1,1,2,4", "--h", "10^10", "--z", "5"], capsys)
    assert code == 0 and json.loads(out)["Sexact"] is None


def test_degenerate_exit_3(capsys):
    # alpha = (1, 2, 2, 2) at p = 5 with ord_5 h = 0 has zero base density
    from polysieve.localdensity import local_params
    from polysieve.polygonal import scaled_H

    a = (5, 25, 25, 25)
    n = next(n for n in range(50) if local_params(11, a, None, 5, scaled_H(11, a, n)).r == 0)
    code, _, err = run(["sieve-bound", "--m", "11", "--a", "5,25,25,25", "--n", str(n), "--z", "7"], capsys)
    assert code == 3 and "degenerate" in err


def test_bad_beta_exit_1(capsys):
    code, _, _ = run(["sieve-bound", "--m", "11", "--a", "1,1,1,1", "--n", "3", "--z", "7", "--beta", "4"], capsys)
    assert code == 1


def test_universality_scan(capsys):
    code, out, _ = run(["universality-scan", "--m", "5", "--a", "1,1,1,1", "--L", "2", "--S", "2,3", "--N", "200"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,represented" and len(lines) == 203
    assert lines[-1].startswith("# first failure:")


def test_eisenstein_csv(capsys):
    code, out, _ = run(["eisenstein", "--m", "11", "--a", "1,1,2,4", "--n", "1:3"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("n,h,count,aE_lo_log10")


def test_tables_localden_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert main(["tables", "--kind", "localden", "--out", str(f)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# ")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polysieve", "pm", "--m", "7", "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "18\n"
