import csv
import io
import math
import subprocess
import sys

import pytest

from telegraph_distance.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestTables:
    def test_table1_rows(self, capsys):
        code, out, _ = run(["table1"], capsys)
        assert code == 0
        data = rows(out)
        assert len(data) == 30
        assert data[0]["r"] == "0.2" and data[-1]["r"] == "6"
        by_r = {float(d["r"]): float(d["G"]) for d in data}
        assert by_r[1.0] == pytest.approx(0.1348, abs=5e-4)
        assert "# non-default parameters" not in out
        assert out.splitlines()[0].startswith("# table1 lambda1=2 lambda2=1 c1=4 c2=2 t=3")

    def test_table2_rows(self, capsys):
        code, out, _ = run(["table2"], capsys)
        assert code == 0
        by_r = {float(d["r"]): float(d["Q"]) for d in rows(out)}
        assert len(by_r) == 30
        assert by_r[9.0] == pytest.approx(0.8855, abs=5e-4)
        assert by_r[10.0] == pytest.approx(0.9233, abs=5e-4)

    def test_four_decimals(self, capsys):
        _, out, _ = run(["table1", "--terms", "7"], capsys)
        for d in rows(out):
            assert len(d["G"].split(".")[1]) == 4
        assert "series=fixed(7)" in out

    def test_override_marks_header(self, capsys):
        _, out, _ = run(["table1", "--lambda1", "3"], capsys)
        assert "# non-default parameters" in out
        _, out, _ = run(["table2", "--r-min", "7", "--r-max", "8", "--r-steps", "3"], capsys)
        assert "# non-default parameters" in out
        assert [d["r"] for d in rows(out)] == ["7", "7.5", "8"]

    def test_deterministic(self, capsys):
        _, a, _ = run(["table2"], capsys)
        _, b, _ = run(["table2"], capsys)
        assert a == b


class TestCurves:
    def test_figure1(self, capsys):
        code, out, _ = run(["figure1"], capsys)
        assert code == 0
        vals = {float(d["x"]): float(d["cdf"]) for d in rows(out)}
        assert len(vals) == 403
        assert min(vals) == pytest.approx(-2.2) and max(vals) == pytest.approx(2.2)
        atom = math.exp(-3) / 2
        assert vals[0.0] == 0.5
        assert vals[-2.0] == 0.0
        assert vals[2.0] == pytest.approx(1 - atom, abs=1e-6)
        above = min(x for x in vals if x > -2.0)
        assert vals[above] == pytest.approx(atom, abs=2e-3)
        assert float("%.6g" % atom) == pytest.approx(0.02489, abs=1e-5)

    def test_cdf_grid(self, capsys):
        code, out, _ = run(["cdf", "--r-min", "-1", "--r-max", "1", "--r-steps", "5"], capsys)
        assert code == 0
        data = rows(out)
        assert [d["x"] for d in data] == ["-1", "-0.5", "0", "0.5", "1"]
        assert data[2]["cdf"] == "0.5"

    def test_distance_cdf(self, capsys):
        code, out, _ = run(["distance-cdf", "--r-min", "1", "--r-max", "17", "--r-steps", "3"], capsys)
        assert code == 0
        data = rows(out)
        assert [d["branch"] for d in data] == ["G", "Q", "Q"]
        assert float(data[0]["phi"]) == pytest.approx(0.134812, abs=1e-6)

    def test_single_point_grid(self, capsys):
        code, out, _ = run(["distance-cdf", "--r-min", "3", "--r-steps", "1"], capsys)
        assert code == 0 and len(rows(out)) == 1

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "t.csv"
        assert main(["table1", "--output", str(path)]) == 0
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        _, out, _ = run(["table1"], capsys)
        assert raw.decode("utf-8") == out

    def test_simulate(self, capsys):
        code, out, _ = run(["simulate", "--n-paths", "1000", "--seed", "3"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "rho" and len(lines) == 1001
        _, again, _ = run(["simulate", "--n-paths", "1000", "--seed", "3"], capsys)
        assert again == out
        code, out, _ = run(["simulate", "--process", "single", "--n-paths", "10"], capsys)
        assert code == 0 and out.splitlines()[0] == "x"


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["table1", "--lambda1", "-2"],
            ["table1", "--terms", "0"],
            ["cdf", "--t", "0"],
            ["cdf", "--r-min", "1", "--r-max", "0"],
            ["distance-cdf", "--c2", "4.0000000000000001e0", "--c1", "4.00000000000001"],
        ],
    )
    def test_domain_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2
        assert "error" in err

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["table1", "--bogus"])
        assert info.value.code == 2

    def test_unwritable_output(self, tmp_path, capsys):
        code, _, _ = run(["table1", "--output", str(tmp_path / "missing" / "x.csv")], capsys)
        assert code == 2

    def test_numerical_failure(self, capsys):
        code, _, err = run(["cdf", "--lambda1", "25", "--t", "1"], capsys)
        assert code == 3
        assert "numerical failure" in err

    def test_validate_underpowered(self, capsys):
        code, out, _ = run(["validate", "--n-paths", "100"], capsys)
        assert code == 0
        assert "SKIPPED-UNDERPOWERED" in out
        assert "FAIL" not in out
        assert "PASS" in out

    def test_validate_impossible_tolerance(self, capsys):
        code, out, _ = run(["validate", "--n-paths", "100", "--tol", "1e-30"], capsys)
        assert code == 4
        assert "FAIL" in out


@pytest.mark.slow
def test_validate_default_run():
    proc = subprocess.run(
        [sys.executable, "-m", "telegraph_distance", "validate"], capture_output=True, text=True, timeout=600
    )
    assert proc.returncode == 0, proc.stdout
    assert "FAIL" not in proc.stdout
