import csv
import io
import math
import subprocess
import sys

import pytest

from gpiq.cli import main, parse_config, run
from gpiq.exact import PiMonomial
from gpiq.realprob import prob_all_real


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        config = parse_config(list(argv))
    except Exception as exc:  # usage errors surface through main in real use
        return 1, "", str(exc)
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_g():
    code, out, _ = invoke("eval-g", "--j", "1", "--k", "1")
    assert code == 0
    assert out == "1/4 * pi^2 = 2.46740e+00\n"


def test_prob_n6():
    code, out, _ = invoke("prob", "--n", "6")
    assert code == 0
    header, row = out.splitlines()
    assert header == "N,exact,float,ratio"
    assert row == "6,64011585/2^36 * pi^3,2.88821e-02,1.00229"


def test_table_round_trips():
    code, out, _ = invoke("table", "--nmax", "11")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["N"]) for r in rows] == list(range(1, 12))
    for r in rows:
        assert PiMonomial.parse(r["exact"]) == prob_all_real(int(r["N"])).value


def test_mc_output():
    code, out, _ = invoke("mc", "--n", "3", "--trials", "1000", "--seed", "5")
    assert code == 0
    assert out.splitlines()[1].startswith("3,1000,")
    assert out.splitlines()[1].endswith(",0,5")


def test_mc_deterministic_across_workers():
    outs = {invoke("mc", "--n", "4", "--trials", "5000", "--seed", "9", "--workers", w)[1] for w in ("1", "3")}
    assert len(outs) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("prob", "--n", "0"),
        ("eval-g", "--j", "0", "--k", "1"),
        ("eval-g", "--j", "1"),
        ("table", "--nmax", "-3"),
        ("mc", "--n", "2", "--trials", "0"),
        ("check-identities", "--tol", "0"),
        ("prob", "--n", "2", "--format", "svg"),
        ("bogus",),
    ],
)
def test_domain_and_usage_errors_exit_1(argv, capsys):
    assert main(list(argv)) == 1
    assert capsys.readouterr().err


def test_numeric_failure_exits_2():
    code, out, err = invoke("check-identities", "--j", "2", "--k", "2", "--tol", "1e-30")
    assert code == 2
    assert "FAIL 3F2-identity" in out
    assert "numeric failure" in err


def test_check_identities_passes():
    code, out, _ = invoke("check-identities", "--j", "3", "--k", "3")
    assert code == 0
    assert out.count("PASS") == 5


def test_plot_csv_has_one_row_per_n():
    code, out, _ = invoke("plot", "--nmax", "100")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "log10_p_exact", "log10_p_asymptotic"]
    assert len(rows) == 101
    last = rows[-1]
    assert float(last[1]) == pytest.approx(prob_all_real(100).log10, abs=5e-7)
    assert float(last[2]) == pytest.approx(5000 * math.log(math.pi / 4) / math.log(10), abs=5e-7)


def test_plot_svg_is_deterministic_and_self_contained():
    first = invoke("plot", "--nmax", "20", "--format", "svg")[1]
    second = invoke("plot", "--nmax", "20", "--format", "svg")[1]
    assert first == second
    assert first.lstrip().startswith("<?xml") and "</svg>" in first
    assert 'href="http' not in first and "<image" not in first


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = invoke("table", "--nmax", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[0] == "N,exact,float,ratio"


def test_unwritable_out_is_exit_1(tmp_path):
    code, _, err = invoke("prob", "--n", "2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and err


def test_entry_point_bytes_are_reproducible(tmp_path):
    cmd = [sys.executable, "-m", "gpiq", "table", "--nmax", "12"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"N,exact,float,ratio\n")
