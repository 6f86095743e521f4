import json
import subprocess
import sys

import pytest

from treesearch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def cli(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "treesearch", *argv], capture_output=True, env=env)


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "--n", "3", "--level", "2")
    d = json.loads(out)
    assert code == 0
    assert (d["totalD"], d["totalB"], d["totalDTrunc"], d["levelCount"]) == ("12", "13", "12", "5")
    assert d["expectedBfs"] == "13/5"


def test_exact_bad_level(capsys):
    code, _, err = run(capsys, "exact", "--n", "3", "--level", "4")
    assert code == 2 and "level" in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["exact", "--n", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--threads", "0", "exact", "--n", "3", "--level", "1"])
    assert exc.value.code == 2


def test_oracle_and_series_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--max-n", "7")
    assert code == 0
    code, out, _ = run(capsys, "series-check", "--order", "16", "--max-l", "4")
    assert code == 0
    code, out, _ = run(capsys, "series-check", "--dump", "catalan", "--order", "5")
    assert out.splitlines() == ["k,numerator,denominator", "0,1,1", "1,1,1", "2,2,1", "3,5,1", "4,14,1", "5,42,1"]


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--lambda", "--tol", "1e-14")
    d = json.loads(out)
    assert code == 0 and d["lambda"] == "0.789004"
    assert abs(float(d["residual"])) < 1e-12
    code, out, _ = run(capsys, "threshold", "--n", "1000")
    d = json.loads(out)
    assert d["lstar"] == "24" and d["unique"] is True
    code, _, _ = run(capsys, "threshold", "--lambda", "--tol", "1e-20")
    assert code == 2
    code, _, _ = run(capsys, "threshold")
    assert code == 2


def test_asymptotics(capsys):
    code, out, _ = run(capsys, "asymptotics", "--n", "2000")
    d = json.loads(out)
    assert code == 0 and d["exp_bound"]["holds"] is True
    assert float(d["error_times_sqrt_n"]) <= 10


def test_conjecture_exit_codes(capsys):
    code, out, _ = run(capsys, "conjecture", "--l", "2")
    assert code == 0 and json.loads(out)["reading"] == "rising"
    code, out, _ = run(capsys, "conjecture", "--l", "1")
    assert code == 0 and json.loads(out)["degenerate"] is True
    # the tabulated even polynomial for l = 3 disagrees with the exact values
    code, out, _ = run(capsys, "conjecture", "--l", "3")
    d = json.loads(out)
    assert code == 1 and d["reading"] is None
    assert d["fitted_rising"]["even"] == ["3", "16", "1133", "1792", "36312"]
    code, _, _ = run(capsys, "conjecture", "--l", "9")
    assert code == 2


def test_plot_data(capsys):
    code, out, _ = run(capsys, "plot-data", "--n", "100", "--s-grid", "0:1:0.5")
    rows = out.splitlines()
    assert code == 0
    assert rows[0] == "s,totalB_scaled_exact,totalb_asymptotic,k_const"
    assert len(rows) == 4
    assert rows[1].startswith("0.0,0.0,")


def test_gw_sim_usage(capsys):
    code, _, err = run(capsys, "gw-sim", "--n", "9", "--law", "mary:2", "--level", "1")
    assert code == 2
    code, _, _ = run(capsys, "gw-sim", "--n", "9")
    assert code == 2
    code, _, _ = run(capsys, "gw-sim", "--n", "9", "--level", "1", "--law", "cauchy")
    assert code == 2


def test_gw_sim_occupation(capsys):
    code, out, _ = run(capsys, "gw-sim", "--n", "10", "--level", "2", "--stat", "occupation", "--samples", "500")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[1].split(",")[3] == "v" and lines[2].split(",")[3] == "h"


def test_gw_sim_thread_invariance():
    base = ["gw-sim", "--law", "poisson", "--n", "60", "--level", "5", "--samples", "40000", "--seed", "3"]
    outs = set()
    for t in ("1", "4", "16"):
        r = cli("--threads", t, *base)
        assert r.returncode == 0, r.stderr
        outs.add(r.stdout)
        r = cli(*base, "--threads", t)
        outs.add(r.stdout)
    assert len(outs) == 1
