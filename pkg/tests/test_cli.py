import csv
import io
import json
import math
import subprocess
import sys

import pytest

from abelfrac.abel import AbelProblem, solve_approx, solve_exact
from abelfrac.cli import UsageError, main, parse_int_list, parse_real, parse_real_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


# ---------------------------------------------------------------------------
# numeric flag parsing


def test_parse_real_fractions():
    assert parse_real("4/5") == 0.8
    assert parse_real("1/3") == 1 / 3
    assert parse_real(" 0.25 ") == 0.25
    assert parse_real("1e-3") == 0.001
    for bad in ("abc", "1/0", "", "1//2"):
        with pytest.raises(UsageError):
            parse_real(bad)


def test_parse_lists():
    assert parse_real_list("0.1, 1/2,0.3") == [0.1, 0.5, 0.3]
    assert parse_int_list("1,10,100") == [1, 10, 100]
    for bad in ("1,x", "0", "-4", "2.5"):
        with pytest.raises(UsageError):
            parse_int_list(bad)


# ---------------------------------------------------------------------------
# solve


def test_solve_example1(capsys):
    doc = run_json(capsys, "solve", "--f", "exp(x)-1", "--alpha", "1/2", "--x", "0.1", "--k", "100")
    (row,) = doc["rows"]
    p = AbelProblem("exp(x)-1", 0.5, 0.1)
    assert row["gtilde"] == solve_approx(p, 0.1, 100)
    assert row["exact"] == pytest.approx(0.2152905021, abs=5e-10)
    assert row["abs_error"] == abs(row["gtilde"] - row["exact"])
    assert doc["command"] == "solve"
    assert doc["config"]["alpha"] == "1/2" and doc["config"]["alpha_value"] == 0.5


def test_solve_zero(capsys):
    doc = run_json(capsys, "solve", "--f", "0", "--alpha", "1/2", "--x", "0.5", "--k", "10")
    (row,) = doc["rows"]
    assert row["gtilde"] == 0.0 and row["exact"] == 0.0 and row["abs_error"] == 0.0


def test_solve_example2_pretty(capsys):
    code, out, _ = run(capsys, "solve", "--f", "x", "--alpha", "4/5", "--x", "0.5", "--k", "1")
    assert code == 0
    assert "0.1343243751" in out or "0.1343243752" in out
    header = out.splitlines()[0].split()
    assert header == ["x", "k", "gtilde", "exact", "abs_error"]


def test_solve_digits(capsys):
    _, out, _ = run(capsys, "solve", "--preset", "example1", "--k", "10", "--digits", "4")
    assert "0.2153" in out
    assert "0.21529" not in out


# ---------------------------------------------------------------------------
# table


def table_cells(doc):
    return {(r["x"], r["k"]): r for r in doc["rows"]}


def test_table_example1_layout(capsys):
    code, out, _ = run(capsys, "table", "--preset", "example1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["x", "k=1", "k=10", "k=100", "exact", "abs_error(k=100)"]
    assert len(lines) == 2 + 3
    row = lines[-1].split()
    assert row[0] == "0.3"
    assert row[1] == "0.4300194238"
    # exact g(0.3) = 0.42756565756...; the published column reads ...575, within one unit in the last digit
    assert float(row[4]) == pytest.approx(0.4275656575, abs=1.5e-10)


def test_table_example1_matches_library(capsys):
    cells = table_cells(run_json(capsys, "table", "--preset", "example1"))
    assert len(cells) == 9
    p = AbelProblem("exp(x)-1", 0.5, 0.3)
    for (x, k), r in cells.items():
        assert r["gtilde"] == solve_approx(p, x, k)
        assert r["exact"] == solve_exact(p, x)


def test_table_example2_cells(capsys):
    cells = table_cells(run_json(capsys, "table", "--preset", "example2"))
    r = cells[(0.6, 10)]
    assert r["gtilde"] == pytest.approx(0.1554174668, abs=5e-10)
    assert r["abs_error"] <= 1e-10


def test_table_example3_exact_column(capsys):
    cells = table_cells(run_json(capsys, "table", "--preset", "example3"))
    assert cells[(0.8, 1000)]["exact"] == pytest.approx(0.8066905286, abs=5e-10)


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--preset", "example2", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "k=1", "k=10", "exact", "abs_error(k=10)"]
    assert len(rows) == 4
    for row in rows[1:]:
        assert all(math.isfinite(float(v)) for v in row)


# ---------------------------------------------------------------------------
# converge


def test_converge_example1(capsys):
    doc = run_json(capsys, "converge", "--preset", "example1", "--x", "0.2", "--k", "10,100")
    (order,) = doc["order"]
    assert order["order"] == pytest.approx(2.0, abs=0.3)
    assert not order["at_floor"]
    assert [r["k"] for r in doc["rows"]] == [10, 100]


def test_converge_example3(capsys):
    doc = run_json(capsys, "converge", "--preset", "example3", "--x", "0.6")
    assert doc["order"][0]["order"] == pytest.approx(1.17, abs=0.15)


def test_converge_flags_floor(capsys):
    code, out, _ = run(capsys, "converge", "--f", "x", "--alpha", "1/2", "--x", "0.5", "--k", "10,20,40")
    assert code == 0
    assert "floor" in out
    doc = run_json(capsys, "converge", "--f", "x", "--alpha", "1/2", "--x", "0.5", "--k", "10,20,40")
    assert doc["order"][0]["at_floor"]


# ---------------------------------------------------------------------------
# residual


def test_residual_closed_form(capsys):
    g = "1.25*sin(3.141592653589793/5)/3.141592653589793*x^0.8"
    doc = run_json(capsys, "residual", "--preset", "example2", "--g", g)
    assert all(abs(r["residual"]) <= 1e-8 for r in doc["rows"])


def test_residual_zero_guess(capsys):
    doc = run_json(capsys, "residual", "--preset", "example2", "--g", "0")
    for r in doc["rows"]:
        assert r["residual"] == pytest.approx(-r["x"], abs=1e-15)


def test_residual_samples(capsys):
    doc = run_json(capsys, "residual", "--preset", "example1", "--x", "0.2", "--k", "100")
    assert abs(doc["rows"][0]["residual"]) <= 5e-4


# ---------------------------------------------------------------------------
# exit codes


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--f", "exp(x)", "--alpha", "1/2", "--x", "0.1", "--k", "10"],  # f(0) != 0
        ["solve", "--f", "2*", "--alpha", "1/2", "--x", "0.1", "--k", "10"],
        ["solve", "--f", "tan(x)", "--alpha", "1/2", "--x", "0.1", "--k", "10"],
        ["solve", "--f", "x", "--alpha", "3/2", "--x", "0.1", "--k", "10"],
        ["solve", "--f", "x", "--alpha", "half", "--x", "0.1", "--k", "10"],
        ["solve", "--f", "x", "--alpha", "1/2", "--x", "0.1", "--k", "10,20"],
        ["solve", "--f", "x", "--alpha", "1/2", "--x", "-0.1", "--k", "10"],
        ["solve", "--f", "x", "--alpha", "1/2", "--x", "0.1", "--k", "0"],
        ["solve", "--f", "x", "--alpha", "1/2", "--k", "10"],
        ["solve", "--preset", "example1", "--k", "10", "--digits", "18"],
        ["converge", "--preset", "example1", "--k", "100,10"],
        ["converge", "--preset", "example1", "--k", "10"],
        ["residual", "--preset", "example1", "--k", "10", "--g", "x+"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--format", "xml"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_numeric_failure_exit_3(capsys):
    # f(0) = 0 is valid, but the solver evaluates f'(x) = 1/(2 sqrt(x)) at x = 0
    code, out, err = run(capsys, "solve", "--f", "sqrt(x)", "--alpha", "1/2", "--x", "0.5", "--k", "4")
    assert code == 3
    assert out == ""
    assert "numerical failure" in err


def test_non_convergence_exit_3(capsys):
    code, _, err = run(capsys, "solve", "--f", "sin(1/(x+1e-4))-sin(1e4)", "--alpha", "1/2", "--x", "1",
                       "--k", "10", "--tol", "1e-15")
    assert code == 3
    assert "numerical failure" in err


# ---------------------------------------------------------------------------
# invariants


def test_json_round_trip_is_bit_exact(capsys):
    doc = run_json(capsys, "table", "--preset", "example3", "--digits", "3")
    p = AbelProblem("x^(7/6)", 1 / 3, 0.8)
    for r in doc["rows"]:
        assert r["gtilde"] == solve_approx(p, r["x"], r["k"])
        assert r["gtilde"].hex() == solve_approx(p, r["x"], r["k"]).hex()


def test_csv_round_trip_is_bit_exact(capsys):
    _, out, _ = run(capsys, "solve", "--preset", "example1", "--k", "10", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    p = AbelProblem("exp(x)-1", 0.5, 0.3)
    for r in rows:
        assert float(r["gtilde"]) == solve_approx(p, float(r["x"]), 10)


@pytest.mark.parametrize("fmt", ["pretty", "csv", "json"])
def test_deterministic(capsys, fmt):
    argv = ["converge", "--preset", "example1", "--k", "10,20,40", "--format", fmt]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_console_script_and_module_entry():
    out = subprocess.run(
        [sys.executable, "-m", "abelfrac", "solve", "--preset", "example2", "--k", "1", "--format", "csv"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert out.startswith("x,k,gtilde,exact,abs_error\n")
    bad = subprocess.run([sys.executable, "-m", "abelfrac", "solve", "--f", "(", "--alpha", "1/2", "--x", "1",
                          "--k", "1"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert bad.stdout == ""


def test_help_documents_grammar():
    out = subprocess.run([sys.executable, "-m", "abelfrac", "--help"], capture_output=True, text=True).stdout
    assert "expression grammar" in out
    assert "erf" in out
