import csv
import subprocess
import sys

import pytest

from grprec.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def rows(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_solve_writes_solution(tmp_path, capsys):
    out = tmp_path / "sol.csv"
    cfg = write(tmp_path, f'test = "quartic-sine"\nscheme = "grprec"\norder = 3\nmesh = 32\nt_end = 0.5\noutput = "{out}"\n')
    assert main(["solve", "--config", cfg]) == EXIT_OK
    data = rows(out)
    assert data[0] == ["x", "q0", "exact0"] and len(data) == 33
    assert "32" in capsys.readouterr().out


def test_run_table_is_accepted(tmp_path):
    cfg = write(tmp_path, '[run]\ntest = "euler-smooth"\nscheme = "dg"\norder = 2\nmesh = 16\nt_end = 0.05\n')
    assert main(["solve", "--config", cfg]) == EXIT_OK


def test_convergence_csv(tmp_path):
    out = tmp_path / "conv.csv"
    cfg = write(
        tmp_path,
        f'test = "quartic-sine"\nscheme = "grprecnl"\norder = 2\nmesh = [16, 32, 64]\nt_end = 0.5\noutput = "{out}"\n',
    )
    assert main(["convergence", "--config", cfg]) == EXIT_OK
    data = rows(out)
    assert len(data) == 4 and data[1][0] == "grprecnl"


def test_efficiency_csv(tmp_path):
    out = tmp_path / "eff.csv"
    cfg = write(
        tmp_path,
        f'test = "quartic-sine"\nschemes = ["grprec", "weno-dk"]\norders = [2]\nmesh = [16, 32]\n'
        f't_end = 0.25\nrepeats = 1\noutput = "{out}"\n',
    )
    assert main(["efficiency", "--config", cfg]) == EXIT_OK
    assert len(rows(out)) == 5
    assert len(rows(tmp_path / "eff_extrapolation.csv")) == 3


def test_riemann_profile(tmp_path):
    out = tmp_path / "sod.csv"
    rc = main(["riemann", "--test", "sod", "--schemes", "weno-dk", "--order", "2", "--output", str(out)])
    assert rc == EXIT_OK
    assert rows(out)[0] == ["x", "rho", "u", "p", "rho_exact", "u_exact", "p_exact"]


def test_numerical_failure_exit_code(capsys):
    assert main(["riemann", "--test", "123", "--schemes", "grprecnl", "--order", "5"]) == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text",
    [
        'scheme = "grprec"\norder = 2\nmesh = 16\n',  # no test
        'test = "nope"\nscheme = "grprec"\norder = 2\nmesh = 16\n',
        'test = "quartic-sine"\nscheme = "grprec"\norder = 9\nmesh = 16\n',
        'test = "quartic-sine"\nscheme = "grprec"\norder = 2\nmesh = [16]\n',
        'test = "quartic-sine"\nscheme = "grprec"\norder = 2\nmesh = 2\n',
        "this is = = not toml",
    ],
)
def test_config_errors(tmp_path, text):
    assert main(["solve", "--config", write(tmp_path, text)]) == EXIT_CONFIG


def test_convergence_rejects_single_mesh(tmp_path):
    cfg = write(tmp_path, 'test = "quartic-sine"\nscheme = "grprec"\norder = 2\nmesh = 16\n')
    assert main(["convergence", "--config", cfg]) == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "absent.toml")]) == EXIT_CONFIG


def test_unwritable_output(tmp_path):
    cfg = write(
        tmp_path,
        f'test = "quartic-sine"\nscheme = "grprec"\norder = 2\nmesh = 16\nt_end = 0.1\noutput = "{tmp_path}/no/such/dir.csv"\n',
    )
    assert main(["solve", "--config", cfg]) == EXIT_CONFIG


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grprec", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "riemann" in proc.stdout
