import json
import subprocess
import sys

import pytest

from iagame.cli import main
from iagame.ri import CensusReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def field(out, name):
    for line in out.splitlines():
        if line.startswith(name + "="):
            return line.split("=", 1)[1].split(" ")[0]
    raise AssertionError(f"{name} not in output:\n{out}")


POST = ("posterior", "-f", "v1|v2", "-n", "2", "--alpha", "1/4", "--payoffs", "1,-16")


def test_posterior_goldens(capsys):
    code, out, _ = run(capsys, *POST, "--obs", "v1:T,v1:T")
    assert code == 0
    assert (field(out, "p"), field(out, "action"), field(out, "value")) == ("19/20", "GuessT", "3/20")
    assert "0.950000" in out
    _, out, _ = run(capsys, *POST, "--obs", "v1:T,v2:T")
    assert (field(out, "p"), field(out, "action"), field(out, "value")) == ("15/16", "NoGuess", "0")
    _, out, _ = run(capsys, *POST, "--obs", "")
    assert field(out, "p") == "3/4"
    _, out, _ = run(capsys, *POST, "--obs", "v1:F*2")
    assert field(out, "p") == "11/20"


def test_posterior_from_table_bits(capsys):
    _, out, _ = run(capsys, "posterior", "--table", "0111", "--obs", "v1:F")
    assert field(out, "p") == "5/8"


@pytest.mark.parametrize(
    "argv",
    [
        ("posterior", "-f", "v1|(", "-n", "2"),
        ("posterior", "-f", "v1", "--alpha", "0.25"),
        ("posterior", "-f", "v1", "--alpha", "1/2"),
        ("posterior", "-f", "v1", "--obs", "v2:T"),
        ("posterior", "-f", "v1", "--obs", "v1=T"),
        ("posterior", "-f", "v1", "--payoffs", "1,2"),
        ("posterior", "--table", "011"),
        ("complexity", "-f", "v1", "-n", "2", "--q", "0"),
        ("complexity", "--all"),
        ("census", "-n", "2", "--c-grid", "0"),
        ("sample", "-n", "5", "--samples", "0"),
    ],
)
def test_validation_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["posterior"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_resource_cap_exit_2(capsys):
    code, _, err = run(capsys, "solve", "-f", "v1|v2", "-k", "9", "--state-cap", "10")
    assert code == 2 and "resource limit" in err


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "-f", "v1|v2", "-n", "2", "-k", "2")
    assert code == 0
    assert field(out, "optimal value") == "3/64"
    assert "first move=v1" in out and "{v1,v2}" in out
    assert "test v1" in out
    _, out, _ = run(capsys, "solve", "-f", "v1|v2", "-k", "2", "--heuristic", "random")
    assert field(out, "random-test value") == "3/128"
    _, out, _ = run(capsys, "solve", "-f", "v1|v2", "-k", "2", "--heuristic", "uniform")
    assert field(out, "uniform-split value") == "0"
    _, out, _ = run(capsys, "solve", "-f", "T", "-n", "2", "-k", "0")
    assert field(out, "optimal value") == "1"


def test_solve_monte_carlo_is_seeded(capsys):
    argv = ("solve", "-f", "v1|v2", "-k", "2", "--heuristic", "random", "--monte-carlo", "300", "--seed", "4")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_ri(capsys):
    _, out, _ = run(capsys, "ri", "-f", "v1|v2", "-n", "2")
    assert field(out, "verdict") == "ExhibitsRI"
    _, out, _ = run(capsys, "ri", "-f", "v1^v2", "-n", "2")
    assert field(out, "verdict") == "Unknown"
    _, out, _ = run(capsys, "ri", "-f", "(v1|v2)&(v2^v3^v4)", "-n", "4", "--explain")
    assert field(out, "verdict") == "ExhibitsRI"
    assert "C=1/8: m+=1/2" in out
    _, out, _ = run(capsys, "ri", "-f", "v1&v2", "--format", "json")
    data = json.loads(out)
    assert data["verdict"] == "ExhibitsRI" and data["witness_c"] == "1/4" and data["table"] == "0001"


def test_census_json_and_csv(capsys, tmp_path):
    path = tmp_path / "c3.json"
    code, _, err = run(capsys, "census", "-n", "3", "--jobs", "1", "-o", str(path))
    assert code == 0 and "ri=40" in err
    text = path.read_text()
    report = CensusReport.from_json(text)
    assert (report.ri, report.unknown) == (40, 216)
    assert report.to_json() == text
    code, out, _ = run(capsys, "census", "-n", "2", "--jobs", "1", "--format", "csv")
    assert out.splitlines()[1].startswith("2,exhaustive,16,8,8,")


def test_census_jobs_do_not_change_output(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"c{jobs}.json"
        run(capsys, "census", "-n", "3", "--jobs", jobs, "-o", str(path))
        outs.append(path.read_text())
    assert outs[0] == outs[1]


def test_sample(capsys):
    argv = ("sample", "-n", "4", "--samples", "20", "--seed", "9", "--jobs", "1")
    code, out, _ = run(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    assert data["mode"] == "sample" and data["seed"] == 9 and data["total"] == 20
    assert run(capsys, *argv)[1] == out


def test_complexity_values(capsys):
    for text, expected in (("T", "0"), ("v1", "3"), ("v1^v2", "7"), ("v1|v2", "2")):
        _, out, _ = run(capsys, "complexity", "-f", text, "-n", "2", "--q", "15/34")
        assert field(out, "cpl") == expected
    # the default q comes from the payoffs 1,-16
    _, out, _ = run(capsys, "complexity", "-f", "v1", "-n", "2", "--curve")
    assert field(out, "q") == "15/34"
    assert "k=3: certainty=13/28" in out


def test_complexity_all(capsys, tmp_path):
    code, out, err = run(capsys, "complexity", "--all", "-n", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["maximal"] and data["xor_cpl"] == "7"
    path = tmp_path / "all.csv"
    run(capsys, "complexity", "--all", "-n", "2", "--keep-tables", "--format", "csv", "-o", str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "table_bits,cpl" and "0110,7" in lines and "1001,7" in lines and len(lines) == 1 + 16


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "iagame.cli", "posterior", "-f", "v1|v2", "--obs", "v1:T*2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "p=19/20" in proc.stdout
