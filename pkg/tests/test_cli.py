import math
import re

import pytest

from iqsim.cli import main
from iqsim.config import ConfigError, Field, as_float, as_int, parse_config
from iqsim.csvio import read_csv, write_csv

TWO_QUBIT_CFG = """
[system]
omega1 = 1.2
omega2 = 0.8
J = 0.5

[bath]
N = 6
s = 0.5
f = 1.0
T = 0.3

[paths]
M = 10
shifts = 0,1,5
mixture = true

[run]
t_max = 2.0
steps = 5
"""

TELEPORT_CFG = """
[system]
omega1 = 2.0
omega2 = 1.5

[bath]
N = 6
s = 0.8
f = 1.2

[paths]
T0 = 0.1
T1 = 0.8

[run]
t_max = 2.0
steps = 4
"""

QFI_CFG = """
[system]
omega1 = 2.0

[bath]
N = 6
s = 0.8
f = 1.2
T = 0.3

[paths]
M = 10
shifts = 0,1

[run]
t_max = 2.0
steps = 4
"""

WPEI_CFG = """
[system]
omega1 = 2.0

[bath]
N = 6
s = 0.8
f = 1.2

[paths]
T0 = 0.1
T1 = 0.8

[wpei]
alpha = 1.0
theta = 1.0

[run]
t_max = 2.0
steps = 4
"""

DECOHERENCE_CFG = """
[system]
omega1 = 2.0
omega2 = 1.5

[bath]
N = 5
s = 0.8
f = 1.2

[paths]
M = 3
gamma = 0.1
d = 0.5
T0 = 0.1
T1 = 0.3
T2 = 0.5
patterns = 000,010

[decoherence]
Gamma = 0.5

[run]
t_max = 2.0
steps = 3
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# ------------------------------------------------------------- config parser

def test_parse_config_reports_line_numbers():
    schema = {"a": {"x": Field(as_float, required=True)}}
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("\n[a]\ny = 1\n", schema)
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("[b]\n", schema)
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("[a]\nx = banana\n", schema)
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("[a]\n", schema)
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[a]\nx = 1\nx = 2\n", schema)


def test_parse_config_values_and_defaults():
    schema = {"a": {"x": Field(as_float, required=True),
                    "n": Field(as_int, default=7)}}
    cfg = parse_config("[a]\nx = 2.5   # comment\n", schema)
    assert cfg["a"]["x"] == 2.5
    assert cfg["a"]["n"] == 7


# ------------------------------------------------------------------ csv io

def test_csv_round_trip(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, ("t", "v"), [(0.0, 1.0), (0.5, float("nan"))],
              {"alpha": 1.0})
    params, columns, rows = read_csv(path)
    assert params["alpha"] == "1"
    assert columns == ["t", "v"]
    assert rows[1] == ("0.5", "nan")


def test_csv_rejects_missing_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,v\n0,1\n")
    with pytest.raises(ValueError, match="iqsim-csv"):
        read_csv(path)


# ----------------------------------------------------------------- runners

def test_two_qubit_run_and_determinism(tmp_path):
    cfg = _write(tmp_path, "run.cfg", TWO_QUBIT_CFG)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["two-qubit", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["two-qubit", "--config", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    params, columns, rows = read_csv(out1)
    assert columns == ["t", "n", "coherence", "concurrence", "discord",
                       "flag"]
    assert params["subcommand"] == "two-qubit"
    series = {r[1] for r in rows}
    assert series == {"mix", "0", "1", "5"}
    # n = M/2 = 5 is erased at t = 0 and flagged, not fatal
    first_erased = next(r for r in rows if r[1] == "5")
    assert first_erased[-1] == "erased"
    assert first_erased[2] == "nan"
    assert all(r[-1] in ("ok", "erased") for r in rows)


def test_two_qubit_rejects_unknown_key(tmp_path):
    bad = TWO_QUBIT_CFG.replace("mixture = true", "gama = 0.1")
    cfg = _write(tmp_path, "bad.cfg", bad)
    out = tmp_path / "x.csv"
    assert main(["two-qubit", "--config", cfg, "--out", str(out)]) == 1
    assert not out.exists()


def test_missing_config_is_config_error(tmp_path):
    assert main(["two-qubit", "--config", str(tmp_path / "none.cfg"),
                 "--out", str(tmp_path / "x.csv")]) == 1


def test_teleport_run(tmp_path):
    cfg = _write(tmp_path, "t.cfg", TELEPORT_CFG)
    out = tmp_path / "t.csv"
    assert main(["teleport", "--config", cfg, "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns == ["t", "protocol", "fidelity", "flag"]
    protocols = {r[1] for r in rows}
    assert protocols == {"standard-definite", "standard-indefinite",
                         "participatory"}
    t0 = [r for r in rows if float(r[0]) == 0.0]
    for r in t0:
        assert float(r[2]) == pytest.approx(1.0, abs=1e-9)


def test_qfi_run_with_overrides(tmp_path):
    cfg = _write(tmp_path, "q.cfg", QFI_CFG)
    out = tmp_path / "q.csv"
    assert main(["qfi", "--config", cfg, "--out", str(out),
                 "--paths", "8", "--pi-shifts", "1"]) == 0
    params, columns, rows = read_csv(out)
    assert params["paths.M"] == "8"
    assert {r[1] for r in rows} == {"definite", "1"}
    t0 = [r for r in rows if float(r[0]) == 0.0]
    for r in t0:
        assert float(r[2]) == pytest.approx(1.0, abs=1e-9)


def test_wpei_run(tmp_path):
    cfg = _write(tmp_path, "w.cfg", WPEI_CFG)
    out = tmp_path / "w.csv"
    assert main(["wpei", "--config", cfg, "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns == ["t", "concurrence", "P1", "P2", "V1", "V2", "eta",
                       "indefiniteness", "flag"]
    p1 = {r[2] for r in rows}
    assert len(p1) == 1          # predictability is constant in time
    assert float(next(iter(p1))) == pytest.approx(math.cos(1.0), abs=1e-12)


def test_decoherence_run(tmp_path):
    cfg = _write(tmp_path, "d.cfg", DECOHERENCE_CFG)
    out = tmp_path / "d.csv"
    assert main(["decoherence", "--config", cfg, "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert {r[1] for r in rows} == {"mix", "000", "010"}
    assert all(r[-1] == "ok" for r in rows)


def test_decoherence_requires_three_paths(tmp_path):
    bad = DECOHERENCE_CFG.replace("M = 3", "M = 4").replace(
        "patterns = 000,010", "patterns = 0000,0100")
    bad = bad.replace("T2 = 0.5", "T2 = 0.5\nT3 = 0.6")
    cfg = _write(tmp_path, "d4.cfg", bad)
    assert main(["decoherence", "--config", cfg,
                 "--out", str(tmp_path / "no.csv")]) == 1


def test_wpei_flag_overrides(tmp_path):
    cfg = _write(tmp_path, "w.cfg", WPEI_CFG)
    out = tmp_path / "w2.csv"
    assert main(["wpei", "--config", cfg, "--out", str(out),
                 "--alpha", str(math.pi), "--theta", str(math.pi)]) == 0
    _, _, rows = read_csv(out)
    for r in rows:
        assert float(r[7]) == pytest.approx(0.0, abs=1e-12)  # definite env


def test_verify_quick_passes(capsys):
    assert main(["verify", "--level", "quick"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert re.search(r"\d+/\d+ checks passed", out)
