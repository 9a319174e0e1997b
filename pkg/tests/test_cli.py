import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from stc.cli import main, to_csv, Table
from stc.config import parse_config
from stc.effective import j_of_phi
from stc.errors import ConfigError


def write(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


PAPER_HUBBARD = {"eps": [-20, -20, -20, -20], "u": "inf", "gamma_ca": 2.0}


def test_couplings_infinite_u_column(tmp_path, capsys):
    cfg = write(tmp_path, {"hubbard": PAPER_HUBBARD})
    code, out, _ = run(capsys, "couplings", "--config", cfg)
    assert code == 0
    rows = {r["variant"]: r for r in csv.DictReader(io.StringIO(out))}
    assert float(rows["infinite_u"]["jsc_ueV"]) == pytest.approx(0.4, rel=1e-12)
    assert set(rows) == {"main", "sm", "infinite_u"}


def test_couplings_junction_off(tmp_path, capsys):
    cfg = write(tmp_path, {"hubbard": {**PAPER_HUBBARD, "single_sc": False, "phi_u": np.pi}})
    code, out, _ = run(capsys, "couplings", "--config", cfg, "--format", "json")
    assert code == 0
    assert all(abs(r["jsc_ueV"]) < 1e-30 for r in json.loads(out))


def test_resonance_exits_two(tmp_path, capsys):
    cfg = write(tmp_path, {"hubbard": {"eps": [-10, -40, -20, -20], "u": 30, "t1": 1.0}})
    code, _, err = run(capsys, "couplings", "--config", cfg)
    assert code == 2 and "U^2 - eps~_1^2" in err


def test_config_errors_exit_one(tmp_path, capsys):
    bad = [
        {"spin": {"hbar": 20, "bogus": 1}},
        {"extra": 1},
        {"spin": {"hbar": "twenty"}},
        {"sweep": [{"name": "theta", "start": 0, "stop": 1, "count": 0}]},
        {"sweep": [{"name": "theta", "start": 0, "stop": 1}]},
        {"workers": 0},
        {"output": {"format": "xml"}},
    ]
    for i, doc in enumerate(bad):
        code, _, err = run(capsys, "jphi", "--config", write(tmp_path, doc, f"b{i}.json"))
        assert code == 1, doc
        assert err.startswith("config error")
    dup = tmp_path / "dup.json"
    dup.write_text('{"spin": {"hbar": 1, "hbar": 2}}')
    assert run(capsys, "jphi", "--config", str(dup))[0] == 1
    assert run(capsys, "jphi", "--config", str(tmp_path / "missing.json"))[0] == 1


def test_axis_must_name_parameter(tmp_path, capsys):
    cfg = write(tmp_path, {"sweep": [{"name": "colour", "start": 0, "stop": 1, "count": 2}]})
    assert run(capsys, "fidelity", "--config", cfg)[0] == 1
    assert run(capsys, "spectrum", "--config", cfg)[0] == 1


def test_parse_config_types():
    cfg = parse_config({"hubbard": {"u": "inf", "h": [[0, 0, 1]] * 4,
                                    "rot1": {"axis": [0, 0, 2], "angle": 1.0}}, "workers": 2})
    assert cfg.hubbard.infinite_u and cfg.hubbard.rot1.axis == (0.0, 0.0, 1.0) and cfg.workers == 2
    with pytest.raises(ConfigError):
        parse_config({"hubbard": {"rot1": {"axis": [0, 0, 0], "angle": 1.0}}})
    with pytest.raises(ConfigError):
        parse_config({"sweep": [{"name": "t", "start": 0, "stop": 1, "count": 2}] * 2})


def test_csv_format_and_round_trip(tmp_path, capsys):
    cfg = write(tmp_path, {"spin": {"jsc": 0.4}, "sweep": [{"name": "phase", "start": 0, "stop": 3.14159, "count": 7}]})
    code, out, _ = run(capsys, "jphi", "--config", cfg)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "phi,j_eff_ueV" and out.endswith("\n") and len(lines) == 9
    phis = np.linspace(0, 3.14159, 7)
    for line, phi in zip(lines[1:], phis):
        a, b = line.split(",")
        assert float(a) == phi
        assert float(b) == j_of_phi(0.4, phi)
        assert float(b) == pytest.approx(4 * 0.4 * np.cos(phi / 2) ** 2, rel=1e-14)


def test_to_csv_cells():
    text = to_csv(Table(["a", "b", "c"], [[0.1, None, True]]))
    assert text == "a,b,c\n0.10000000000000001,,true\n"


def test_byte_identical_reruns(tmp_path, capsys):
    doc = {"spin": {"jsc": 0.4, "hbar": 20, "dh": 2, "dh1": 1, "dh2": 1},
           "sweep": [{"name": "phi_so", "start": 1.4, "stop": 1.7, "count": 3}]}
    cfg = write(tmp_path, doc)
    first = run(capsys, "fidelity", "--config", cfg)[1]
    again = run(capsys, "fidelity", "--config", cfg, "--workers", "2")[1]
    assert first == again
    assert first.splitlines()[0] == "phi_so,t_gate_ns,infidelity_raw,infidelity_opt,leakage_max,error"


def test_out_file_and_json(tmp_path, capsys):
    doc = {"sweep": [{"name": "phi", "start": 0, "stop": 3.14159, "count": 3},
                     {"name": "theta", "start": 0, "stop": 1.5, "count": 2}],
           "output": {"format": "json"}}
    out = tmp_path / "g.json"
    code, stdout, _ = run(capsys, "gammas", "--config", write(tmp_path, doc), "--out", str(out))
    assert code == 0 and stdout == ""
    rows = json.loads(out.read_text())
    assert len(rows) == 6 and rows[0]["gamma_par"] == -1.0


def test_spectrum_and_leakage_commands(tmp_path, capsys):
    doc = {"spin": {"jsc": 0.4}, "sweep": [{"name": "hbar", "start": 10, "stop": 20, "count": 2}]}
    code, out, _ = run(capsys, "spectrum", "--config", write(tmp_path, doc))
    assert code == 0 and out.splitlines()[0].endswith("e15_ueV") and len(out.splitlines()) == 3
    doc = {"spin": {"jsc": 0.4}, "sweep": [{"name": "t", "start": 0, "stop": 5, "count": 6}],
           "leakage": {"mode": "single", "state": 2}}
    code, out, _ = run(capsys, "leakage", "--config", write(tmp_path, doc, "l.json"))
    assert code == 0 and len(out.splitlines()) == 7
    assert float(out.splitlines()[1].split(",")[1]) == 0.0


def test_sw_verify_zero_tunneling(tmp_path, capsys):
    doc = {"hubbard": {"eps": [-20, -20, -20, -20], "u": 200, "h": [0.2, 0.19, 0.18, 0.17]}}
    code, out, _ = run(capsys, "sw-verify", "--config", write(tmp_path, doc), "--levels", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    exact = [float(r["value"]) for r in rows if r["quantity"] == "exact_mismatch_absolute"]
    assert len(exact) == 2 and max(exact) < 1e-12
    assert rows[-1]["quantity"] == "arbitration_winner"


def test_version_prints_hbar():
    res = subprocess.run([sys.executable, "-m", "stc.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("stc 0.1.0") and "0.6582119569" in res.stdout


@pytest.mark.parametrize("argv", [[], ["jphi"], ["nosuch", "--config", "x"], ["jphi", "--config", "x", "--format", "xml"]])
def test_usage_errors_exit_one(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1
