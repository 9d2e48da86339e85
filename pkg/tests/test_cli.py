import csv
import json

import pytest

from gtquant import cli
from gtquant.verify import SuiteConfig


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write_cfg(tmp_path, data):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_verify_single_suite(tmp_path, capsys):
    out_json = tmp_path / "r.json"
    code, out, _ = run(["verify", "--suite", "group_axioms", "--trials", "50", "--json", str(out_json)], capsys)
    assert code == 0
    data = json.loads(out_json.read_text())
    assert [d["suite"] for d in data] == ["group_axioms"]
    assert data[0]["trials"] == 50
    assert "group_axioms" in out and "PASS" in out


def test_verify_json_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--seed", "42", "--trials", "30", "--suite", "bch", "--suite", "weyl_r2"]
    assert run(args + ["--json", str(a)], capsys)[0] == 0
    assert run(args + ["--json", str(b), "--workers", "2"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_failure_exit_code(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"trials": 10, "tolerances": {"group_axioms.associativity": 1e-40}})
    code, out, _ = run(["verify", "--config", cfg, "--suite", "group_axioms"], capsys)
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize(
    "data",
    [
        {"bogus": 1},
        {"grid": {"n_phi": 256, "extra": 1}},
        {"rep": {"hbar": -1}},
        {"rep": {"shift_mode": "sideways"}},
        {"heis": {"mu": 0}},
        {"grid": {"n_phi": 100}},
        {"trials": 0},
        {"trials": 2.5},
        {"seed": "x"},
        {"tolerances": {"bch": 0}},
        {"tolerances": {"unknown_suite": 1}},
        [1, 2],
    ],
)
def test_bad_config_exit_2(tmp_path, capsys, data):
    code, _, err = run(["verify", "--config", write_cfg(tmp_path, data)], capsys)
    assert code == 2 and err.startswith("error:")


def test_unreadable_or_invalid_config(tmp_path, capsys):
    assert run(["verify", "--config", str(tmp_path / "missing.json")], capsys)[0] == 2
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run(["verify", "--config", str(p)], capsys)[0] == 2
    assert run(["verify", "--suite", "nope"], capsys)[0] == 2
    assert run(["verify", "--trials", "0"], capsys)[0] == 2


def test_grid_too_coarse_for_test_states(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"trials": 10, "grid": {"n_s": 64}})
    code, _, err = run(["verify", "--config", cfg, "--suite", "commutators"], capsys)
    assert code == 2 and "cannot be run" in err


def test_flags_override_file(tmp_path):
    cfg = write_cfg(tmp_path, {"seed": 1, "trials": 7, "rep": {"alpha": 0.25, "shift_mode": "spectral"}})
    args = cli.build_parser().parse_args(["verify", "--config", cfg, "--seed", "9"])
    resolved = cli.resolve_verify_config(args).suite
    assert resolved.seed == 9 and resolved.trials == 7
    assert resolved.rep.alpha == 0.25
    assert resolved.heis.shift_mode.value == "spectral"
    args = cli.build_parser().parse_args(["verify", "--config", cfg])
    assert cli.resolve_verify_config(args).suite.seed == 1


def test_full_config_parses():
    cfg = cli.suite_config_from_dict(
        {
            "seed": 3,
            "trials": 100,
            "tolerances": {"bch": 0.2, "commutators.abelian": 1e-11},
            "grid": {"n_phi": 128, "n_s": 256, "s_min": -3, "s_max": 3},
            "rep": {"hbar": 0.5, "alpha": 0.1, "shift_mode": "exact_aligned"},
            "heis": {"mu": 2.0, "n": 128, "box_half_width": 6.0},
        }
    )
    assert isinstance(cfg, SuiteConfig)
    assert cfg.grid.n_phi == 128 and cfg.grid.s_min == -3.0
    assert cfg.heis.box.n == 128 and cfg.heis.mu == 2.0
    assert cfg.tol("bch.slope_deficit") == 0.2


def read_spectrum(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "eigenvalue"]
    return [(int(n), float(v)) for n, v in rows[1:]], rows


def test_spectrum_integer_column(tmp_path, capsys):
    path = tmp_path / "s.csv"
    assert run(["spectrum", "--operator", "pi1", "--alpha", "0", "--nphi", "16", "--csv", str(path)], capsys)[0] == 0
    vals, raw = read_spectrum(path)
    assert [v for _, v in vals] == list(range(-7, 8))
    assert all("." not in r[1] for r in raw[1:])


def test_spectrum_shifted(tmp_path, capsys):
    path = tmp_path / "s.csv"
    argv = ["spectrum", "--operator", "pi1", "--alpha", "0.3", "--hbar", "2", "--csv", str(path)]
    assert run(argv, capsys)[0] == 0
    vals, _ = read_spectrum(path)
    assert len(vals) == 255
    assert all(abs(v - 2 * (n + 0.3)) <= 1e-12 for n, v in vals)


def test_spectrum_stdout_and_errors(capsys):
    code, out, _ = run(["spectrum", "--operator", "pi1", "--nphi", "4"], capsys)
    assert code == 0 and out.splitlines() == ["n,eigenvalue", "-1,-1", "0,0", "1,1"]
    assert run(["spectrum", "--operator", "pi2"], capsys)[0] == 2
    assert run(["spectrum", "--operator", "pi1", "--hbar", "0"], capsys)[0] == 2
    assert run(["spectrum", "--operator", "pi1", "--nphi", "12"], capsys)[0] == 2


def test_info(capsys):
    code, out, _ = run(["info"], capsys)
    assert code == 0
    row = {line.split()[0]: line.split()[1:] for line in out.splitlines() if line.startswith(("e1 ", "e_theta "))}
    # columns: e1, e2, e_theta, e_r
    assert row["e1"][2] == "-e2"
    assert row["e_theta"][3] == "0"
    assert "pi1 = -i hbar d/dphi + hbar alpha" in out


def test_json_write_is_atomic(tmp_path, capsys, monkeypatch):
    target = tmp_path / "r.json"
    target.write_text("old")

    def boom(reports):
        raise OSError(28, "No space left on device")

    monkeypatch.setattr(cli, "reports_to_json", boom)
    code = cli.main(["verify", "--suite", "bch", "--json", str(target)])
    capsys.readouterr()
    assert code == 2
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "gtquant", "info"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Canonical group" in proc.stdout
