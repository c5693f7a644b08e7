import json
import shutil
import subprocess

import pytest

from qcurve_p1.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_free_energy_text(capsys):
    code, out, _ = run(capsys, "compute", "free-energy", "--g", "3")
    assert code == 0
    assert out.strip() == "245/429981696 * q0^-10"


def test_free_energy_log(capsys):
    code, out, _ = run(capsys, "compute", "free-energy", "--g", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["log"]["coeff"] == "-1/24"


def test_w21_latex(capsys):
    code, out, _ = run(capsys, "compute", "w", "--g", "2", "--n", "1", "--format", "latex")
    assert code == 0
    assert out.strip() == (
        "\\frac{28z_{1}^{8} + 84q_0z_{1}^{6} + 252q_0^{2}z_{1}^{4} + 609q_0^{3}z_{1}^{2} + 945q_0^{4}}"
        "{1990656q_0^{7}z_{1}^{10}} dz_{1}"
    )


def test_w_json_uses_strings(capsys):
    code, out, _ = run(capsys, "compute", "w", "--g", "0", "--n", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["g"] == 0 and doc["n"] == 3
    for term in doc["terms"]:
        assert all(isinstance(k, str) for k in term["k"])


def test_s4_x_form(capsys):
    code, out, _ = run(capsys, "compute", "s", "--m", "4", "--coord", "x")
    assert code == 0
    assert "x" in out and "q0" in out


def test_s1_and_p(capsys):
    code, out, _ = run(capsys, "compute", "s", "--m", "1")
    assert code == 0 and "log" in out
    code, out, _ = run(capsys, "compute", "p", "--m", "2", "--format", "json")
    assert code == 0 and json.loads(out)["coord"] == "z"


def test_open_f_and_painleve(capsys):
    code, out, _ = run(capsys, "compute", "f-open", "--g", "1", "--n", "1")
    assert code == 0 and out.strip()
    code, out, _ = run(capsys, "compute", "painleve", "--order", "2")
    assert code == 0
    assert "q_2 = -1/1728 * q0^-4" in out
    assert "sigma_4 = 7/497664 * q0^-7" in out


@pytest.mark.parametrize("argv", [
    ["compute", "w", "--g", "0", "--n", "2"],
    ["compute", "w", "--g", "1"],
    ["compute", "w", "--g", "-1", "--n", "1"],
    ["compute", "nothing"],
    ["verify", "bogus"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_verify_tau_and_quantum_curve(capsys):
    code, out, _ = run(capsys, "verify", "tau", "--gmax", "3")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "quantum-curve", "--order", "8")
    assert code == 0


def test_verify_all_with_cache(capsys, tmp_path):
    path = tmp_path / "w.json"
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "all", "--order", "6", "--euler-max", "4",
                       "--cache", str(path), "--out", str(out_path))
    assert code == 0
    assert path.exists()
    assert json.loads(out_path.read_text())["summary"]["fail"] == 0
    # warm cache: same report
    code, out2, _ = run(capsys, "verify", "all", "--order", "6", "--euler-max", "4",
                        "--cache", str(path), "--audit")
    assert code == 0 and out2 == out


def test_verify_json_and_env_cache(capsys, tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    monkeypatch.setenv("QCURVE_P1_CACHE", str(path))
    code, out, _ = run(capsys, "verify", "diff-rec", "--order", "2", "--euler-max", "3", "--format", "json", "-v")
    assert code == 0
    assert json.loads(out)["summary"]["fail"] == 0
    assert path.exists()


def test_corrupt_cache_exit_code(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text("[]")
    code, _, err = run(capsys, "verify", "tau", "--cache", str(path))
    assert code == 3 and "cache" in err


def test_console_script():
    exe = shutil.which("qcurve-p1")
    if exe is None:
        pytest.skip("console script not on PATH")
    res = subprocess.run([exe, "compute", "free-energy", "--g", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "7/207360 * q0^-5"
