import csv
import json
import subprocess
import sys

import pytest

from inflecta import cli
from inflecta.errors import PathFailure


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_fermat_cubic(tmp_path, capsys):
    path = tmp_path / "fib.json"
    code, out, _ = run(["solve", "--degree", "3", "--curve", "fermat", "--out", str(path)], capsys)
    assert code == 0 and "wrote" in out
    data = json.loads(path.read_text())
    assert data["count"] == 9 and len(data["points"]) == 9


def test_solve_random_quartic(capsys):
    code, out, _ = run(["solve", "--degree", "4", "--seed", "7"], capsys)
    assert code == 0 and json.loads(out)["count"] == 24


def test_solve_curve_file(tmp_path, capsys):
    from inflecta.polyalg import curve_to_json, klein
    path = tmp_path / "klein.json"
    path.write_text(json.dumps(curve_to_json(klein())))
    code, out, _ = run(["solve", "--curve", str(path)], capsys)
    assert code == 0 and json.loads(out)["count"] == 24


def test_degenerate_fiber_exit_code(capsys):
    code, _, err = run(["solve", "--degree", "4", "--curve", "fermat"], capsys)
    assert code == 3 and "degenerate" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1
    code, _, err = run(["monodromy"], capsys)
    assert code == 1 and "degree" in err
    code, _, _ = run(["solve", "--curve", "/nonexistent.json"], capsys)
    assert code == 1
    code, _, _ = run(["verify", "NO_SUCH_CLAIM"], capsys)
    assert code == 1


def test_verify_list(capsys):
    code, out, _ = run(["verify", "--list"], capsys)
    assert code == 0
    for cid in ("THM_MAIN_D3", "THM_MAIN_D4", "NODAL_CYCLES", "HESSE_DEGENERATE", "LEMMA_PI_PROFILE"):
        assert cid in out


def test_verify_hesse_degenerate(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(["verify", "HESSE_DEGENERATE", "--out", str(path)], capsys)
    assert code == 0 and "HESSE_DEGENERATE: PASS" in out
    report = json.loads(path.read_text())
    assert report["passed"] and report["claim"] == "HESSE_DEGENERATE"


def test_verify_writes_certificate(tmp_path, capsys):
    out_path = tmp_path / "d3.json"
    code, _, _ = run(["verify", "THM_MAIN_D3", "--out", str(out_path)], capsys)
    assert code == 0
    cert_path = tmp_path / "d3.json.certificate.json"
    assert json.loads(out_path.read_text())["evidence"]["certificate_path"] == str(cert_path)
    code, out, _ = run(["replay", str(cert_path)], capsys)
    assert code == 0 and "replay: PASS" in out


def test_verify_cluster_csv(tmp_path, capsys):
    path = tmp_path / "diam.csv"
    code, _, _ = run(["verify", "FERMAT_CLUSTERS", "--csv", str(path)], capsys)
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["abs_u", "max_j1_cluster_diameter"] and len(rows) == 4
    diam = [float(r[1]) for r in rows[1:]]
    assert diam == sorted(diam, reverse=True)


def test_monodromy_and_replay(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, out, _ = run(["monodromy", "--degree", "3", "--seed", "1", "--out", str(path)], capsys)
    assert code == 0
    assert json.loads(out.splitlines()[-1])["order"] == "216"
    code, out, _ = run(["replay", str(path), "--sample", "1"], capsys)
    assert code == 0

    cert = json.loads(path.read_text())
    p = cert["loops"][0]["permutation"]
    p[2], p[3] = p[3], p[2]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, out, err = run(["replay", str(bad), "--sample", "0"], capsys)
    assert code == 2 and "loop 0" in err and "FAIL" in out


def test_monodromy_target_missed(capsys):
    code, out, _ = run(["monodromy", "--degree", "3", "--seed", "0", "--loops", "1"], capsys)
    assert code == 2 and json.loads(out)["order"] != "216"


def test_nodal_only_monodromy(tmp_path, capsys):
    path = tmp_path / "nodal.json"
    code, out, _ = run(["monodromy", "--degree", "4", "--loops", "0", "--family", "nodal",
                        "--out", str(path)], capsys)
    assert code == 0
    cert = json.loads(path.read_text())
    assert cert["analysis"]["order"] == "3"
    assert cert["loops"][0]["cycle_type"] == [3, 3] + [1] * 18


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"degree": 3, "seed": 1, "num_random_loops": 2, "stop_early": False}))
    out_path = tmp_path / "c.json"
    code, _, _ = run(["monodromy", "--config", str(cfg), "--seed", "2", "--out", str(out_path)], capsys)
    cert = json.loads(out_path.read_text())
    assert cert["config"]["seed"] == 2 and cert["random_loops_used"] == 2
    assert code in (0, 2)


def test_thread_count_determinism(tmp_path, capsys, monkeypatch):
    certs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("INFLECTA_THREADS", threads)
        path = tmp_path / f"t{threads}.json"
        run(["monodromy", "--degree", "3", "--seed", "4", "--out", str(path)], capsys)
        certs.append(json.loads(path.read_text()))
    assert certs[0]["loops"] == certs[1]["loops"]
    assert certs[0]["analysis"] == certs[1]["analysis"]


def test_tracking_failure_exit_code(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise PathFailure("injected failure")

    monkeypatch.setattr(cli, "run_monodromy", boom)
    code, _, err = run(["monodromy", "--degree", "3"], capsys)
    assert code == 4 and "injected" in err


def test_bypass_csv(tmp_path, capsys):
    path = tmp_path / "traj.csv"
    code, out, _ = run(["bypass", "--family", "two-tuple", "--csv", str(path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["cycle_type"] == [2] + [1] * 22
    with path.open() as fh:
        header = next(csv.reader(fh))
        rows = sum(1 for _ in fh)
    assert header[:2] == ["step", "strand"]
    assert rows == 24 * (report["diagnostics"]["steps"] + 1)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "inflecta.cli", "verify", "--list"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "KLEIN_COUNT_AND_SYMMETRY" in proc.stdout
