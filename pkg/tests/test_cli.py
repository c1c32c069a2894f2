import json
import subprocess
import sys

import numpy as np
import pytest

from schmidt_norms import fixtures
from schmidt_norms.cli import main
from schmidt_norms.matio import dump_bipartite, dump_map, write_json
from schmidt_norms.maps import reduction_map


@pytest.fixture()
def workdir(tmp_path):
    write_json(str(tmp_path / "ex51.json"), dump_bipartite(fixtures.example51(3)))
    write_json(str(tmp_path / "swap3.json"),
               dump_bipartite(fixtures.swap_operator(3)))
    write_json(str(tmp_path / "iso9.json"),
               dump_bipartite(fixtures.isotropic(0.9, 3)))
    write_json(str(tmp_path / "id2.json"),
               {"m": 1, "n": 2, "rows": 2, "cols": 2,
                "re": [[1.0, 0.0], [0.0, 1.0]]})
    write_json(str(tmp_path / "red3.json"), dump_map(reduction_map(3, 0.5)))
    return tmp_path


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


def test_norm_sk_identity(workdir, capsys):
    code, report, err = _run(capsys, [
        "norm", "sk", str(workdir / "id2.json"), "--k", "1", "--seed", "1",
        "--restarts", "4"])
    assert code == 0
    assert report["command"] == "norm sk"
    assert report["result"]["value"] == pytest.approx(1.0, abs=1e-8)
    assert "sha256" in report["inputs"]["file"]
    assert "exit=0" in err


def test_fixture_emit_then_minorder(workdir, capsys):
    out = workdir / "gen.json"
    code = main(["fixtures", "emit", "example51", "--n", "3",
                 "--out", str(out)])
    capsys.readouterr()
    assert code == 0 and out.exists()
    code, report, _ = _run(capsys, [
        "norm", "minorder", str(out), "--k", "2", "--seed", "7",
        "--restarts", "8"])
    assert code == 0
    assert report["result"]["value"] == pytest.approx(0.5, abs=1e-6)


def test_blockpos_refutation_exit_2_with_witness(workdir, capsys):
    code, report, _ = _run(capsys, [
        "cone", "blockpos", str(workdir / "swap3.json"), "--k", "2",
        "--seed", "3", "--restarts", "6"])
    assert code == 2
    res = report["result"]
    assert res["status"] == "refuted"
    assert res["min_value"] == pytest.approx(-1.0, abs=1e-6)
    # embedded witness reproduces the value independently
    wit = res["witness_vector"]
    v = np.asarray(wit["re"]) + 1j * np.asarray(wit["im"])
    swap = fixtures.swap_operator(3)
    assert np.real(v.conj() @ swap.mat @ v) == pytest.approx(res["min_value"],
                                                             abs=1e-6)


def test_recheck_round_trip(workdir, capsys):
    code, report, _ = _run(capsys, [
        "cone", "blockpos", str(workdir / "swap3.json"), "--k", "2",
        "--seed", "3", "--restarts", "6"])
    assert code == 2
    rp = workdir / "report.json"
    rp.write_text(json.dumps(report))
    code, recheck, _ = _run(capsys, [
        "oracle", "recheck", "--report", str(rp),
        "--file", str(workdir / "swap3.json")])
    assert code == 0
    assert recheck["result"]["match"] is True
    assert recheck["result"]["difference"] <= 1e-6


def test_witness_subcommand_detects_isotropic(workdir, capsys):
    from schmidt_norms.cones import reduction_witness
    write_json(str(workdir / "w32.json"), dump_bipartite(reduction_witness(3, 2)))
    code, report, _ = _run(capsys, [
        "cone", "witness", "--witness", str(workdir / "w32.json"),
        "--state", str(workdir / "iso9.json"), "--k", "2", "--seed", "5",
        "--restarts", "8"])
    assert code == 2
    assert report["result"]["pairing"] == pytest.approx(-0.35, abs=1e-9)
    assert report["result"]["sn_lower_bound"] == 3


def test_detect_subcommand(workdir, capsys):
    code, report, _ = _run(capsys, [
        "map", "detect", "--state", str(workdir / "iso9.json"),
        "--map", str(workdir / "red3.json"), "--k", "2", "--seed", "2",
        "--restarts", "8"])
    assert code == 2
    assert report["result"]["status"] == "detected"
    assert report["result"]["trace_norm_value"] > 1.0 + 1e-8


def test_determinism_modulo_runtime(workdir, capsys):
    argv = ["norm", "minorder", str(workdir / "ex51.json"), "--k", "1",
            "--seed", "11", "--restarts", "6"]
    _, r1, _ = _run(capsys, argv)
    _, r2, _ = _run(capsys, argv)
    r1.pop("runtime_ms")
    r2.pop("runtime_ms")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_env_seed_default(workdir, capsys, monkeypatch):
    argv = ["norm", "minorder", str(workdir / "ex51.json"), "--k", "1",
            "--restarts", "6"]
    monkeypatch.setenv("SCHMIDT_NORMS_SEED", "11")
    _, env_run, _ = _run(capsys, argv)
    monkeypatch.delenv("SCHMIDT_NORMS_SEED")
    _, flag_run, _ = _run(capsys, argv + ["--seed", "11"])
    assert env_run["result"] == flag_run["result"]
    assert env_run["parameters"]["seed"] == 11


def test_malformed_input_exit_1(workdir, capsys):
    bad = workdir / "bad.json"
    bad.write_text('{"rows": 2}')
    code, report, err = _run(capsys, [
        "norm", "sk", str(bad), "--k", "1"])
    assert code == 1
    assert report is None
    assert "cols" in err


def test_missing_file_exit_1(workdir, capsys):
    code, _, err = _run(capsys, [
        "norm", "sk", str(workdir / "absent.json"), "--k", "1"])
    assert code == 1
    assert "absent.json" in err


def test_bad_flag_exit_1(capsys):
    code, _, err = _run(capsys, ["norm", "sk"])
    assert code == 1
    assert err


def test_console_script_wiring(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "schmidt_norms.cli", "norm", "sk",
         str(workdir / "id2.json"), "--k", "1", "--seed", "0",
         "--restarts", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["result"]["value"] == pytest.approx(1.0, abs=1e-8)
    assert proc.stderr.strip()
