import json
import subprocess
import sys

import pytest

from uniform_turan import __version__
from uniform_turan.cli import main

FAN_TEXT = "hg 3 5 3\n0 1 3\n1 2 3\n1 3 4\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.fixture
def fan_file(tmp_path):
    path = tmp_path / "fan.hg3"
    path.write_text(FAN_TEXT)
    return str(path)


def test_check_colorable_fan(capsys, fan_file):
    code, out = run(capsys, "check", "colorable", "--palette", "phi8", "--input", fan_file, "--mode", "exhaustive")
    assert code == 0 and out["colorable"] is True


def test_check_colorable_fixed_ordering_witness(capsys, fan_file):
    code, out = run(capsys, "check", "colorable", "--palette", "phi8", "--input", fan_file, "--ordering", "0,1,2,3,4")
    assert code == 0 and out["colorable"] is False
    assert out["witness"]["pair"] == [1, 3]
    assert sorted(map(sorted, out["witness"]["domains"])) == [["alpha", "beta"], ["alpha", "gamma"], ["beta", "gamma"]]


def test_not_colorable_is_exit_zero(capsys, tmp_path):
    path = tmp_path / "k4.hg3"
    path.write_text("hg 3 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n")
    code, out = run(capsys, "check", "colorable", "--palette", "phi0", "--input", str(path))
    assert code == 0 and out["colorable"] is False


def test_gen_affine_header(capsys, tmp_path):
    path = tmp_path / "ag.hg5"
    code, out = run(capsys, "gen", "affine", "--dim", "3", "-o", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "hg 5 125 775"
    code, out = run(capsys, "check", "linear", "--input", str(path))
    assert out["linear"] and out["every_pair_once"]


def test_check_growth(capsys):
    code, out = run(capsys, "check", "growth", "--n", "3125", "--m", "488125")
    assert code == 0 and out["holds"] is True
    code, out = run(capsys, "check", "growth", "--n", "120", "--m", "100")
    assert code == 0 and out["holds"] is False


def test_exit_codes(capsys, tmp_path, fan_file):
    bad = tmp_path / "bad.hg3"
    bad.write_text("hg 3 5 1\n1 0 3\n")
    assert main(["check", "linear", "--input", str(bad)]) == 2
    assert main(["check", "linear", "--input", str(tmp_path / "missing")]) == 2
    big = tmp_path / "big.hg3"
    big.write_text("hg 3 30 1\n0 1 2\n")
    assert main(["check", "colorable", "--palette", "phi0", "--input", str(big)]) == 3
    assert main(["audit", "density", "--input", fan_file, "--epsilon", "0.1"]) == 1
    assert main(["gen", "affine", "--dim", "9", "-o", str(tmp_path / "x")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["check", "growth", "--n", "notanumber", "--m", "1"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_normalize_flag(capsys, tmp_path):
    messy = tmp_path / "messy.hg3"
    messy.write_text("hg 3 5 7\n3 1 0\n0 1 3\n")
    assert main(["check", "linear", "--input", str(messy)]) == 2
    code, out = run(capsys, "check", "linear", "--input", str(messy), "--normalize")
    assert code == 0 and out["m"] == 1


def test_fan_expand_certificate_round_trip(capsys, tmp_path):
    h5, h3, cert, ch = (tmp_path / n for n in ("g.hg5", "g.hg3", "c.json", "ch.txt"))
    assert main(["gen", "greedy-linear", "--n", "20", "--seed", "2", "-o", str(h5)]) == 0
    capsys.readouterr()
    code, out = run(
        capsys, "gen", "fan-expand", "--input", str(h5), "--seed", "3", "-o", str(h3),
        "--emit-certificate", str(cert), "--emit-choices", str(ch),
    )
    assert code == 0
    code, out = run(capsys, "check", "certificate", "--palette", "phi3", "--input", str(h3), "--certificate", str(cert))
    assert code == 0 and out["valid"] is True
    again = tmp_path / "again.hg3"
    assert main(["gen", "fan-expand", "--input", str(h5), "--choices", str(ch), "-o", str(again)]) == 0
    assert again.read_bytes() == h3.read_bytes()
    capsys.readouterr()


def test_partitioned_pipeline(capsys, tmp_path, fan_file):
    host = tmp_path / "host.phg"
    emb = tmp_path / "emb.json"
    assert main(["gen", "partitioned-random", "--palette", "phi3", "--parts", "8", "--roles", "-o", str(host)]) == 0
    capsys.readouterr()
    code, out = run(capsys, "extract-skeleton", "--input", str(host), "--delta", "1/5")
    assert code == 0 and out["success"] and out["indices"] == list(range(1, 9))
    code, out = run(capsys, "embed", "--host", str(host), "--guest", fan_file, "-o", str(emb))
    assert code == 0 and out["embeds"]
    code, out = run(capsys, "check", "embedding", "--host", str(host), "--guest", fan_file, "--embedding", str(emb))
    assert out["valid"] is True
    code, out = run(capsys, "audit", "triads", "--input", str(host), "--epsilon", "0.1")
    assert code == 0 and out["violations"] == []


def test_audit_density_exact_json(capsys, fan_file):
    code, out = run(capsys, "audit", "density", "--input", fan_file, "--epsilon", "3/5", "--exact")
    assert code == 0
    assert out["min_density"] == {"num": 0, "den": 1} and out["mode"] == "exact"


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == f"uniform-turan {__version__} (hg/1 phg/1 cert/1)"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "uniform_turan", "check", "growth", "--n", "10", "--m", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["holds"] is False
    assert proc.stderr == ""
