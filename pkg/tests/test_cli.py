import json
import subprocess
import sys

import pytest

from liyorke.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def demo_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("demo")
    assert main(["demo", "--out", str(d)]) == 0
    return d


def write(path, text):
    path.write_text(text)
    return str(path)


class TestMatrix:
    def test_ones(self, capsys, tmp_path):
        f = write(tmp_path / "a.txt", "2\n1 1\n1 1\n")
        code, out, _ = run(capsys, "matrix", f, "--power", "2", "1", "1", "--words", "3", "1", "1", "--triple", "2")
        assert code == 0
        assert "irreducible: yes" in out and "k0(1)=1, k0(2)=1" in out
        assert "A^2[1,1] = 2" in out and "  1 2 1" in out
        assert "w1=(2, 1, 1) w2=(2, 2, 1)" in out

    def test_identity_is_a_successful_query(self, capsys, tmp_path):
        code, out, _ = run(capsys, "matrix", write(tmp_path / "i.txt", "2\n1 0\n0 1\n"))
        assert code == 0 and "irreducible: no" in out

    def test_malformed(self, capsys, tmp_path):
        code, _, err = run(capsys, "matrix", write(tmp_path / "m.txt", "2\n1 1\n1 q\n"))
        assert code == 2 and "line 3" in err

    def test_alternative(self, capsys, tmp_path):
        f = write(tmp_path / "a.txt", "2\n1 1\n1 1\n")
        code, out, _ = run(capsys, "matrix", f, "--alternative", "1,1,1,1,1,1,1,1,1")
        assert code == 0 and out.strip().endswith("1 1 1 1 1 1 1 2 1")

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["matrix"])
        assert e.value.code == 1


class TestPipeline:
    def test_demo_outputs(self, demo_dir):
        cert = json.loads((demo_dir / "certificate.json").read_text())
        assert (cert["lambda"], cert["delta"], cert["k0"], cert["route"]) == ("3/2", "4/15", 1, "T42")
        assert len((demo_dir / "points.csv").read_text().splitlines()) == 9
        assert (demo_dir / "points.times.json").exists()
        pairs = (demo_dir / "pairs.csv").read_text().splitlines()
        assert len(pairs) == 29 and all(line.endswith("consistent") for line in pairs[1:])

    def test_demo_affine(self, capsys):
        code, out, _ = run(capsys, "demo", "--variant", "affine", "--count", "3")
        assert code == 0 and "lambda = 3/2" in out and "delta = 4/15" in out

    def test_demo_r4(self, capsys):
        code, _, err = run(capsys, "demo", "--r", "4")
        assert code == 3 and "CoveringFailed" in err and "witness" in err

    def test_certify_scramble_diagnose(self, capsys, demo_dir, tmp_path):
        cfg = str(demo_dir / "system.json")
        cert = tmp_path / "cert.json"
        code, out, _ = run(capsys, "certify", "--config", cfg, "--out", str(cert))
        assert code == 0 and cert.read_text() == (demo_dir / "certificate.json").read_text()
        pts = tmp_path / "pts.csv"
        code, _, _ = run(capsys, "scramble", "--config", cfg, "--certificate", str(cert), "--out", str(pts))
        assert code == 0 and pts.read_text() == (demo_dir / "points.csv").read_text()
        code, out, _ = run(capsys, "diagnose", "--config", cfg, "--points", str(pts), "--out", str(tmp_path / "p.csv"))
        assert code == 0 and "consistent: 28" in out
        assert (tmp_path / "p.csv").read_text() == (demo_dir / "pairs.csv").read_text()

    def test_horizon_too_short(self, capsys, demo_dir):
        code, _, err = run(capsys, "diagnose", "--config", str(demo_dir / "system.json"),
                           "--points", str(demo_dir / "points.csv"), "--horizon", "3")
        assert code == 5 and "need at least" in err

    def test_certify_failure(self, capsys, demo_dir, tmp_path):
        cfg = json.loads((demo_dir / "system.json").read_text())
        cfg["params"] = {"periodic": ["4"]}
        code, _, err = run(capsys, "certify", "--config", write(tmp_path / "s.json", json.dumps(cfg)))
        assert code == 3 and "CoveringFailed" in err

    def test_tampered_certificate(self, capsys, demo_dir, tmp_path):
        data = json.loads((demo_dir / "certificate.json").read_text())
        data["lambda"] = "2"
        bad = write(tmp_path / "bad.json", json.dumps(data))
        code, _, err = run(capsys, "scramble", "--config", str(demo_dir / "system.json"), "--certificate", bad)
        assert code == 3 and "InvalidCertificate" in err

    def test_bad_config(self, capsys, tmp_path):
        code, _, err = run(capsys, "certify", "--config", write(tmp_path / "c.json", "{ nope"))
        assert code == 1 and "line 1" in err

    def test_orbit(self, capsys, demo_dir, tmp_path):
        out = tmp_path / "o.csv"
        code, _, _ = run(capsys, "orbit", "--config", str(demo_dir / "system.json"), "--x0", "1/3",
                         "--horizon", "2", "--out", str(out))
        assert code == 0
        rows = [line.split(",") for line in out.read_text().splitlines()]
        assert rows[0] == ["n", "x_n", "symbol"] and [r[0] for r in rows[1:]] == ["0", "1", "2"]
        assert float(rows[1][1]) == pytest.approx(1 / 3) and rows[1][2] == "2"
        assert float(rows[2][1]) == pytest.approx(1.0)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "liyorke", "matrix", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "--power" in res.stdout
