import os
import subprocess
import sys

import pytest

from micromaser.cli import main

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(args):
    return main(list(args))


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_sweep_grid_row_count(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = run_cli(["sweep", "--model", "dicke", "--N", "5", "--nbar", "0.1",
                  "--D-from", "0", "--D-to", "25", "--D-step", "0.1",
                  "--out", str(out)])
    assert rc == 0
    lines = read(out).decode().splitlines()
    assert lines[0] == "D,mean_n,v,n_max,residual,status"
    assert len(lines) == 1 + 251
    assert all(line.endswith(",ok") for line in lines[1:])


def test_sweep_byte_identical_reruns(tmp_path):
    args = ["sweep", "--model", "one-atom", "--N", "30", "--nbar", "0.1",
            "--D-from", "0", "--D-to", "3", "--D-step", "0.5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert read(a) == read(b)
    # manifests match except the timestamp line
    ma = [l for l in read(str(a) + ".manifest.txt").decode().splitlines()
          if not l.startswith("timestamp=") and not l.startswith("out=")
          and not l.startswith("command=")]
    mb = [l for l in read(str(b) + ".manifest.txt").decode().splitlines()
          if not l.startswith("timestamp=") and not l.startswith("out=")
          and not l.startswith("command=")]
    assert ma == mb


def test_sweep_manifest_records_invocation(tmp_path):
    out = tmp_path / "s.csv"
    rc = run_cli(["sweep", "--model", "dicke", "--N", "10", "--nbar", "0.1",
                  "--D", "2.0", "--out", str(out)])
    assert rc == 0
    manifest = read(str(out) + ".manifest.txt").decode()
    assert "command=micromaser sweep" in manifest
    assert "model=dicke" in manifest
    assert "backend=" in manifest


def test_sweep_partial_failure_exit_code(tmp_path, capsys):
    out = tmp_path / "f.csv"
    rc = run_cli(["sweep", "--model", "dicke", "--N", "1000000", "--nbar",
                  "0.1", "--D", "1.0", "--out", str(out)])
    assert rc == 3
    lines = read(out).decode().splitlines()
    assert lines[1].endswith(",failed")


def test_pn_thermal_point(tmp_path):
    out = tmp_path / "pn.csv"
    rc = run_cli(["pn", "--model", "dicke", "--N", "50", "--nbar", "0.1",
                  "--D", "0", "--out", str(out)])
    assert rc == 0
    lines = read(out).decode().splitlines()
    assert lines[0].startswith("# D=0 mean_n=")
    assert lines[1] == "n,P"
    n0, p0 = lines[2].split(",")
    assert n0 == "0"
    assert float(p0) == pytest.approx(1.0 / 1.1, rel=1e-10)
    # emitted rows stop once P drops below the floor
    assert float(lines[-1].split(",")[1]) > 1e-15
    assert len(lines) < 30


def test_pn_gtau_flag(tmp_path):
    out = tmp_path / "pn2.csv"
    rc = run_cli(["pn", "--model", "one-atom", "--N", "20", "--nbar", "0.1",
                  "--gtau", "0.7", "--out", str(out)])
    assert rc == 0
    header = read(out).decode().splitlines()[0]
    assert "v=" in header and "residual=" in header


@pytest.mark.parametrize("args", [
    ["sweep", "--model", "bogus", "--N", "10", "--out", "x.csv", "--D", "1"],
    ["sweep", "--model", "dicke", "--N", "10", "--out", "x.csv"],
    ["sweep", "--model", "dicke", "--N", "10", "--out", "x.csv",
     "--D", "1", "--gtau", "0.5"],
    ["sweep", "--model", "dicke", "--N", "10", "--out", "x.csv",
     "--D-from", "0", "--D-to", "1"],
    ["pn", "--model", "dicke", "--N", "10", "--out", "x.csv"],
    ["sweep", "--model", "dicke", "--N", "10", "--D", "1",
     "--out", "x.csv", "--delta", "5"],
])
def test_bad_flags_exit_2(args, tmp_path):
    with pytest.raises(SystemExit) as exc:
        run_cli(args)
    assert exc.value.code == 2


def test_verify_kernel_suite(capsys):
    rc = run_cli(["verify", "--suite", "kernel"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS kernel.conservation" in out
    assert "FAIL" not in out


def test_verify_oracle_suite(capsys):
    rc = run_cli(["verify", "--suite", "oracle"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS oracle.one_atom_detailed_balance" in out
    assert "PASS oracle.thermal_limit_tv" in out


def test_verify_mc_suite_seeded(capsys):
    rc = run_cli(["verify", "--suite", "mc", "--seed", "42"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "mc.case0_mean_3sigma" in out


def test_cli_subprocess_entrypoint(tmp_path):
    env = dict(os.environ,
               PYTHONPATH=os.path.join(REPO, "src") + os.pathsep
               + os.environ.get("PYTHONPATH", ""))
    out = tmp_path / "sub.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "micromaser.cli", "sweep", "--model", "dicke",
         "--N", "10", "--nbar", "0.1", "--D", "1.5", "--out", str(out)],
        capture_output=True, text=True, env=env, cwd=REPO)
    assert proc.returncode == 0
    assert out.exists()


def test_threads_flag_gives_same_rows(tmp_path):
    base = ["sweep", "--model", "dicke", "--N", "20", "--nbar", "0.1",
            "--D-from", "0", "--D-to", "4", "--D-step", "1"]
    a, b = tmp_path / "t1.csv", tmp_path / "t4.csv"
    assert run_cli(base + ["--out", str(a)]) == 0
    assert run_cli(base + ["--threads", "4", "--out", str(b)]) == 0
    rows_a = read(a).decode().splitlines()[1:]
    rows_b = read(b).decode().splitlines()[1:]
    for ra, rb in zip(rows_a, rows_b):
        da, ma, va = ra.split(",")[:3]
        db, mb, vb = rb.split(",")[:3]
        assert da == db
        assert float(ma) == pytest.approx(float(mb), rel=1e-8)
        assert float(va) == pytest.approx(float(vb), rel=1e-8)
