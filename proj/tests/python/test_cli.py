import os
import subprocess
from pathlib import Path

import pytest

BENCH = os.environ.get("REGRET_BENCH", "regret_bench")
CONFIGS = Path(os.environ.get("REGRET_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def run(*args):
    return subprocess.run([BENCH, *map(str, args)], capture_output=True, text=True, timeout=600)


def write_config(path, template=None, **overrides):
    lines = []
    if template is not None:
        for line in (CONFIGS / template).read_text().splitlines():
            key = line.split("=", 1)[0].strip()
            if key not in overrides:
                lines.append(line)
    lines += [f"{k} = {v}" for k, v in overrides.items()]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_no_subcommand_is_an_error():
    assert run().returncode != 0


@pytest.mark.parametrize(
    "overrides,field",
    [
        ({"gamma": "0"}, "gamma"),
        ({"gamma": "-2"}, "gamma"),
        ({"T": "0"}, "T"),
        ({"inner_lr": "0"}, "inner_lr"),
        ({"dim": "3"}, "dim"),
        ({"colour": "blue"}, "colour"),
    ],
)
def test_config_errors_exit_1_and_name_the_field(tmp_path, overrides, field):
    cfg = write_config(tmp_path / "bad.cfg", "rosenbrock2d.cfg", output_dir=tmp_path / "o", **overrides)
    res = run("run", cfg)
    assert res.returncode == 1
    assert field in res.stderr


def test_missing_config_file_exits_1(tmp_path):
    res = run("run", tmp_path / "absent.cfg")
    assert res.returncode == 1
    assert "config" in res.stderr


def test_divergence_exits_2(tmp_path):
    cfg = write_config(tmp_path / "div.cfg", "quadratic_hd.cfg", output_dir=tmp_path / "o",
                       dim=8, T=50, gamma=10)
    res = run("run", cfg)
    assert res.returncode == 2
    assert "diverge" in res.stderr


def test_rosenbrock_outputs_are_reproducible(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path / "r.cfg", "rosenbrock2d.cfg", output_dir=out)
    assert run("run", cfg).returncode == 0
    for name in ("meta_trajectory.csv", "gd_trajectory.csv", "nesterov_trajectory.csv",
                 "loss.svg", "theta.svg", "paths.svg"):
        assert (out / name).is_file(), name
    first = {p.name: p.read_bytes() for p in out.iterdir()}

    rows = (out / "meta_trajectory.csv").read_text().splitlines()
    assert rows[0].startswith("t,x_0,x_1,f_value")
    assert len(rows) == 2002
    loss = (out / "loss.csv").read_text().splitlines()
    assert all("nan" not in r and "inf" not in r for r in loss)

    assert run("run", cfg).returncode == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


@pytest.mark.parametrize("template", ["closed_form.cfg", "rate_bounds.cfg", "time_consistency.cfg"])
def test_quadratic_studies_run(tmp_path, template):
    out = tmp_path / "out"
    cfg = write_config(tmp_path / "q.cfg", template, output_dir=out)
    assert run("run", cfg).returncode == 0
    assert run("rates", cfg).returncode == 0
    assert (out / "bounds.csv").read_text().startswith("bound_name,satisfied_from,margin")
    assert run("consistency", cfg).returncode == 0
    assert (out / "probe.csv").read_text().startswith("T_low,T_high,max_first_k_diff")


def test_rates_on_rosenbrock_is_a_config_error(tmp_path):
    cfg = write_config(tmp_path / "r.cfg", "rosenbrock2d.cfg", output_dir=tmp_path / "o")
    res = run("rates", cfg)
    assert res.returncode == 1
    assert "experiment" in res.stderr


def test_tampered_psi_fails_verify():
    res = run("verify", "--only", "1", "--tamper-psi")
    assert res.returncode == 3
    assert "FAIL" in res.stdout
