import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylrbm import cli, suites
from weylrbm.cli import ConfigError, RunConfig


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


configs = st.builds(
    RunConfig,
    system=st.sampled_from(["B2", "A3", "I2(5)", "orth4"]),
    dt=st.floats(1e-6, 1e-2), horizon=st.floats(0.5, 100),
    epsilon_coeff=st.floats(0.1, 20), n_paths=st.integers(1, 10_000), seed=st.integers(0, 2 ** 31),
    output_dir=st.sampled_from(["out", "/tmp/x y", "reports/run1"]),
    checks=st.lists(st.sampled_from(suites.CHECKS), max_size=4, unique=True).map(tuple),
)


@given(configs)
def test_config_round_trip(cfg):
    assert RunConfig.from_text(cfg.to_text()) == cfg
    assert RunConfig.from_mapping(cfg.to_dict()) == cfg


@pytest.mark.parametrize("raw", [{"dt": "-1"}, {"system": "Q7"}, {"checks": "nope"}, {"colour": "red"},
                                 {"n_paths": "many"}, {"dt": "2", "horizon": "1"}])
def test_config_errors(raw):
    with pytest.raises(ConfigError):
        RunConfig.from_mapping(raw)


def test_info_dihedral3(capsys):
    code, out, _ = run(capsys, "info", "--system", "I2(3)")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == 6
    assert [o["simple_count"] for o in doc["orbits"]] == [2]


def test_info_orth3(capsys):
    doc = json.loads(run(capsys, "info", "--system", "orth3")[1])
    assert doc["order"] == 8 and len(doc["orbits"]) == 3 and "wedge_angle" not in doc


def test_info_b2_wedge(capsys):
    doc = json.loads(run(capsys, "info", "--system", "B2")[1])
    assert doc["wedge_angle_over_pi"] == pytest.approx(0.25)
    assert len(doc["gram"]) == 2 and len(doc["dual"]) == 2


def test_info_bad_spec(capsys):
    code, _, err = run(capsys, "info", "--system", "Z9")
    assert code == 2 and "Z9" in err


def test_verify_algebra_exit0(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--out", str(tmp_path))
    assert code == 0
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    assert doc["schema_version"] == 1 and doc["kind"] == "verify" and doc["passed"]
    assert (tmp_path / "verify_report.csv").exists()
    assert RunConfig.from_text((tmp_path / "run_config.txt").read_text()).output_dir == str(tmp_path)


def test_verify_unknown_check(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--checks", "algebra,bogus", "--out", str(tmp_path))
    assert code == 2 and "bogus" in err


def test_verify_corollary_dihedral3_not_applicable(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--system", "I2(3)", "--checks", "corollary", "--dt", "1e-3",
                       "--paths", "20", "--out", str(tmp_path))
    assert code == 0
    assert "[INFO] corollary I2(3) root 0: not applicable" in out
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    cor = [r for r in doc["results"] if r["name"].startswith("corollary")]
    assert cor and all(not r["gated"] and r["passed"] for r in cor)


def test_verify_gated_failure_exit1(capsys, tmp_path):
    # a too-coarse grid breaks the 10% corollary tolerance on B2
    code, out, _ = run(capsys, "verify", "--system", "B2", "--checks", "corollary", "--dt", "1e-2",
                       "--paths", "30", "--out", str(tmp_path))
    assert code == 1 and "[FAIL]" in out


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.txt"
    cfg.write_text("system=orth2\ndt=0.01\nn_paths=3\n")
    out_dir = tmp_path / "o"
    code, _, _ = run(capsys, "simulate", "--config", str(cfg), "--paths", "2", "--out", str(out_dir))
    assert code == 0
    got = RunConfig.from_text((out_dir / "run_config.txt").read_text())
    assert got.system == "orth2" and got.dt == 0.01 and got.n_paths == 2
    js = tmp_path / "run.json"
    js.write_text(json.dumps({"system": "B2", "dt": 0.01, "n_paths": 1, "output_dir": str(out_dir / "j")}))
    assert run(capsys, "simulate", "--config", str(js))[0] == 0
    assert (out_dir / "j" / "path_0000.csv").exists()


def test_bad_config_file(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("just words\n")
    assert run(capsys, "verify", "--config", str(f))[0] == 2
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.txt"))[0] == 2


def test_simulate_rank2_svg_deterministic(capsys, tmp_path):
    args = ["simulate", "--system", "B2", "--dt", "1e-2", "--paths", "2", "--svg", "--seed", "5"]
    assert run(capsys, *args, "--out", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *args, "--out", str(tmp_path / "b"))[0] == 0
    for name in ["path_0000.csv", "path_0001.csv", "path_0000.svg"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    svg = (tmp_path / "a" / "path_0000.svg").read_text()
    assert svg.count('class="wall"') == 2
    manifest = json.loads((tmp_path / "a" / "simulate_manifest.json").read_text())
    assert manifest["columns"][0] == "t" and manifest["schema_version"] == 1


def test_simulate_rank3_svg_warns(capsys, tmp_path):
    with pytest.warns(UserWarning, match="rank-2"):
        code = cli.main(["simulate", "--system", "A3", "--dt", "1e-2", "--paths", "1", "--svg",
                         "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "path_0000.csv").exists() and not list(tmp_path.glob("*.svg"))


def test_sweep_cmd(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--dts", "1e-2,5e-3,2e-3", "--paths", "20", "--out", str(tmp_path))
    assert code in (0, 1) and "trend" in out
    assert json.loads((tmp_path / "sweep_report.json").read_text())["kind"] == "sweep"
    assert run(capsys, "sweep", "--dts", "1e-2,1e-3", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "sweep", "--sweep-check", "nope", "--out", str(tmp_path))[0] == 2


def test_skew_cmd(capsys, tmp_path):
    code, out, _ = run(capsys, "skew", "--p", "1", "--dt", "1e-3", "--paths", "5", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["terminal_sign_mean"] == 1.0
    code, out, _ = run(capsys, "skew", "--p", "1", "--multidim", "--dt", "1e-3", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["reflected_fraction"] in (1.0, None)
    assert run(capsys, "skew", "--p", "2", "--out", str(tmp_path))[0] == 2


def test_help_shows_defaults(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "--help"])
    out = capsys.readouterr().out
    for frag in ["(default: B2)", "(default: 0.0001)", "(default: 200)", "(default: algebra)"]:
        assert frag in out
