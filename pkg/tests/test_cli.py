import json
import logging
import shutil
from importlib import resources
from pathlib import Path

import pytest

from opcost.cli import RunConfig, UsageError, load_run_config, main
from opcost.cost_model import MetricKind, get_profile

CORPUS = Path(str(resources.files("opcost.data").joinpath("corpus")))


@pytest.fixture
def repo(tmp_path):
    root = tmp_path / "repo"
    shutil.copytree(CORPUS, root / "kernels")
    (root / "scripts").mkdir()
    (root / "scripts" / "tool.py").write_text("def f(a, b):\n    return a / b + a * b\n")
    (root / "notes.txt").write_text("not source")
    return root


def run(argv, env=None):
    return main(argv, env or {})


# -- configuration -----------------------------------------------------------------------------------


def test_defaults():
    cfg = load_run_config(["analyze", "x.ll"], env={})
    assert (cfg.architecture, cfg.profile.name, cfg.format, cfg.seed) == ("x86_64", "RESEARCH", "text", 42)
    assert cfg.cohort_scope is None and cfg.jobs >= 1
    assert cfg.inputs == ("x.ll",)


def test_env_profile_used_without_flag():
    assert load_run_config(["batch", "."], env={"OPCOST_PROFILE": "MOBILE"}).profile.name == "MOBILE"
    cfg = load_run_config(["batch", ".", "--profile", "HPC"], env={"OPCOST_PROFILE": "MOBILE"})
    assert cfg.profile.name == "HPC"


def test_explicit_weights_equal_research():
    cfg = load_run_config(["batch", ".", "--weights", "0.4,0.3,0.25,0.05"], env={})
    assert cfg.profile.weights == get_profile("RESEARCH").weights


def test_flag_weights_override_env_profile():
    cfg = load_run_config(["batch", ".", "--weights", "0.25,0.25,0.25,0.25"], env={"OPCOST_PROFILE": "HPC"})
    assert cfg.profile.weights == (0.25, 0.25, 0.25, 0.25)


def test_config_file_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"profile": "COMMERCIAL", "seed": 7, "format": "json"}))
    cfg = load_run_config(["validate", "--config", str(conf)], env={"OPCOST_SEED": "9"})
    assert cfg.profile.name == "COMMERCIAL" and cfg.format == "json" and cfg.seed == 9
    cfg = load_run_config(["validate", "--seed", "11"], env={"OPCOST_CONFIG": str(conf), "OPCOST_SEED": "9"})
    assert cfg.seed == 11


def test_config_mapping_and_sweep_options():
    cfg = load_run_config(["sweep", "a", "--metric", "eu", "--steps", "31", "--pair", "x,y"], env={},
                          file={"w_range": "0.2,0.6"})
    assert cfg.metric is MetricKind.EU and cfg.steps == 31 and cfg.pair == ("x", "y")
    assert cfg.w_range == (0.2, 0.6)


def test_threshold_overrides_flow_to_rules():
    cfg = load_run_config(["batch", "."], env={}, file={"thresholds": {"recommendations": {"div_cu_share": 0.5}}})
    assert cfg.rules.div_cu_share == 0.5
    with pytest.raises(UsageError):
        load_run_config(["batch", "."], env={}, file={"thresholds": {"bogus": {}}})


@pytest.mark.parametrize("argv, env, file", [
    (["batch", ".", "--profile", "HPC", "--weights", "0.25,0.25,0.25,0.25"], {}, None),
    (["batch", ".", "--weights", "0.5,0.5,0.5,0.5"], {}, None),
    (["batch", ".", "--nope"], {}, None),
    (["batch", ".", "--arch", "sparc"], {}, None),
    (["batch", "."], {"OPCOST_JOBS": "many"}, None),
    (["batch", "."], {}, {"unknown_key": 1}),
    (["frobnicate"], {}, None),
])
def test_usage_errors(argv, env, file):
    with pytest.raises(UsageError):
        load_run_config(argv, env=env, file=file)


# -- exit codes and diagnostics ----------------------------------------------------------------------------


def test_unknown_profile_lists_names(repo, capsys):
    assert run(["batch", str(repo), "--profile", "NOSUCH"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ") and "--profile" in err
    for name in ("RESEARCH", "COMMERCIAL", "MOBILE", "HPC"):
        assert name in err


def test_exit_codes(repo, tmp_path, capsys):
    assert run(["batch", str(repo), "--frob"]) == 1
    assert run(["analyze", str(tmp_path / "missing.ll")]) == 3
    bad = tmp_path / "bad.py"
    bad.write_text("def f(:\n")
    assert run(["analyze", str(bad)]) == 2
    assert "bad.py" in capsys.readouterr().err
    assert run(["batch", str(tmp_path / "empty_dir_missing")]) == 3
    (tmp_path / "empty").mkdir()
    assert run(["batch", str(tmp_path / "empty")]) == 1
    assert run(["analyze", str(repo / "notes.txt")]) == 1
    assert run(["batch", str(repo), "--output", str(tmp_path / "no" / "such" / "dir" / "out.json")]) == 3
    badconf = tmp_path / "c.json"
    badconf.write_text('{\n  "seed": 1,\n}')
    assert run(["validate", "--config", str(badconf)]) == 2
    assert "c.json:3:" in capsys.readouterr().err


def test_help_and_version(capsys):
    assert run(["--version"]) == 0
    assert "opcost" in capsys.readouterr().out
    assert run(["analyze", "--help"]) == 0


def test_analyze_json_happy_path(capsysbinary):
    kernel = CORPUS / "div_kernel.ll"
    assert run(["analyze", str(kernel), "--arch", "x86_64", "--profile", "RESEARCH", "--format", "json"]) == 0
    out = capsysbinary.readouterr()
    assert out.err == b""
    doc = json.loads(out.out)
    assert doc["cohort_scope"] == "functions"
    fns = [n for f in doc["root"]["children"][0]["children"] for n in f["children"]]
    assert [f["name"] for f in fns] == ["ratio", "normalize"]
    assert {f["score"] for f in fns} == {0.0, 100.0}


def test_batch_text_report(repo, capsys):
    assert run(["batch", str(repo)]) == 0
    out = capsys.readouterr().out
    assert "kernels/div_kernel.ll" in out and "scripts/tool.py" in out
    assert "notes.txt" not in out


def test_include_exclude(repo, tmp_path):
    out = tmp_path / "r.json"
    assert run(["batch", str(repo), "--format", "json", "--output", str(out), "--exclude", "kernels/**"]) == 0
    doc = json.loads(out.read_text())
    assert [m["name"] for m in doc["root"]["children"]] == ["scripts"]


def test_warnings_are_prefixed(capsys):
    from opcost.cli import _install_logging

    _install_logging()
    logging.getLogger("opcost.parsers.discover").warning("cannot read directory x")
    assert capsys.readouterr().err == "warning: cannot read directory x\n"


# -- determinism ------------------------------------------------------------------------------------------------


def test_validate_twice_byte_identical(tmp_path):
    paths = [tmp_path / f"v{i}.json" for i in range(2)]
    for p in paths:
        assert run(["validate", "--seed", "42", "--format", "json", "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_batch_independent_of_jobs(repo, tmp_path):
    outs = []
    for jobs in ("1", "4", "1"):
        p = tmp_path / f"b{jobs}_{len(outs)}.json"
        assert run(["batch", str(repo), "--format", "json", "--jobs", jobs, "--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]


# -- sweep / grid / plots ---------------------------------------------------------------------------------------


def test_sweep_and_grid_outputs(repo, tmp_path):
    kernels = repo / "kernels"
    plots = tmp_path / "plots"
    csv = tmp_path / "sweep.csv"
    out = tmp_path / "sweep.json"
    argv = ["sweep", str(kernels / "div_kernel.ll"), str(kernels / "saxpy.ll"), "--format", "json",
            "--output", str(out), "--csv", str(csv), "--plot-dir", str(plots), "--metric", "eu"]
    assert run(argv) == 0
    doc = json.loads(out.read_text())
    assert doc["metric"] == "EU" and len(doc["points"]) == 121
    assert csv.read_text().startswith("w,score_")

    gcsv = tmp_path / "grid.csv"
    argv = ["grid", str(kernels), "--grid", "3x4", "--csv", str(gcsv), "--plot-dir", str(plots),
            "--output", str(tmp_path / "grid.txt")]
    assert run(argv) == 0
    assert len(gcsv.read_text().splitlines()) == 1 + 12
    assert "cheapest by USD" in (tmp_path / "grid.txt").read_text()
    for name in ("sweep.png", "grid_usd.png", "grid_composite.png"):
        assert (plots / name).stat().st_size > 0


def test_sweep_needs_pair_for_many_artifacts(repo, capsys):
    assert run(["sweep", str(repo / "kernels")]) == 1
    assert "--pair" in capsys.readouterr().err


def test_report_and_validate_plots(repo, tmp_path):
    plots = tmp_path / "p"
    assert run(["batch", str(repo), "--plot-dir", str(plots), "--output", str(tmp_path / "r.txt")]) == 0
    assert run(["validate", "--plot-dir", str(plots), "--output", str(tmp_path / "v.txt")]) == 0
    assert (plots / "scores.png").exists() and (plots / "study.png").exists()


def test_runconfig_defaults():
    cfg = RunConfig("validate")
    assert cfg.profile.name == "RESEARCH" and cfg.seed == 42
