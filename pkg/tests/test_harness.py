from __future__ import annotations

import json
from fractions import Fraction

import pytest

from sphx.harness import (
    ConfigError,
    bless,
    emit_exponent_graph,
    exit_status,
    golden_compare,
    load_config,
    make_config,
    run_suite,
)
from sphx.harness.cli import main
from sphx.harness.golden import exponent_graph_rows
from sphx.harness.suite import format_value, render_csv


# --- configuration --------------------------------------------------------


@pytest.mark.parametrize("overrides", [
    {"t_ladder": []},
    {"t_ladder": [20, 10]},
    {"t_ladder": [-1, 2]},
    {"spaces": ["H7"]},
    {"suite": "nope"},
    {"tolerances": {"c6_round_trip": -1.0}},
    {"tolerances": {"not_a_check": 1.0}},
    {"workers": 0},
    {"colour": "blue"},
])
def test_bad_configs_raise(overrides):
    with pytest.raises(ConfigError):
        make_config(overrides=overrides, env={})


def test_tolerance_override_merges_with_defaults():
    cfg = make_config(overrides={"tolerances": {"c6_round_trip": 1e-3}}, env={})
    assert cfg.tol("c6_round_trip") == 1e-3
    assert cfg.tol("c8_hessian") == 1e-4


def test_sphx_out_overrides_output_dir(tmp_path):
    cfg = make_config({"output_dir": "a"}, env={"SPHX_OUT": str(tmp_path)})
    assert cfg.output_dir == str(tmp_path)


def test_load_config_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json", env={})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad, env={})
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"suite": "exponents", "t_ladder": "10,20"}))
    assert load_config(good, env={}).t_ladder == (10.0, 20.0)


# --- CSV formatting -------------------------------------------------------


def test_format_value():
    assert format_value(True) == "1"
    assert format_value(Fraction(3, 2)) == "1.5"
    assert format_value(2.0) == "2"
    assert format_value(float("inf")) == "inf"
    assert format_value(0.1) == "0.1"
    assert format_value(1 + 2j) == "1+2j"


def test_render_csv_sorted_meta():
    text = render_csv(("a", "b"), [(1, 0.5)], {"z": 1, "a": "x"})
    assert text == "# a=x\n# z=1\na,b\n1,0.5\n"


# --- suite runs -----------------------------------------------------------


def _exponent_run(out, workers=1):
    cfg = make_config(overrides={"suite": "exponents", "output_dir": str(out), "workers": workers}, env={})
    return run_suite(cfg)


def test_exponent_suite_passes_and_is_deterministic(tmp_path):
    a = _exponent_run(tmp_path / "a")
    b = _exponent_run(tmp_path / "b", workers=2)
    nonliteral = [r for r in a if not r.literal]
    assert nonliteral and all(r.status == "pass" for r in nonliteral)
    files = sorted(p.name for p in (tmp_path / "a").glob("*.csv"))
    assert files == sorted(p.name for p in (tmp_path / "b").glob("*.csv"))
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["n_pass"] + summary["n_fail"] + summary["n_skip"] == len(summary["checks"]) == len(a)
    assert exit_status(nonliteral) == 0


def test_exit_status_reflects_failures(tmp_path):
    results = _exponent_run(tmp_path)
    literal = [r for r in results if r.literal]
    assert literal and any(r.failed for r in literal)
    assert exit_status(results) == 1


# --- golden comparison ----------------------------------------------------


def test_emit_exponent_graph_includes_kinks():
    rows = exponent_graph_rows("SL3R", npts=4)
    assert (Fraction(0), Fraction(2), Fraction(3, 2)) in rows
    assert (Fraction(1, 2), Fraction(0), Fraction(0)) in rows
    text = emit_exponent_graph("SL3R", npts=4)
    assert text.splitlines()[:3] == ["# n=5", "# r=2", "# space=SL3R"]
    assert "inv_p,delta0,delta" in text


def test_golden_identical_drift_and_schema(tmp_path):
    run, gold = tmp_path / "run", tmp_path / "gold"
    run.mkdir()
    (run / "x.csv").write_text("# m=1\na,b\n1,0.5\n2,0.25\n")
    bless(run, gold)
    assert golden_compare(run, gold).status == "pass"

    (run / "x.csv").write_text("a,b\n1,0.5\n2,0.2500001\n")
    res = golden_compare(run, gold)
    assert res.status == "fail" and res.measured == 1
    assert golden_compare(run, gold, {"golden": 1e-3}).status == "pass"
    assert golden_compare(run, gold, {"golden": 1e-9, "golden.b": 1e-3}).status == "pass"

    (run / "x.csv").write_text("a,b,c\n1,0.5,0\n2,0.25,0\n")
    res = golden_compare(run, gold)
    assert res.status == "fail"
    assert "c" in str(res.detail["schema_errors"][0])

    with pytest.raises(FileNotFoundError):
        golden_compare(run, tmp_path / "nowhere")


# --- CLI exit codes -------------------------------------------------------


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SPHX_OUT", raising=False)
    assert main(["catalog", "--space", "H2", "--out", str(tmp_path / "c.json")]) == 0
    assert json.loads((tmp_path / "c.json").read_text())
    assert main(["exponent", "--space", "SL3R", "--p", "2,4,inf", "--out", str(tmp_path / "e.csv")]) == 0
    assert main(["eval", "--space", "H2", "--t", "10", "--lambda", "1.4142135623730951", "--H=-0.3",
                 "--out", str(tmp_path / "v.csv")]) == 0
    assert main(["eval", "--space", "H9", "--t", "10", "--lambda", "1", "--H", "0"]) == 2
    assert main(["suite", "--suite", "exponents", "--t-ladder", "20,10"]) == 2
    assert main(["suite", "--suite", "exponents", "--output-dir", str(tmp_path / "s")]) == 1
    assert main(["suite", "--suite", "exponents", "--no-literal", "--output-dir", str(tmp_path / "s2")]) == 0
    assert main(["golden", str(tmp_path / "s2"), str(tmp_path / "g"), "--bless"]) == 0
    assert main(["golden", str(tmp_path / "s2"), str(tmp_path / "g")]) == 0
    assert main(["golden", str(tmp_path / "s2"), str(tmp_path / "missing")]) == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_cli_sphx_out(tmp_path, monkeypatch):
    monkeypatch.setenv("SPHX_OUT", str(tmp_path / "env"))
    assert main(["suite", "--suite", "exponents", "--no-literal", "--output-dir", str(tmp_path / "ignored")]) == 0
    assert (tmp_path / "env" / "summary.json").exists()
    assert not (tmp_path / "ignored").exists()
