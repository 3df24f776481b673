import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from aicmf import synthetic_price_panel, write_panel
from aicmf.cli import RunConfig, main, read_fluctuation, read_series, run


@pytest.fixture(scope="module")
def schema():
    text = resources.files("aicmf").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


@pytest.fixture(scope="module")
def prices(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "prices.csv"
    write_panel(synthetic_price_panel(30, 1200, seed=7), path)
    return path


def load(path):
    return json.loads(path.read_text())


def test_pipeline_report(prices, tmp_path, schema):
    assert main(["pipeline", "--input", str(prices), "--output-dir", str(tmp_path), "--plot-data"]) == 0
    report = load(tmp_path / "report_interval1.json")
    jsonschema.validate(report, schema)
    res = report["result"]
    for key in ("h", "tau", "alpha", "f_alpha", "delta_alpha"):
        assert np.all(np.isfinite(res["spectrum"][key]))
    assert report["config"]["intervals"] == [1]
    assert report["tool"]["version"]
    assert (tmp_path / "interval1_falpha.dat").exists()
    assert (tmp_path / "interval1_mfdfa_q2.dat").exists()
    aic = read_series(tmp_path / "aic_interval1.csv")
    assert aic.size == res["n_times"] == 1199
    assert res["n_stocks"] == 30


def test_interval_sweep(prices, tmp_path, schema):
    rc = main(["pipeline", "--input", str(prices), "--output-dir", str(tmp_path),
               "--interval", "1,5,10,22,44"])
    assert rc == 0
    for i in (1, 5, 10, 22, 44):
        report = load(tmp_path / f"report_interval{i}.json")
        jsonschema.validate(report, schema)
        assert report["result"]["interval"] == i
        assert report["result"]["n_times"] == 1200 - i


def test_q_step_zero_is_config_error(prices, tmp_path, capsys):
    assert main(["mfdfa", "--input", str(prices), "--q", "-2:4:0", "--output-dir", str(tmp_path)]) == 1
    assert "config" in capsys.readouterr().err


@pytest.mark.parametrize("argv,code", [
    (["dfa", "--q", "-2:4:1"], 1),
    (["pipeline", "--interval", "0"], 1),
    (["pipeline", "--direction", "sideways"], 1),
    (["pipeline", "--scales", "4:2000:20"], 1),
    (["frobnicate"], 1),
])
def test_config_errors(prices, tmp_path, argv, code):
    assert main([*argv, "--input", str(prices), "--output-dir", str(tmp_path)]) == code


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,A,B\n2020-01-01,1,0\n2020-01-02,1,2\n2020-01-03,1,2\n")
    assert main(["pipeline", "--input", str(bad), "--output-dir", str(tmp_path)]) == 2
    err = capsys.readouterr().err.strip()
    assert err.count("\n") == 0 and "ingest" in err and "non-positive" in err


def test_numerical_error_exit_code(tmp_path, capsys):
    series = tmp_path / "zeros.csv"
    series.write_text("value\n" + "0.0\n" * 256)
    assert main(["mfdfa", "--input", str(series), "--output-dir", str(tmp_path)]) == 3
    assert "fluctuation" in capsys.readouterr().err
    assert main(["mfdfa", "--input", str(series), "--output-dir", str(tmp_path),
                 "--zero-policy", "floor"]) == 0


def test_numerical_error_zero_variance(tmp_path):
    flat = tmp_path / "flat.csv"
    flat.write_text("date,A,B\n" + "".join(f"2020-01-{d:02d},5,{d}\n" for d in range(1, 20)))
    assert main(["aic", "--input", str(flat), "--output-dir", str(tmp_path)]) == 3


def test_validate_and_drop_rows(tmp_path, capsys, schema):
    p = tmp_path / "p.csv"
    p.write_text("date,A,B\n2020-01-01,1,2\n2020-01-02,,2\n2020-01-03,1.5,2\n")
    assert main(["validate", "--input", str(p), "--output-dir", str(tmp_path)]) == 2
    capsys.readouterr()
    assert main(["validate", "--input", str(p), "--missing", "drop-rows", "--output-dir", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["dropped_rows"] == 1 and summary["n_dates"] == 2
    jsonschema.validate(load(tmp_path / "validate.json"), schema)


def test_aic_subcommand(prices, tmp_path):
    assert main(["aic", "--input", str(prices), "--output-dir", str(tmp_path),
                 "--interval", "1,5", "--symbols", "S00,S01"]) == 0
    text = (tmp_path / "aic_interval5.csv").read_text().splitlines()
    assert text[0] == "index,value"
    assert len(text) == 1 + 1195
    assert main(["aic", "--input", str(prices), "--output-dir", str(tmp_path), "--symbols", "S00,XX"]) == 2


def test_synth_dfa_fit_chain(tmp_path, schema):
    out = str(tmp_path)
    assert main(["synth", "--kind", "fgn", "--hurst", "0.8", "--length", "8192", "--seed", "3",
                 "--output-dir", out]) == 0
    sidecar = load(tmp_path / "synth.json")
    jsonschema.validate(sidecar, schema)
    assert sidecar["result"]["spec"]["seed"] == 3 and sidecar["result"]["spec"]["hurst"] == 0.8
    assert read_series(tmp_path / "synth.csv").size == 8192
    assert main(["dfa", "--input", str(tmp_path / "synth.csv"), "--output-dir", out, "--plot-data"]) == 0
    fl = read_fluctuation(tmp_path / "dfa.csv")
    assert list(fl.q_values) == [2.0]
    assert (tmp_path / "dfa_q2.dat").exists()
    assert main(["fit", "--input", str(tmp_path / "dfa.csv"), "--output-dir", out]) == 0
    fit = load(tmp_path / "fit.json")
    jsonschema.validate(fit, schema)
    assert fit["result"]["exponent"] == pytest.approx(0.8, abs=0.06)
    assert fit["result"]["regime"] == "long-range-correlated"
    assert fit["result"]["preferred"] in ("single", "two-stage")


def test_mfdfa_csv_round_trip(tmp_path):
    out = str(tmp_path)
    main(["synth", "--kind", "cascade", "--length", "4096", "--output-dir", out])
    assert main(["mfdfa", "--input", str(tmp_path / "synth.csv"), "--output-dir", out,
                 "--q", "-2:4:1", "--scales", "4:1024:12", "--direction", "bidirectional"]) == 0
    fl = read_fluctuation(tmp_path / "mfdfa.csv")
    assert list(fl.q_values) == [-2, -1, 0, 1, 2, 3, 4]
    assert fl.scales[0] == 4 and fl.scales[-1] == 1024
    assert np.all(np.diff(fl.F, axis=0) >= -1e-12)
    assert main(["fit", "--input", str(tmp_path / "mfdfa.csv"), "--moment", "4",
                 "--fit-range", "16:1024", "--output-dir", out]) == 0
    lo, hi = load(tmp_path / "fit.json")["result"]["fit"]["fit_range"]
    assert 16 <= lo < 32 and hi == 1024


def test_spectrum_subcommand(tmp_path, schema):
    out = str(tmp_path)
    main(["synth", "--kind", "cascade", "--length", "8192", "--output-dir", out])
    assert main(["spectrum", "--input", str(tmp_path / "synth.csv"), "--output-dir", out, "--plot-data"]) == 0
    report = load(tmp_path / "spectrum.json")
    jsonschema.validate(report, schema)
    assert report["result"]["spectrum"]["delta_alpha"] > 0.1
    for name in ("hq.dat", "tau.dat", "falpha.dat"):
        rows = (tmp_path / name).read_text().splitlines()
        assert len(rows) == 25 and len(rows[0].split()) == 2


def test_run_with_config_object(prices, tmp_path):
    cfg = RunConfig("pipeline", input=str(prices), output_dir=str(tmp_path), intervals=(5,),
                    q=(-1.0, 3.0, 0.5), fit_range=(8.0, 200.0))
    assert run(cfg) == 0
    report = load(tmp_path / "report_interval5.json")
    assert report["config"]["q"] == [-1.0, 3.0, 0.5]
    assert report["result"]["dfa"]["fit"]["fit_range"][0] >= 8


def test_reports_are_deterministic(prices, tmp_path):
    for d in ("a", "b"):
        assert main(["pipeline", "--input", str(prices), "--output-dir", str(tmp_path / d),
                     "--interval", "1,22"]) == 0
    for i in (1, 22):
        a = load(tmp_path / "a" / f"report_interval{i}.json")
        b = load(tmp_path / "b" / f"report_interval{i}.json")
        a.pop("generated_at"), b.pop("generated_at")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "aicmf" in capsys.readouterr().out
