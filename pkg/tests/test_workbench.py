"""Workbench plumbing: config, cache, emitters, CLI, self checks."""

import json

import pytest

import twistbethe.thermo
from twistbethe.workbench import (
    ConfigError,
    EXPERIMENTS,
    ExperimentConfig,
    ResultRecord,
    emit,
    flatten_record,
    parse_csv,
    run,
    verify,
)
from twistbethe.workbench.cli import main


def _cfg(tmp_path, **kw):
    base = dict(experiment="EdSpectrum", eta=2.0, N_list=[4, 5],
                output_dir=str(tmp_path))
    base.update(kw)
    return ExperimentConfig(**base)


def test_experiment_names_canonical():
    assert "EdSpectrum" in EXPERIMENTS
    cfg = ExperimentConfig(experiment="ed-spectrum")
    assert cfg.experiment == "EdSpectrum"


def test_config_rejects_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="nonsense")
    with pytest.raises(ConfigError):
        _cfg(tmp_path, eta=-1.0)
    with pytest.raises(ConfigError):
        _cfg(tmp_path, N_list=[])
    with pytest.raises(ConfigError):
        _cfg(tmp_path, N_list=[8, 4])
    with pytest.raises(ConfigError):
        _cfg(tmp_path, N_list=[1, 4])
    with pytest.raises(ConfigError):
        _cfg(tmp_path, boundary="moebius")
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="Fit")  # missing kind/input


def test_from_dict_overrides(tmp_path):
    cfg = ExperimentConfig.from_dict(
        {"experiment": "GapScan", "eta": 1.0, "N_list": [4]},
        {"eta": [2.0, 3.0], "output_dir": str(tmp_path), "seed": None})
    assert cfg.etas == (2.0, 3.0)
    assert cfg.seed == 0
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "GapScan", "bogus": 1})


def test_run_caches_and_is_deterministic(tmp_path):
    cfg = _cfg(tmp_path)
    first = run(cfg)
    assert [r.status for r in first] == ["ok", "ok"]
    cache_files = sorted((tmp_path / "cache").glob("*.json"))
    assert len(cache_files) == 2
    blobs = [p.read_bytes() for p in cache_files]

    again = run(_cfg(tmp_path))
    assert [r.to_dict() for r in again] == [r.to_dict() for r in first]
    assert [p.read_bytes() for p in cache_files] == blobs  # untouched bytes

    forced = run(_cfg(tmp_path), force=True)
    for a, b in zip(forced, first):
        assert a.outputs == pytest.approx(b.outputs, abs=1e-14)


def test_run_workers_match_serial(tmp_path):
    cfg = _cfg(tmp_path, N_list=[3, 4, 5])
    serial = run(cfg, force=True)
    parallel = run(_cfg(tmp_path, N_list=[3, 4, 5]), force=True, workers=2)
    assert [r.params for r in parallel] == [r.params for r in serial]
    for a, b in zip(parallel, serial):
        assert a.outputs == pytest.approx(b.outputs, abs=1e-12)


def test_corrupt_cache_recomputed(tmp_path):
    cfg = _cfg(tmp_path, N_list=[4])
    run(cfg)
    path = next((tmp_path / "cache").glob("*.json"))
    path.write_text("{ not json")
    rec = run(_cfg(tmp_path, N_list=[4]))[0]
    assert rec.status == "ok"
    assert json.loads(path.read_text())["outputs"] == rec.outputs


def test_point_error_does_not_abort_sweep(tmp_path):
    cfg = _cfg(tmp_path, experiment="EinhScan", N_list=[4, 22])
    records = run(cfg)
    assert records[0].status == "ok"
    assert records[1].status == "error"
    assert records[1].error  # message retained
    assert records[1].outputs == {}


def test_emit_csv_json_roundtrip(tmp_path):
    cfg = _cfg(tmp_path, N_list=[4])
    records = run(cfg)
    paths = emit(records, "csv", str(tmp_path)) + emit(records, "json", str(tmp_path))
    csv_path = next(p for p in paths if p.suffix == ".csv")
    json_path = next(p for p in paths if p.suffix == ".json")

    rows = parse_csv(csv_path)
    assert rows == [flatten_record(r) for r in records]

    data = json.loads(json_path.read_text())
    assert [ResultRecord.from_dict(d).to_dict() for d in data] == \
        [r.to_dict() for r in records]


def test_emit_rejects_mixed_schema(tmp_path):
    a = run(_cfg(tmp_path, N_list=[4]))
    b = run(_cfg(tmp_path, experiment="GapScan", N_list=[4]))
    with pytest.raises(ValueError):
        emit(a + b, "csv", str(tmp_path))
    with pytest.raises(ValueError):
        emit(a, "yaml", str(tmp_path))


def test_emit_svg_structure(tmp_path):
    cfg = _cfg(tmp_path, experiment="EinhScan", N_list=[8, 10, 12])
    records = run(cfg)
    from twistbethe.scaling import Sample, fit
    fr = fit("power", [Sample(r.params["N"], r.outputs["e_inh"])
                       for r in records])
    paths = emit(records, "svg", str(tmp_path), x_field="N",
                 y_field="e_inh", fit_result=fr)
    text = paths[0].read_text()
    assert text.startswith("<svg")
    assert text.count("<circle") == 3
    path_attr = next(s for s in text.split('"') if s.startswith("M"))
    assert path_attr.count(" L") >= 150  # dense fit curve
    assert "e_inh" in text


def test_cli_experiment_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "run1")
    code = main(["EdSpectrum", "--eta", "2", "--n", "4,5",
                 "--out", out, "--formats", "csv,json"])
    assert code == 0
    text = capsys.readouterr().out
    assert text.count("ok    ") == 2
    assert text.count("wrote ") == 2

    # one failing point in the sweep -> exit 1, other points still reported
    code = main(["einhscan", "--eta", "2", "--n", "4,22",
                 "--out", str(tmp_path / "run2"), "--formats", "csv"])
    assert code == 1
    assert "error" in capsys.readouterr().out

    # malformed N list -> config error
    assert main(["EdSpectrum", "--n", "4,x", "--out", out]) == 2
    capsys.readouterr()


def test_cli_range_syntax(tmp_path, capsys):
    out = str(tmp_path)
    code = main(["EdSpectrum", "--eta", "2", "--n", "4..8:2",
                 "--out", out, "--formats", "json"])
    assert code == 0
    rows = json.loads(next((tmp_path).glob("*.json")).read_text())
    assert [r["params"]["N"] for r in rows] == [4, 6, 8]
    capsys.readouterr()


def test_cli_config_file_with_flag_overrides(tmp_path, capsys):
    cfile = tmp_path / "cfg.json"
    cfile.write_text(json.dumps({
        "experiment": "EdSpectrum", "eta": 1.0, "N_list": [4],
        "output_dir": str(tmp_path / "a")}))
    code = main(["EdSpectrum", "--config", str(cfile), "--eta", "2",
                 "--out", str(tmp_path / "b"), "--formats", "csv"])
    assert code == 0
    rows = parse_csv(next((tmp_path / "b").glob("*.csv")))
    assert rows[0]["eta"] == 2.0
    capsys.readouterr()


def test_cli_fit_subcommand(tmp_path, capsys):
    import csv as _csv
    path = tmp_path / "data.csv"
    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(["N", "value", "status"])
        for n in (4, 6, 8, 10, 12):
            w.writerow([n, 3.0 * n ** -1.5, "ok"])
        w.writerow([14, "", "error"])  # skipped row
    code = main(["fit", "--kind", "power", "--input", str(path),
                 "--y", "value"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["a"] == pytest.approx(3.0, abs=1e-8)
    assert payload["b"] == pytest.approx(-1.5, abs=1e-8)
    assert payload["n_points"] == 5

    assert main(["fit", "--kind", "power", "--input",
                 str(tmp_path / "missing.csv"), "--y", "value"]) == 2
    capsys.readouterr()


def test_cli_verify_fast(tmp_path, capsys):
    code = main(["verify", "--level", "fast"])
    out = capsys.readouterr().out
    assert code == 0
    assert "OK" in out


def test_verify_only_filter():
    report = verify("fast", only=["thermo-series-identities"])
    assert report.ok
    assert len(report.checks) == 1


def test_verify_mutation_detected(monkeypatch):
    # the large-N check must read the bulk density through the module
    # attribute so a perturbed implementation is caught
    clean = verify("full", only=["large-n-bae-consistency"])
    assert clean.ok

    original = twistbethe.thermo.e0_density

    def skewed(eta, settings=None):
        return original(eta, settings) + 1e-6

    monkeypatch.setattr(twistbethe.thermo, "e0_density", skewed)
    tainted = verify("full", only=["large-n-bae-consistency"])
    assert not tainted.ok
    assert "FAIL" in tainted.summary()
