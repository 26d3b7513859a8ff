"""Config parsing, experiment execution, and CSV/JSON emission."""

import json
import math

import pytest

from cubeboot.cli import (
    CSV_HEADER,
    ConfigError,
    build_config,
    format_csv,
    format_json,
    load_record,
    main,
    parse_config,
    run_experiment,
)


# -- parsing -----------------------------------------------------------------------


def test_parse_power_threshold_pc_mode():
    cfg = parse_config("--n 16 --k 1 --threshold power:0.8 --variant boot "
                       "--pc --trials 20000 --seed 7".split())
    job = cfg.jobs[0]
    assert job.r == 10  # ceil(16^0.8) = ceil(9.19)
    assert job.auto_pc and job.p_points == ()
    assert cfg.trials == 20000 and cfg.seed == 7


def test_parse_majority_boot3_k_power():
    cfg = parse_config("--n 10 --k 2 --threshold majority --variant boot3 "
                       "--t k_power:1 --p 0.45".split())
    job = cfg.jobs[0]
    assert job.N == 55
    assert job.r == 28
    assert job.t == 10
    assert job.p_points == (0.45,)


def test_parse_rejects_k_gt_n():
    with pytest.raises(ConfigError, match="k <= n"):
        build_config({"n": 4, "k": 5, "threshold": "const:2", "p": 0.5})


def test_parse_rejects_degenerate_schedule():
    with pytest.raises(ConfigError):
        build_config({"n": 10, "threshold": "const:4", "variant": "boot2",
                      "t": 2, "p": 0.5})


def test_parse_rejects_bad_p_and_missing_fields():
    with pytest.raises(ConfigError):
        build_config({"n": 8, "threshold": "const:2", "p": 1.5})
    with pytest.raises(ConfigError):
        build_config({"threshold": "const:2", "p": 0.5})
    with pytest.raises(ConfigError):
        build_config({"n": 8, "threshold": "const:2"})  # no p and no pc
    with pytest.raises(ConfigError):
        build_config({"n": 8, "threshold": "const:2", "p": 0.5, "pc": True})
    with pytest.raises(ConfigError):
        build_config({"n": 8, "threshold": "wat:3", "p": 0.5})
    with pytest.raises(ConfigError):
        build_config({"n": 8, "threshold": "const:2", "p": 0.5, "bogus": 1})


def test_t_formulas():
    base = {"n": 12, "threshold": "power:0.8", "variant": "boot1", "p": 0.3}
    assert build_config({**base, "t": "eps2_na:0.05"}).jobs[0].t == 1
    assert build_config({**base, "t": "half_power:0.1"}).jobs[0].t == 1
    assert build_config({**base, "t": "linear:0.2"}).jobs[0].t == 3
    assert build_config({**base, "t": 2}).jobs[0].t == 2
    cfg = build_config({"n": 9, "k": 3, "threshold": "majority",
                        "variant": "boot3", "t": "k_power:0.1", "p": 0.2})
    assert cfg.jobs[0].t == math.ceil(0.1 * 9 ** 1.5)


def test_sweep_points():
    cfg = build_config({"n": 6, "threshold": "const:2",
                        "p": "sweep:0.1:0.9:5"})
    assert cfg.jobs[0].p_points == pytest.approx((0.1, 0.3, 0.5, 0.7, 0.9))
    with pytest.raises(ConfigError):
        build_config({"n": 6, "threshold": "const:2", "p": "sweep:0.1:0.9"})


def test_config_file_merging(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 8, "threshold": "const:3", "p": 0.4,
                                "trials": 500}))
    cfg = parse_config(["--config", str(path), "--trials", "800"])
    assert cfg.jobs[0].n == 8
    assert cfg.trials == 800  # flag overrides file


def test_presets_resolve():
    cfg = build_config({"preset": "theorem1", "trials": 1000})
    assert [j.n for j in cfg.jobs] == [12, 16, 20]
    assert [j.r for j in cfg.jobs] == [8, 10, 11]
    assert all(j.auto_pc for j in cfg.jobs)
    cfg = build_config({"preset": "theorem3", "trials": 1000})
    assert [(j.n, j.k, j.r) for j in cfg.jobs] == [(8, 2, 18), (10, 2, 28),
                                                   (12, 2, 39)]
    cfg = build_config({"preset": "theorem2", "trials": 1000})
    assert [j.variant for j in cfg.jobs] == ["boot2"] * 3
    assert [j.r for j in cfg.jobs] == [math.ceil(n ** 0.85)
                                       for n in (12, 16, 20)]
    for j in cfg.jobs:
        assert j.r - 2 * j.t >= 1
    with pytest.raises(ConfigError, match="preset"):
        build_config({"preset": "theorem9"})
    with pytest.raises(ConfigError, match="1000"):
        build_config({"preset": "theorem1", "trials": 500})


# -- execution and emission -----------------------------------------------------------


def _small_config(**over):
    raw = {"n": 6, "threshold": "const:2", "p": 0.3, "trials": 400, "seed": 5}
    raw.update(over)
    return build_config(raw)


def test_run_experiment_row_shape():
    rec = run_experiment(_small_config())
    assert len(rec.rows) == 1
    row = rec.rows[0]
    assert row["n"] == 6 and row["variant"] == "boot"
    assert row["trials"] == 400
    assert 0.0 <= row["p_hat"] <= 1.0
    assert row["pc_lo"] is None


def test_trivial_sweep_is_exact():
    rec = run_experiment(_small_config(p="sweep:0:1:2"))
    assert [r["p_hat"] for r in rec.rows] == [0.0, 1.0]


def test_csv_format():
    rec = run_experiment(_small_config())
    text = format_csv(rec)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    cells = lines[1].split(",")
    assert len(cells) == len(CSV_HEADER.split(","))
    assert cells[0] == "custom"
    assert cells[12] == "" and cells[13] == ""  # pc columns empty


def test_csv_pc_run_has_summary_row():
    cfg = build_config({"n": 6, "threshold": "const:2", "pc": True,
                        "trials": 1000, "seed": 2, "tolerance": 0.05})
    rec = run_experiment(cfg)
    text = format_csv(rec)
    lines = text.strip().split("\n")[1:]
    *evals, summary = lines
    assert len(evals) >= 1
    cells = summary.split(",")
    assert cells[6] == ""  # p empty on the summary row
    assert float(cells[12]) < float(cells[13])  # pc_lo < pc_hi
    for line in evals:
        cells = line.split(",")
        assert cells[12] == "" and cells[13] == ""
        assert 0.0 < float(cells[6]) < 1.0


def test_json_roundtrip_field_for_field():
    rec = run_experiment(_small_config())
    again = load_record(format_json(rec))
    assert again.config == rec.config
    assert again.rows == rec.rows
    assert again.resolved == rec.resolved
    assert again.seed == rec.seed
    assert again.version == rec.version
    assert again.wall_time == rec.wall_time


def test_rerun_from_echo_is_bit_identical():
    rec = run_experiment(_small_config())
    rec2 = run_experiment(build_config(rec.config))
    assert format_csv(rec) == format_csv(rec2)


def test_rerun_under_many_workers_identical():
    cfg = _small_config(trials=2000)
    a = run_experiment(cfg, workers=1)
    b = run_experiment(cfg, workers=4)
    assert format_csv(a) == format_csv(b)


def test_float_formatting_ten_significant_digits():
    rec = run_experiment(_small_config())
    for line in format_csv(rec).strip().split("\n")[1:]:
        for cell in line.split(","):
            if "." in cell and "e" not in cell:
                digits = cell.replace("-", "").replace(".", "").lstrip("0")
                assert len(digits) <= 10


# -- exit codes ------------------------------------------------------------------------


def test_main_success(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = main(["--n", "6", "--threshold", "const:2", "--p", "0.3",
                 "--trials", "200", "--seed", "1", "--output", str(out)])
    assert code == 0
    assert out.read_text().startswith(CSV_HEADER)


def test_main_config_error(capsys):
    assert main(["--n", "4", "--k", "9", "--threshold", "const:2",
                 "--p", "0.5"]) == 2
    assert "config error" in capsys.readouterr().err


def test_main_runtime_error(tmp_path, capsys):
    bad = tmp_path / "nodir" / "out.csv"
    code = main(["--n", "6", "--threshold", "const:2", "--p", "0.3",
                 "--trials", "200", "--output", str(bad)])
    assert code == 3
    assert "runtime error" in capsys.readouterr().err


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("CUBEBOOT_THREADS", "3")
    rec = run_experiment(_small_config())
    monkeypatch.setenv("CUBEBOOT_THREADS", "1")
    rec2 = run_experiment(_small_config())
    assert format_csv(rec) == format_csv(rec2)
