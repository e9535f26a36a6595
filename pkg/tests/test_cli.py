import csv
import io
import json

import pytest

from paramcode import param_codes
from paramcode.param_codes import main, parse_args


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv("PARAMCODE_OUTPUT_DIR", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def last_error(err: str) -> dict:
    return json.loads(err.strip().splitlines()[-1])


def test_analyze_romance(capsys, fixtures_dir):
    code, out, _ = run(capsys, "analyze", str(fixtures_dir / "example1_romance.tsv"))
    assert code == 0
    report = json.loads(out)
    params = report["parameters"]["rate_base_q"]
    assert abs(params["R"] - 0.2642) < 1e-4
    assert params["delta"] == "1/6"
    assert report["classification"]["verdict"] == "BelowGV"
    gv = next(c for c in report["classification"]["certificates"] if c["bound"] == "gv")
    assert abs(gv["margin"] - 0.0858) < 1e-3
    assert report["codewords"] == {"Italian": "111011", "Spanish": "111111", "French": "111010"}
    assert report["family"] == "example1_romance"


def test_analyze_awb(capsys, fixtures_dir):
    code, out, _ = run(capsys, "analyze", str(fixtures_dir / "arabic_wolof_basque_25.tsv"))
    assert code == 0
    report = json.loads(out)
    assert report["parameters"]["rate_base_q"]["delta"] == "13/25"
    assert report["parameters"]["rate_base_q"]["delta_float"] == 0.52
    assert report["distance_matrix"]["absolute"][0][1:] == [16, 13]
    assert report["distance_matrix"]["absolute"][1][2] == 13
    assert report["classification"]["verdict"] == "AboveAsymptotic"
    plotkin = next(c for c in report["classification"]["certificates"] if c["bound"] == "plotkin")
    assert plotkin["holds"]


def test_analyze_full_table_binary_drops_unknown_columns(capsys, fixtures_dir):
    code, out, _ = run(capsys, "analyze", str(fixtures_dir / "arabic_wolof_basque_63.tsv"))
    assert code == 0
    report = json.loads(out)
    assert len(report["retained_parameters"]) == 25
    assert len(report["dropped_parameters"]) == 38
    assert report["parameters"]["rate_base_q"]["delta"] == "13/25"


def test_analyze_full_table_ternary_rate(capsys, fixtures_dir):
    code, out, _ = run(capsys, "analyze", str(fixtures_dir / "arabic_wolof_basque_63.tsv"),
                       "--alphabet", "3", "--rate-base", "2")
    assert code == 0
    report = json.loads(out)
    assert report["policy"] == {"q": 3, "entailed": "zero", "missing": "zero"}
    assert report["parameters"]["rate_base_2"]["n"] == 63
    assert abs(report["parameters"]["rate_base_2"]["R"] - 0.0252) < 5e-4
    assert report["parameters"]["rate_base_q"]["R"] == 1 / 63
    assert report["inputs"]["rate_base"] == 2


@pytest.mark.parametrize("name", ["example1_romance.tsv", "arabic_wolof_basque_25.tsv", "arabic_wolof_basque_63.tsv"])
def test_analyze_is_deterministic(capsys, fixtures_dir, name):
    _, first, _ = run(capsys, "analyze", str(fixtures_dir / name))
    _, second, _ = run(capsys, "analyze", str(fixtures_dir / name))
    a, b = json.loads(first), json.loads(second)
    a.pop("generated_at")
    b.pop("generated_at")
    assert json.dumps(a) == json.dumps(b)


def test_classify_raw_point(capsys):
    code, out, _ = run(capsys, "classify", "--delta", "0.4643", "--rate", "0.0252", "--alphabet", "3")
    assert code == 0
    result = json.loads(out)
    assert result["verdict"] == "BelowGV"
    assert result["point"]["delta"] == "4643/10000"


def test_distances_csv(capsys, fixtures_dir):
    code, out, _ = run(capsys, "distances", str(fixtures_dir / "arabic_wolof_basque_25.tsv"))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["", "Arabic", "Wolof", "Basque"]
    assert rows[1][1:] == ["0", "16", "13"]
    assert rows[2][1:] == ["16", "0", "13"]


def test_distances_logua(capsys, fixtures_dir):
    code, out, _ = run(capsys, "distances", str(fixtures_dir / "arabic_wolof_basque_63.tsv"),
                       "--normalization", "logua", "--format", "json")
    assert code == 0
    assert json.loads(out)["relative"][0][1] == "16/25"


def test_spoil_restrict(capsys, fixtures_dir):
    code, out, _ = run(capsys, "spoil", str(fixtures_dir / "example1_romance.tsv"),
                       "--kind", "restrict", "--position", "4", "--letter", "0")
    assert code == 0
    result = json.loads(out)
    assert result["code"]["languages"] == ["Italian", "French"]
    assert result["law_check"]["ok"]
    assert result["subfamily_table"].splitlines() == [
        "language\tp01\tp02\tp03\tp04\tp05\tp06",
        "Italian\t+\t+\t+\t-\t+\t+",
        "French\t+\t+\t+\t-\t+\t-",
    ]


def test_spoil_extend_with_table(capsys, fixtures_dir):
    code, out, _ = run(capsys, "spoil", str(fixtures_dir / "example1_romance.tsv"),
                       "--kind", "extend", "--position", "7",
                       "--function", "table", "--function-table", str(fixtures_dir / "romance_letters.yml"))
    assert code == 0
    result = json.loads(out)
    assert result["report"]["after"]["d"] == 2
    assert result["report"]["op"]["function"] == "table:romance_letters"
    assert result["code"]["words"]["Italian"] == "1110110"


def test_spoil_flag_dependencies(fixtures_dir):
    table = str(fixtures_dir / "example1_romance.tsv")
    with pytest.raises(SystemExit) as info:
        parse_args(["spoil", table, "--kind", "restrict", "--position", "4"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        parse_args(["spoil", table, "--kind", "extend", "--position", "1", "--function", "table"])


def test_spoil_error_is_reported(capsys, fixtures_dir):
    code, _, err = run(capsys, "spoil", str(fixtures_dir / "example1_romance.tsv"),
                       "--kind", "restrict", "--position", "1", "--letter", "0")
    assert code == 2
    assert last_error(err)["error"] == "EmptyLevelSet"


def test_sample_is_deterministic(capsys):
    args = ("sample", "--n", "25", "--m", "3", "--trials", "5", "--seed", "7")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    rows = list(csv.DictReader(io.StringIO(first)))
    assert sum(int(r["multiplicity"]) for r in rows) == 5


def test_sample_json(capsys):
    code, out, _ = run(capsys, "sample", "--n", "10", "--m", "4", "--trials", "2", "--format", "json")
    assert code == 0
    result = json.loads(out)
    assert len(result["trials"]) == 2
    assert result["config"]["seed"] == 20240101


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2", "--m", "2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1:] == [["0.5", "0.5", "4", "enumerate(n=2,m=2,q=2)"], ["1.0", "0.5", "2", "enumerate(n=2,m=2,q=2)"]]


def test_enumerate_cap(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "4", "--m", "2", "--cap", "100")
    assert code == 2
    error = last_error(err)
    assert error["error"] == "CapExceeded"
    assert error["required"] == 120


def test_bounds_curve(capsys):
    code, out, _ = run(capsys, "bounds-curve")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 102
    assert lines[0] == "delta,gv,hamming,singleton,plotkin"
    assert lines[1].startswith("0.0,1.0,1.0,1.0,0")


def test_bad_cell_exits_with_code_two(capsys, tmp_path):
    table = tmp_path / "bad.tsv"
    table.write_text("lang\ta\tb\nX\t+\tyes\nY\t-\t-\n", encoding="utf-8")
    code, _, err = run(capsys, "analyze", str(table))
    assert code == 2
    error = last_error(err)
    assert error["error"] == "UnknownCellValue"
    assert (error["line"], error["column"], error["value"]) == (2, 3, "yes")


def test_missing_table_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", str(tmp_path / "absent.tsv"))
    assert code == 1
    assert last_error(err)["error"] == "IOError"


def test_invalid_config(capsys, tmp_path):
    config = tmp_path / "config.yml"
    config.write_text("analysis:\n  alphabet: 1\n", encoding="utf-8")
    code, _, err = run(capsys, "--config", str(config), "bounds-curve")
    assert code == 2
    assert last_error(err)["error"] == "InvalidConfig"


def test_config_sets_defaults(capsys, tmp_path, fixtures_dir):
    config = tmp_path / "config.yml"
    config.write_text("analysis:\n  rate_base: 2\noutput:\n  indent: 0\n", encoding="utf-8")
    code, out, _ = run(capsys, "--config", str(config), "analyze", str(fixtures_dir / "example1_romance.tsv"))
    assert code == 0
    assert json.loads(out)["inputs"]["rate_base"] == 2


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    target = tmp_path / "curves.csv"
    code, out, _ = run(capsys, "bounds-curve", "--samples", "3", "--output", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text(encoding="utf-8").splitlines()) == 4

    monkeypatch.setenv("PARAMCODE_OUTPUT_DIR", str(tmp_path / "results"))
    code, _, _ = run(capsys, "bounds-curve", "--samples", "3", "--alphabet", "3")
    assert code == 0
    assert (tmp_path / "results" / "bounds-q3.csv").exists()


def test_unknown_flag_fails():
    with pytest.raises(SystemExit) as info:
        main(["bounds-curve", "--colour", "red"])
    assert info.value.code == 2


def test_log_dir(capsys, tmp_path):
    code, _, _ = run(capsys, "--log-dir", str(tmp_path / "logs"), "bounds-curve", "--samples", "2")
    assert code == 0
    assert (tmp_path / "logs" / "param_codes.log").exists()


@pytest.mark.parametrize("text", ["analysis: [2, 3\n", "- analysis\n- output\n"])
def test_unreadable_config_is_rejected(capsys, tmp_path, fixtures_dir, text):
    config = tmp_path / "bad.yml"
    config.write_text(text, encoding="utf-8")
    code, out, err = run(capsys, "--config", str(config), "analyze", str(fixtures_dir / "example1_romance.tsv"))
    assert code == 2 and out == ""
    error = last_error(err)
    assert error["error"] == "InvalidConfig"
    assert error["path"] == str(config)


def test_missing_explicit_config_is_rejected(capsys, tmp_path):
    code, _, err = run(capsys, "--config", str(tmp_path / "typo.yml"), "bounds-curve", "--samples", "2")
    assert code == 2
    assert last_error(err)["error"] == "InvalidConfig"


def test_absent_default_config_is_logged_after_setup(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(param_codes, "DEFAULT_CONFIG", tmp_path / "param_codes_config.yml")
    code, _, err = run(capsys, "bounds-curve", "--samples", "2")
    assert code == 0
    line = next(l for l in err.splitlines() if "using defaults" in l)
    assert " - paramcode.param_codes - INFO - Config file " in line


def test_short_ternary_table_in_base_two(capsys, tmp_path):
    table = tmp_path / "short.tsv"
    table.write_text("lang\ta\nX\t+\nY\t-\nZ\t0\n", encoding="utf-8")
    code, out, _ = run(capsys, "analyze", str(table), "--alphabet", "3", "--rate-base", "2")
    assert code == 0
    report = json.loads(out)
    assert report["parameters"]["rate_base_2"]["R"] > 1
    assert report["classification"]["verdict"] == "AboveAsymptotic"
    assert "classified with base-3 rate 1" in report["classification"]["notes"][-1]


def test_report_inputs_record_output_settings(capsys, tmp_path, fixtures_dir):
    config = tmp_path / "config.yml"
    config.write_text("output:\n  indent: 4\n  timezone: Asia/Shanghai\n", encoding="utf-8")
    code, out, _ = run(capsys, "--config", str(config), "analyze", str(fixtures_dir / "example1_romance.tsv"))
    assert code == 0
    inputs = json.loads(out)["inputs"]
    assert (inputs["indent"], inputs["timezone"]) == (4, "Asia/Shanghai")
    assert out.splitlines()[1].startswith("    \"")


def test_infeasible_enumeration_exits_with_code_two(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "1", "--m", "3")
    assert code == 2
    assert last_error(err)["error"] == "InfeasibleConfig"
    code, _, err = run(capsys, "enumerate", "--n", "2", "--m", "2", "--alphabet", "1")
    assert code == 2
    assert last_error(err)["error"] == "InfeasibleConfig"
