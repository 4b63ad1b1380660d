#!/usr/bin/env python3
"""
Test the command line: golden outputs, exit codes, configuration layering
and the parsers behind it
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

import main
from input_parser import (
    DEFAULTS,
    ParseError,
    parse_character,
    parse_range,
    parse_rational,
    parse_series,
    parse_window,
    validate_settings,
)
from report_format import dump_json, format_rational, to_jsonable
from varieties import DomainRejection
from wall_search import CaseReport, all_rank_two_cases

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in DEFAULTS:
        monkeypatch.delenv(key, raising=False)


def run(capsys, *argv):
    code = main.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def golden(name: str) -> str:
    with open(GOLDEN / name, newline="") as f:
        return f.read()


# --- golden outputs ----------------------------------------------------------

@pytest.mark.parametrize("argv, fixture", [
    (("walls", "2,0,-2,4@X2", "--rank-max", "4", "--beta-window=-2:-1/2"),
     "walls_2_0_-2_4_X2_rank4_beta_-2_-1_2.json"),
    (("walls", "1,0,0,0@X2"), "walls_1_0_0_0_X2.json"),
    (("walls", "2,-1,0,1/6@X2"), "walls_2_-1_0_1-6_X2.json"),
    (("c3max", "X2", "0", "--c2-range", "0:8"), "c3max_X2_c1_0_c2_0-8.json"),
    (("c3max", "X2", "-1", "--c2-range", "2:4", "--format", "csv"), "c3max_X2_c1_-1_c2_2-4.csv"),
    (("dim", "A@X2", "k=1", "m=-2"), "dim_A_X2_k1_m-2.json"),
    (("dim", "D@X2", "m=-1"), "dim_D_X2_m-1.json"),
    (("classify", "-1", "2", "@X2"), "classify_-1_2_X2.json"),
])
def test_golden_outputs(capsys, argv, fixture):
    code, out = run(capsys, *argv)
    assert code == main.EXIT_OK
    assert out == golden(fixture)


def test_golden_examples_in_detail():
    walls = json.loads(golden("walls_2_0_-2_4_X2_rank4_beta_-2_-1_2.json"))["results"]["walls"]
    assert ("-3/2", "1/4") in [(w["wall"]["center"], w["wall"]["radius_sq"]) for w in walls]
    bounds = json.loads(golden("c3max_X2_c1_0_c2_0-8.json"))["results"]["bounds"]
    assert bounds[4]["c2"] == 4 and bounds[4]["c3_max"] == 8
    dim = json.loads(golden("dim_D_X2_m-1.json"))["results"]
    assert (dim["series_dim"], dim["bundle_rank"]) == (20, 17)
    moduli = json.loads(golden("classify_-1_2_X2.json"))["results"]["moduli"]
    assert (moduli["base"], moduli["dim"]) == ("Gr(2,5)", 6)


def test_walls_output_is_byte_stable(capsys):
    argv = ("walls", "2,0,-2,4@X2", "--beta-window=-2:-1/2", "--rank-max", "4", "--min-radius-sq", "1/100")
    first = run(capsys, *argv)
    second = run(capsys, *argv, "--workers", "2")
    assert first == second
    report = json.loads(first[1])
    assert report["schema_version"] == "1"
    assert report["inputs"]["beta_window"] == ["-2", "-1/2"]
    walls = [(w["wall"]["center"], w["wall"]["radius_sq"]) for w in report["results"]["walls"]]
    assert ("-2", "2") in walls
    assert ("-3/2", "1/4") in walls
    assert report["results"]["w_wall"]["center"] == "-3/2"
    assert report["results"]["w_wall"]["radius_sq"] == "1/4"
    assert report["results"]["vertical_wall"]["center"] == "0"
    assert report["warnings"] == []


def test_walls_csv_and_plot(capsys):
    code, out = run(capsys, "walls", "2,0,-2,4@X2", "--beta-window=-2:-1/2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "wall_id,center,radius_sq,R,C,D,side,witnesses"
    assert lines[1].startswith("0,")

    code, out = run(capsys, "walls", "2,0,-2,4@X2", "--beta-window=-2:-1/2", "--format", "plot", "--samples", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "wall_id,beta,alpha,precision"
    assert len(lines) > 1
    assert all(line.endswith(",approx") for line in lines[1:])


def test_walls_without_semicircles(capsys):
    for character in ("1,0,0,0@X2", "2,-1,0,1/6@X2"):
        code, out = run(capsys, "walls", character)
        assert code == 0
        results = json.loads(out)["results"]
        assert results["walls"] == []
    assert results["vertical_wall"]["center"] == "-1/2"


def test_warning_off_the_quadric(capsys):
    code, out = run(capsys, "walls", "2,0,-1/5,0@X5", "--beta-window=-1:0", "--rank-max", "2")
    assert code == 0
    assert json.loads(out)["warnings"]


def test_c3max_json_consistency(capsys):
    code, out = run(capsys, "c3max", "X2", "0", "--c2-range", "0:6")
    assert code == 0
    results = json.loads(out)["results"]
    assert [row["c3_max"] for row in results["bounds"]] == [0, -1, 2, 5, 8, 13, 18]
    assert {row["status"] for row in results["consistency"]} == {"agree"}


def test_dim_series_d(capsys):
    code, out = run(capsys, "dim", "D@X2", "m=-1")
    assert code == 0
    results = json.loads(out)["results"]
    assert (results["fibration_dim"], results["bundle_rank"]) == (20, 17)
    assert results["series_dim"] == 20


def test_dim_reports_formula_mismatch(capsys):
    code, out = run(capsys, "dim", "F@X5", "k=1", "m=-2")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["series_dim"] == 85
    assert report["results"]["fibration_dim"] == 50
    assert report["warnings"]


def test_classify(capsys):
    code, out = run(capsys, "classify", "-1", "2", "@X2")
    assert json.loads(out)["results"]["moduli"]["base"] == "Gr(2,5)"
    code, out = run(capsys, "classify", "0", "7")
    assert code == 0
    moduli = json.loads(out)["results"]["moduli"]
    assert (moduli["dim"], moduli["bundle_rank"], moduli["c3_max"]) == (43, 40, 25)


def test_verify_single_case(capsys):
    code, out = run(capsys, "verify", "--lemma", "0,-2")
    assert code == main.EXIT_OK
    report = json.loads(out)
    assert report["results"]["ok"] is True
    assert report["results"]["cases"][0]["e_max"] == "4"


def test_verify_all_cases(capsys):
    code, out = run(capsys, "verify", "--lemma", "all")
    assert code == main.EXIT_OK
    results = json.loads(out)["results"]
    assert results["ok"] is True
    assert len(results["cases"]) == len(all_rank_two_cases())
    assert all(case["exhaustive"] for case in results["cases"])


def test_verify_failure_exit_code(capsys, monkeypatch):
    def failing(c, d, workers=1):
        return CaseReport(c=c, d=d, e_max=Fraction(0), witnesses=(), destabilizers=(),
                          window=(Fraction(-1), Fraction(0)), exhaustive=False, ok=False)

    monkeypatch.setattr(main, "verify_rank_two_case", failing)
    code, out = run(capsys, "verify", "--lemma", "0,-2")
    assert code == main.EXIT_VERIFY
    assert json.loads(out)["results"]["ok"] is False


# --- exit codes --------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("walls", "2,0,-2@X2"),
    ("walls", "2,0,x,4@X2"),
    ("walls", "2,0,-2,4"),
    ("c3max", "X2", "0", "--c2-range", "5:1"),
    ("dim", "A@X2", "k=1"),
    ("dim", "A@X2", "q=1", "m=-2"),
    ("verify", "--lemma", "0"),
    ("walls", "2,0,-2,4@X2", "--workers", "0"),
    ("walls", "2,0,-2,4@X2", "--format", "plot", "--samples", "1"),
    ("verify", "--lemma", "0,-2", "--workers", "0"),
])
def test_parse_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == main.EXIT_PARSE
    assert out == ""


@pytest.mark.parametrize("argv", [
    ("walls", "1,0,1,0@X2"),
    ("walls", "2,0,1/4,0@X2"),
    ("walls", "2,0,-2,4@X3"),
    ("c3max", "X4", "0"),
    ("c3max", "X2", "1"),
    ("dim", "B@P3", "m=-1"),
    ("classify", "0", "1"),
    ("verify", "--lemma", "1,-1"),
])
def test_domain_rejections(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == main.EXIT_DOMAIN
    assert out == ""


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as err:
        main.main([])
    assert err.value.code == 2


# --- configuration -----------------------------------------------------------

def test_config_file_overrides_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("TILT_RANK_MAX", "3")
    config = tmp_path / "tilt.env"
    config.write_text("TILT_RANK_MAX=1\nTILT_BETA_WINDOW=-2:-1\n")
    code, out = run(capsys, "--config", str(config), "walls", "2,0,-2,4@X2")
    assert code == 0
    inputs = json.loads(out)["inputs"]
    assert inputs["rank_max"] == 1
    assert inputs["beta_window"] == ["-2", "-1"]

    code, out = run(capsys, "walls", "2,0,-2,4@X2", "--beta-window=-2:-1")
    assert json.loads(out)["inputs"]["rank_max"] == 3


def test_bad_config(capsys, tmp_path):
    assert run(capsys, "--config", str(tmp_path / "missing.env"), "c3max", "X2", "0")[0] == main.EXIT_PARSE
    config = tmp_path / "bad.env"
    config.write_text("TILT_WORKERS=0\n")
    assert run(capsys, "--config", str(config), "c3max", "X2", "0")[0] == main.EXIT_PARSE


def test_validate_settings():
    result = validate_settings({})
    assert result["status"] == "VALID"
    assert result["settings"]["beta_window"] == (-4, 4)
    assert validate_settings({"TILT_LOG_LEVEL": "chatty"})["status"] == "INVALID"
    assert validate_settings({"TILT_PLOT_SAMPLES": "1"})["status"] == "INVALID"
    assert validate_settings({"TILT_RANK_MAX": "two"})["status"] == "INVALID"
    assert validate_settings({"UNRELATED": "x"})["status"] == "VALID"


# --- parsers and formats -----------------------------------------------------

def test_parsers():
    assert parse_rational(" -3/4 ") == Fraction(-3, 4)
    with pytest.raises(ParseError):
        parse_rational("0.75")
    assert parse_character("(2,-1,-1/2,5/3)@X2").as_tuple() == (2, -1, Fraction(-1, 2), Fraction(5, 3))
    assert parse_character("1,0,0,0@X1").variety.value == "P3"
    with pytest.raises(DomainRejection):
        parse_character("1,0,0,0@Y")
    assert parse_window("-2:-1/2") == (-2, Fraction(-1, 2))
    assert list(parse_range("2:4")) == [2, 3, 4]
    assert parse_series("C@X2", ["k=2", "m=-3"]).n == 2
    assert parse_series("a@x2", ["m=-2"]).series == "A"


def test_formats():
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(4) == "4"
    assert format_rational(float("inf")) == "inf"
    assert format_rational(None) is None
    with pytest.raises(TypeError):
        format_rational(0.5)
    assert to_jsonable({"x": (Fraction(1, 2), True, None)}) == {"x": ["1/2", True, None]}
    assert dump_json({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


if __name__ == "__main__":
    print("🧪 Testing the command line")
    raise SystemExit(pytest.main([__file__, "-v"]))
