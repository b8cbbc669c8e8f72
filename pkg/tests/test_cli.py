import json

import pytest

from numcalc.cli import main
from numcalc.errata import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_sqrt2(capsys):
    code, out, _ = run(capsys, "eval", "[[1+1]---[1+1]]", "--digits", "12")
    assert code == 0 and out.strip() == "1.414213562373"


def test_eval_rational(capsys):
    assert run(capsys, "eval", "[1-[1--[1+1]]]")[1].strip() == "1/2"


def test_check_n(capsys):
    code, out, _ = run(capsys, "check", str(fixture_path("N")))
    assert code == 0 and out.strip().splitlines()[-1] == "9+3 steps valid"


def test_check_r_fails(capsys):
    code, out, _ = run(capsys, "check", str(fixture_path("R")))
    assert code == 1
    assert out.strip().splitlines()[-1] == "13+21 of 22+46 steps valid, 19/29 lemmas valid"


def test_farey_row(capsys):
    assert run(capsys, "farey", "--row", "2")[1].strip() == "0/1 1/2 1/1"


def test_farey_bad_cell(capsys):
    assert run(capsys, "farey", "--cell", "2", "9")[0] == 1


def test_enumerate(capsys):
    out = run(capsys, "enumerate", "--system", "N", "--limit", "4")[1]
    assert out.split() == ["1", "1+1", "1+1+1", "1+1+1+1"]


def test_compare_normalize_parse(capsys):
    assert run(capsys, "compare", "[1-1]", "1")[1].strip() == "less"
    assert run(capsys, "normalize", "[1+1+1]")[1].strip() == "[[1+1]+1]"
    assert run(capsys, "parse", "( 1 <  1+1 )")[1].strip() == "(1 < 1+1)"


def test_cf(capsys):
    assert run(capsys, "cf", "from-rational", "17/12")[1].strip() == "[1; 2, 2, 2]"
    assert run(capsys, "cf", "digits", "sqrt2", "--n", "5")[1].strip() == "[1; 2, 2, 2, 2]"
    assert "17/12" in run(capsys, "cf", "convergents", "1,2,2,2")[1]


def test_baseb_and_decimal(capsys):
    assert run(capsys, "baseb", "encode", "17/400", "--base", "10", "--len", "8")[1].strip() == "0.0425"
    assert run(capsys, "baseb", "decode", "1.1", "--base", "2")[1].strip() == "3/2"
    assert "confirmed" in run(capsys, "baseb", "gap", "--base", "10", "--q", "3", "--len", "3")[1]
    assert run(capsys, "decimal", "17/400", "--n", "7")[1].strip() == ".0425000"


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--system", "N", "--depth", "2")
    assert code == 0 and "(1 < 1+1)" in out.splitlines()


@pytest.mark.parametrize("argv,code", [
    (["parse", "[1+"], 2),
    (["eval", "[1--[1-1]]"], 1),
    (["eval", "[1*1]"], 2),
    (["baseb", "gap", "--base", "10", "--q", "5"], 1),
    (["check", "/nonexistent.proof"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_error_exit(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "farey")[0] == 2


def test_json_outputs(capsys):
    d = json.loads(run(capsys, "eval", "[1-1]", "--format", "json")[1])
    assert d["version"] == 1 and d["value"] == "0"
    d = json.loads(run(capsys, "check", str(fixture_path("N")), "--format", "json")[1])
    assert d["version"] == 1 and d["valid"]
    d = json.loads(run(capsys, "farey", "--row", "1", "--format", "json")[1])
    assert d["version"] == 1 and d["cells"] == [[0, 1], [1, 1]]


def test_text_output_stable(capsys):
    a = run(capsys, "check", str(fixture_path("Q")), "-v")[1]
    b = run(capsys, "check", str(fixture_path("Q")), "-v")[1]
    assert a == b


def test_manifest(capsys):
    d = json.loads(run(capsys, "manifest", "--system", "N")[1])
    assert d["system"] == "N"


def test_errata_check(capsys):
    code, out, _ = run(capsys, "errata", "--check")
    assert code == 0


def test_soundness_small(capsys):
    code, out, _ = run(capsys, "soundness", "--system", "N", "--n", "20", "--format", "json")
    d = json.loads(out)
    assert d["accepted"] == d["steps"] == 20


def test_plots(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    f, c = tmp_path / "farey.png", tmp_path / "cf.png"
    assert run(capsys, "farey", "--row", "4", "--plot", str(f))[0] == 0
    assert run(capsys, "cf", "digits", "sqrt2", "--n", "8", "--plot", str(c))[0] == 0
    assert f.stat().st_size > 0 and c.stat().st_size > 0


def test_precision_flag(capsys):
    out = run(capsys, "eval", "[[1+1]---[1+1]]", "--precision", "200", "--digits", "40")[1]
    assert out.strip() == "1.4142135623730950488016887242096980785696"
