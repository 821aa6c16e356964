import json

import pytest

from affsl2.cli import UsageError, main, parse_expression
from affsl2.exact import Q
from affsl2.harness import CheckRecord, Report


@pytest.fixture
def universal_params(tmp_path):
    path = tmp_path / "v231.json"
    path.write_text(
        json.dumps({"module": "universal", "lam": "2", "mu": "3", "kappa": "1"})
    )
    return str(path)


@pytest.fixture
def critical_level_params(tmp_path):
    path = tmp_path / "v23m2.json"
    path.write_text(
        json.dumps({"module": "universal", "lam": "2", "mu": "3", "kappa": "-2"})
    )
    return str(path)


@pytest.fixture
def wakimoto_params(tmp_path):
    path = tmp_path / "wak.json"
    path.write_text(
        json.dumps(
            {
                "module": "wakimoto",
                "lam": "2",
                "mu": "3",
                "kappa": "1",
                "chi": {"convention": "weight1", "coeffs": {"0": "5", "1": "7"}},
            }
        )
    )
    return str(path)


def test_parse_expression_word_and_scalar():
    scalar, word = parse_expression("3/2 e(0) f(-1) astar(2)")
    assert scalar == Q(3, 2)
    assert word == (("e", 0), ("f", -1), ("astar", 2))


def test_parse_expression_all_token_families():
    text = "e(1) f(1) h(1) L(1) T(1) d phi(1) a(1) ainv(1) astar(1)"
    _, word = parse_expression(text)
    assert word[5] == ("d", 0)
    assert len(word) == 10


def test_parse_expression_scalars_multiply():
    scalar, word = parse_expression("2 1/3 -1 h(0)")
    assert scalar == Q(-2, 3)
    assert word == (("h", 0),)


def test_parse_expression_empty_is_identity():
    scalar, word = parse_expression("")
    assert scalar == Q(1)
    assert word == ()


def test_parse_expression_error_carries_position():
    with pytest.raises(UsageError, match="position 5"):
        parse_expression("e(0) q(1)")
    with pytest.raises(UsageError, match="position 0"):
        parse_expression("e(x)")
    # L is an operator family, not a bare token
    with pytest.raises(UsageError):
        parse_expression("L")


def test_act_eigenvalue(universal_params, capsys):
    code = main(["act", "--expr", "e(0)", "--params", universal_params, "--pretty"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "2·w"


def test_act_product_pretty(universal_params, capsys):
    code = main(
        ["act", "--expr", "f(1) h(0)", "--params", universal_params, "--pretty"]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == "3·h(0)·w + 6·w"


def test_act_product_json(universal_params, capsys):
    code = main(["act", "--expr", "f(1) h(0)", "--params", universal_params])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["expr"] == "f(1) h(0)"
    assert payload["module"] == "universal"
    assert payload["vector"] == {"h(0)·w": "3", "w": "6"}


def test_act_central_field_fallback(critical_level_params, capsys):
    code = main(
        ["act", "--expr", "T(1)", "--params", critical_level_params, "--pretty"]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == "6·w"


def test_act_energy_field_fallback(universal_params, capsys):
    code = main(["act", "--expr", "L(1)", "--params", universal_params, "--pretty"])
    assert code == 0
    # lam * mu / (kappa + 2) = 6/3
    assert capsys.readouterr().out.strip() == "2·w"


def test_act_energy_field_rejected_at_critical_level(critical_level_params, capsys):
    code = main(
        ["act", "--expr", "L(1)", "--params", critical_level_params, "--pretty"]
    )
    assert code == 2
    assert "not supported" in capsys.readouterr().err


def test_act_zero_vector_prints_zero(universal_params, capsys):
    code = main(["act", "--expr", "f(3)", "--params", universal_params, "--pretty"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0"


def test_act_pbw_word_label(universal_params, capsys):
    code = main(
        ["act", "--expr", "h(-1) h(-1) h(-1)", "--params", universal_params,
         "--pretty"]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == "1·h(-1)·h(-1)·h(-1)·w"


def test_act_weyl_labels_and_signs(wakimoto_params, capsys):
    code = main(["act", "--expr", "f(1)", "--params", wakimoto_params, "--pretty"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "-9·a(-1)·w - 5·astar(0)·w + 12·w"


def test_act_scalar_prefactor(universal_params, capsys):
    code = main(["act", "--expr", "2 1/3 e(0)", "--params", universal_params,
                 "--pretty"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "4/3·w"


def test_act_unknown_token_exits_2(universal_params, capsys):
    code = main(["act", "--expr", "q(1)", "--params", universal_params])
    assert code == 2
    assert "parse error" in capsys.readouterr().err


def test_act_unsupported_symbol_exits_2(universal_params, capsys):
    code = main(["act", "--expr", "d", "--params", universal_params])
    assert code == 2
    assert "not supported" in capsys.readouterr().err


def test_act_missing_params_file_exits_2(tmp_path, capsys):
    code = main(
        ["act", "--expr", "e(0)", "--params", str(tmp_path / "nope.json")]
    )
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_act_invalid_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code = main(["act", "--expr", "e(0)", "--params", str(path)])
    assert code == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_act_unknown_module_kind_exits_2(tmp_path, capsys):
    path = tmp_path / "zeta.json"
    path.write_text(json.dumps({"module": "zeta"}))
    code = main(["act", "--expr", "e(0)", "--params", str(path)])
    assert code == 2
    assert "invalid module parameters" in capsys.readouterr().err


def test_kernel_dimension_one(universal_params, capsys):
    code = main(["kernel", "--params", universal_params, "--box", "3,3"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == 1
    assert payload["basis"] == [{"w": "1"}]
    assert payload["eta"] == ["2", "3"]
    assert payload["box"] == [3, 3]


def test_kernel_eta_override(universal_params, capsys):
    code = main(
        ["kernel", "--params", universal_params, "--box", "3,3", "--eta", "1,1"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == 0
    assert payload["basis"] == []


def test_kernel_bad_box_exits_2(universal_params, capsys):
    code = main(["kernel", "--params", universal_params, "--box", "4"])
    assert code == 2
    assert "--box wants" in capsys.readouterr().err


def test_kernel_bad_eta_exits_2(universal_params, capsys):
    code = main(
        ["kernel", "--params", universal_params, "--box", "2,2", "--eta", "x,y"]
    )
    assert code == 2
    assert "--eta wants" in capsys.readouterr().err


def test_kernel_needs_sorted_word_module(wakimoto_params, capsys):
    code = main(["kernel", "--params", wakimoto_params, "--box", "2,2"])
    assert code == 2
    assert "sorted-word basis" in capsys.readouterr().err


def test_verify_writes_report_and_exits_0(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["verify", "--suite", "grading", "--box", "2,2", "--seed", "0",
         "--out", str(out)]
    )
    assert code == 0
    on_disk = json.loads(out.read_text())
    printed = json.loads(capsys.readouterr().out)
    assert on_disk == printed
    assert on_disk["ok"] is True
    assert on_disk["suite"] == "grading"
    assert all(c["status"] == "pass" for c in on_disk["checks"])


def test_verify_pretty_table(capsys):
    code = main(["verify", "--suite", "grading", "--box", "2,2", "--pretty"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("all checks pass")
    assert out.count("pass") >= 3


def test_verify_unknown_suite_exits_2(capsys):
    code = main(["verify", "--suite", "bogus"])
    assert code == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_failing_report_exits_1(monkeypatch, capsys):
    failing = Report(
        suite="grading",
        seed=0,
        coefficient_pool=[0],
        checks=[CheckRecord("x", "y", "fail", residual={"w": "1"})],
        ok=False,
    )
    monkeypatch.setattr("affsl2.cli.run_suites", lambda config: failing)
    code = main(["verify", "--suite", "grading"])
    assert code == 1
    assert json.loads(capsys.readouterr().out)["ok"] is False


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_missing_subcommand_exits_2(capsys):
    assert main([]) == 2
    capsys.readouterr()
