"""CLI subcommands via the in-process client."""

import json

import pytest
from click.testing import CliRunner

from rlw.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _run(runner, args, code=0):
    result = runner.invoke(main, args)
    assert result.exit_code == code, result.output
    return result


def test_number_gr(runner):
    result = _run(
        runner,
        ["number", "gr", "--q", "fork", "--p", "chain:2", "--k", "3", "--window", "2:4"],
    )
    assert "GR value: 3" in result.output


def test_number_r_json(runner):
    result = _run(
        runner, ["--json", "number", "r", "--p", "chain:2", "--k", "3", "--n-max", "4"]
    )
    doc = json.loads(result.output)
    assert doc["result"]["value"] == 3


def test_gst_verified(runner):
    result = _run(runner, ["gst", "--v", "2", "--n", "3", "--verify"])
    assert "2, verified" in result.output


def test_generate_classify_verify_round_trip(runner, tmp_path):
    doc_path = tmp_path / "gen.json"
    _run(
        runner,
        [
            "generate",
            "Type2",
            "--n",
            "4",
            "--x0",
            "{1}",
            "--y0",
            "{1,2,3}",
            "--out",
            str(doc_path),
        ],
    )
    doc = json.loads(doc_path.read_text())
    color_path = tmp_path / "coloring.json"
    color_path.write_text(json.dumps(doc["witnesses"][0]["coloring"]))

    result = _run(runner, ["classify", "b2", "--coloring", str(color_path)])
    assert "Type2" in result.output

    result = _run(runner, ["verify", str(doc_path)])
    assert "OK" in result.output


def test_verify_detects_tampering(runner, tmp_path):
    doc_path = tmp_path / "doc.json"
    _run(
        runner,
        ["generate", "Type1", "--n", "4", "--x0", "{1}", "--y0", "{1,2,3}",
         "--out", str(doc_path)],
    )
    doc = json.loads(doc_path.read_text())
    colors = doc["witnesses"][0]["coloring"]["colors"]
    colors[1] = colors[1] % doc["witnesses"][0]["coloring"]["k"] + 1
    doc_path.write_text(json.dumps(doc))
    _run(runner, ["verify", str(doc_path)], code=1)


def test_search_exit_codes(runner):
    # Found -> 0.
    _run(
        runner,
        ["search", "--n", "2", "--rainbow", "chain:3", "--palette", "exact", "--k", "3"],
    )
    # Budget exhausted -> 2.
    result = runner.invoke(
        main,
        [
            "search",
            "--n", "3",
            "--rainbow", "boolean:2",
            "--palette", "exact",
            "--k", "4",
            "--budget", "2",
        ],
    )
    assert result.exit_code == 2, result.output


def test_extremal_commands(runner):
    assert "lubell = 1" in _run(
        runner, ["lubell", "--n", "3", "--family", "{1},{2},{3}"]
    ).output
    assert "lu_max = 2" in _run(runner, ["lu", "--n", "3", "--p", "chain:3"]).output
    assert "e = 2" in _run(runner, ["e", "--p", "chain:3"]).output
    assert "g = 1" in _run(runner, ["g", "--q", "fork"]).output
    caps = _run(runner, ["caps", "--n", "3"]).output
    assert "4" in caps and "7" in caps


def test_construct_and_blob(runner):
    out = _run(runner, ["--json", "construct", "gr-c3", "--s", "3", "--k", "3"]).output
    doc = json.loads(out)
    assert doc["coloring"]["colors"] == [1, 2, 3, 1]
    out = _run(runner, ["blob", "--m", "2", "--n0", "1"]).output
    assert "n = 4" in out


def test_claim_command(runner):
    result = _run(runner, ["claim", "Thm4_2", "--params", '{"v": 1, "n": 2}'])
    assert "pass" in result.output
    result = _run(
        runner, ["--json", "claim", "Thm1_7", "--params", '{"e": 1}', "--formula-only"]
    )
    assert json.loads(result.output)["value"] == 3


def test_dimacs_round_trip(runner, tmp_path):
    cnf_path = tmp_path / "out.cnf"
    _run(
        runner,
        ["dimacs", "export", "--n", "2", "--rainbow", "chain:3",
         "--palette", "exact", "--k", "3", "--out", str(cnf_path)],
    )
    text = cnf_path.read_text()
    assert "p cnf" in text and "c spec-sha256:" in text

    from rlw import export_dimacs, solve_cnf
    from rlw.documents import spec_from_json

    spec = {"n": 2, "rainbow": "chain:3", "palette": "exact", "k": 3}
    doc = export_dimacs(spec_from_json(spec))
    model = solve_cnf(doc.num_vars, doc.clauses)
    model_path = tmp_path / "model.txt"
    model_path.write_text("v " + " ".join(str(lit) for lit in model) + " 0")
    result = _run(
        runner,
        ["dimacs", "decode", "--n", "2", "--rainbow", "chain:3",
         "--palette", "exact", "--k", "3", "--model", str(model_path)],
    )
    assert "accepted: True" in result.output


def test_usage_errors_exit_one(runner):
    result = runner.invoke(
        main, ["number", "gr", "--q", "fork", "--p", "chain:2", "--k", "3",
               "--window", "oops"]
    )
    assert result.exit_code == 1
    result = runner.invoke(main, ["search", "--n", "30", "--rainbow", "chain:3"])
    assert result.exit_code == 1
