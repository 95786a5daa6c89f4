import json

import pytest

from poissoncoh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_model(capsys):
    code, out, _ = run(capsys, "validate", "--model", "blf-circle")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"structure", "operation", "parameters", "results", "engine_version"}
    assert doc["results"]["jacobi"] is True
    assert "reference" in doc["results"]


def test_validate_bad_input(tmp_path, capsys):
    f = tmp_path / "bad.poisson"
    f.write_text("coords(x0,x1,x2,x3)\ndx0^dx1 + x0*dx2^dx3\n")
    code, out, err = run(capsys, "validate", "--input", str(f))
    assert code == 1
    assert json.loads(out)["results"]["witness"] == "-2*dx1^dx2^dx3"
    assert "-2*dx1^dx2^dx3" in err


def test_cohomology_near_positive(capsys):
    code, out, _ = run(capsys, "cohomology", "--model", "near-positive", "--max-degree", "4",
                       "--format", "json")
    res = json.loads(out)["results"]
    assert code == 0
    assert res["dims"] == {"H0": [1, 0, 0, 0, 0], "H1": [2, 0, 0, 0, 0], "H2": [1, 0, 0, 0, 0],
                           "H3": [0] * 5, "H4": [0] * 5}
    assert res["representatives"]["H1_0"] == ["dx0", "dx2"]


def test_json_is_byte_stable(capsys):
    a = run(capsys, "report", "--model", "blf-circle", "--max-degree", "2")[1]
    b = run(capsys, "report", "--model", "blf-circle", "--max-degree", "2")[1]
    assert a == b


def test_markdown(capsys):
    code, out, _ = run(capsys, "cohomology", "--model", "sl2-dual", "--max-degree", "2",
                       "--format", "markdown")
    assert code == 0
    assert "| H0 | 1 | 0 | 1 |" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "modular", "--model", "near-positive", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"]["modular_field"] == "2*dx0"


def test_casimirs_and_fits(capsys):
    code, out, _ = run(capsys, "cohomology", "--model", "blf-circle", "--max-degree", "4",
                       "--casimir-degrees", "1,2", "--k-range", "0-1")
    fits = json.loads(out)["results"]["free_module_fits"]["fits"]
    assert fits["H0"]["rank"] == 1 and fits["H0"]["exact"]
    code, out, _ = run(capsys, "casimirs", "--model", "blf-circle", "--max-degree", "2")
    assert json.loads(out)["results"]["dims"] == [1, 1, 2]


def test_rank_sampling(capsys):
    code, out, _ = run(capsys, "rank", "--model", "near-positive", "--samples", "1")
    res = json.loads(out)["results"]
    assert res["points"] == 81
    assert res["near_positivity"]["all_nonnegative"] is True
    assert res["zero_locus_gradient_ranks"] == [2]
    code, out, _ = run(capsys, "rank", "--model", "near-positive", "--point", "0,1/2,0,0")
    assert json.loads(out)["results"]["ranks"][0]["rank"] == 4


def test_assemble(capsys):
    code, out, _ = run(capsys, "assemble", "--kind", "near-positive", "--betti", "1,0,1,0,1",
                       "--circles", "1")
    assert json.loads(out)["results"]["dims"] == {"H0": 1, "H1": 2, "H2": 2, "H3": 0, "H4": 1}
    code, out, _ = run(capsys, "assemble", "--kind", "blf", "--circles", "2", "--points", "3",
                       "--max-degree", "0")
    assert json.loads(out)["results"]["dims"]["H0"] == {"0": 5}


def test_models_listing(capsys):
    code, out, _ = run(capsys, "models")
    assert code == 0
    assert len(json.loads(out)["results"]["models"]) == 8


@pytest.mark.parametrize("argv", [
    ["validate"],
    ["validate", "--model", "nope"],
    ["frobnicate"],
    ["cohomology", "--model", "near-positive", "--max-degree", "-1"],
    ["cohomology", "--model", "near-positive", "--k-range", "7"],
    ["assemble", "--kind", "near-positive"],
    ["validate", "--input", "/nonexistent.poisson"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "e.poisson"
    f.write_text("coords(x) dx^")
    code, out, err = run(capsys, "validate", "--input", str(f))
    assert code == 2 and "column 13" in err
