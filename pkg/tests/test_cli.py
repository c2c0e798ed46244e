import json

from src.main import EXIT_ARGUMENT, EXIT_CAPACITY, EXIT_OK, main


def test_idxset_csv(capsys):
    assert main(["idxset", "--n", "2", "--gen", "full", "--m", "2"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# config: ")
    assert "# cardinality: 3" in lines
    body = [line for line in lines if not line.startswith("#")]
    assert len(body) == 4


def test_bad_members(capsys):
    code = main(["idxset", "--n", "2", "--gen", "explicit", "--members", "a,b"])
    assert code == EXIT_ARGUMENT
    assert capsys.readouterr().err.startswith("error: ArgumentError")


def test_suite_above_desk_degree(capsys):
    code = main(["lorentz-suite", "--m", "5", "--n", "8", "--r", "2", "--s", "2"])
    assert code == EXIT_CAPACITY
    assert "CapacityError" in capsys.readouterr().err


def test_constants_json(capsys):
    assert main(["--format", "json", "constants", "--lebesgue", "1"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    values = {row["name"]: row["value"] for row in document["rows"]}
    assert abs(values["lebesgue"] - 1.4359911) < 1e-6
    assert document["failures"] == []


def test_output_is_reproducible(capsys):
    argv = ["--budget", "8,100", "--seed", "5", "chimon", "--n", "2", "--m", "2", "--p", "inf"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_output_file(tmp_path, capsys):
    target = tmp_path / "char.csv"
    assert main(["--output", str(target), "char", "--n", "2", "--m", "2", "--p", "1"]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert "alpha,lattice,lo,hi" in target.read_text()


def test_constants_closed_projection_rows(capsys):
    assert main(["--format", "json", "constants", "--rw-m", "1..3", "--rw-n", "2"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)["rows"]
    names = [row["name"] for row in rows]
    assert names.count("rw_projection") == 3
    assert names.count("two_pow_n_minus_1") == 3
    values = {(row["name"], row["args"]): row["value"] for row in rows}
    assert abs(values[("rw_projection", "m=2,n=2")] - 1.5) < 1e-12
