import json

import pytest

from rotabasis import config
from rotabasis.main import OPERATIONS, build_parser, run


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def e2_file(write_json):
    return write_json("e2.json", {"order": 2, "dim": 2, "entries": [{"i": [1, 2], "v": "1"}, {"i": [2, 1], "v": -1}]})


@pytest.fixture
def identity_bases_file(write_json):
    identity = {"cols": [[1, 0], [0, 1]]}
    return write_json("bases.json", {"n": 2, "bases": [identity, identity]})


def test_bound(capsys):
    assert run(["bound", "--d", "2", "--n", "1"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_invariant_of_e2(capsys, e2_file, write_json):
    perms = write_json("perms.json", {"perms": [[1, 2], [1, 2]]})
    assert run(["invariant", "--tensor", e2_file, "--M", "2", "--perms", perms]) == 0
    assert capsys.readouterr().out == "2\n"
    assert run(["invariant", "--tensor", e2_file, "--M", "2", "--perms", perms, "--method", "naive"]) == 0
    assert capsys.readouterr().out == "2\n"


def test_levi_civita_output_is_sorted_json(capsys):
    assert run(["lc", "--n", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"dim": 2, "entries": [{"i": [1, 2], "v": "1"}, {"i": [2, 1], "v": "-1"}], "order": 2}


def test_degenerate_arrangement_fails_with_a_column_diagnostic(capsys, identity_bases_file, write_json):
    grid = write_json("grid.json", {"n": 2, "M": 2, "grid": [[1, 2], [1, 2]]})
    assert run(["verify", "--bases", identity_bases_file, "--arrangement", grid]) == 1
    captured = capsys.readouterr()
    assert captured.out == "false\n"
    assert "column 1 [1, 1] is not a basis" in captured.err


def test_rota_output_verifies(capsys, write_json, tmp_path):
    bases = write_json(
        "bases.json",
        {"n": 3, "bases": [{"cols": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}, {"cols": [[1, 1, 0], [0, "1/2", 0], [2, 0, 1]]}, {"cols": [[1, 2, 3], [0, 1, 4], [0, 0, -1]]}]},
    )
    for strategy in ("direct", "invariant"):
        assert run(["rota", "--bases", bases, "--strategy", strategy]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n"] == 3 and payload["M"] == 3 * payload["ell"]
        assert ("witness" in payload) == (strategy == "invariant")
        arrangement = tmp_path / f"{strategy}.json"
        arrangement.write_text(json.dumps(payload), encoding="utf-8")
        assert run(["verify", "--bases", bases, "--arrangement", str(arrangement)]) == 0
        assert capsys.readouterr().out == "true\n"


def test_output_flag_writes_the_file(capsys, tmp_path):
    target = tmp_path / "out" / "e3.json"
    target.parent.mkdir()
    assert run(["--output", str(target), "lc", "--n", "3"]) == 0
    assert capsys.readouterr().out == ""
    assert len(json.loads(target.read_text(encoding="utf-8"))["entries"]) == 6


def test_slice_rank_command(capsys, e2_file):
    assert run(["slicerank", "--tensor", e2_file]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2


def test_decomposition_round_trip(capsys, e2_file, tmp_path):
    assert run(["decompose", "--tensor", e2_file]) == 0
    dec = tmp_path / "dec.json"
    dec.write_text(capsys.readouterr().out, encoding="utf-8")
    assert run(["verifydec", "--tensor", e2_file, "--decomposition", str(dec)]) == 0
    assert capsys.readouterr().out == "true\n"


def test_identity_checks(capsys, identity_bases_file, write_json):
    assert run(["transpose", "--bases", identity_bases_file]) == 0
    assert capsys.readouterr().out == "true\n"
    mats = write_json("mats.json", {"mats": [{"cols": [[2, 1], [0, 1]]}, {"cols": [[1, 0], ["1/3", 1]]}]})
    assert run(["basischange", "--a", mats, "--b", mats]) == 0
    assert capsys.readouterr().out == "true\n"


def test_atdiff(capsys):
    assert run(["atdiff", "--n", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"n": 3, "total": 12, "even": 6, "odd": 6, "difference": 0}


def test_scalar_commands(capsys):
    assert run(["sign", "--perm", "2,1,3"]) == 0
    assert capsys.readouterr().out == "-1\n"
    assert run(["shift", "--n", "3", "--index", "3,1"]) == 0
    assert json.loads(capsys.readouterr().out) == [1, 2]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["bound", "--d", "2"],
        ["bound", "--d", "two", "--n", "1"],
        ["sign", "--perm", "1,x"],
        ["--threads", "0", "bound", "--d", "2", "--n", "1"],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(argv) == 2


def test_unknown_strategy_is_a_usage_error(identity_bases_file):
    assert run(["rota", "--bases", identity_bases_file, "--strategy", "greedy"]) == 2


def test_invalid_inputs_exit_three(write_json, tmp_path, e2_file):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert run(["det", "--matrix", str(broken)]) == 3
    assert run(["det", "--matrix", str(tmp_path / "missing.json")]) == 3
    singular = write_json("singular.json", {"n": 2, "bases": [{"cols": [[1, 2], [2, 4]]}, {"cols": [[1, 0], [0, 1]]}]})
    assert run(["rota", "--bases", singular]) == 3
    wrong_shape = write_json("shape.json", {"order": 2, "dim": 2, "entries": "none"})
    assert run(["lowerbound", "--tensor", wrong_shape]) == 3
    perms = write_json("perms.json", {"perms": [[1, 2, 3], [1, 2, 3]]})
    assert run(["invariant", "--tensor", e2_file, "--M", "3", "--perms", perms]) == 3


def test_resource_guards_exit_four(monkeypatch, write_json, e2_file):
    assert run(["atdiff", "--n", "6"]) == 4
    monkeypatch.setattr(config, "TERM_CAP", 2)
    perms = write_json("perms.json", {"perms": [[1, 2], [1, 2]]})
    assert run(["invariant", "--tensor", e2_file, "--M", "2", "--perms", perms]) == 4


def test_semistable_output_is_independent_of_thread_count(capsys, e2_file):
    outputs = []
    for threads in ("1", "2"):
        argv = ["--threads", threads, "semistable", "--tensor", e2_file, "--max-M", "4", "--strategy", "random-sample", "--budget", "5", "--seed", "3"]
        assert run(argv) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])["status"] == "certified"


def test_every_operation_has_one_subcommand():
    assert set(OPERATIONS) == {
        "perm_sign", "levi_civita_symbol", "levi_civita_tensor", "multilinear_product", "tensor_product",
        "tensor_power", "determinant", "matrix_rank", "trivial_decomposition", "verify_slice_decomposition",
        "is_antichain", "antichain_slice_rank", "cyclic_shift", "diagonal_certificate_for_power",
        "diagonal_lower_bound", "instability_witness", "block_sign", "evaluate_invariant", "naive_invariant",
        "check_relative_invariance", "semistability_search", "canonicalize_perm_tuple", "degree_bound",
        "multiplicity_bound", "alon_tarsi_difference", "determinantal_tensor", "check_transpose_action",
        "check_change_of_basis_rule", "solve_rota", "verify_arrangement",
    }
    subparsers = build_parser()._subparsers._group_actions[0].choices
    assert set(OPERATIONS.values()) == set(subparsers)


def test_malformed_columns_exit_three(write_json, e2_file):
    scalar_cols = write_json("scalar.json", {"dim": 2, "cols": 5})
    assert run(["det", "--matrix", scalar_cols]) == 3
    scalar_column = write_json("bases.json", {"n": 2, "bases": [{"cols": [[1, 0], 7]}, {"cols": [[1, 0], [0, 1]]}]})
    assert run(["detensor", "--bases", scalar_column]) == 3
    residual = {"order": 2, "dim": 2, "entries": []}
    dec = write_json("dec.json", {"terms": [{"axis": 1, "vector": 5, "residual": residual}]})
    assert run(["verifydec", "--tensor", e2_file, "--decomposition", dec]) == 3


def test_unwritable_output_is_a_usage_error(tmp_path):
    target = tmp_path / "missing" / "e2.json"
    assert run(["--output", str(target), "lc", "--n", "2"]) == 2
    assert not target.exists()


def test_unknown_log_level_is_a_usage_error(monkeypatch):
    monkeypatch.setattr(config, "LOG_LEVEL", "NOPE")
    assert run(["bound", "--d", "2", "--n", "1"]) == 2


def test_invariant_output_is_independent_of_thread_count(capsys, tmp_path, write_json):
    e3 = tmp_path / "e3.json"
    assert run(["--output", str(e3), "lc", "--n", "3"]) == 0
    # 6^6 admissible terms, above the pool threshold
    perms = write_json("perms.json", {"perms": [[1, 2, 3, 4, 5, 6], [1, 4, 2, 5, 3, 6], [2, 3, 1, 5, 6, 4]]})
    outputs = []
    for threads in ("1", "2"):
        assert run(["--threads", threads, "invariant", "--tensor", str(e3), "--M", "6", "--perms", str(perms)]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
