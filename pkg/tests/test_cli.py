import json
import logging

import pandas as pd
import pytest

from metric_lie_twofold.cli import EXIT_INPUT, EXIT_OK, EXIT_UNSUPPORTED, main

from conftest import EXAMPLES


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logging.getLogger().handlers.clear()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_verify(capsys):
    path = EXAMPLES / "heisenberg_oscillator.json"
    code, report = run(capsys, "verify", path)
    assert code == EXIT_OK
    assert report["command"] == "verify"
    assert report["inputs"] == [str(path)]
    assert report["jacobi"] == "pass"
    assert report["passed"] is True


def test_abelian_algebra_reports(capsys):
    code, report = run(capsys, "verify", EXAMPLES / "abelian_r2.json")
    assert (code, report["jacobi"]) == (EXIT_OK, "pass")
    code, report = run(capsys, "derived", EXAMPLES / "abelian_r2.json")
    assert code == EXIT_OK
    assert report["abelian"] is True
    assert report["derived"]["dim"] == 0
    code, report = run(capsys, "signature", EXAMPLES / "abelian_r2.json")
    assert report["signature"] == [0, 2]


def test_centre_of_oscillator(capsys):
    code, report = run(capsys, "centre", EXAMPLES / "heisenberg_oscillator.json")
    assert code == EXIT_OK
    assert report["centre"]["dim"] == 1
    assert report["isotropic"] is True
    assert report["centre_law"] is True


def test_isomorphic_reordered_weights(capsys):
    code, report = run(capsys, "isomorphic", EXAMPLES / "osc_123.json",
                       EXAMPLES / "osc_132.json")
    assert code == EXIT_OK
    assert report["isomorphic"] is True
    assert report["witness"]["S"] == [["1"]]


def test_isomorphic_distinguishes_two_forms(capsys):
    code, report = run(capsys, "isomorphic", EXAMPLES / "d_omega.json",
                       EXAMPLES / "d_2omega.json")
    assert code == EXIT_OK
    assert report["isomorphic"] is False


def test_output_is_deterministic(capsys):
    args = ("isomorphic", EXAMPLES / "osc_123.json", EXAMPLES / "osc_132.json")
    main([str(a) for a in args])
    first = capsys.readouterr().out
    main([str(a) for a in args])
    assert capsys.readouterr().out == first
    assert first.endswith("\n")


def test_classify_index2(capsys):
    code, report = run(capsys, "classify-index2", EXAMPLES / "dA_21.json")
    assert code == EXIT_OK
    assert (report["case"], report["lambda"]) == (1, ["1", "2"])
    code, report = run(capsys, "classify-index2", EXAMPLES / "sl2.json")
    assert report["case"] == "simple"


def test_invariant_includes_stabilizer(capsys):
    code, report = run(capsys, "invariant", EXAMPLES / "d_omega.json")
    assert code == EXIT_OK
    assert report["row"] == "l2-k1"
    assert "group" in report["stabilizer"]


def test_build_family_sl2(capsys):
    code, report = run(capsys, "build-family", EXAMPLES / "sl2.json")
    assert code == EXIT_OK
    assert report["signature"] == [2, 1]


def test_build_family_member(capsys):
    code, report = run(capsys, "build-family", EXAMPLES / "d_omega.json")
    assert code == EXIT_OK
    assert report["admissible"] is True
    assert report["algebra"]["dim"] == 9


def test_build_then_extract_round_trip(capsys, tmp_path):
    data = EXAMPLES / "osc_l1_m1.json"
    code, report = run(capsys, "build", data)
    assert code == EXIT_OK
    assert report["signature"] == [1, 3]
    algebra = tmp_path / "algebra.json"
    algebra.write_text(json.dumps(report["algebra"]))
    code, report = run(capsys, "extract", algebra, "--against", data)
    assert code == EXIT_OK
    assert report["round_trip"]["equivalent"] is True
    assert report["round_trip"]["failures"] == []


def test_regular_and_equivalent(capsys):
    code, report = run(capsys, "regular", EXAMPLES / "l3_volume.json")
    assert code == EXIT_OK
    assert report["regular"] is True
    code, report = run(capsys, "regular", EXAMPLES / "l3_trivial.json")
    assert (report["regular"], report["nullity"]) == (False, 3)
    code, report = run(capsys, "equivalent", EXAMPLES / "l3_trivial.json",
                       EXAMPLES / "l3_volume.json")
    assert code == EXIT_OK
    assert report["equivalent"] is False


def test_act_and_decompose_check(capsys):
    code, report = run(capsys, "act", EXAMPLES / "osc_l1_m1.json", EXAMPLES / "tau_l1.json")
    assert code == EXIT_OK
    assert report["data"]["l"] == 1
    code, report = run(capsys, "decompose-check", EXAMPLES / "osc_l1_m1.json")
    assert code == EXIT_OK
    assert report["decomposable"] is False


def test_selfcheck(capsys):
    code, report = run(capsys, "selfcheck", "--count", 2, "--seed", 11)
    assert code == EXIT_OK
    assert report["instances"] == 2
    assert report["seed"] == 11
    assert report["passed"] is True
    assert all(entry["passed"] == 2 for entry in report["laws"].values())


def test_tabulate_to_csv(capsys, tmp_path):
    out = tmp_path / "table.csv"
    code, report = run(capsys, "tabulate", "--rows", "l1-k0", "l2-k1", "--m", 1, 2,
                       "--format", "csv", "--out", out)
    assert code == EXIT_OK
    assert report is None
    df = pd.read_csv(out)
    assert len(df) == 4
    assert set(df["row"]) == {"l1-k0", "l2-k1"}


def test_missing_file_is_input_error(capsys, tmp_path):
    code, report = run(capsys, "verify", tmp_path / "absent.json")
    assert code == EXIT_INPUT
    assert report is None


def test_malformed_json_is_input_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"dim\": 2,")
    assert run(capsys, "verify", path)[0] == EXIT_INPUT


def test_orbit_bound_is_unsupported_case(capsys, write_json):
    path = write_json("family.json", {"family": "osc",
                                      "lambda": [["1", "0"], ["0", "1"], ["1", "1"]]})
    code, report = run(capsys, "invariant", path, "--orbit-bound", 2)
    assert code == EXIT_UNSUPPORTED
    assert report is None


def test_tabular_format_needs_out(capsys):
    code, _ = run(capsys, "signature", EXAMPLES / "abelian_r2.json", "--format", "csv")
    assert code == EXIT_INPUT


def test_bad_config_is_input_error(capsys, tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text("orbit_bound: 3\nverbose: true\n")
    code, _ = run(capsys, "signature", EXAMPLES / "abelian_r2.json", "--config", config)
    assert code == EXIT_INPUT


@pytest.mark.parametrize("argv", [[], ["verify"], ["frobnicate"], ["tabulate", "--m", "x"]])
def test_bad_arguments(argv, capsys):
    assert main(argv) == EXIT_INPUT


INVARIANT_PARTS = {
    "l1-k0": ("osc", [[1], [2]], ["lambda"]),
    "l2-k0": ("osc", [[1, 0], [0, 1], [1, 1]], ["span"]),
    "l2-k1": ("d", [[1, 0], [0, 1]], ["span", "omega"]),
    "l3-k0-flat": ("table", [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], ["span"]),
    "l3-k0-volume": ("table", [[1, 0, 0], [0, 1, 0], [1, 1, 1]], ["span", "volume"]),
    "l3-k1": ("table", [[1, 0, 1], [0, 1, 1]], ["line", "quotient_span", "omega"]),
    "l3-k2": ("table", [[1, 2, 0], [0, 1, 1]], ["B", "v_outer"]),
    "l3-k3": ("table", [[1, 0, 0], [0, 2, 0]], ["gram"]),
    "dA": ("dA", [[2], [1]], ["lambda"]),
}


def only_strings(value):
    if isinstance(value, list):
        return all(only_strings(entry) for entry in value)
    return isinstance(value, str)


@pytest.mark.parametrize("row", sorted(INVARIANT_PARTS))
def test_invariant_report_shape_for_every_row(row, capsys, write_json):
    family, weights, parts = INVARIANT_PARTS[row]
    descriptor = {"family": family, "lambda": [[str(x) for x in w] for w in weights]}
    if family == "table":
        descriptor["row"] = row
    code, report = run(capsys, "invariant", write_json("family.json", descriptor))
    assert code == EXIT_OK
    assert report["row"] == row
    assert set(report["certificate"]) == {"perm", "signs"}
    for name in parts:
        assert only_strings(report[name]), name
    assert report["stabilizer"]["row"] == row


def test_classify_index2_reports_d_invariant(capsys, write_json):
    path = write_json("d.json", {"family": "d", "lambda": [["1", "0"], ["0", "1"]]})
    code, report = run(capsys, "classify-index2", path)
    assert (code, report["case"]) == (EXIT_OK, 3)
    assert report["invariant"]["omega"] == "1"
    assert report["invariant"]["span"] == [["1", "0"], ["0", "1"]]


def test_verify_reports_inconsistent_orders(capsys, write_json):
    gram = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    path = write_json("both.json", {"dim": 3, "gram": gram, "brackets": [
        {"i": 0, "j": 1, "v": ["0", "0", "1"]},
        {"i": 1, "j": 0, "v": ["0", "0", "1"]},
    ]})
    code, report = run(capsys, "verify", path)
    assert code == EXIT_OK
    assert report["antisymmetry"] == "fail"
    assert report["details"]["antisymmetry"]["first_failure"] == [0, 1]
    assert report["passed"] is False
