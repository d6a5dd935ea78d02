from fractions import Fraction

import pytest

from metric_lie_twofold.algebra.linalg import equal
from metric_lie_twofold.data_loaders.codec import algebra_from_dict, algebra_to_dict
from metric_lie_twofold.data_loaders.json_loader import JsonLoader
from metric_lie_twofold.errors import InputError
from metric_lie_twofold.processors.families import sl2_killing

from conftest import EXAMPLES


@pytest.fixture
def loader():
    return JsonLoader()


def test_example_files_load(loader):
    assert loader.load_algebra(EXAMPLES / "heisenberg_oscillator.json").dim == 4
    assert loader.load_algebra(EXAMPLES / "abelian_r2.json").dim == 2
    data = loader.load_twofold(EXAMPLES / "osc_l1_m1.json")
    assert (data.l, data.a) == (1, 2)
    assert loader.load_family(EXAMPLES / "d_omega.json").row == "l2-k1"
    assert loader.load_family(EXAMPLES / "osc_123.json").m == 3
    assert loader.load_family(EXAMPLES / "sl2.json").family == "sl2"


def test_load_cochain(loader, oscillator):
    tau = loader.load_cochain(EXAMPLES / "tau_l1.json", oscillator.rep, degree=1)
    assert list(tau.value((0,))) == [1, Fraction(1, 2)]
    with pytest.raises(InputError, match="expected degree 2"):
        loader.load_cochain(EXAMPLES / "tau_l1.json", oscillator.rep, degree=2)


def test_missing_key_names_field_and_line(loader, write_json):
    path = write_json("algebra.json", {"dim": 2, "gram": [["1", "0"], ["0", "1"]],
                                       "brackets": [{"i": 0, "v": ["0", "0"]}]})
    with pytest.raises(InputError, match="missing key 'j'") as info:
        loader.load_algebra(path)
    assert info.value.field == "brackets[0].j"
    assert info.value.source == str(path)
    assert info.value.line is not None


def test_floats_are_rejected(loader, write_json):
    path = write_json("algebra.json", {"dim": 1, "gram": [[0.5]], "brackets": []})
    with pytest.raises(InputError, match="not an exact rational") as info:
        loader.load_algebra(path)
    assert info.value.field == "gram[0][0]"


def test_bracket_indices_are_checked(loader, write_json):
    gram = [["1", "0"], ["0", "1"]]
    path = write_json("outside.json", {"dim": 2, "gram": gram,
                                       "brackets": [{"i": 0, "j": 2, "v": ["0", "0"]}]})
    with pytest.raises(InputError, match="0..1"):
        loader.load_algebra(path)
    entry = {"i": 0, "j": 1, "v": ["0", "0"]}
    path = write_json("twice.json", {"dim": 2, "gram": gram, "brackets": [entry, entry]})
    with pytest.raises(InputError, match="listed twice"):
        loader.load_algebra(path)


def test_family_fields_must_agree(loader, write_json):
    path = write_json("family.json", {"family": "osc", "m": 3, "lambda": [["1"], ["2"]]})
    with pytest.raises(InputError, match="disagrees") as info:
        loader.load_family(path)
    assert info.value.field == "m"
    path = write_json("unknown.json", {"family": "heisenberg", "lambda": [["1"]]})
    with pytest.raises(InputError) as info:
        loader.load_family(path)
    assert info.value.field == "family"


def test_invalid_json_reports_line(loader, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dim": 2,\n  "gram": [\n}\n')
    with pytest.raises(InputError, match="invalid JSON") as info:
        loader.read(path)
    assert info.value.line == 4


def test_missing_file(loader, tmp_path):
    with pytest.raises(FileNotFoundError):
        loader.load_twofold(tmp_path / "absent.json")


def test_witness_blocks_have_rep_width(loader, write_json, oscillator):
    path = write_json("witness.json", {"a1": [["1"]], "a2": [], "l1": [], "l2": [["1"]],
                                       "T1": [], "T2": []})
    with pytest.raises(InputError) as info:
        loader.load_witness(path, oscillator.rep)
    assert info.value.field == "a1[0]"


def test_algebra_dict_round_trip():
    g = sl2_killing(-1)
    parsed = algebra_from_dict(algebra_to_dict(g))
    assert equal(parsed.structure, g.structure)
    assert equal(parsed.gram, g.gram)
    assert parsed.labels == ["H", "E", "F"]


def test_reversed_bracket_is_extended_antisymmetrically(loader, write_json):
    gram = [["0", "1"], ["1", "0"]]
    path = write_json("reversed.json", {"dim": 2, "gram": gram,
                                        "brackets": [{"i": 1, "j": 0, "v": ["1", "0"]}]})
    g = loader.load_algebra(path)
    assert g.structure[1, 0, 0] == 1
    assert g.structure[0, 1, 0] == -1


def test_error_line_follows_field_path(loader, tmp_path):
    path = tmp_path / "algebra.json"
    path.write_text('{\n'
                    '  "dim": 2,\n'
                    '  "gram": [["1", "0"], ["0", "1"]],\n'
                    '  "brackets": [\n'
                    '    {"i": 0, "j": 1, "v": ["0", "0"]},\n'
                    '    {"i": 1, "j": 0, "v": ["0", "x"]}\n'
                    '  ]\n'
                    '}\n')
    with pytest.raises(InputError) as info:
        loader.load_algebra(path)
    assert info.value.field == "brackets[1].v[1]"
    assert info.value.line == 6


def test_repeated_key_cites_the_value_json_keeps(loader, tmp_path):
    path = tmp_path / "algebra.json"
    path.write_text('{\n'
                    '  "dim": 2,\n'
                    '  "gram": [["1", "0"], ["0", "1"]],\n'
                    '  "brackets": [{"i": 0, "j": 1,\n'
                    '                "v": ["0", "0"],\n'
                    '                "v": ["0", 0.5]}]\n'
                    '}\n')
    with pytest.raises(InputError, match="not an exact rational") as info:
        loader.load_algebra(path)
    assert info.value.line == 6
