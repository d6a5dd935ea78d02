import json

import pandas as pd
import pytest

from metric_lie_twofold.errors import InputError
from metric_lie_twofold.utils.data_utils import (
    export_results, generate_report, records_to_dataframe, summarize_checks, to_json,
)


RECORDS = [
    {"row": "l1-k0", "m": 1, "regular": True, "lambda": [["1"]]},
    {"row": "l1-k0", "m": 2, "regular": True, "lambda": [["1"], ["2"]]},
]


def test_json_is_sorted_with_trailing_newline():
    text = to_json({"b": 1, "a": [1, 2]})
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": 1}


def test_nested_values_become_json_strings():
    df = records_to_dataframe(RECORDS)
    assert list(df.columns) == ["row", "m", "regular", "lambda"]
    assert df.loc[1, "lambda"] == '[["1"], ["2"]]'


def test_export_json(tmp_path):
    path = tmp_path / "out" / "report.json"
    export_results({"rows": RECORDS}, path, "json", indent=2)
    assert json.loads(path.read_text()) == {"rows": RECORDS}


def test_export_csv_reads_rows(tmp_path):
    path = tmp_path / "report.csv"
    export_results({"command": "tabulate", "rows": RECORDS}, path, "csv")
    df = pd.read_csv(path)
    assert len(df) == 2
    assert list(df["m"]) == [1, 2]


@pytest.mark.parametrize("fmt, suffix", [("excel", ".xlsx"), ("ods", ".ods")])
def test_export_spreadsheets(tmp_path, fmt, suffix):
    path = tmp_path / f"report{suffix}"
    export_results(RECORDS, path, fmt)
    assert path.exists()
    assert path.stat().st_size > 0


def test_single_result_is_one_row(tmp_path):
    path = tmp_path / "report.csv"
    export_results({"command": "signature", "nullity": 0}, path, "csv")
    assert len(pd.read_csv(path)) == 1


def test_unsupported_format(tmp_path):
    with pytest.raises(InputError, match="Unsupported format"):
        export_results(RECORDS, tmp_path / "report.xml", "xml")


def test_generate_report():
    report = generate_report("regular", ["data.json"], {"regular": True})
    assert report == {"command": "regular", "inputs": ["data.json"], "regular": True}


def test_summarize_checks():
    summary = summarize_checks({"centre_law": [True, True, False], "complex_square": []})
    assert summary == {"centre_law": {"passed": 2, "failed": 1},
                       "complex_square": {"passed": 0, "failed": 0}}
