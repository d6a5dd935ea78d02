"""
Report serialization and export.

JSON reports are written with sorted keys, a fixed indent and a trailing
newline so that identical invocations produce identical bytes. Tabular
reports (lists of flat records) can also be exported with pandas.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Union

import pandas as pd

from ..errors import InputError


logger = logging.getLogger(__name__)

TABLE_SUFFIXES = {"csv": ".csv", "excel": ".xlsx", "ods": ".ods"}


def to_json(report: Any, indent: int = 2) -> str:
    return json.dumps(report, indent=indent, sort_keys=True, ensure_ascii=False) + "\n"


def records_to_dataframe(records: Sequence[Mapping[str, Any]]) -> pd.DataFrame:
    """One row per record; nested values are stored as compact JSON strings."""
    rows = []
    for record in records:
        rows.append({key: (json.dumps(value, sort_keys=True)
                           if isinstance(value, (list, dict)) else value)
                     for key, value in record.items()})
    return pd.DataFrame(rows)


def export_results(report: Any, output_path: Union[str, Path], format: str = "json",
                   indent: int = 2) -> None:
    """
    Export a report to file.

    Args:
        report: JSON-compatible report; for csv/excel/ods either a list of
            records or a dict holding one under "rows"
        output_path: Path for output file
        format: Output format ('json', 'csv', 'excel', 'ods')
        indent: JSON indent
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fmt = format.lower()

    if fmt == "json":
        output_path.write_text(to_json(report, indent))
        logger.info(f"Exported report to {output_path}")
        return
    if fmt not in TABLE_SUFFIXES:
        raise InputError(f"Unsupported format: {format}")

    records = report.get("rows") if isinstance(report, dict) else report
    if not isinstance(records, list):
        records = [report]
    df = records_to_dataframe(records)
    if fmt == "csv":
        df.to_csv(output_path, index=False)
    elif fmt == "excel":
        df.to_excel(output_path, index=False, engine="openpyxl")
    else:
        df.to_excel(output_path, index=False, engine="odf")
    logger.info(f"Exported {len(df)} rows to {output_path}")


def generate_report(command: str, inputs: List[str], result: Mapping[str, Any]) -> Dict[str, Any]:
    """Wrap a command result with the command name and its inputs."""
    report: Dict[str, Any] = {"command": command, "inputs": list(inputs)}
    report.update(result)
    return report


def summarize_checks(outcomes: Mapping[str, Sequence[bool]]) -> Dict[str, Dict[str, int]]:
    """Pass/fail counts per law for the randomized self-check."""
    return {law: {"passed": sum(1 for ok in results if ok),
                  "failed": sum(1 for ok in results if not ok)}
            for law, results in outcomes.items()}
