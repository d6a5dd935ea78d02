"""Utils subpackage initialization."""

from .data_utils import (
    to_json,
    records_to_dataframe,
    export_results,
    generate_report,
    summarize_checks
)

__all__ = [
    "to_json",
    "records_to_dataframe",
    "export_results",
    "generate_report",
    "summarize_checks"
]
