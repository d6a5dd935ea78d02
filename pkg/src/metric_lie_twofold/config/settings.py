"""
Configuration for the analysis commands.

Defaults can be overridden from a YAML file and, for a few keys, from the
command line.
"""

from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from ..errors import InputError


OUTPUT_FORMATS = ("json", "csv", "excel", "ods")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class AnalysisConfig:
    """Parameters of the orbit search, the randomized self-check and report output."""

    # Largest weight count m for the signed-permutation search (m! orders)
    orbit_bound: int = 8

    # Randomized self-check
    seed: int = 20240607
    selfcheck_instances: int = 25

    # Reports
    output_format: str = "json"
    json_indent: int = 2
    log_level: str = "INFO"

    # Whether isomorphic_family assembles and verifies (S, U, tau)
    emit_witnesses: bool = True

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.orbit_bound, int) or self.orbit_bound < 0:
            raise InputError(f"orbit_bound must be a non-negative integer: {self.orbit_bound!r}",
                             field="orbit_bound")
        if not isinstance(self.selfcheck_instances, int) or self.selfcheck_instances < 1:
            raise InputError("selfcheck_instances must be a positive integer",
                             field="selfcheck_instances")
        if self.output_format not in OUTPUT_FORMATS:
            raise InputError(f"unsupported output format {self.output_format!r}; "
                             f"choose from {', '.join(OUTPUT_FORMATS)}", field="output_format")
        if str(self.log_level).upper() not in LOG_LEVELS:
            raise InputError(f"unknown log level {self.log_level!r}", field="log_level")

    @classmethod
    def load_from_file(cls, config_path: Union[str, Path]) -> "AnalysisConfig":
        """
        Load configuration from a YAML file.

        Raises:
            FileNotFoundError: if the file does not exist
            InputError: for malformed YAML or unknown keys
        """
        config_path = Path(config_path)
        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        with open(config_path, "r") as f:
            try:
                config_data = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                mark = getattr(e, "problem_mark", None)
                raise InputError(f"invalid YAML: {e}", source=str(config_path),
                                 line=mark.line + 1 if mark is not None else None) from None
        if not isinstance(config_data, dict):
            raise InputError("configuration must be a mapping", source=str(config_path))
        known = {f.name for f in fields(cls)}
        for key in config_data:
            if key not in known:
                raise InputError(f"unknown configuration key {key!r}", source=str(config_path),
                                 field=str(key))
        return cls(**config_data)

    def save_to_file(self, config_path: Union[str, Path]) -> None:
        """Save configuration to a YAML file."""
        with open(config_path, "w") as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def override(self, **values: Any) -> "AnalysisConfig":
        """Copy with the given keys replaced; None values are ignored."""
        current = self.to_dict()
        current.update({k: v for k, v in values.items() if v is not None})
        return AnalysisConfig(**current)
