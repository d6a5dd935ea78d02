"""Shared fixtures: seeded generators, small twofold data and example files."""

import json
import shutil
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
import pytest

from metric_lie_twofold.algebra.cochain import Rep
from metric_lie_twofold.algebra.twofold import TwofoldData


ROOT = Path(__file__).resolve().parent.parent
EXAMPLES = ROOT / "configs" / "examples"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def examples_dir(tmp_path: Path) -> Path:
    """Copy of the example inputs in a temporary directory."""
    target = tmp_path / "examples"
    shutil.copytree(EXAMPLES, target)
    return target


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    def _write(name: str, payload: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload, indent=2))
        return path

    return _write


def rotation_data(weights: Any, fixed: int = 0, l: Optional[int] = None) -> TwofoldData:
    """Trivial twofold data on the rotation representation with the given weights."""
    return TwofoldData.trivial(Rep.from_weights(weights, fixed=fixed, l=l))


@pytest.fixture
def rotation() -> Callable[..., TwofoldData]:
    return rotation_data


@pytest.fixture
def oscillator() -> TwofoldData:
    """osc(1): l = 1 acting on one plane with weight 1."""
    return rotation_data([[1]])
