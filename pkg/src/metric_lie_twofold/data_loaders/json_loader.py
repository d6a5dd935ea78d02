"""
JSON file loader for algebras, twofold data, cochains and family descriptors.

Errors raised while parsing are re-raised with the file name and the line of
the offending value attached.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Callable, Iterator, List, Optional, Tuple, TypeVar, Union

from ..algebra.cochain import Cochain, Rep
from ..algebra.decomp import DecompWitness
from ..algebra.liecore import MetricLieAlgebra
from ..algebra.twofold import TwofoldData
from ..errors import InputError
from ..processors.families import FamilySpec
from . import codec


logger = logging.getLogger(__name__)

T = TypeVar("T")


_STEP = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)|\[(\d+)\]")
_SPACE = re.compile(r"\s*")


def _field_steps(field: str) -> List[Union[str, int]]:
    return [key if key else int(index) for key, index in _STEP.findall(field)]


def _members(text: str, start: int, closing: str, keyed: bool,
             decoder: json.JSONDecoder) -> Iterator[Tuple[Union[str, int], int]]:
    """(key or index, position of the value) for the container opening at ``start``."""
    pos = _SPACE.match(text, start + 1).end()
    index = 0
    while pos < len(text) and text[pos] != closing:
        key: Union[str, int] = index
        if keyed:
            key, pos = decoder.raw_decode(text, pos)
            pos = _SPACE.match(text, pos).end() + 1
            pos = _SPACE.match(text, pos).end()
        yield key, pos
        _, pos = decoder.raw_decode(text, pos)
        pos = _SPACE.match(text, pos).end()
        if pos < len(text) and text[pos] == ",":
            pos = _SPACE.match(text, pos + 1).end()
        index += 1


def _line_of(text: str, field: Optional[str]) -> Optional[int]:
    """
    Line of the value at a field path such as ``brackets[2].v[1]``.

    The path is followed through the document; a key repeated in one object
    resolves to its last occurrence, as in ``json.loads``. When the path
    leaves the document the line of the deepest value reached is returned.
    """
    if not field:
        return None
    decoder = json.JSONDecoder()
    pos = _SPACE.match(text).end()
    try:
        for step in _field_steps(field):
            opening = "{" if isinstance(step, str) else "["
            if pos >= len(text) or text[pos] != opening:
                break
            closing = "}" if opening == "{" else "]"
            found = None
            for key, value_pos in _members(text, pos, closing, opening == "{", decoder):
                if key == step:
                    found = value_pos
            if found is None:
                break
            pos = found
    except json.JSONDecodeError:
        return None
    return text.count("\n", 0, pos) + 1


class JsonLoader:
    """Loads package objects from JSON files."""

    def read(self, file_path: Union[str, Path]) -> Any:
        """
        Read a JSON document.

        Raises:
            FileNotFoundError: if the file does not exist
            InputError: if the file is not valid JSON (with the line of the error)
        """
        file_path = Path(file_path)
        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")
        logger.info(f"Loading {file_path}")
        text = file_path.read_text()
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e.msg}", source=str(file_path),
                             line=e.lineno) from None

    def _parse(self, file_path: Union[str, Path], parser: Callable[[Any], T]) -> T:
        payload = self.read(file_path)
        try:
            return parser(payload)
        except InputError as e:
            text = Path(file_path).read_text()
            raise InputError(e.message, source=str(file_path), line=_line_of(text, e.field),
                             field=e.field) from None

    def load_algebra(self, file_path: Union[str, Path]) -> MetricLieAlgebra:
        g = self._parse(file_path, codec.algebra_from_dict)
        logger.info(f"Loaded {g.dim}-dimensional algebra from {file_path}")
        return g

    def load_twofold(self, file_path: Union[str, Path]) -> TwofoldData:
        data = self._parse(file_path, codec.twofold_from_dict)
        logger.info(f"Loaded twofold data with l={data.l}, a={data.a} from {file_path}")
        return data

    def load_family(self, file_path: Union[str, Path]) -> FamilySpec:
        spec = self._parse(file_path, codec.family_from_dict)
        logger.info(f"Loaded {spec.family} family descriptor from {file_path}")
        return spec

    def load_cochain(self, file_path: Union[str, Path], rep: Rep,
                     degree: Optional[int] = None) -> Cochain:
        return self._parse(file_path, lambda p: codec.cochain_from_dict(p, rep, degree))

    def load_witness(self, file_path: Union[str, Path], rep: Rep) -> DecompWitness:
        return self._parse(file_path, lambda p: codec.witness_from_dict(p, rep))
