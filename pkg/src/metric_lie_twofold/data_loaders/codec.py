"""
Conversion between JSON payloads and the package's objects.

Rationals are written as ``str(Fraction)`` ("p/q", or "p" when q = 1) and
read from rational strings or integers. Every parse error names the field
path of the offending value, e.g. ``brackets[2].v[1]``.
"""

import logging
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from ..algebra.cochain import Cochain, Rep, ScalarForm
from ..algebra.decomp import DecompWitness
from ..algebra.liecore import MetricLieAlgebra
from ..algebra.linalg import to_scalar, zeros
from ..algebra.twofold import TwofoldData
from ..errors import InputError
from ..processors.families import FAMILIES, FamilySpec, WeightMatrix


logger = logging.getLogger(__name__)


def scalar_to_str(x: Any) -> str:
    return str(to_scalar(x))


def vector_to_list(v: np.ndarray) -> List[str]:
    return [str(x) for x in v]


def matrix_to_lists(M: np.ndarray) -> List[List[str]]:
    return [[str(x) for x in row] for row in M]


def _require(payload: Any, key: str, path: str) -> Any:
    if not isinstance(payload, Mapping):
        raise InputError(f"expected an object at {path or 'top level'}", field=path or None)
    if key not in payload:
        raise InputError(f"missing key '{key}'", field=f"{path}.{key}" if path else key)
    return payload[key]


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def parse_int(value: Any, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InputError(f"expected an integer >= {minimum}, got {value!r}", field=path)
    return value


def parse_scalar(value: Any, path: str) -> Any:
    try:
        return to_scalar(value)
    except InputError as e:
        raise InputError(e.message, field=path) from None


def parse_vector(value: Any, path: str, length: Optional[int] = None) -> np.ndarray:
    if not isinstance(value, list):
        raise InputError(f"expected a list, got {type(value).__name__}", field=path)
    if length is not None and len(value) != length:
        raise InputError(f"expected {length} entries, got {len(value)}", field=path)
    result = zeros(len(value))
    for i, entry in enumerate(value):
        result[i] = parse_scalar(entry, f"{path}[{i}]")
    return result


def parse_matrix(value: Any, path: str, rows: Optional[int] = None,
                 cols: Optional[int] = None) -> np.ndarray:
    if not isinstance(value, list):
        raise InputError(f"expected a list of rows, got {type(value).__name__}", field=path)
    if rows is not None and len(value) != rows:
        raise InputError(f"expected {rows} rows, got {len(value)}", field=path)
    if not value:
        return zeros((0, cols or 0))
    width = cols if cols is not None else (len(value[0]) if isinstance(value[0], list) else 0)
    result = zeros((len(value), width))
    for i, row in enumerate(value):
        result[i] = parse_vector(row, f"{path}[{i}]", width)
    return result


def algebra_from_dict(payload: Any, path: str = "") -> MetricLieAlgebra:
    """
    Parse {"dim": n, "gram": [[s]], "brackets": [{"i", "j", "v"}]}.

    A bracket listed once is extended antisymmetrically; brackets listed in
    both orders, or with i = j, are kept as given and checked by ``verify``.
    """
    n = parse_int(_require(payload, "dim", path), _join(path, "dim"))
    gram = parse_matrix(_require(payload, "gram", path), _join(path, "gram"), n, n)
    entries = payload.get("brackets", [])
    if not isinstance(entries, list):
        raise InputError("expected a list of brackets", field=_join(path, "brackets"))
    brackets = {}
    for index, entry in enumerate(entries):
        where = f"{_join(path, 'brackets')}[{index}]"
        i = parse_int(_require(entry, "i", where), f"{where}.i")
        j = parse_int(_require(entry, "j", where), f"{where}.j")
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"bracket indices must lie in 0..{n - 1}, got ({i}, {j})",
                             field=where)
        if (i, j) in brackets:
            raise InputError(f"bracket ({i}, {j}) listed twice", field=where)
        brackets[(i, j)] = parse_vector(_require(entry, "v", where), f"{where}.v", n)
    labels = payload.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise InputError(f"expected {n} labels", field=_join(path, "labels"))
    return MetricLieAlgebra.from_brackets(gram, brackets, labels)


def algebra_to_dict(g: MetricLieAlgebra) -> Dict[str, Any]:
    return {
        "dim": g.dim,
        "gram": matrix_to_lists(g.gram),
        "brackets": [{"i": i, "j": j, "v": vector_to_list(v)}
                     for (i, j), v in sorted(g.brackets().items())],
        "labels": list(g.labels),
    }


def _entries(payload: Any, path: str, degree: Optional[int]) -> List[Any]:
    deg = parse_int(_require(payload, "deg", path), _join(path, "deg"))
    if degree is not None and deg != degree:
        raise InputError(f"expected degree {degree}, got {deg}", field=_join(path, "deg"))
    entries = payload.get("entries", [])
    if not isinstance(entries, list):
        raise InputError("expected a list of entries", field=_join(path, "entries"))
    return entries


def _index(entry: Any, where: str, degree: int, l: int) -> tuple:
    idx = _require(entry, "idx", where)
    if not isinstance(idx, list) or len(idx) != degree:
        raise InputError(f"expected {degree} indices", field=f"{where}.idx")
    for position, i in enumerate(idx):
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < l:
            raise InputError(f"index out of range 0..{l - 1}: {i!r}",
                             field=f"{where}.idx[{position}]")
    if len(set(idx)) != len(idx):
        raise InputError(f"repeated index in {idx}", field=f"{where}.idx")
    return tuple(idx)


def cochain_from_dict(payload: Any, rep: Rep, degree: Optional[int] = None,
                      path: str = "") -> Cochain:
    """Parse {"deg": p, "entries": [{"idx": [i, ...], "v": [s]}]}; unlisted tuples are zero."""
    entries = _entries(payload, path, degree)
    deg = payload["deg"]
    values: Dict[tuple, Any] = {}
    for index, entry in enumerate(entries):
        where = f"{_join(path, 'entries')}[{index}]"
        key = _index(entry, where, deg, rep.l)
        if tuple(sorted(key)) in {tuple(sorted(k)) for k in values}:
            raise InputError(f"index {list(key)} listed twice", field=where)
        values[key] = parse_vector(_require(entry, "v", where), f"{where}.v", rep.a)
    return Cochain(rep, deg, values)


def form_from_dict(payload: Any, l: int, degree: Optional[int] = None,
                   path: str = "") -> ScalarForm:
    entries = _entries(payload, path, degree)
    deg = payload["deg"]
    values: Dict[tuple, Any] = {}
    for index, entry in enumerate(entries):
        where = f"{_join(path, 'entries')}[{index}]"
        key = _index(entry, where, deg, l)
        if tuple(sorted(key)) in {tuple(sorted(k)) for k in values}:
            raise InputError(f"index {list(key)} listed twice", field=where)
        values[key] = parse_scalar(_require(entry, "v", where), f"{where}.v")
    return ScalarForm(l, deg, values)


def cochain_to_dict(c: Cochain) -> Dict[str, Any]:
    return {"deg": c.degree,
            "entries": [{"idx": list(index), "v": vector_to_list(value)}
                        for index, value in c.items()]}


def form_to_dict(f: ScalarForm) -> Dict[str, Any]:
    return {"deg": f.degree,
            "entries": [{"idx": list(index), "v": str(value)} for index, value in f.items()]}


def rep_from_dict(payload: Any, path: str = "") -> Rep:
    l = parse_int(_require(payload, "l", path), _join(path, "l"))
    a = parse_int(_require(payload, "a", path), _join(path, "a"))
    gram = parse_matrix(_require(payload, "gramA", path), _join(path, "gramA"), a, a)
    rho_payload = _require(payload, "rho", path)
    if not isinstance(rho_payload, list) or len(rho_payload) != l:
        raise InputError(f"expected {l} representation matrices", field=_join(path, "rho"))
    rho = tuple(parse_matrix(r, f"{_join(path, 'rho')}[{j}]", a, a)
                for j, r in enumerate(rho_payload))
    try:
        return Rep(l, a, gram, rho)
    except InputError as e:
        raise InputError(e.message, field=_join(path, e.field or "rho")) from None


def twofold_from_dict(payload: Any, path: str = "") -> TwofoldData:
    """Parse {"l", "a", "gramA", "rho", "alpha", "gamma"}; missing forms are zero."""
    rep = rep_from_dict(payload, path)
    alpha_payload = payload.get("alpha", {"deg": 2, "entries": []})
    gamma_payload = payload.get("gamma", {"deg": 3, "entries": []})
    alpha = cochain_from_dict(alpha_payload, rep, 2, _join(path, "alpha"))
    gamma = form_from_dict(gamma_payload, rep.l, 3, _join(path, "gamma"))
    return TwofoldData(rep, alpha, gamma)


def twofold_to_dict(data: TwofoldData) -> Dict[str, Any]:
    rep = data.rep
    return {
        "l": rep.l,
        "a": rep.a,
        "gramA": matrix_to_lists(rep.gram),
        "rho": [matrix_to_lists(r) for r in rep.rho],
        "alpha": cochain_to_dict(data.alpha),
        "gamma": form_to_dict(data.gamma),
    }


def family_from_dict(payload: Any, path: str = "") -> FamilySpec:
    """
    Parse {"family", "row", "m", "k", "l", "lambda"}.

    ``m``, ``k`` and ``l`` are optional; when present they must agree with
    the weights and the row.
    """
    family = _require(payload, "family", path)
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}",
                         field=_join(path, "family"))
    if family == "sl2":
        return FamilySpec.create("sl2", None)
    raw = _require(payload, "lambda", path)
    l = payload.get("l")
    if l is None:
        l = len(raw[0]) if isinstance(raw, list) and raw and isinstance(raw[0], list) else 1
    l = parse_int(l, _join(path, "l"))
    weights = WeightMatrix(parse_matrix(raw, _join(path, "lambda"), cols=l))
    try:
        spec = FamilySpec.create(family, weights, payload.get("row"))
    except InputError as e:
        raise InputError(e.message, field=_join(path, e.field or "family")) from None
    for key, actual in (("m", spec.m), ("k", spec.k), ("l", spec.l)):
        if key in payload and payload[key] != actual:
            raise InputError(f"{key}={payload[key]!r} disagrees with the descriptor ({actual})",
                             field=_join(path, key))
    return spec


def witness_from_dict(payload: Any, rep: Rep, path: str = "") -> DecompWitness:
    l, a = rep.l, rep.a
    blocks = {}
    for key, width in (("a1", a), ("a2", a), ("l1", l), ("l2", l), ("T1", a), ("T2", a)):
        blocks[key] = parse_matrix(_require(payload, key, path), _join(path, key), cols=width)
    return DecompWitness(a1=blocks["a1"], a2=blocks["a2"], l1=blocks["l1"], l2=blocks["l2"],
                         t1=blocks["T1"], t2=blocks["T2"])
