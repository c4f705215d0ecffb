"""Problem documents: the JSON input format shared by every subcommand.

Shape:

    {"d": [2, 3],
     "conditionals": [{"B": [2], "array": [["1/2", "1/3", 0], ...]},
                      {"B": [1]}],
     "caps": {"maxCircuits": 1000000, "maxLength": 20}}

Arrays are optional per document (structure-only commands ignore them), but
either every conditional carries one or none does.  Rationals must be "p/q"
or integer strings or plain ints; floats and decimal strings are rejected so
no value is ever rounded on the way in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DocumentError
from .model import ConditionalArray, ProblemSpec, _nested_values
from .rationals import parse_rational


@dataclass(frozen=True)
class Document:
    spec: ProblemSpec
    arrays: tuple           # of ConditionalArray, or None when the document has none
    max_circuits: int = None  # None = not stated in the document
    max_length: int = None


def _require_keys(obj: dict, allowed, context: str):
    extra = set(obj) - set(allowed)
    if extra:
        raise DocumentError(f"unknown keys {sorted(extra)} in {context}")


def parse_document(raw) -> Document:
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    _require_keys(raw, {"d", "conditionals", "caps"}, "document")

    d = raw.get("d")
    if not isinstance(d, list) or not d or not all(
        isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in d
    ):
        raise DocumentError('"d" must be a nonempty list of positive integers')
    d = tuple(d)

    conditionals = raw.get("conditionals")
    if not isinstance(conditionals, list) or not conditionals:
        raise DocumentError('"conditionals" must be a nonempty list')

    sets = []
    nested_arrays = []
    for pos, entry in enumerate(conditionals, start=1):
        if not isinstance(entry, dict):
            raise DocumentError(f"conditional {pos} must be an object")
        _require_keys(entry, {"B", "array"}, f"conditional {pos}")
        b = entry.get("B")
        if not isinstance(b, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in b
        ):
            raise DocumentError(f'conditional {pos}: "B" must be a list of integers')
        sets.append(tuple(b))
        nested_arrays.append(entry.get("array"))

    present = [a is not None for a in nested_arrays]
    if any(present) and not all(present):
        raise DocumentError(
            "either every conditional carries an array or none does"
        )

    arrays = None
    if all(present):
        arrays = tuple(
            ConditionalArray(
                index=pos,
                entries={cell: parse_rational(v) for cell, v in _nested_values(nested, d)},
            )
            for pos, nested in enumerate(nested_arrays, start=1)
        )

    caps_raw = raw.get("caps", {})
    if not isinstance(caps_raw, dict):
        raise DocumentError('"caps" must be an object')
    _require_keys(caps_raw, {"maxCircuits", "maxLength"}, "caps")

    def cap_value(key, minimum):
        if key not in caps_raw:
            return None
        v = caps_raw[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            raise DocumentError(f'"{key}" must be an integer >= {minimum}')
        return v

    return Document(
        spec=ProblemSpec(d=d, conditioning_sets=tuple(sets)),
        arrays=arrays,
        max_circuits=cap_value("maxCircuits", 1),
        max_length=cap_value("maxLength", 4),
    )


def load_document(path: str) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return parse_document(text)
