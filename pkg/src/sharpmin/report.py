"""Deterministic serialization of analysis reports.

The report is a JSON document with sorted keys and floats printed with 17
significant digits, which makes repeated runs byte-identical and parsing
lossless (17 digits round-trip any double).  Rational values travel as
strings like "3/4" so they stay exact.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot enter a report")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(value, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, Fraction):
        out.append(json.dumps(str(value)))
    elif isinstance(value, dict):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            if i:
                out.append(", ")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(": ")
            _emit(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def dumps(data) -> str:
    out: list[str] = []
    _emit(data, out)
    return "".join(out) + "\n"


def loads(text: str):
    return json.loads(text)


def rational_str(value) -> str:
    return str(Fraction(value))
