"""Edge-point files.

CSV: one ``x,y`` pair per line with a decimal point; a first line reading
``x,y`` is treated as a header.  JSON: ``{"points": [[x, y], ...], "units": "px"}``.
"""

import json
import math
import os

import numpy as np

from ..errors import NonFiniteValue, ParseError, PointsIOError

FORMATS = ("csv", "json")


def infer_format(path):
    ext = os.path.splitext(str(path))[1].lower().lstrip(".")
    return ext if ext in FORMATS else "csv"


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PointsIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _parse_number(token, line, column):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token.strip()!r}", line, column) from None
    if not math.isfinite(value):
        raise NonFiniteValue(f"non-finite coordinate {token.strip()!r} at line {line}")
    return value


def parse_csv_text(text):
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if lineno == 1 and line.replace(" ", "").lower() == "x,y":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 'x,y', got {len(parts)} fields", lineno, 1)
        x = _parse_number(parts[0], lineno, 1)
        y = _parse_number(parts[1], lineno, len(parts[0]) + 2)
        pts.append((x, y))
    return np.array(pts, dtype=float).reshape(-1, 2)


def parse_json_text(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise ParseError("JSON document must be an object with a 'points' array")
    units = doc.get("units", "px")
    if units != "px":
        raise ParseError(f"unsupported units {units!r}; expected 'px'")
    pts = []
    for i, item in enumerate(doc["points"]):
        if (not isinstance(item, (list, tuple)) or len(item) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
            raise ParseError(f"points[{i}] is not an [x, y] pair of numbers")
        x, y = float(item[0]), float(item[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteValue(f"points[{i}] has a non-finite coordinate")
        pts.append((x, y))
    return np.array(pts, dtype=float).reshape(-1, 2)


def parse_points_file(path, format=None):
    fmt = format or infer_format(path)
    text = _read_text(path)
    if fmt == "csv":
        return parse_csv_text(text)
    if fmt == "json":
        return parse_json_text(text)
    raise ParseError(f"unknown points format {fmt!r}")


def write_points_file(path, points, format=None):
    fmt = format or infer_format(path)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            if fmt == "json":
                json.dump({"points": pts.tolist(), "units": "px"}, fh)
                fh.write("\n")
            else:
                fh.write("x,y\n")
                for x, y in pts.tolist():
                    fh.write(f"{x!r},{y!r}\n")
    except OSError as exc:
        raise PointsIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
