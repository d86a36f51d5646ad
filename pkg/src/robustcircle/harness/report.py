"""CSV, markdown and JSON renderings of a :class:`BenchmarkTable`."""

import io
import json
import math

from ..errors import InvalidConfig, PointsIOError
from ..filters import FILTER_LABELS
from ..fitters import FITTER_LABELS

EMIT_FORMATS = ("csv", "markdown", "json")
FAIL = "FAIL"

_METRICS = (
    ("mae", "mae_mm", "Mean Absolute Error (mm)"),
    ("sdae", "sdae_mm", "Standard Deviation of Absolute Error (mm)"),
)


def _cell(value):
    return FAIL if not math.isfinite(value) else f"{value:.6f}"


def _csv(t):
    buf = io.StringIO()
    buf.write(",".join(["metric", "filter", *t.fitters]) + "\n")
    for key, attr, _ in _METRICS:
        grid = getattr(t, attr)
        for i, method in enumerate(t.filters):
            buf.write(",".join([key, method, *(_cell(v) for v in grid[i])]) + "\n")
    return buf.getvalue()


def _markdown(t):
    lines = []
    header = ["Outlier Removal", *(FITTER_LABELS.get(f, f) for f in t.fitters)]
    for _, attr, title in _METRICS:
        grid = getattr(t, attr)
        lines.append(f"### {title}")
        lines.append("")
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "|".join(["---"] * len(header)) + "|")
        for i, method in enumerate(t.filters):
            row = [FILTER_LABELS.get(method, method), *(_cell(v) for v in grid[i])]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    lines.append(f"{t.num_parts} parts (part 0 is the calibration reference), seed {t.seed}.")
    return "\n".join(lines) + "\n"


def _json(t):
    def grid(g):
        return [[float(v) if math.isfinite(v) else None for v in row] for row in g]

    doc = {
        "units": "mm",
        "num_parts": t.num_parts,
        "seed": t.seed,
        "filters": list(t.filters),
        "fitters": list(t.fitters),
        "mae_mm": grid(t.mae_mm),
        "sdae_mm": grid(t.sdae_mm),
        "metadata": t.metadata,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


_RENDER = {"csv": _csv, "markdown": _markdown, "json": _json}


def render_table(t, format="csv"):
    try:
        return _RENDER[format](t)
    except KeyError:
        raise InvalidConfig(f"unknown table format {format!r}") from None


def emit_table(t, format, path):
    text = render_table(t, format)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise PointsIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
