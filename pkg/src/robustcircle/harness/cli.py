"""Command line interface: ``fit``, ``filter``, ``synth``, ``bench``, ``calibrate``.

Every option may also come from a JSON file given with ``--config``; flags
on the command line win.  Filter and fitter parameters live under the
``"filter"`` and ``"fit"`` keys of that file, everything else at top level::

    {"parts": 45, "seed": 2024, "emit": "csv",
     "filter": {"pcod_T": 3.0}, "fit": {"ransac_iterations": 1000}}

Exit codes: 0 success, 2 usage error, 3 data/parse error, 4 numerical failure.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, fields

from ..errors import (
    CircleFitError,
    DataError,
    InvalidConfig,
    NumericalError,
    PipelineError,
    UsageError,
)
from ..filters import FILTERS, FilterConfig, apply_filter
from ..fitters import FITTERS, FitConfig, fit
from ..synthetic import WasherModel, make_washer_dataset
from .io import FORMATS, parse_points_file, write_points_file
from .metrics import calibrate
from .pipeline import run_benchmark
from .report import EMIT_FORMATS, emit_table, render_table

log = logging.getLogger("robustcircle")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

_DEFAULTS = {
    "format": None,
    "parts": 45,
    "seed": 2024,
    "emit": "csv",
    "out": None,
    "out_dir": None,
    "points_format": "csv",
    "jobs": 1,
    "cal_per_filter_only": False,
    "include_reference": False,
}


def _flag(name):
    return "--" + name.replace("_", "-")


def _add_config_flags(parser, cls, skip=()):
    group = parser.add_argument_group(f"{cls.__name__} options")
    for f in fields(cls):
        if f.name in skip:
            continue
        kind = str if f.name == "dbscan_eps" else type(f.default)
        group.add_argument(_flag(f.name), dest=f"{cls.__name__}.{f.name}", type=kind,
                           default=None, metavar=f.name.upper())


def build_parser():
    parser = argparse.ArgumentParser(prog="robustcircle", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file with default option values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a circle to an edge-point file")
    p.add_argument("--algo", choices=FITTERS)
    p.add_argument("--input")
    p.add_argument("--format", choices=FORMATS)
    _add_config_flags(p, FitConfig)

    p = sub.add_parser("filter", help="remove outliers from an edge-point file")
    p.add_argument("--method", choices=FILTERS)
    p.add_argument("--input")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="write surviving points here")
    _add_config_flags(p, FilterConfig)

    p = sub.add_parser("synth", help="write a synthetic washer dataset")
    p.add_argument("--parts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")
    p.add_argument("--points-format", choices=FORMATS)

    p = sub.add_parser("bench", help="run the filter x fitter benchmark")
    p.add_argument("--parts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--emit", choices=EMIT_FORMATS)
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--cal-per-filter-only", action="store_const", const=True, default=None,
                   help="one conversion factor per filter (from LSF) instead of per pair")
    p.add_argument("--include-reference", action="store_const", const=True, default=None,
                   help="count the reference part in MAE/SDAE")
    _add_config_flags(p, FilterConfig)
    _add_config_flags(p, FitConfig)

    p = sub.add_parser("calibrate", help="mm-per-pixel factor from a reference part")
    p.add_argument("--ref-px", type=float)
    p.add_argument("--ref-mm", type=float)
    return parser


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidConfig("config file must hold a JSON object")
    return doc


class Options:
    """Merged view of built-in defaults, the config file and the flags."""

    def __init__(self, args, config):
        self._args = vars(args)
        self._config = config

    def get(self, name, required=False):
        value = self._args.get(name)
        if value is None:
            value = self._config.get(name, _DEFAULTS.get(name))
        if value is None and required:
            raise InvalidConfig(f"missing required option {_flag(name)}")
        return value

    def section(self, cls, key):
        values = dict(self._config.get(key, {}))
        prefix = cls.__name__ + "."
        for name, value in self._args.items():
            if name.startswith(prefix) and value is not None:
                values[name[len(prefix):]] = value
        if "dbscan_eps" in values and isinstance(values["dbscan_eps"], str) \
                and values["dbscan_eps"].lower() != "auto":
            try:
                values["dbscan_eps"] = float(values["dbscan_eps"])
            except ValueError:
                raise InvalidConfig("dbscan_eps must be a number or 'auto'") from None
        try:
            return cls.from_mapping(values)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc


def _print_json(doc):
    sys.stdout.write(json.dumps(doc) + "\n")


def cmd_fit(opts):
    pts = parse_points_file(opts.get("input", required=True), opts.get("format"))
    algo = opts.get("algo", required=True)
    if algo not in FITTERS:
        raise InvalidConfig(f"unknown algorithm {algo!r}")
    res = fit(algo, pts, opts.section(FitConfig, "fit"))
    c = res.circle
    _print_json({"algorithm": algo, "a": c.a, "b": c.b, "r": c.r, "diameter_px": 2.0 * c.r,
                 "iterations": res.iterations, "converged": res.converged,
                 "inlier_count": res.inlier_count, "points": len(pts)})


def cmd_filter(opts):
    pts = parse_points_file(opts.get("input", required=True), opts.get("format"))
    method = opts.get("method", required=True)
    report = apply_filter(method, pts, opts.section(FilterConfig, "filter"))
    out = opts.get("out")
    if out:
        write_points_file(out, report.kept)
    _print_json({"method": method, "input_count": len(pts), "kept_count": len(report.kept),
                 "removed_indices": report.removed_indices.tolist()})


def cmd_synth(opts):
    out_dir = opts.get("out_dir", required=True)
    fmt = opts.get("points_format")
    seed = int(opts.get("seed"))
    dataset = make_washer_dataset(int(opts.get("parts")), seed)
    os.makedirs(out_dir, exist_ok=True)
    parts = []
    for part in dataset:
        name = f"part_{part.part_id:03d}.{fmt}"
        write_points_file(os.path.join(out_dir, name), part.points, fmt)
        spec = part.contamination
        parts.append({
            "part_id": part.part_id,
            "file": name,
            "truth": {"a": part.truth.a, "b": part.truth.b, "r": part.truth.r},
            "true_diameter_mm": part.true_diameter_mm,
            "px_per_mm": part.px_per_mm,
            "noise_sigma_px": part.noise_sigma,
            "contamination": asdict(spec) if spec else None,
            "outlier_indices": part.outlier_indices.tolist(),
            "seed": part.seed,
        })
    manifest = {"seed": seed, "num_parts": len(dataset), "reference_part": 0,
                "model": WasherModel().as_dict(), "parts": parts}
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    _print_json({"out_dir": out_dir, "num_parts": len(dataset)})


def cmd_bench(opts):
    seed = int(opts.get("seed"))
    parts = int(opts.get("parts"))
    dataset = make_washer_dataset(parts, seed)
    table = run_benchmark(
        dataset,
        opts.section(FilterConfig, "filter"),
        opts.section(FitConfig, "fit"),
        per_filter_calibration=bool(opts.get("cal_per_filter_only")),
        include_reference=bool(opts.get("include_reference")),
        jobs=int(opts.get("jobs")),
        seed=seed,
    )
    table.metadata["contamination_model"] = WasherModel().label
    fmt = opts.get("emit")
    out = opts.get("out")
    if out:
        emit_table(table, fmt, out)
        log.info("wrote %s table to %s", fmt, out)
    else:
        sys.stdout.write(render_table(table, fmt))


def cmd_calibrate(opts):
    cal = calibrate(opts.get("ref_px", required=True), opts.get("ref_mm", required=True))
    _print_json({"mm_per_px": cal.mm_per_px, "reference_diameter_px": cal.reference_diameter_px,
                 "reference_diameter_mm": cal.reference_diameter_mm})


COMMANDS = {
    "fit": cmd_fit,
    "filter": cmd_filter,
    "synth": cmd_synth,
    "bench": cmd_bench,
    "calibrate": cmd_calibrate,
}


def exit_code_for(exc):
    if isinstance(exc, PipelineError):
        exc = exc.cause
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, DataError):
        return EXIT_DATA
    if isinstance(exc, NumericalError):
        return EXIT_NUMERIC
    return EXIT_NUMERIC


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        opts = Options(args, _load_config(args.config))
        COMMANDS[args.command](opts)
    except CircleFitError as exc:
        sys.stderr.write(f"robustcircle {args.command}: {exc}\n")
        return exit_code_for(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
