"""Command-line interface.

Every subcommand reads one JSON job file and writes one JSON envelope::

    {"command": ..., "config": ..., "results": ..., "warnings": [...],
     "version": ..., "wall_time": ...}

Exit codes: 0 success (negative findings included), 2 usage or config
error, 3 numerical warning under ``--strict``, 4 spectrum hit.
Negative arguments need the ``=`` form, e.g. ``--z=-1,0``.
"""

import argparse
import csv
import io
import json
import sys
import time
import warnings

import jsonschema
import numpy as np

from . import __version__
from .errors import (
    ConditioningError,
    ConfigurationError,
    DomainError,
    EvaluationError,
    PointInteractionError,
    SpectrumHitError,
    UnsupportedFormulaError,
)
from .extensions import is_nonnegative_3d, is_self_adjoint, krein_pair
from .model import BoundaryPair, PointConfiguration, diagonal_pair, friedrichs_pair
from .resolvent import KreinResolvent
from .scattering import scattering_matrix
from .spectral import DEFAULT_GRID, DEFAULT_XTOL, bound_states, gerschgorin_check, kappa_minus
from .weyl import weyl_matrix, weyl_negative

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_WARNING = 3
EXIT_SPECTRUM_HIT = 4

_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _COMPLEX}}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["dimension", "points", "coupling"],
    "additionalProperties": False,
    "properties": {
        "dimension": {"enum": [2, 3]},
        "points": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 2, "maxItems": 3, "items": {"type": "number"}},
        },
        "n": {"type": "integer", "minimum": 1},
        "coupling": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["alpha", "cd", "krein", "friedrichs"]},
                "alpha": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                "C": _MATRIX,
                "D": _MATRIX,
            },
            "allOf": [
                {"if": {"properties": {"type": {"const": "alpha"}}},
                 "then": {"required": ["alpha"]}},
                {"if": {"properties": {"type": {"const": "cd"}}},
                 "then": {"required": ["C", "D"]}},
            ],
        },
        "scan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "s_max": {"type": "number", "exclusiveMinimum": 0},
                "grid": {"type": "integer", "minimum": 2},
                "tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["command", "config", "results", "warnings", "version", "wall_time"],
    "properties": {
        "command": {"enum": ["check", "spectrum", "scattering", "resolvent", "gerschgorin", "weyl"]},
        "config": CONFIG_SCHEMA,
        "results": {"type": "object"},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "version": {"type": "string"},
        "wall_time": {"type": "number", "minimum": 0},
    },
}


class UsageError(Exception):
    """Bad job file or flags; ``path`` locates the offending field."""

    def __init__(self, message, path="$"):
        super().__init__(message)
        self.path = path


def _json_path(parts):
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _to_complex(entry):
    if isinstance(entry, list):
        return complex(entry[0], entry[1])
    return complex(entry)


def _pairs(values):
    """Complex array -> nested [re, im] lists."""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [_pairs(v) for v in arr]


def load_config(path):
    """Read and schema-check a job file; returns the parsed JSON object."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    errors = sorted(jsonschema.Draft7Validator(CONFIG_SCHEMA).iter_errors(raw),
                    key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        err = errors[0]
        raise UsageError(err.message, _json_path(err.absolute_path))
    return raw


def build_problem(raw):
    """Configuration and boundary pair from a validated job object."""
    d = raw["dimension"]
    for i, p in enumerate(raw["points"]):
        if len(p) != d:
            raise UsageError(f"point has {len(p)} coordinates, dimension is {d}", f"$.points[{i}]")
    try:
        config = PointConfiguration(d, raw["points"], raw.get("n", 1))
        config.distances
    except ConfigurationError as exc:
        path = f"$.points[{exc.indices[1]}]" if exc.indices else "$.points"
        raise UsageError(str(exc), path) from None
    coupling = raw["coupling"]
    kind = coupling["type"]
    try:
        if kind == "alpha":
            pair = diagonal_pair(config, coupling["alpha"])
        elif kind == "friedrichs":
            pair = friedrichs_pair(config)
        elif kind == "krein":
            pair = krein_pair(config)
        else:
            C = [[_to_complex(v) for v in row] for row in coupling["C"]]
            D = [[_to_complex(v) for v in row] for row in coupling["D"]]
            for name, mat in (("C", C), ("D", D)):
                if len(mat) != config.size or any(len(row) != config.size for row in mat):
                    raise UsageError(f"{name} must be {config.size}x{config.size}",
                                     f"$.coupling.{name}")
            pair = BoundaryPair(C, D)
    except ConfigurationError as exc:
        field = "alpha" if kind == "alpha" else kind
        raise UsageError(str(exc), f"$.coupling.{field}") from None
    return config, pair


def _parse_complex(text):
    try:
        if "," in text:
            re_part, im_part = text.split(",")
            return complex(float(re_part), float(im_part))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}", "--z") from None


def _parse_floats(text, flag):
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot parse {text!r}", flag) from None


def cmd_check(args, raw, config, pair):
    report = is_self_adjoint(pair)
    if report.self_adjoint:
        if config.d == 3:
            report.nonnegative = bool(is_nonnegative_3d(pair, config))
        else:
            # no closed test for full 2D pairs; H >= 0 iff no negative eigenvalues
            report.nonnegative = not bound_states(pair, config, **_scan_options(args, raw))
            report.notes.append("nonnegativity from bound-state scan")
    return report.as_dict()


def _scan_options(args, raw):
    scan = raw.get("scan", {})
    s_max = getattr(args, "s_max", None) or scan.get("s_max")
    grid = getattr(args, "grid", None) or scan.get("grid", DEFAULT_GRID)
    return {"s_max": s_max, "grid": grid, "xtol": scan.get("tol", DEFAULT_XTOL)}


def cmd_spectrum(args, raw, config, pair):
    if not is_self_adjoint(pair).self_adjoint:
        raise UsageError("spectrum needs a self-adjoint coupling", "$.coupling")
    states = bound_states(pair, config, method=args.method, **_scan_options(args, raw))
    out = {
        "bound_states": [s.as_dict() for s in states],
        "total_multiplicity": sum(s.multiplicity for s in states),
        "essential_spectrum": {"lower": 0.0, "upper": "inf"},
    }
    if config.d == 3:
        out["kappa_minus"] = kappa_minus(pair, config)
    return out


def cmd_scattering(args, raw, config, pair):
    energies = _parse_floats(" ".join(args.energies or []), "--energies")
    if not energies:
        raise UsageError("--energies needs at least one positive energy", "--energies")
    if any(not x > 0 for x in energies):
        raise UsageError("energies must be positive", "--energies")
    if not is_self_adjoint(pair).self_adjoint:
        raise UsageError("scattering needs a self-adjoint coupling", "$.coupling")
    return {"energies": [scattering_matrix(pair, config, x).as_dict() for x in energies]}


def cmd_resolvent(args, raw, config, pair):
    z = _parse_complex(args.z)
    try:
        with open(args.points, encoding="utf-8") as fh:
            pts = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read points file: {exc}", "--points") from None
    if isinstance(pts, dict):
        pts = pts.get("pairs", [])
    kernel = KreinResolvent(pair, config, z)
    rows = []
    for i, item in enumerate(pts):
        try:
            x, xp = item
            value = _pairs(kernel(x, xp))
        except EvaluationError as exc:
            warnings.warn(f"pair {i}: {exc}", RuntimeWarning)
            value = None
        except (TypeError, ValueError):
            raise UsageError("each entry must be a pair [x, x']", f"--points[{i}]") from None
        rows.append({"x": list(map(float, x)), "xp": list(map(float, xp)), "value": value})
    return {"z": [z.real, z.imag], "kernel": rows}


def cmd_gerschgorin(args, raw, config, pair):
    if raw["coupling"]["type"] != "alpha":
        raise UsageError("gerschgorin needs an alpha coupling", "$.coupling.type")
    if config.d != 3:
        raise UsageError("gerschgorin conditions apply in dimension 3", "$.dimension")
    try:
        K = [int(k) for k in args.K.replace(",", " ").split()]
        report = gerschgorin_check(raw["coupling"]["alpha"], config, K)
    except ValueError as exc:
        raise UsageError(str(exc), "--K") from None
    out = report.as_dict()
    out["kappa_minus"] = kappa_minus(pair, config)
    return out


def _weyl_table(config, s_min, s_max, steps):
    s = np.linspace(s_min, s_max, int(steps))
    blocks = weyl_negative(config, s)
    iu = np.triu_indices(config.m)
    columns = ["s", "z"] + [f"M_{j}_{k}" for j, k in zip(*iu)]
    rows = [[float(si), float(-si * si)] + [float(v) for v in b[iu]] for si, b in zip(s, blocks)]
    return columns, rows


def cmd_weyl(args, raw, config, pair):
    if (args.z is None) == (args.table is None):
        raise UsageError("give exactly one of --z or --table", "--z")
    if args.z is not None:
        ev = weyl_matrix(config, _parse_complex(args.z))
        return {"z": [ev.z.real, ev.z.imag], "block": _pairs(ev.block)}
    vals = _parse_floats(args.table, "--table")
    if len(vals) != 3 or vals[2] < 2 or vals[1] <= vals[0]:
        raise UsageError("--table needs s_min,s_max,steps with s_min < s_max, steps >= 2",
                         "--table")
    columns, rows = _weyl_table(config, *vals)
    return {"columns": columns, "rows": rows}


COMMANDS = {
    "check": cmd_check,
    "spectrum": cmd_spectrum,
    "scattering": cmd_scattering,
    "resolvent": cmd_resolvent,
    "gerschgorin": cmd_gerschgorin,
    "weyl": cmd_weyl,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="JSON job file")
    common.add_argument("-o", "--output", help="write the envelope here instead of stdout")
    common.add_argument("--strict", action="store_true",
                        help="exit with code 3 when numerical warnings occur")

    parser = argparse.ArgumentParser(
        prog="pointint", description="Schrodinger operators with point interactions")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="self-adjointness and nonnegativity")
    p = sub.add_parser("spectrum", parents=[common], help="negative eigenvalues")
    p.add_argument("--s-max", type=float, help="scan bound on s = sqrt(-z)")
    p.add_argument("--grid", type=int, help="number of scan points")
    p.add_argument("--method", choices=["auto", "sigma_min"], default="auto")
    p = sub.add_parser("scattering", parents=[common], help="scattering matrices")
    p.add_argument("--energies", nargs="*", help="positive energies (space or comma separated)")
    p = sub.add_parser("resolvent", parents=[common], help="resolvent kernel values")
    p.add_argument("--z", required=True, help="spectral parameter re,im")
    p.add_argument("--points", required=True, help="JSON file with a list of [x, x'] pairs")
    p = sub.add_parser("gerschgorin", parents=[common], help="Gerschgorin conditions (3D)")
    p.add_argument("--K", default="", help="0-based center indices, comma separated")
    p = sub.add_parser("weyl", parents=[common], help="Weyl function values")
    p.add_argument("--z", help="spectral parameter re,im")
    p.add_argument("--table", help="s_min,s_max,steps: table of M(-s^2)")
    p.add_argument("--csv", action="store_true", help="emit the --table output as CSV")
    return parser


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code, message, path=None):
    err = {"error": message}
    if path:
        err["path"] = path
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def run(args):
    """Execute parsed arguments; returns ``(exit_code, envelope or None)``."""
    start = time.perf_counter()
    raw = load_config(args.config)
    config, pair = build_problem(raw)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        results = COMMANDS[args.command](args, raw, config, pair)
    messages = [str(w.message) for w in caught]
    envelope = {
        "command": args.command,
        "config": raw,
        "results": results,
        "warnings": messages,
        "version": __version__,
        "wall_time": time.perf_counter() - start,
    }
    code = EXIT_WARNING if args.strict and messages else EXIT_OK
    return code, envelope


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, envelope = run(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc), exc.path)
    except SpectrumHitError as exc:
        return _fail(EXIT_SPECTRUM_HIT, str(exc))
    except (ConfigurationError, DomainError, UnsupportedFormulaError, ConditioningError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    except PointInteractionError as exc:
        return _fail(1, str(exc))
    if getattr(args, "csv", False) and args.command == "weyl" and args.table:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(envelope["results"]["columns"])
        writer.writerows(envelope["results"]["rows"])
        _emit(buf.getvalue(), args.output)
    else:
        _emit(json.dumps(envelope, indent=2) + "\n", args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
