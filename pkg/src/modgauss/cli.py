"""Command line runner: ``modgauss <experiment> --config FILE [--seed S] [--shards K] [--out DIR]``.

Config files are flat ``key:type = value`` lines (``#`` starts a comment).
Types: int, float, str, bool, ints, floats (the last two comma-separated).
Exit status: 0 success, 2 config error, 3 integrity error, 4 resource error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AccuracyError, DomainError, IntegrityError, ResourceError
from .experiments import EXPERIMENTS

EXIT_OK, EXIT_CONFIG, EXIT_INTEGRITY, EXIT_RESOURCE = 0, 2, 3, 4
RESERVED = {"seed": "int", "shards": "int"}


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_CASTS = {
    "int": int,
    "float": float,
    "str": str,
    "bool": _parse_bool,
    "ints": lambda s: [int(x) for x in s.split(",") if x.strip()],
    "floats": lambda s: [float(x) for x in s.split(",") if x.strip()],
}


def parse_config_text(text: str) -> dict:
    """Parse ``key:type = value`` lines into {key: (type, value)}."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line or ":" not in line.split("=", 1)[0]:
            raise ConfigError(f"line {lineno}: expected 'key:type = value'")
        lhs, value = line.split("=", 1)
        key, typ = (s.strip() for s in lhs.split(":", 1))
        if typ not in _CASTS:
            raise ConfigError(f"line {lineno}: unknown type {typ!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            out[key] = (typ, _CASTS[typ](value.strip()))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return out


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    shards: int = 1
    output_path: str = "."


def schema_issues(experiment: str, entries: dict) -> list[str]:
    """Schema problems of parsed config entries for ``experiment``."""
    if experiment not in EXPERIMENTS:
        return [f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}"]
    schema = EXPERIMENTS[experiment].schema
    issues = []
    for key, (typ, _) in entries.items():
        expected = RESERVED.get(key) or (schema[key][0] if key in schema else None)
        if key == "experiment":
            continue
        if expected is None:
            issues.append(f"unknown key {key!r} for experiment {experiment!r}")
        elif typ != expected:
            issues.append(f"key {key!r} has type {typ}, expected {expected}")
    if "experiment" in entries and entries["experiment"][1] != experiment:
        issues.append(f"config names experiment {entries['experiment'][1]!r}, "
                      f"command line names {experiment!r}")
    return issues


def build_config(experiment: str, entries: dict, seed=None, shards=None,
                 out: str = ".") -> ExperimentConfig:
    issues = schema_issues(experiment, entries)
    if issues:
        raise ConfigError("; ".join(issues))
    params = {k: v for k, (_, v) in EXPERIMENTS[experiment].schema.items()}
    params.update({k: v for k, (_, v) in entries.items() if k not in RESERVED and k != "experiment"})
    seed = seed if seed is not None else entries.get("seed", (None, 0))[1]
    shards = shards if shards is not None else entries.get("shards", (None, 1))[1]
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    if shards < 1:
        raise ConfigError("shards must be >= 1")
    return ExperimentConfig(experiment, params, seed, shards, out)


def validate(experiment: str, entries: dict) -> dict:
    """Schema report and projected cost; no side effects."""
    issues = schema_issues(experiment, entries)
    report = {"experiment": experiment, "diagnostics": issues, "projected_cost": None}
    if issues:
        return report
    cfg = build_config(experiment, entries)
    cost_fn = EXPERIMENTS[experiment].cost
    if cost_fn is not None:
        cost, budget_issues = cost_fn(cfg.parameters)
        report["projected_cost"] = cost
        report["diagnostics"] = budget_issues
        report["over_budget"] = bool(budget_issues)
    return report


# output ----------------------------------------------------------------------

def format_cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(x) for x in row])
    return buf.getvalue()


def _versions() -> dict:
    import scipy

    from . import __version__
    return {"python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "modgauss": __version__}


def _jsonable(x):
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def run(cfg: ExperimentConfig) -> dict:
    """Run an experiment, writing ``<table>.csv`` files and ``<experiment>.json``."""
    exp = EXPERIMENTS[cfg.experiment]
    out = Path(cfg.output_path)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    result = exp.run(cfg.parameters, cfg.seed, cfg.shards)
    wall = time.perf_counter() - start
    files = {}
    for name, (header, rows) in result.tables.items():
        text = render_csv(header, rows)
        path = out / f"{name}.csv"
        path.write_bytes(text.encode("utf-8"))
        files[path.name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    meta = {
        "experiment": cfg.experiment,
        "config": {k: _jsonable(v) for k, v in cfg.parameters.items()},
        "seed": cfg.seed,
        "shards": cfg.shards,
        "wall_time_s": wall,
        "versions": _versions(),
        "checks": {k: bool(v) for k, v in result.checks.items()},
        "info": {k: _jsonable(v) for k, v in result.info.items()},
        "csv_sha256": files,
    }
    (out / f"{cfg.experiment}.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return meta


def _error_record(out: str, experiment: str, code: int, exc: Exception):
    record = {"experiment": experiment, "exit_code": code, "error": type(exc).__name__,
              "message": str(exc)}
    cost = getattr(exc, "projected_cost", None)
    if cost is not None:
        record["projected_cost"] = cost
    print(json.dumps(record), file=sys.stderr)
    try:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{experiment}.error.json").write_text(json.dumps(record, indent=2) + "\n",
                                                      encoding="utf-8")
    except OSError:
        pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modgauss", description=__doc__.splitlines()[0])
    parser.add_argument("experiment", help=f"one of: {', '.join(EXPERIMENTS)}")
    parser.add_argument("--config", help="flat 'key:type = value' parameter file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--shards", type=int, default=None)
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument("--validate", action="store_true",
                        help="only check the config and report the projected cost")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
        entries = parse_config_text(text)
    except (OSError, ConfigError) as exc:
        _error_record(args.out, args.experiment, EXIT_CONFIG, exc)
        return EXIT_CONFIG

    if args.validate:
        report = validate(args.experiment, entries)
        print(json.dumps(report, indent=2))
        if report.get("over_budget"):
            return EXIT_RESOURCE
        return EXIT_CONFIG if report["diagnostics"] else EXIT_OK

    try:
        cfg = build_config(args.experiment, entries, args.seed, args.shards, args.out)
        meta = run(cfg)
    except (ConfigError, DomainError) as exc:
        _error_record(args.out, args.experiment, EXIT_CONFIG, exc)
        return EXIT_CONFIG
    except (IntegrityError, AccuracyError) as exc:
        _error_record(args.out, args.experiment, EXIT_INTEGRITY, exc)
        return EXIT_INTEGRITY
    except ResourceError as exc:
        _error_record(args.out, args.experiment, EXIT_RESOURCE, exc)
        return EXIT_RESOURCE
    for name, ok in meta["checks"].items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
