"""Command-line entry point.

    xxzeth spectrum --N 10 --delta 1 --theta 1
    xxzeth rsweep --N-values 12 14 --delta-values 0.5 --theta-values 0.1 1 8 --threads 2
    xxzeth emit --figure Fig2 --N 12 --compute

Exit codes: 0 success, 2 configuration error, 3 capacity error,
4 sweep finished with failed points.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import typing
from dataclasses import fields

from ..errors import CapacityError, ConfigError
from .cache import SpectrumCache
from .config import TASKS, RunConfig
from .figures import FIGURE_IDS, MissingRecordsError, emit_figure_data, figure_requirements, match_records
from .io import load_records
from .tasks import run_name, run_task

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_PARTIAL = 0, 2, 3, 4

_SKIP = {"task", "config"}


def _add_config_flags(p: argparse.ArgumentParser):
    hints = typing.get_type_hints(RunConfig)
    for f in fields(RunConfig):
        if f.name in _SKIP:
            continue
        flag = "--" + f.name.replace("_", "-")
        default = f.default
        if isinstance(default, tuple):
            elem = str if f.name == "observables" else (int if f.name == "N_values" else float)
            p.add_argument(flag, dest=f.name, nargs="+", type=elem, default=None)
        elif f.name == "cut":
            p.add_argument(flag, dest=f.name, type=int, default=None)
        else:
            typ = hints[f.name]
            typ = typ if typ in (int, float, str) else str
            p.add_argument(flag, dest=f.name, type=typ, default=None)
    p.add_argument("--config", help="TOML file with defaults to override")
    p.add_argument("--cache-dir", help="directory for cached spectra")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xxzeth", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for task in TASKS:
        _add_config_flags(sub.add_parser(task, help=f"run the {task} pipeline"))
    emit = sub.add_parser("emit", help="assemble per-figure CSV bundles from stored runs")
    emit.add_argument("--figure", required=True, choices=FIGURE_IDS)
    emit.add_argument("--compute", action="store_true", help="run missing prerequisites first")
    _add_config_flags(emit)
    return parser


def _config_from_args(args, task) -> RunConfig:
    overrides = {f.name: getattr(args, f.name) for f in fields(RunConfig)
                 if f.name not in _SKIP and getattr(args, f.name, None) is not None}
    if args.config:
        cfg = RunConfig.from_file(args.config)
    else:
        cfg = RunConfig()
    return cfg.replace(task=task, **overrides)


def _emit(args, base: RunConfig, cache) -> int:
    N_values = base.N_values if args.N_values else None
    records = load_records(base.out)
    if args.compute:
        reqs = figure_requirements(args.figure, base.N, N_values, base)
        _, missing = match_records(records, reqs)
        missing = set(missing)
        for req in reqs:
            if run_name(req) in missing:
                run_task(req, cache)
        records = load_records(base.out)
    files = emit_figure_data(records, args.figure, base.out + "/figures", base.N, N_values, base)
    print(json.dumps({"figure": args.figure, "files": [str(f) for f in files]}, indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        task = "spectrum" if args.command == "emit" else args.command
        cfg = _config_from_args(args, task).validate()
        cache = SpectrumCache(args.cache_dir)
        if args.command == "emit":
            return _emit(args, cfg, cache)
        record = run_task(cfg, cache)
    except MissingRecordsError as exc:
        print("error: " + "\n       ".join(exc.problems), file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print("config error: " + "; ".join(exc.problems), file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    print(json.dumps({"run_dir": str(record.run_dir), "summary": record.to_json()["summary"]}, indent=2))
    if record.task == "rsweep" and record.summary.get("failed"):
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
