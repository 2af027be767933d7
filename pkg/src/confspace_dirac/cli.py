"""Batch front door: validate a config, run verification suites, emit the
JSON-lines report, delimited tables, figures, and a timing sidecar.

Exit status: 0 when every check passes, 1 on check failures, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import SUITE_NAMES, ExperimentConfig
from .errors import ConfigurationError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confspace-dirac",
        description="Operator-identity verification suites for the "
                    "configuration-space Dirac laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a verification suite and write reports")
    runp.add_argument("--config", help="path to the JSON experiment config "
                                       "(built-in defaults when omitted)")
    runp.add_argument("--suite", default="all",
                      choices=("all",) + SUITE_NAMES, help="suite to run")
    runp.add_argument("--out", default="confspace-out", help="output directory")
    runp.add_argument("--seed", type=int, help="override the config seed")
    runp.add_argument("--table-format", default="csv", choices=("csv", "json-lines"))
    runp.add_argument("--no-figures", action="store_true",
                      help="skip figure rendering")

    valp = sub.add_parser("validate", help="validate a config file and exit")
    valp.add_argument("--config", required=True, help="path to the JSON config")
    return parser


def _load_config(path: str | None, seed_override: int | None) -> ExperimentConfig:
    if path is None:
        config = ExperimentConfig.default()
    else:
        config = ExperimentConfig.load(path)
    if seed_override is not None:
        raw = dict(config.raw)
        raw["seed"] = seed_override
        config = ExperimentConfig.from_dict(raw)
    return config


def cmd_run(args) -> int:
    from . import report as rp
    from . import suites as st

    try:
        config = _load_config(args.config, args.seed)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    results = st.run_selected(config, args.suite)

    os.makedirs(args.out, exist_ok=True)
    rp.write_report(results, config, os.path.join(args.out, "report.jsonl"))
    rp.write_tables(results, os.path.join(args.out, "tables"), args.table_format)
    rp.write_run_meta(results, config, os.path.join(args.out, "run_meta.json"))
    if not args.no_figures:
        rp.render_figures(results, os.path.join(args.out, "figures"))

    failures = 0
    for res in results:
        for c in res.checks:
            mark = "pass" if c.passed else "FAIL"
            print(f"[{mark}] {c.anchor}  residual {c.residual:.3e}  tolerance {c.tolerance:.1e}")
            failures += 0 if c.passed else 1
        print(f"-- {res.suite}: {len(res.checks)} checks, "
              f"{sum(1 for c in res.checks if not c.passed)} failures "
              f"({res.elapsed:.2f} s)")
    print(f"report written to {os.path.join(args.out, 'report.jsonl')}")
    return 0 if failures == 0 else 1


def cmd_validate(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"config valid; hash {config.config_hash()}")
    print(f"suites selected: {', '.join(config.selected_suites())}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "validate":
        return cmd_validate(args)
    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    sys.exit(main())
