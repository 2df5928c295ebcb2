"""Command line entry point: ``python -m surrogate_heat <experiment> [options]``.

Keys from the config file can be overridden with ``--set section.key=value``
(values are parsed as YAML, so ``--set transport.t_left_values=[5,25]`` works).
"""
import argparse
import sys

import yaml

from .errors import ConfigurationError
from .scenarios import (KINDS, emit_results, load_config, rerun_from_manifest,
                        run_experiment, validate_config)

COMMANDS = {k.replace("_", "-"): k for k in KINDS}


def _apply_override(data, item):
    key, sep, raw = item.partition("=")
    if not sep:
        raise ConfigurationError(f"--set expects key=value, got {item!r}")
    node = data
    *parents, leaf = key.split(".")
    for p in parents:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"--set {key}: {p} is not a section")
    node[leaf] = yaml.safe_load(raw)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="surrogate_heat", description="Spin-bath heat transport and refrigeration experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="YAML configuration file")
        p.add_argument("--seed", type=int, help="base seed of the realization streams")
        p.add_argument("--realizations", type=int, help="number of stochastic realizations")
        p.add_argument("--out-dir", help="directory for CSV files and the manifest")
        p.add_argument("--workers", type=int, help="worker processes (default: all cores)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key, e.g. model.t_left=5")
    p = sub.add_parser("rerun", help="repeat a run from its manifest and compare outputs")
    p.add_argument("manifest")
    p.add_argument("--out-dir", required=True)
    return parser


def config_from_args(args):
    data = load_config(args.config).model_dump(mode="json") if args.config else {}
    data["kind"] = COMMANDS[args.command]
    if args.seed is not None:
        data.setdefault("stochastic", {})["base_seed"] = args.seed
    if args.realizations is not None:
        data.setdefault("stochastic", {})["n_realizations"] = args.realizations
    if args.out_dir is not None:
        data["out_dir"] = args.out_dir
    if args.workers is not None:
        data["workers"] = args.workers
    for item in args.set:
        _apply_override(data, item)
    return validate_config(data)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "rerun":
            path, mismatched = rerun_from_manifest(args.manifest, args.out_dir)
            print(f"wrote {path}")
            if mismatched:
                print("outputs differ: " + ", ".join(mismatched), file=sys.stderr)
                return 1
            print("all outputs identical")
            return 0
        cfg = config_from_args(args)
    except ConfigurationError as err:
        print(err, file=sys.stderr)
        return 2
    report = run_experiment(cfg)
    path = emit_results(report)
    for note in report.notes:
        print("note:", note, file=sys.stderr)
    print(f"wrote {path}")
    return 0
