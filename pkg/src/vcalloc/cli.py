"""Command line entry point.

Exit status: 0 feasible (or valid), 2 infeasible, 1 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bench import ExperimentConfig, make_record, run_solver, write_experiment
from .io import InstanceFormatError, dump_instance, instance_from_dict
from .model import validate_job, validate_topology
from .objective import COST_MODES
from .optimal import OracleRefused
from .scenarios import ScenarioConfig, random_instance

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_doc(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from exc


def cmd_solve(args) -> int:
    doc = _read_doc(args.instance)
    job, vc, params = instance_from_dict(doc)
    errors = validate_job(job) + validate_topology(vc)
    if errors:
        for e in errors:
            print(f"invalid instance: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.alpha1 is not None:
        params = params.with_alpha1(args.alpha1)
    try:
        res = run_solver(job, vc, params, args.solver, args.iterations, args.seed, args.cost_mode)
    except OracleRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    seed = args.seed if args.solver == "rhtsi" else doc.get("seed")
    rec = make_record(job, vc, params, args.solver, res, args.iterations, seed)
    out = rec.to_json()
    out["placement"] = None if res.assignment is None else list(res.assignment.providers)
    print(json.dumps(out))
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_validate(args) -> int:
    job, vc, _ = instance_from_dict(_read_doc(args.instance))
    errors = [f"job: {e}" for e in validate_job(job)] + [f"vc: {e}" for e in validate_topology(vc)]
    if not errors:
        print("ok")
        return EXIT_OK
    for e in errors:
        print(e)
    return EXIT_INPUT


def cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {args.config}: {exc.strerror}") from exc
    except (json.JSONDecodeError, TypeError) as exc:
        raise InstanceFormatError(f"{args.config}: {exc}") from exc
    if args.seed is not None:
        config = replace(config, grid=replace(config.grid, master_seed=args.seed))
    try:
        runs, summary = write_experiment(config, Path(args.out), args.workers)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {runs} and {summary}")
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = ScenarioConfig(sp_count=(args.m, args.m),
                         slots_per_sp=(max(0, args.slots - args.spread), args.slots + args.spread),
                         alpha1=args.alpha1 if args.alpha1 is not None else 0.5,
                         seed=args.seed)
    job, vc, params = random_instance(args.type, cfg, np.random.default_rng(args.seed))
    dump_instance(args.out, job, vc, params, seed=args.seed)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vcalloc", description="Graph-job allocation over a vehicular cloud.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve one instance file, print a JSON record")
    s.add_argument("instance")
    s.add_argument("--solver", choices=("opt", "rhtsi", "oracle"), default="opt")
    s.add_argument("--iterations", type=int, default=100, help="rhtsi iteration count r")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--alpha1", type=float)
    s.add_argument("--cost-mode", choices=COST_MODES, default="per-edge")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check an instance file's invariants")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("experiment", help="run an experiment grid to CSV")
    e.add_argument("config")
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int, help="override the grid master seed")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_experiment)

    g = sub.add_parser("generate", help="write a random instance file")
    g.add_argument("--type", type=int, choices=range(1, 6), required=True)
    g.add_argument("--m", type=int, default=5, help="providers including the JO")
    g.add_argument("--slots", type=int, default=4, help="average slots per provider")
    g.add_argument("--spread", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--alpha1", type=float)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "iterations", 1) is not None and getattr(args, "iterations", 1) < 1:
        print("--iterations must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
