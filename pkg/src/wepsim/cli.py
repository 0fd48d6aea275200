"""Command line entry point.

    wepsim {gc|bvm|bracketing|local-ep|conditions} --config cfg.json
           [--seed N] [--out path]

The config is a JSON document; --seed and --out override its master_seed
and output path.  The local-ep subcommand additionally accepts direct
overrides for the replication count, bandwidth schedule, grid size and
n*h product.  Exit codes: 0 success, 2 hypothesis-gate refusal, 1 error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .backend import active_backend
from .harness import (
    ConfigError,
    ExperimentConfig,
    HypothesisGateError,
    run_experiment,
)

_EXPERIMENTS = ("gc", "bvm", "bracketing", "local-ep", "conditions")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wepsim",
        description="Monte Carlo experiments for weighted empirical processes "
        "on countable spaces",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in _EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--out", default=None, help="override output CSV path")
        if name == "local-ep":
            p.add_argument("--reps", type=int, default=None, help="override replications")
            p.add_argument(
                "--h-schedule", default=None, help="comma separated bandwidths"
            )
            p.add_argument("--grid-size", type=int, default=None)
            p.add_argument("--nh-product", type=float, default=None)
    return parser


def _load_config(args) -> ExperimentConfig:
    with open(args.config, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    raw["experiment"] = args.experiment
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if args.out is not None:
        raw["out"] = args.out
    if args.experiment == "local-ep":
        local = dict(raw.get("local", {}))
        if args.h_schedule is not None:
            local["h_schedule"] = tuple(float(h) for h in args.h_schedule.split(","))
        if args.grid_size is not None:
            local["grid_size"] = args.grid_size
        if args.nh_product is not None:
            local["nh_product"] = args.nh_product
        raw["local"] = local
        if args.reps is not None:
            raw["replications"] = args.reps
    cfg = ExperimentConfig.from_dict(raw)
    if cfg.out is None:
        cfg = dataclasses.replace(cfg, out=f"{args.experiment}.csv")
    return cfg


def _summarize(cfg: ExperimentConfig, result) -> None:
    print(f"backend: {active_backend()}")
    if cfg.experiment == "gc":
        for row in result.rows:
            print(f"n={row.n}: median tv={row.median:.6g}")
    elif cfg.experiment == "bvm":
        for res in result.per_n:
            print(f"n={res.n}: ks={res.ks:.6g}")
    elif cfg.experiment == "bracketing":
        last = result.profile.rows[-1]
        print(
            f"levels={last.level}: j={last.jk} m={last.mk} "
            f"tail={last.tail_sqrt_sum:.6g}"
        )
    elif cfg.experiment == "local-ep":
        for hres in result.per_h:
            err = abs(hres.norm_covariance - hres.target_covariance).max()
            print(f"h={hres.h}: n={hres.n} max|cov err|={err:.4g}")
    elif cfg.experiment == "conditions":
        rep = result.report
        print(f"l2_to_zero={rep.l2_to_zero} l1_bounded={rep.l1_bounded}")
    print(f"wrote {result.csv_path}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        result = run_experiment(cfg)
    except HypothesisGateError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _summarize(cfg, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
