"""Shared argument handling for the experiment scripts."""

import argparse
from pathlib import Path

from sitqr.config import ExperimentConfig, load_config


def parse(description: str):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--config", type=Path, help="JSON experiment config")
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--replicates", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plots", action="store_true")
    args = p.parse_args()
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.replicates:
        cfg = cfg.replace(replicates=args.replicates)
    args.out.mkdir(parents=True, exist_ok=True)
    return cfg, args
