"""Command-line entry point: ``sitqr <subcommand> [--config PATH] ...``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import harness as H
from .config import ExperimentConfig, load_config
from .netgen import NetGenConfig, degree_stats, generate, write_edge_list

log = logging.getLogger("sitqr")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment config")
    common.add_argument("--seed", type=int, help="master seed (overrides config)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--replicates", type=int, help="replicates per point (overrides config)")
    common.add_argument("--plots", action="store_true", help="also write SVG charts")
    common.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")

    p = argparse.ArgumentParser(prog="sitqr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("ode", parents=[common], help="integrate the deterministic compartment model")
    sub.add_parser("netgen", parents=[common], help="generate one contact graph")
    run = sub.add_parser("run", parents=[common], help="one stochastic replicate")
    run.add_argument("--rep", type=int, default=0, help="replicate index")
    run.add_argument("--dump-states", action="store_true", help="write per-node daily states")
    sub.add_parser("sweep-lambda1", parents=[common], help="sweep the test-1 budget share")
    d = sub.add_parser("sweep-delay", parents=[common], help="test-1-only runs across result delays")
    d.add_argument("--delays", type=_int_list, default=[0, 1, 2, 3, 4])
    m = sub.add_parser("sweep-mu", parents=[common], help="lambda1 sweeps at several contact levels")
    m.add_argument("--mus", type=_int_list, default=[2, 10, 20, 30])
    return p


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.replicates is not None:
        changes["replicates"] = args.replicates
    return dataclasses.replace(cfg, **changes) if changes else cfg


def cmd_ode(cfg, args):
    H.ode_run(cfg, args.out / "ode_trajectory.csv")


def cmd_netgen(cfg, args):
    net = cfg.network
    seed = H.replicate_seed(cfg.master_seed, 0)
    g = generate(NetGenConfig(n=net.n, mu=net.mu, k_exp=net.k_exp, seed=seed))
    write_edge_list(g, args.out / "edges.txt")
    stats = degree_stats(g)
    info = {"nodes": g.n_nodes, "edges": g.edges, "min_degree": stats.min,
            "mean_degree": stats.mean, "max_degree": stats.max,
            "tail_exponent": stats.tail_exponent,
            "histogram": {str(k): v for k, v in stats.histogram.items()}}
    (args.out / "degree_stats.json").write_text(json.dumps(info, indent=2) + "\n")


def cmd_run(cfg, args):
    seed = H.replicate_seed(cfg.master_seed, args.rep)
    outcome = H.run_once(cfg, seed, dump_states=args.dump_states)
    H.write_run_outputs(args.out, outcome, H.settings_for(cfg))
    if args.dump_states:
        from .dynamics import write_state_dump
        write_state_dump(args.out / "states.csv", outcome.states)
    if args.plots:
        from . import plots
        plots.run_chart(outcome, args.out / "trajectory.svg")
    log.info("Ip=%d sumDQ=%d f=%g", outcome.i_p, outcome.sum_dq, outcome.f)


def cmd_sweep_lambda1(cfg, args):
    res = H.sweep_lambda1(cfg, workers=args.workers)
    H.write_summary(args.out / "summary.csv", res.points)
    H.write_aggregate(args.out / "aggregate.csv", res.points)
    if args.plots:
        from . import plots
        plots.sweep_chart({f"m={cfg.budget.m:g}": res.points}, args.out / "sweep_lambda1.svg")
    log.info("argmin lambda1 = %g", res.argmin_lambda1())


def cmd_sweep_delay(cfg, args):
    res = H.sweep_delay(cfg, args.delays, workers=args.workers)
    ref = res.extra["reference"]
    H.write_summary(args.out / "summary.csv", res.points + [ref])
    for p in res.points:
        H.write_aggregate(args.out / f"aggregate_delay{p.settings.delay}.csv", [p])
    H.write_aggregate(args.out / "aggregate_reference.csv", [ref])
    if args.plots:
        from . import plots
        plots.delay_chart(res, args.out / "sweep_delay.svg")


def cmd_sweep_mu(cfg, args):
    res = H.sweep_mu(cfg, args.mus, workers=args.workers)
    H.write_summary(args.out / "summary.csv", res.points)
    for mu in args.mus:
        H.write_aggregate(args.out / f"aggregate_mu{mu}.csv", res.by(mu=mu))
    (args.out / "mu_summary.json").write_text(json.dumps(
        {"slopes": {str(k): v for k, v in res.extra["slopes"].items()},
         "argmin_lambda1": {str(k): v for k, v in res.extra["argmin"].items()}},
        indent=2) + "\n")
    if args.plots:
        from . import plots
        plots.sweep_chart({f"mu={mu}": res.by(mu=mu) for mu in args.mus},
                          args.out / "sweep_mu.svg")


COMMANDS = {
    "ode": cmd_ode,
    "netgen": cmd_netgen,
    "run": cmd_run,
    "sweep-lambda1": cmd_sweep_lambda1,
    "sweep-delay": cmd_sweep_delay,
    "sweep-mu": cmd_sweep_mu,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        args.out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, args)
    except (ValueError, H.InvariantError, FloatingPointError, OSError) as exc:
        print(f"sitqr {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
