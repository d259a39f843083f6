"""Budget-split sweeps at cost ratios m = 0.5, 1, 2 and 4."""

from _common import parse
from sitqr import harness as H


def main():
    cfg, args = parse(__doc__)
    groups = {}
    for m in (0.5, 1.0, 2.0, 4.0):
        res = H.sweep_lambda1(cfg.replace(budget={"m": m}), workers=args.workers)
        H.write_aggregate(args.out / f"cost_m{m:g}.csv", res.points)
        groups[f"m={m:g}"] = res.points
        print(f"m={m:g}: Ip " + " ".join(f"{p.ip[0]:.0f}" for p in res.points)
              + f"  argmin lambda1 {res.argmin_lambda1():g}")
    if args.plots:
        from sitqr import plots
        plots.sweep_chart(groups, args.out / "cost.svg")


if __name__ == "__main__":
    main()
