"""Utility over the lambda1 grid at m = 4 for the regular and the degraded rapid test."""

from _common import parse
from sitqr import harness as H
from sitqr.testing import RAPID, RAPID_DEGRADED


def main():
    cfg, args = parse(__doc__)
    cfg = cfg.replace(budget={"m": 4.0})
    groups = {}
    for spec in (RAPID, RAPID_DEGRADED):
        res = H.sweep_lambda1(cfg.replace(tests=(cfg.tests[0], spec)), workers=args.workers)
        H.write_aggregate(args.out / f"utility_{spec.label}.csv", res.points)
        groups[spec.label] = res.points
        print(f"{spec.label}: argmin lambda1 {res.argmin_lambda1():g}; "
              f"rapid-only sumDQ {res.by(lambda1=0.0)[0].dq[0]:.0f}")
    if args.plots:
        from sitqr import plots
        plots.sweep_chart(groups, args.out / "utility.svg")


if __name__ == "__main__":
    main()
